#include "langfade/lexicon.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "langfade/error.hpp"
#include "langfade/unicode.hpp"

namespace langfade {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

// Precomposed UTF-8 acute vowels (NFC).
constexpr std::array<std::pair<char, std::string_view>, 5> kAcute = {{
    {'a', "\xC3\xA1"}, {'e', "\xC3\xA9"}, {'i', "\xC3\xAD"}, {'o', "\xC3\xB3"}, {'u', "\xC3\xBA"},
}};

}  // namespace

bool is_accent_variant(std::string_view stem, std::string_view accented) {
  if (stem == accented) return true;
  if (stem.empty()) return false;
  const char last = stem.back();
  for (const auto& [plain, acute] : kAcute) {
    if (plain != last) continue;
    return accented.size() == stem.size() - 1 + acute.size() &&
           accented.substr(0, stem.size() - 1) == stem.substr(0, stem.size() - 1) &&
           accented.substr(stem.size() - 1) == acute;
  }
  return false;
}

std::vector<VerbEntry> parse_lexicon(std::istream& in, std::string_view source) {
  std::vector<VerbEntry> entries;
  std::unordered_set<std::string> seen;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    std::ostringstream msg;
    msg << source << ":" << line_no << ": " << what << " in row '" << line << "'";
    throw DataError(msg.str());
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = split(body, ',');
    if (fields.size() < 3 || fields.size() > 4) fail("expected 3 or 4 comma-separated fields");

    VerbEntry e;
    e.lemma = to_nfc(fields[0]);
    e.stem = to_nfc(fields[1]);
    e.stem_accented = to_nfc(fields[2]);
    if (e.lemma.empty()) fail("empty lemma");
    if (e.stem.empty()) fail("empty stem");
    if (!is_accent_variant(e.stem, e.stem_accented)) {
      fail("stem_accented must equal stem up to an acute accent on its final vowel");
    }
    if (fields.size() == 4 && !fields[3].empty()) {
      for (auto& form : split(fields[3], ';')) {
        if (form.empty()) fail("empty archaic form");
        e.archaic_forms.push_back(to_nfc(form));
      }
    }
    if (!seen.insert(e.lemma).second) fail("duplicate lemma '" + e.lemma + "'");
    e.rank = static_cast<int>(entries.size()) + 1;
    entries.push_back(std::move(e));
  }
  return entries;
}

std::vector<VerbEntry> load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path.string());
  return parse_lexicon(in, path.string());
}

VariantForms expand_conjugations(const VerbEntry& entry) {
  VariantForms forms;
  for (std::size_t i = 0; i < 5; ++i) {
    // Only the first-person plural carries the written accent.
    const std::string& base = (i == 2) ? entry.stem_accented : entry.stem;
    forms.ra_forms[i] = base + std::string(kRaEndings[i]);
    forms.se_forms[i] = base + std::string(kSeEndings[i]);
  }
  return forms;
}

}  // namespace langfade
