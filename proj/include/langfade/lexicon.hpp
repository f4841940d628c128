#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace langfade {

/// One verb of the inventory. The lexicon carries precomputed imperfect-subjunctive
/// stems; no morphology is derived here.
struct VerbEntry {
  std::string lemma;          // infinitive, e.g. "cantar"
  std::string stem;           // e.g. "canta"
  std::string stem_accented;  // e.g. "cantá"; used by first-person plural forms
  std::vector<std::string> archaic_forms;  // full historical spellings
  int rank = 0;               // 1-based position in the source list
};

/// Surface forms in person order 1sg/3sg, 2sg, 1pl, 2pl, 3pl.
struct VariantForms {
  std::array<std::string, 5> ra_forms;
  std::array<std::string, 5> se_forms;
};

inline constexpr std::array<std::string_view, 5> kRaEndings = {"ra", "ras", "ramos", "rais", "ran"};
inline constexpr std::array<std::string_view, 5> kSeEndings = {"se", "ses", "semos", "seis", "sen"};

/// Reads a lexicon CSV (`lemma,stem,stem_accented[,archaic1;archaic2;...]`).
/// Throws DataError on a missing file, a malformed row (with line number) or a
/// duplicate lemma.
std::vector<VerbEntry> load_lexicon(const std::filesystem::path& path);
std::vector<VerbEntry> parse_lexicon(std::istream& in, std::string_view source = "<stream>");

VariantForms expand_conjugations(const VerbEntry& entry);

/// True when `accented` equals `stem`, or equals it with the final vowel replaced
/// by its acute-accented form.
bool is_accent_variant(std::string_view stem, std::string_view accented);

}  // namespace langfade
