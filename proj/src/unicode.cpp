#include "langfade/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "langfade/error.hpp"

namespace langfade {
namespace {

const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw std::runtime_error("ICU NFC normalizer unavailable");
  }
  return *norm;
}

bool is_ascii(std::string_view s) {
  for (unsigned char c : s) {
    if (c >= 0x80) return false;
  }
  return true;
}

}  // namespace

std::string to_nfc(std::string_view utf8) {
  // ASCII is always NFC; n-gram files are mostly ASCII tokens.
  if (is_ascii(utf8)) return std::string(utf8);
  const auto& norm = nfc_instance();
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  if (src.indexOf(static_cast<UChar>(0xFFFD)) >= 0 &&
      utf8.find("\xEF\xBF\xBD") == std::string_view::npos) {
    throw DataError("invalid UTF-8 in '" + std::string(utf8) + "'");
  }
  icu::UnicodeString out = norm.normalize(src, status);
  if (U_FAILURE(status)) {
    throw DataError("NFC normalization failed for '" + std::string(utf8) + "'");
  }
  std::string result;
  out.toUTF8String(result);
  return result;
}

bool is_nfc(std::string_view utf8) {
  if (is_ascii(utf8)) return true;
  return to_nfc(utf8) == utf8;
}

}  // namespace langfade
