#pragma once

#include <string>
#include <string_view>

namespace langfade {

// Returns the NFC form of a UTF-8 string. Invalid UTF-8 raises DataError.
std::string to_nfc(std::string_view utf8);

// True if the string is already in NFC (quick check, falls back to full test).
bool is_nfc(std::string_view utf8);

}  // namespace langfade
