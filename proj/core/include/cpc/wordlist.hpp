#pragma once

#include <string_view>

namespace cpc {

// Bundled high-frequency English wordlist. Lookup is against the lowercased
// word with surrounding punctuation stripped.
bool in_english_wordlist(std::string_view word);

std::size_t english_wordlist_size();

}  // namespace cpc
