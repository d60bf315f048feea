#pragma once

#include <string>
#include <string_view>

namespace priming {

// Original Porter (1980) suffix-stripping stemmer. Input is expected to be
// lowercase ASCII letters; other bytes are treated as consonants. Words of
// length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

}  // namespace priming
