#pragma once

#include <cstddef>
#include <cstdint>

namespace semdense {

struct CodepointRange {
  std::uint32_t lo;
  std::uint32_t hi;
};

// Sorted, non-overlapping ranges for Unicode general categories L and N and
// for the White_Space property. Generated by scripts/gen_unicode_tables.py.
extern const CodepointRange kLetterRanges[];
extern const std::size_t kLetterRanges_len;
extern const CodepointRange kNumberRanges[];
extern const std::size_t kNumberRanges_len;
extern const CodepointRange kWhitespaceRanges[];
extern const std::size_t kWhitespaceRanges_len;

}  // namespace semdense
