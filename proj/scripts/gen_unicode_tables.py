#!/usr/bin/env python3
"""Regenerate src/unicode_tables.cpp from the `regex` module's Unicode data.

The pretokenizer needs three character classes: general category L (letter),
general category N (number), and the White_Space property. L and N are scanned
out of the `regex` module so the tables track a current Unicode version.
White_Space is the fixed 25-codepoint property list (stable across versions);
note that JS `\\s` (adds U+FEFF, drops U+0085) and Python `\\s` (adds
U+001C..1F) both deviate from it.

Usage: python3 scripts/gen_unicode_tables.py > src/unicode_tables.cpp
"""

import sys

import regex

WHITESPACE = [
    (0x0009, 0x000D), (0x0020, 0x0020), (0x0085, 0x0085), (0x00A0, 0x00A0),
    (0x1680, 0x1680), (0x2000, 0x200A), (0x2028, 0x2029), (0x202F, 0x202F),
    (0x205F, 0x205F), (0x3000, 0x3000),
]


def scan_ranges(pattern: str) -> list[tuple[int, int]]:
    matcher = regex.compile(pattern, regex.V1)
    ranges = []
    chunk = 0x1000
    for base in range(0, 0x110000, chunk):
        cps = [cp for cp in range(base, base + chunk) if not 0xD800 <= cp <= 0xDFFF]
        if not cps:
            continue
        text = "".join(map(chr, cps))
        for m in matcher.finditer(text):
            start, end = m.span()
            lo, hi = cps[start], cps[end - 1]
            if ranges and ranges[-1][1] + 1 == lo:
                ranges[-1] = (ranges[-1][0], hi)
            else:
                ranges.append((lo, hi))
    return ranges


def emit(name: str, ranges: list[tuple[int, int]]) -> None:
    print(f"const CodepointRange {name}[] = {{")
    for i in range(0, len(ranges), 4):
        row = ", ".join(f"{{0x{lo:X}, 0x{hi:X}}}" for lo, hi in ranges[i:i + 4])
        print(f"    {row},")
    print("};")
    print(f"const std::size_t {name}_len = sizeof({name}) / sizeof({name}[0]);")
    print()


def main() -> None:
    letters = scan_ranges(r"\p{L}+")
    numbers = scan_ranges(r"\p{N}+")
    print("// Generated by scripts/gen_unicode_tables.py -- do not edit by hand.")
    print(f"// Unicode data from the Python `regex` module {regex.__version__}.")
    print('#include "unicode_tables.hpp"')
    print()
    print("namespace semdense {")
    print()
    emit("kLetterRanges", letters)
    emit("kNumberRanges", numbers)
    emit("kWhitespaceRanges", WHITESPACE)
    print("}  // namespace semdense")
    sys.stderr.write(f"letters: {len(letters)} ranges, numbers: {len(numbers)} ranges\n")


if __name__ == "__main__":
    main()
