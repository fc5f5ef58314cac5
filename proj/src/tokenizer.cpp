#include "semdense/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "semdense/errors.hpp"
#include "unicode_tables.hpp"

namespace semdense {

namespace {

// Published cl100k_base split pattern, kept verbatim. The legacy spelling
// (greedy quantifiers, (?i:'s|...)) matches the same strings.
constexpr const char* kCl100kPattern =
    R"('(?i:[sdmt]|ll|ve|re)|[^\r\n\p{L}\p{N}]?+\p{L}+|\p{N}{1,3}| ?[^\s\p{L}\p{N}]++[\r\n]*|\s*[\r\n]|\s+(?!\S)|\s+)";

const std::array<std::pair<const char*, TokenId>, 5> kCl100kSpecials = {{
    {"<|endoftext|>", 100257},
    {"<|fim_prefix|>", 100258},
    {"<|fim_middle|>", 100259},
    {"<|fim_suffix|>", 100260},
    {"<|endofprompt|>", 100276},
}};

bool in_ranges(const CodepointRange* ranges, std::size_t len, std::uint32_t cp) {
  const CodepointRange* end = ranges + len;
  auto it = std::upper_bound(ranges, end, cp, [](std::uint32_t value, const CodepointRange& r) {
    return value < r.lo;
  });
  return it != ranges && cp <= (it - 1)->hi;
}

// One pretokenizer unit: a decoded codepoint, or a single invalid byte.
struct Unit {
  std::uint32_t cp;       // 0xFFFFFFFF for an invalid byte
  std::uint32_t offset;   // byte offset in the input
  std::uint8_t length;    // byte length
};

constexpr std::uint32_t kInvalid = 0xFFFFFFFF;

bool is_letter(const Unit& u) {
  return u.cp != kInvalid && in_ranges(kLetterRanges, kLetterRanges_len, u.cp);
}
bool is_number(const Unit& u) {
  return u.cp != kInvalid && in_ranges(kNumberRanges, kNumberRanges_len, u.cp);
}
bool is_space(const Unit& u) {
  return u.cp != kInvalid && in_ranges(kWhitespaceRanges, kWhitespaceRanges_len, u.cp);
}
bool is_newline(const Unit& u) { return u.cp == '\r' || u.cp == '\n'; }
bool is_other(const Unit& u) { return !is_space(u) && !is_letter(u) && !is_number(u); }

// Decodes UTF-8; an invalid or truncated sequence contributes its lead byte
// as a single invalid unit and decoding resumes at the next byte.
std::vector<Unit> decode_units(std::string_view text) {
  std::vector<Unit> units;
  units.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto b0 = static_cast<std::uint8_t>(text[i]);
    std::uint32_t cp = 0;
    std::size_t len = 0;
    if (b0 < 0x80) {
      cp = b0;
      len = 1;
    } else if ((b0 & 0xE0) == 0xC0) {
      cp = b0 & 0x1F;
      len = 2;
    } else if ((b0 & 0xF0) == 0xE0) {
      cp = b0 & 0x0F;
      len = 3;
    } else if ((b0 & 0xF8) == 0xF0) {
      cp = b0 & 0x07;
      len = 4;
    } else {
      len = 0;
    }
    bool ok = len > 0 && i + len <= text.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto bk = static_cast<std::uint8_t>(text[i + k]);
      if ((bk & 0xC0) != 0x80) ok = false;
      cp = (cp << 6) | (bk & 0x3F);
    }
    if (ok) {
      // Reject overlongs, surrogates and out-of-range values.
      if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
          (len == 4 && cp < 0x10000) || cp > 0x10FFFF ||
          (cp >= 0xD800 && cp <= 0xDFFF)) {
        ok = false;
      }
    }
    if (ok) {
      units.push_back({cp, static_cast<std::uint32_t>(i), static_cast<std::uint8_t>(len)});
      i += len;
    } else {
      units.push_back({kInvalid, static_cast<std::uint32_t>(i), 1});
      i += 1;
    }
  }
  return units;
}

std::uint32_t ascii_lower(std::uint32_t cp) {
  return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
}

// Length in units of the pattern match starting at i. The alternation order
// of the published pattern is preserved; a match always exists for a
// non-empty input.
std::size_t match_at(const std::vector<Unit>& us, std::size_t i) {
  const std::size_t n = us.size();

  // '(?i:[sdmt]|ll|ve|re)
  if (us[i].cp == '\'' && i + 1 < n) {
    const std::uint32_t c1 = ascii_lower(us[i + 1].cp);
    if (c1 == 's' || c1 == 'd' || c1 == 'm' || c1 == 't') return 2;
    if (i + 2 < n) {
      const std::uint32_t c2 = ascii_lower(us[i + 2].cp);
      if ((c1 == 'l' && c2 == 'l') || (c1 == 'v' && c2 == 'e') || (c1 == 'r' && c2 == 'e'))
        return 3;
    }
  }

  // [^\r\n\p{L}\p{N}]?+\p{L}+
  if (is_letter(us[i])) {
    std::size_t k = i;
    while (k < n && is_letter(us[k])) ++k;
    return k - i;
  }
  if (!is_newline(us[i]) && !is_number(us[i]) && i + 1 < n && is_letter(us[i + 1])) {
    std::size_t k = i + 1;
    while (k < n && is_letter(us[k])) ++k;
    return k - i;
  }

  // \p{N}{1,3}
  if (is_number(us[i])) {
    std::size_t k = i;
    while (k < n && k - i < 3 && is_number(us[k])) ++k;
    return k - i;
  }

  //  ?[^\s\p{L}\p{N}]++[\r\n]*
  {
    std::size_t j = i;
    if (us[i].cp == ' ' && i + 1 < n && is_other(us[i + 1])) j = i + 1;
    if (is_other(us[j])) {
      std::size_t k = j;
      while (k < n && is_other(us[k])) ++k;
      while (k < n && is_newline(us[k])) ++k;
      return k - i;
    }
  }

  // \s*[\r\n] | \s+(?!\S) | \s+  over the maximal whitespace run
  if (is_space(us[i])) {
    std::size_t k = i;
    std::size_t last_nl = n;  // sentinel: none
    while (k < n && is_space(us[k])) {
      if (is_newline(us[k])) last_nl = k;
      ++k;
    }
    if (last_nl != n) return last_nl - i + 1;
    if (k == n) return k - i;          // run extends to end of input
    if (k - i >= 2) return k - i - 1;  // keep last space for the next piece
    return 1;
  }

  return 1;  // unreachable for classified units; defensive progress
}

std::string normalize_b64_error(std::size_t line_no) {
  std::ostringstream os;
  os << "malformed base64 field at line " << line_no;
  return os.str();
}

std::string decode_base64(std::string_view in, std::size_t line_no) {
  static const std::array<std::int8_t, 256> table = [] {
    std::array<std::int8_t, 256> t{};
    t.fill(-1);
    for (int i = 0; i < 26; ++i) t[static_cast<unsigned char>('A' + i)] = static_cast<std::int8_t>(i);
    for (int i = 0; i < 26; ++i) t[static_cast<unsigned char>('a' + i)] = static_cast<std::int8_t>(26 + i);
    for (int i = 0; i < 10; ++i) t[static_cast<unsigned char>('0' + i)] = static_cast<std::int8_t>(52 + i);
    t[static_cast<unsigned char>('+')] = 62;
    t[static_cast<unsigned char>('/')] = 63;
    return t;
  }();

  std::string out;
  out.reserve(in.size() * 3 / 4);
  std::uint32_t buffer = 0;
  int bits = 0;
  for (char c : in) {
    if (c == '=') break;
    const std::int8_t v = table[static_cast<unsigned char>(c)];
    if (v < 0) throw ParseError(normalize_b64_error(line_no));
    buffer = (buffer << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((buffer >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open vocabulary file: " + path);

  Vocabulary vocab;
  vocab.pretoken_pattern_ = kCl100kPattern;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto space = line.find(' ');
    if (space == std::string::npos || space == 0 || space + 1 >= line.size()) {
      std::ostringstream os;
      os << "malformed vocabulary entry at line " << line_no;
      throw ParseError(os.str());
    }
    const std::string bytes = decode_base64(std::string_view(line).substr(0, space), line_no);
    TokenId id = 0;
    try {
      std::size_t consumed = 0;
      const long parsed = std::stol(line.substr(space + 1), &consumed);
      if (consumed != line.size() - space - 1 || parsed < 0 ||
          parsed > std::numeric_limits<TokenId>::max()) {
        throw std::invalid_argument("rank");
      }
      id = static_cast<TokenId>(parsed);
    } catch (const std::exception&) {
      std::ostringstream os;
      os << "malformed rank field at line " << line_no;
      throw ParseError(os.str());
    }
    vocab.index_entry(bytes, id, line_no);
  }
  if (vocab.entry_count_ == 0) throw ParseError("empty vocabulary: " + path);
  vocab.finalize();
  return vocab;
}

Vocabulary Vocabulary::from_entries(
    const std::vector<std::pair<std::string, TokenId>>& entries) {
  Vocabulary vocab;
  vocab.pretoken_pattern_ = kCl100kPattern;
  std::size_t line_no = 0;
  for (const auto& [bytes, id] : entries) vocab.index_entry(bytes, id, ++line_no);
  if (vocab.entry_count_ == 0) throw ParseError("empty vocabulary");
  vocab.finalize();
  return vocab;
}

void Vocabulary::index_entry(const std::string& bytes, TokenId id, std::size_t line_no) {
  if (bytes.empty()) {
    std::ostringstream os;
    os << "empty byte sequence at line " << line_no;
    throw ParseError(os.str());
  }
  if (static_cast<std::size_t>(id) >= id_to_bytes_.size()) id_to_bytes_.resize(id + 1);
  if (!id_to_bytes_[id].empty()) {
    std::ostringstream os;
    os << "duplicate token id " << id << " at line " << line_no;
    throw ParseError(os.str());
  }
  if (!table_.emplace(bytes, id).second) {
    std::ostringstream os;
    os << "duplicate byte sequence at line " << line_no;
    throw ParseError(os.str());
  }
  id_to_bytes_[id] = bytes;
  ++entry_count_;
}

void Vocabulary::finalize() {
  // Every multi-byte entry must split into two halves that are themselves
  // entries or single bytes, or merging could never have produced it.
  for (const auto& [bytes, id] : table_) {
    if (bytes.size() < 2) continue;
    bool splittable = false;
    const std::string_view view(bytes);
    for (std::size_t cut = 1; cut < bytes.size() && !splittable; ++cut) {
      const auto left = view.substr(0, cut);
      const auto right = view.substr(cut);
      const bool left_ok = left.size() == 1 || table_.find(left) != table_.end();
      const bool right_ok = right.size() == 1 || table_.find(right) != table_.end();
      splittable = left_ok && right_ok;
    }
    if (!splittable)
      throw ParseError("unreachable token id " + std::to_string(id) +
                       ": no split into known halves");
  }
  for (const auto& [text, id] : kCl100kSpecials) {
    special_tokens_.emplace(text, id);
    special_bytes_.emplace(id, text);
  }
}

std::vector<std::string_view> Vocabulary::pretokenize(std::string_view text) const {
  std::vector<std::string_view> pieces;
  const std::vector<Unit> units = decode_units(text);
  std::size_t i = 0;
  while (i < units.size()) {
    const std::size_t len = match_at(units, i);
    const std::size_t begin = units[i].offset;
    const Unit& last = units[i + len - 1];
    pieces.push_back(text.substr(begin, last.offset + last.length - begin));
    i += len;
  }
  return pieces;
}

std::vector<TokenId> Vocabulary::merge_piece(std::string_view piece) const {
  if (auto it = table_.find(piece); it != table_.end()) return {it->second};

  // Rank-based merge; lowest rank first, ties to the leftmost pair.
  struct Part {
    std::size_t begin;
    std::size_t end;
  };
  std::vector<Part> parts;
  parts.reserve(piece.size());
  for (std::size_t i = 0; i < piece.size(); ++i) parts.push_back({i, i + 1});

  const auto pair_rank = [&](std::size_t idx) -> TokenId {
    const auto merged = piece.substr(parts[idx].begin, parts[idx + 1].end - parts[idx].begin);
    const auto it = table_.find(merged);
    return it == table_.end() ? std::numeric_limits<TokenId>::max() : it->second;
  };

  while (parts.size() > 1) {
    TokenId best = std::numeric_limits<TokenId>::max();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
      const TokenId r = pair_rank(i);
      if (r < best) {
        best = r;
        best_idx = i;
      }
    }
    if (best == std::numeric_limits<TokenId>::max()) break;
    parts[best_idx].end = parts[best_idx + 1].end;
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best_idx) + 1);
  }

  std::vector<TokenId> ids;
  ids.reserve(parts.size());
  for (const Part& p : parts) {
    const auto it = table_.find(piece.substr(p.begin, p.end - p.begin));
    if (it == table_.end())
      throw Error("byte sequence missing from vocabulary; incomplete byte coverage");
    ids.push_back(it->second);
  }
  return ids;
}

std::vector<TokenId> Vocabulary::encode(std::string_view text) const {
  std::vector<TokenId> ids;
  for (const auto piece : pretokenize(text)) {
    const auto piece_ids = merge_piece(piece);
    ids.insert(ids.end(), piece_ids.begin(), piece_ids.end());
  }
  return ids;
}

std::string Vocabulary::decode(const std::vector<TokenId>& ids) const {
  std::string out;
  for (const TokenId id : ids) {
    if (id >= 0 && static_cast<std::size_t>(id) < id_to_bytes_.size() &&
        !id_to_bytes_[id].empty()) {
      out += id_to_bytes_[id];
      continue;
    }
    if (const auto it = special_bytes_.find(id); it != special_bytes_.end()) {
      out += it->second;
      continue;
    }
    throw Error("unknown token id " + std::to_string(id));
  }
  return out;
}

std::vector<TokenId> encode_text(const Vocabulary& vocab, std::string_view text) {
  return vocab.encode(text);
}

std::size_t count_tokens(const Vocabulary& vocab, std::string_view text) {
  return vocab.count(text);
}

std::size_t count_lines(std::string_view content) {
  if (content.empty()) return 0;
  std::size_t lines = static_cast<std::size_t>(std::count(content.begin(), content.end(), '\n'));
  if (content.back() != '\n') ++lines;
  return lines;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw Error("read failure: " + path);
  return os.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("write failure: " + path);
}

TokenStats text_stats(const Vocabulary& vocab, std::string_view content) {
  TokenStats stats;
  stats.tokens = vocab.count(content);
  stats.lines = count_lines(content);
  if (stats.lines > 0)
    stats.tokens_per_line = static_cast<double>(stats.tokens) / static_cast<double>(stats.lines);
  return stats;
}

TokenStats file_stats(const Vocabulary& vocab, const std::string& path) {
  return text_stats(vocab, read_file(path));
}

}  // namespace semdense
