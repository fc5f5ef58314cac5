#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace semdense {

using TokenId = std::int32_t;

// Per-file token accounting: the three per-file report columns.
struct TokenStats {
  std::size_t tokens = 0;
  std::size_t lines = 0;
  std::optional<double> tokens_per_line;  // empty when lines == 0
};

// A byte-pair-encoding vocabulary in the cl100k_base family. Immutable after
// load; safe for concurrent readers.
class Vocabulary {
 public:
  // Parses the published serialization: one `base64(bytes) <space> rank` entry
  // per line. Throws ParseError naming the line on malformed or duplicate
  // entries, and Error on I/O failure or an empty file.
  static Vocabulary load(const std::string& path);

  // Builds directly from (byte-sequence, id) pairs. Used by tests.
  static Vocabulary from_entries(
      const std::vector<std::pair<std::string, TokenId>>& entries);

  // Encodes text in plain-text mode: special-token literals are ordinary
  // bytes. Invalid UTF-8 never fails; stray bytes are encoded byte-wise.
  std::vector<TokenId> encode(std::string_view text) const;

  // Inverse of encode; concatenates token byte sequences. Throws Error on an
  // id outside the vocabulary.
  std::string decode(const std::vector<TokenId>& ids) const;

  std::size_t count(std::string_view text) const { return encode(text).size(); }

  // Splits text per the pretokenizer pattern, before any merging. Exposed for
  // tests.
  std::vector<std::string_view> pretokenize(std::string_view text) const;

  std::size_t size() const { return entry_count_; }
  const std::string& pretoken_pattern() const { return pretoken_pattern_; }
  const std::unordered_map<std::string, TokenId>& special_tokens() const {
    return special_tokens_;
  }

 private:
  struct StringHash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  Vocabulary() = default;
  void index_entry(const std::string& bytes, TokenId id, std::size_t line_no);
  void finalize();
  std::vector<TokenId> merge_piece(std::string_view piece) const;

  std::unordered_map<std::string, TokenId, StringHash, std::equal_to<>> table_;
  std::vector<std::string> id_to_bytes_;  // indexed by id; empty slot = unused
  std::unordered_map<std::string, TokenId> special_tokens_;
  std::unordered_map<TokenId, std::string> special_bytes_;
  std::string pretoken_pattern_;
  std::size_t entry_count_ = 0;
};

std::vector<TokenId> encode_text(const Vocabulary& vocab, std::string_view text);
std::size_t count_tokens(const Vocabulary& vocab, std::string_view text);

// Newline-delimited line count; a trailing newline does not open a new line.
std::size_t count_lines(std::string_view content);

// Tokens, lines and tokens-per-line over a whole file. Throws Error when the
// file cannot be read.
TokenStats file_stats(const Vocabulary& vocab, const std::string& path);

TokenStats text_stats(const Vocabulary& vocab, std::string_view content);

// Reads a whole file as bytes. Throws Error when unreadable.
std::string read_file(const std::string& path);

void write_file(const std::string& path, std::string_view content);

}  // namespace semdense
