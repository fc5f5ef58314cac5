#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "semdense/errors.hpp"
#include "semdense/tokenizer.hpp"

using namespace semdense;

namespace {

const std::string kRoot = SEMDENSE_REPO_ROOT;
const std::string kVocabPath = kRoot + "/data/cl100k_base.tiktoken";

const Vocabulary& vocab() {
  static Vocabulary v = Vocabulary::load(kVocabPath);
  return v;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

// Small deterministic generator for property tests.
struct SplitMix64 {
  std::uint64_t state;
  explicit SplitMix64(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

}  // namespace

TEST_CASE("vocabulary load indexes the published file") {
  CHECK(vocab().size() == 100256);
  CHECK(vocab().special_tokens().at("<|endoftext|>") == 100257);
  CHECK(vocab().pretoken_pattern().find("\\p{L}") != std::string::npos);
}

TEST_CASE("load rejects an empty vocabulary file") {
  const std::string path = temp_path("semdense_empty_vocab.txt");
  std::ofstream(path).close();
  CHECK_THROWS_WITH_AS(Vocabulary::load(path), doctest::Contains("empty vocabulary"),
                       ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("load names the line of a duplicated rank") {
  const std::string path = temp_path("semdense_dup_vocab.txt");
  {
    std::ofstream out(path);
    out << "YQ== 0\n";   // "a"
    out << "Yg== 1\n";   // "b"
    out << "Yw== 1\n";   // "c" reuses rank 1
  }
  CHECK_THROWS_WITH_AS(Vocabulary::load(path), doctest::Contains("line 3"), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("load names the line of a malformed entry") {
  const std::string path = temp_path("semdense_bad_vocab.txt");
  {
    std::ofstream out(path);
    out << "YQ== 0\n";
    out << "not-base64!! 1\n";
  }
  CHECK_THROWS_WITH_AS(Vocabulary::load(path), doctest::Contains("line 2"), ParseError);
  std::filesystem::remove(path);
}

TEST_CASE("reference vector suite matches token for token") {
  std::ifstream in(kRoot + "/tests/data/tokenizer_vectors.json");
  REQUIRE(in.good());
  const auto suite = nlohmann::json::parse(in);
  REQUIRE(suite.size() == 50);
  std::size_t matched = 0;
  for (const auto& vec : suite) {
    const std::string text = vec["text"].get<std::string>();
    const auto expected = vec["ids"].get<std::vector<TokenId>>();
    const auto got = vocab().encode(text);
    if (got == expected) {
      ++matched;
    } else {
      CAPTURE(text);
      CHECK(got == expected);
    }
  }
  CHECK(matched == 50);
}

TEST_CASE("empty input encodes to nothing and counts zero") {
  CHECK(vocab().encode("").empty());
  CHECK(count_tokens(vocab(), "") == 0);
}

TEST_CASE("single base-token letter counts as one") {
  CHECK(count_tokens(vocab(), "a") == 1);
}

TEST_CASE("count equals encode length on a known string") {
  const std::string line = "Payment failed for order #4521: insufficient funds";
  CHECK(count_tokens(vocab(), line) == vocab().encode(line).size());
}

TEST_CASE("encoding is deterministic") {
  const std::string text = "for (int i = 0; i < n; ++i) total += weights[i];\n";
  CHECK(vocab().encode(text) == vocab().encode(text));
}

TEST_CASE("round-trip reproduces bytes exactly on random inputs") {
  SplitMix64 rng(4521);
  for (int iter = 0; iter < 300; ++iter) {
    std::string text;
    const std::size_t len = rng.next() % 120;
    for (std::size_t k = 0; k < len; ++k) {
      switch (rng.next() % 4) {
        case 0:  // printable ascii
          text.push_back(static_cast<char>(' ' + rng.next() % 95));
          break;
        case 1:  // whitespace
          text.push_back("\t\n\r "[rng.next() % 4]);
          break;
        case 2: {  // valid two/three byte utf-8
          const char* snippets[] = {"é", "ß", "λ", "ж", "日", "语", "€", "–"};
          text += snippets[rng.next() % 8];
          break;
        }
        default:  // arbitrary raw byte, possibly invalid utf-8
          text.push_back(static_cast<char>(rng.next() % 256));
          break;
      }
    }
    const auto ids = vocab().encode(text);
    CHECK(vocab().decode(ids) == text);
    if (text.empty()) CHECK(ids.empty());
    if (!text.empty()) CHECK(!ids.empty());
  }
}

TEST_CASE("pretokenize partitions the input") {
  SplitMix64 rng(99);
  for (int iter = 0; iter < 100; ++iter) {
    std::string text;
    const std::size_t len = rng.next() % 80;
    for (std::size_t k = 0; k < len; ++k)
      text.push_back(static_cast<char>(rng.next() % 256));
    std::string joined;
    for (const auto piece : vocab().pretokenize(text)) joined += piece;
    CHECK(joined == text);
  }
}

TEST_CASE("pretokenize keeps the leading-space word idiom") {
  const auto pieces = vocab().pretokenize("  abc");
  REQUIRE(pieces.size() == 2);
  CHECK(pieces[0] == " ");
  CHECK(pieces[1] == " abc");
}

TEST_CASE("special token literals encode as plain text") {
  const auto ids = vocab().encode("<|endoftext|>");
  for (const TokenId id : ids) CHECK(id < 100256);
  CHECK(vocab().decode(ids) == "<|endoftext|>");
}

TEST_CASE("decode rejects an unknown token id") {
  CHECK_THROWS_AS((void)vocab().decode({100300}), Error);
}

TEST_CASE("line counting ignores one trailing newline") {
  CHECK(count_lines("") == 0);
  CHECK(count_lines("a") == 1);
  CHECK(count_lines("a\n") == 1);
  CHECK(count_lines("a\nb") == 2);
  CHECK(count_lines("a\nb\n") == 2);
  CHECK(count_lines("\n") == 1);
  CHECK(count_lines("\n\n") == 2);
}

TEST_CASE("file_stats on an empty file yields the undefined marker") {
  const std::string path = temp_path("semdense_empty_file.txt");
  std::ofstream(path).close();
  const TokenStats stats = file_stats(vocab(), path);
  CHECK(stats.tokens == 0);
  CHECK(stats.lines == 0);
  CHECK(!stats.tokens_per_line.has_value());
  std::filesystem::remove(path);
}

TEST_CASE("file_stats errors on a missing file") {
  CHECK_THROWS_AS((void)file_stats(vocab(), temp_path("no_such_file_8271")), Error);
}

TEST_CASE("tokens-per-line division matches the reported precision") {
  // 8,072 tokens over 247 lines and 6,695 over 203, to two decimals.
  const double a = 8072.0 / 247.0;
  const double c = 6695.0 / 203.0;
  CHECK(static_cast<int>(a * 100 + 0.5) == 3268);
  CHECK(static_cast<int>(c * 100 + 0.5) == 3298);

  const TokenStats stats = text_stats(vocab(), "one two three\nfour five\n");
  REQUIRE(stats.tokens_per_line.has_value());
  CHECK(*stats.tokens_per_line ==
        doctest::Approx(static_cast<double>(stats.tokens) / 2.0));
}
