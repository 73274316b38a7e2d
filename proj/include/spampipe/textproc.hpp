#pragma once

#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace spampipe {

struct TokenizerConfig {
  std::size_t min_len = 2;
  std::size_t max_len = 40;
  std::unordered_set<std::string> stopwords;
  bool stem = true;

  void validate() const;  // throws ConfigError
};

// Lowercase, split on non-alphanumeric runs, drop tokens outside
// [min_len, max_len]. Length limits count Unicode codepoints.
std::vector<std::string> tokenize(const std::string& text, const TokenizerConfig& cfg);

std::vector<std::string> remove_stopwords(std::vector<std::string> tokens,
                                          const TokenizerConfig& cfg);

// Porter (1980) stemmer, steps 1a-5b. Tokens containing digits or
// non-ASCII bytes are returned unchanged.
std::string stem(const std::string& token);

// tokenize -> remove_stopwords -> stem (stemming only if cfg.stem).
std::vector<std::string> process(const std::string& text, const TokenizerConfig& cfg);

// One lowercase word per line, '#' comment lines ignored.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& path);

}  // namespace spampipe
