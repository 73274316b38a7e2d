#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace spampipe {

enum class Label { Ham = 0, Spam = 1 };

inline const char* label_name(Label l) { return l == Label::Spam ? "spam" : "ham"; }

struct Document {
  std::uint32_t id = 0;
  std::string source;  // origin path or "synthetic:<n>"
  Label label = Label::Ham;
  std::string text;
};

struct Corpus {
  std::vector<Document> documents;

  std::size_t size() const { return documents.size(); }
  std::size_t count(Label l) const;
};

// Non-fatal loader diagnostics (skipped files / directories).
struct LoadReport {
  std::vector<std::string> warnings;
  std::size_t skipped_files = 0;
};

// Decode raw bytes as UTF-8, replacing invalid sequences with U+FFFD.
// With strip_headers: everything before the first empty line is the header
// block; the result is the first Subject: value (case-insensitive, "" if
// absent), a newline, then the body.
std::string parse_email(const std::string& raw, bool strip_headers);

// SpamAssassin-style layout: subdirectories whose names contain "spam" or
// "ham" (case-insensitive, "spam" wins on both), one message per file.
// Documents ordered by lexicographic path, ids 0..n-1 in that order.
Corpus load_spamassassin_dir(const std::filesystem::path& root, bool strip_headers,
                             LoadReport* report = nullptr);

// TREC spam track index: one "<label> <relative-path>" per non-empty line,
// paths resolved against the index file's directory.
Corpus load_trec_index(const std::filesystem::path& index_path, bool strip_headers,
                       LoadReport* report = nullptr);

// One "<label>\t<text>" per line; text is taken verbatim.
Corpus load_tsv(const std::filesystem::path& path);

void save_tsv(const Corpus& corpus, const std::filesystem::path& path);

struct SyntheticSpec {
  std::size_t n_spam = 100;
  std::size_t n_ham = 100;
  std::size_t subtopics_per_label = 2;
  std::size_t vocab_per_subtopic = 20;
  std::size_t shared_vocab = 20;
  std::size_t doc_len_min = 20;
  std::size_t doc_len_max = 40;
  double noise_ratio = 0.2;
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError
};

// Corpus plus the generator's ground-truth subtopic per document
// (0..subtopics_per_label-1, within the document's own label).
struct SyntheticCorpus {
  Corpus corpus;
  std::vector<std::size_t> subtopic;
};

// Deterministic function of the spec. PRNG is std::mt19937_64 seeded with
// spec.seed; all draws are taken as engine() % bound so output is identical
// across standard libraries. Spam documents come first (ids 0..n_spam-1).
// Subtopic vocabularies are "s<t>w<i>" (spam), "h<t>w<i>" (ham); the shared
// pool is "cw<i>".
SyntheticCorpus generate_synthetic_with_truth(const SyntheticSpec& spec);
Corpus generate_synthetic(const SyntheticSpec& spec);

}  // namespace spampipe
