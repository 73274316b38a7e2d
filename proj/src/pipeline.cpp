#include "spampipe/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "spampipe/errors.hpp"

namespace fs = std::filesystem;

namespace spampipe {

void PipelineConfig::validate() const {
  synthetic.validate();
  TokenizerConfig tk;
  tk.min_len = min_token_len;
  tk.max_len = max_token_len;
  tk.validate();
  if (min_df < 1) throw ConfigError("min_df must be >= 1");
  if (max_df_ratio <= 0.0 || max_df_ratio > 1.0) throw ConfigError("max_df_ratio must be in (0,1]");
  cluster.validate();
  adjust.validate();
  if (smoothing <= 0.0) throw ConfigError("smoothing must be > 0");
  eval.validate();
  if (corpus_kind != CorpusKind::Synthetic && corpus_path.empty()) {
    throw ConfigError("corpus_path is required for non-synthetic corpora");
  }
}

TokenizerConfig PipelineConfig::tokenizer() const {
  TokenizerConfig tk;
  tk.min_len = min_token_len;
  tk.max_len = max_token_len;
  tk.stem = stem_tokens;
  if (!stopwords_path.empty()) tk.stopwords = load_stopwords(stopwords_path);
  return tk;
}

namespace {

const char* corpus_kind_name(CorpusKind k) {
  switch (k) {
    case CorpusKind::Synthetic: return "synthetic";
    case CorpusKind::SpamAssassin: return "spamassassin";
    case CorpusKind::Trec: return "trec";
    case CorpusKind::Tsv: return "tsv";
  }
  return "?";
}

CorpusKind corpus_kind_from_name(const std::string& s) {
  if (s == "synthetic") return CorpusKind::Synthetic;
  if (s == "spamassassin") return CorpusKind::SpamAssassin;
  if (s == "trec") return CorpusKind::Trec;
  if (s == "tsv") return CorpusKind::Tsv;
  throw ConfigError("unknown corpus kind: " + s);
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError("key \"" + key + "\": expected a boolean, got \"" + v + "\"");
}

std::size_t parse_count(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    long long x = std::stoll(v, &pos);
    if (pos != v.size() || x < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("key \"" + key + "\": expected a nonnegative integer, got \"" + v + "\"");
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    std::uint64_t x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key \"" + key + "\": expected an integer, got \"" + v + "\"");
  }
}

double parse_real(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key \"" + key + "\": expected a number, got \"" + v + "\"");
  }
}

void apply_key(PipelineConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "corpus") cfg.corpus_kind = corpus_kind_from_name(value);
  else if (key == "corpus_path") cfg.corpus_path = value;
  else if (key == "strip_headers") cfg.strip_headers = parse_bool(value, key);
  else if (key == "n_spam") cfg.synthetic.n_spam = parse_count(value, key);
  else if (key == "n_ham") cfg.synthetic.n_ham = parse_count(value, key);
  else if (key == "subtopics_per_label") cfg.synthetic.subtopics_per_label = parse_count(value, key);
  else if (key == "vocab_per_subtopic") cfg.synthetic.vocab_per_subtopic = parse_count(value, key);
  else if (key == "shared_vocab") cfg.synthetic.shared_vocab = parse_count(value, key);
  else if (key == "doc_len_min") cfg.synthetic.doc_len_min = parse_count(value, key);
  else if (key == "doc_len_max") cfg.synthetic.doc_len_max = parse_count(value, key);
  else if (key == "noise_ratio") cfg.synthetic.noise_ratio = parse_real(value, key);
  else if (key == "seed") cfg.synthetic.seed = parse_u64(value, key);
  else if (key == "min_token_len") cfg.min_token_len = parse_count(value, key);
  else if (key == "max_token_len") cfg.max_token_len = parse_count(value, key);
  else if (key == "stopwords_path") cfg.stopwords_path = value;
  else if (key == "stem") cfg.stem_tokens = parse_bool(value, key);
  else if (key == "min_df") cfg.min_df = parse_count(value, key);
  else if (key == "max_df_ratio") cfg.max_df_ratio = parse_real(value, key);
  else if (key == "scheme") cfg.scheme = scheme_from_name(value);
  else if (key == "k_spam") cfg.cluster.k_spam = parse_count(value, key);
  else if (key == "k_ham") cfg.cluster.k_ham = parse_count(value, key);
  else if (key == "max_iter") cfg.cluster.max_iter = parse_count(value, key);
  else if (key == "cluster_scope") {
    if (value == "per_label") cfg.cluster.scope = ClusterScope::PerLabel;
    else if (value == "global") cfg.cluster.scope = ClusterScope::Global;
    else throw ConfigError("key \"cluster_scope\": expected per_label or global");
  }
  else if (key == "alpha") cfg.adjust.alpha = parse_real(value, key);
  else if (key == "beta") cfg.adjust.beta = parse_real(value, key);
  else if (key == "adjust_test") cfg.adjust.adjust_test = parse_bool(value, key);
  else if (key == "bypass_weighting") cfg.bypass_weighting = parse_bool(value, key);
  else if (key == "smoothing") cfg.smoothing = parse_real(value, key);
  else if (key == "threshold") cfg.threshold = parse_real(value, key);
  else if (key == "fbeta") cfg.eval.fbeta = parse_real(value, key);
  else if (key == "fp_cost") cfg.eval.fp_cost = parse_real(value, key);
  else if (key == "folds") cfg.eval.folds = parse_count(value, key);
  else if (key == "shuffle_seed") cfg.eval.shuffle_seed = parse_u64(value, key);
  else if (key == "output_dir") cfg.output_dir = value;
  else throw ConfigError("unknown configuration key: \"" + key + "\"");
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string PipelineConfig::to_text() const {
  std::ostringstream ss;
  ss << "corpus = " << corpus_kind_name(corpus_kind) << "\n";
  ss << "corpus_path = " << corpus_path.string() << "\n";
  ss << "strip_headers = " << (strip_headers ? "true" : "false") << "\n";
  ss << "n_spam = " << synthetic.n_spam << "\n";
  ss << "n_ham = " << synthetic.n_ham << "\n";
  ss << "subtopics_per_label = " << synthetic.subtopics_per_label << "\n";
  ss << "vocab_per_subtopic = " << synthetic.vocab_per_subtopic << "\n";
  ss << "shared_vocab = " << synthetic.shared_vocab << "\n";
  ss << "doc_len_min = " << synthetic.doc_len_min << "\n";
  ss << "doc_len_max = " << synthetic.doc_len_max << "\n";
  ss << "noise_ratio = " << synthetic.noise_ratio << "\n";
  ss << "seed = " << synthetic.seed << "\n";
  ss << "min_token_len = " << min_token_len << "\n";
  ss << "max_token_len = " << max_token_len << "\n";
  ss << "stopwords_path = " << stopwords_path.string() << "\n";
  ss << "stem = " << (stem_tokens ? "true" : "false") << "\n";
  ss << "min_df = " << min_df << "\n";
  ss << "max_df_ratio = " << max_df_ratio << "\n";
  ss << "scheme = " << scheme_name(scheme) << "\n";
  ss << "k_spam = " << cluster.k_spam << "\n";
  ss << "k_ham = " << cluster.k_ham << "\n";
  ss << "max_iter = " << cluster.max_iter << "\n";
  ss << "cluster_scope = " << (cluster.scope == ClusterScope::PerLabel ? "per_label" : "global")
     << "\n";
  ss << "alpha = " << adjust.alpha << "\n";
  ss << "beta = " << adjust.beta << "\n";
  ss << "adjust_test = " << (adjust.adjust_test ? "true" : "false") << "\n";
  ss << "bypass_weighting = " << (bypass_weighting ? "true" : "false") << "\n";
  ss << "smoothing = " << smoothing << "\n";
  ss << "threshold = " << threshold << "\n";
  ss << "fbeta = " << eval.fbeta << "\n";
  ss << "fp_cost = " << eval.fp_cost << "\n";
  ss << "folds = " << eval.folds << "\n";
  ss << "shuffle_seed = " << eval.shuffle_seed << "\n";
  ss << "output_dir = " << output_dir.string() << "\n";
  return ss.str();
}

PipelineConfig parse_config_text(
    const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides) {
  PipelineConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected \"key = value\"");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    try {
      apply_key(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& [key, value] : overrides) apply_key(cfg, key, value);
  cfg.validate();
  return cfg;
}

PipelineConfig parse_config_file(
    const fs::path& path, const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

Corpus load_corpus(const PipelineConfig& cfg, LoadReport* report) {
  switch (cfg.corpus_kind) {
    case CorpusKind::Synthetic: return generate_synthetic(cfg.synthetic);
    case CorpusKind::SpamAssassin:
      return load_spamassassin_dir(cfg.corpus_path, cfg.strip_headers, report);
    case CorpusKind::Trec: return load_trec_index(cfg.corpus_path, cfg.strip_headers, report);
    case CorpusKind::Tsv: return load_tsv(cfg.corpus_path);
  }
  throw ConfigError("unhandled corpus kind");
}

namespace {

// Full training fit on a document subset: vocabulary, cluster model,
// scores, NB model. Reused by run_fold and the final export fit.
struct TrainedModel {
  Vocabulary vocab;
  ClusterModel clusters;
  TermTopicScores scores;
  NBModel nb;
  bool weighted = false;
  std::vector<Label> labels;          // aligned to train rows
  std::vector<std::uint32_t> doc_ids; // aligned to train rows
};

TrainedModel fit(const std::vector<TokenList>& corpus_tokens, const std::vector<Label>& labels,
                 const std::vector<std::uint32_t>& train_ids, const PipelineConfig& cfg) {
  TrainedModel tm;
  std::vector<TokenList> train_tokens;
  train_tokens.reserve(train_ids.size());
  for (std::uint32_t id : train_ids) {
    train_tokens.push_back(corpus_tokens[id]);
    tm.labels.push_back(labels[id]);
    tm.doc_ids.push_back(id);
  }
  tm.vocab = build_vocabulary(train_tokens, cfg.min_df, cfg.max_df_ratio);
  FeatureMatrix matrix = build_matrix(train_tokens, tm.vocab, cfg.scheme);
  matrix.doc_ids = tm.doc_ids;

  if (!cfg.bypass_weighting) {
    tm.clusters = cluster_by_label(matrix, tm.labels, cfg.cluster);
    FeatureMatrix relfreq = build_matrix(train_tokens, tm.vocab, WeightingScheme::RelFreq);
    tm.scores = compute_scores(relfreq, tm.clusters);
    matrix = adjust_matrix(matrix, tm.scores, cfg.adjust, tm.clusters.assignment);
    tm.weighted = true;
  }
  tm.nb = train_nb(matrix, tm.labels, cfg.smoothing);
  return tm;
}

ScoredPrediction predict_one(const TrainedModel& tm, const TokenList& tokens,
                             const PipelineConfig& cfg, std::uint32_t doc_id,
                             std::optional<Label> actual) {
  SparseVector v = vectorize(tokens, tm.vocab, cfg.scheme);
  if (tm.weighted && cfg.adjust.adjust_test) {
    std::size_t c = nearest_cluster(v, tm.clusters);
    v = adjust_vector(v, tm.scores, cfg.adjust, c);
  }
  ScoredPrediction p = classify(tm.nb, v, cfg.threshold);
  p.doc_id = doc_id;
  p.actual = actual;
  return p;
}

}  // namespace

std::vector<ScoredPrediction> run_fold(const std::vector<TokenList>& corpus_tokens,
                                       const std::vector<Label>& labels,
                                       const std::vector<std::uint32_t>& train_ids,
                                       const std::vector<std::uint32_t>& test_ids,
                                       const PipelineConfig& cfg) {
  TrainedModel tm = fit(corpus_tokens, labels, train_ids, cfg);
  std::vector<ScoredPrediction> out;
  out.reserve(test_ids.size());
  for (std::uint32_t id : test_ids) {
    out.push_back(predict_one(tm, corpus_tokens[id], cfg, id, labels[id]));
  }
  return out;
}

namespace {

std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const PipelineConfig& cfg) {
  TokenizerConfig tk = cfg.tokenizer();
  std::vector<TokenList> out;
  out.reserve(corpus.size());
  for (const Document& d : corpus.documents) out.push_back(process(d.text, tk));
  return out;
}

std::vector<Label> corpus_labels(const Corpus& corpus) {
  std::vector<Label> labels;
  labels.reserve(corpus.size());
  for (const Document& d : corpus.documents) labels.push_back(d.label);
  return labels;
}

EvalReport cross_validate_tokens(const std::vector<TokenList>& tokens,
                                 const std::vector<Label>& labels, const PipelineConfig& cfg) {
  auto folds = stratified_folds(labels, cfg.eval.folds, cfg.eval.shuffle_seed);
  std::vector<std::vector<ScoredPrediction>> fold_predictions;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::uint32_t> train_ids;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g == f) continue;
      train_ids.insert(train_ids.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train_ids.begin(), train_ids.end());
    fold_predictions.push_back(run_fold(tokens, labels, train_ids, folds[f], cfg));
  }
  return assemble_report(fold_predictions, cfg.eval);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << text;
}

void write_artifacts(const PipelineConfig& cfg, const Corpus& corpus,
                     const std::vector<TokenList>& tokens, const std::vector<Label>& labels,
                     const EvalReport& report) {
  fs::create_directories(cfg.output_dir);
  write_text(cfg.output_dir / "report.txt", format_report(report));
  write_curve_csv(report.roc_points, "fpr,tpr", cfg.output_dir / "roc_points.csv");
  write_curve_csv(report.pr_points, "recall,precision", cfg.output_dir / "pr_points.csv");
  write_text(cfg.output_dir / "resolved_config.txt", cfg.to_text());

  // cluster/term-score exports come from a fit on the full corpus
  std::vector<std::uint32_t> all_ids(corpus.size());
  for (std::uint32_t i = 0; i < corpus.size(); ++i) all_ids[i] = i;
  PipelineConfig full_cfg = cfg;
  full_cfg.bypass_weighting = false;
  TrainedModel tm = fit(tokens, labels, all_ids, full_cfg);
  export_cluster_csv(tm.clusters, tm.labels, tm.doc_ids, cfg.output_dir / "clusters.csv");
  export_scores_csv(tm.scores, tm.vocab, cfg.output_dir / "term_scores.csv");
}

}  // namespace

EvalReport cross_validate(const Corpus& corpus, const PipelineConfig& cfg) {
  return cross_validate_tokens(tokenize_corpus(corpus, cfg), corpus_labels(corpus), cfg);
}

EvalReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  Corpus corpus = load_corpus(cfg);
  std::vector<TokenList> tokens = tokenize_corpus(corpus, cfg);
  std::vector<Label> labels = corpus_labels(corpus);
  EvalReport report = cross_validate_tokens(tokens, labels, cfg);
  write_artifacts(cfg, corpus, tokens, labels, report);
  return report;
}

namespace {

std::string delta_table(const EvalReport& base, const EvalReport& adj) {
  auto opt = [](const std::optional<double>& v) { return v ? *v : 0.0; };
  struct Row {
    const char* name;
    double b, a;
  };
  std::vector<Row> rows = {
      {"precision", base.metrics.precision, adj.metrics.precision},
      {"recall", base.metrics.recall, adj.metrics.recall},
      {"f_score", base.metrics.f_score, adj.metrics.f_score},
      {"g_mean", base.metrics.g_mean, adj.metrics.g_mean},
      {"cost_weighted_error", base.metrics.cost_weighted_error, adj.metrics.cost_weighted_error},
      {"roc_auc", opt(base.roc_auc_value), opt(adj.roc_auc_value)},
      {"pr_auc", opt(base.pr_auc_value), opt(adj.pr_auc_value)},
      {"ks", opt(base.ks), opt(adj.ks)},
  };
  std::ostringstream ss;
  ss.precision(6);
  ss << std::fixed;
  ss << "metric baseline adjusted delta\n";
  for (const Row& r : rows) {
    ss << r.name << " " << r.b << " " << r.a << " " << (r.a - r.b) << "\n";
  }
  return ss.str();
}

}  // namespace

CompareReport run_compare(const PipelineConfig& cfg) {
  cfg.validate();
  Corpus corpus = load_corpus(cfg);
  std::vector<TokenList> tokens = tokenize_corpus(corpus, cfg);
  std::vector<Label> labels = corpus_labels(corpus);

  PipelineConfig base_cfg = cfg;
  base_cfg.adjust.alpha = 0.0;
  base_cfg.adjust.beta = 0.0;

  CompareReport cr;
  cr.baseline = cross_validate_tokens(tokens, labels, base_cfg);
  cr.adjusted = cross_validate_tokens(tokens, labels, cfg);
  cr.table = delta_table(cr.baseline, cr.adjusted);

  write_artifacts(cfg, corpus, tokens, labels, cr.adjusted);
  write_text(cfg.output_dir / "report_baseline.txt", format_report(cr.baseline));
  write_text(cfg.output_dir / "compare.txt", cr.table);
  return cr;
}

}  // namespace spampipe
