#include "spampipe/classifier.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "spampipe/errors.hpp"

namespace spampipe {

NBModel train_nb(const FeatureMatrix& matrix, const std::vector<Label>& labels, double smoothing) {
  if (smoothing <= 0.0) throw ConfigError("nb: smoothing must be > 0");
  if (labels.size() != matrix.rows.size()) throw ConfigError("nb: labels/rows size mismatch");
  const std::size_t vsize = matrix.vocab->size();

  NBModel model;
  model.smoothing = smoothing;
  model.log_cond_spam.assign(vsize, 0.0);
  model.log_cond_ham.assign(vsize, 0.0);

  std::vector<double> w_spam(vsize, 0.0), w_ham(vsize, 0.0);
  double total_spam = 0.0, total_ham = 0.0;
  std::size_t n_spam = 0, n_ham = 0;
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    bool is_spam = labels[r] == Label::Spam;
    (is_spam ? n_spam : n_ham) += 1;
    auto& w = is_spam ? w_spam : w_ham;
    auto& total = is_spam ? total_spam : total_ham;
    for (const auto& [t, x] : matrix.rows[r].entries) {
      if (x < 0.0) throw ConfigError("nb: negative feature weight");
      w[t] += x;
      total += x;
    }
  }
  if (n_spam == 0 || n_ham == 0) {
    throw ConfigError("nb: training set must contain both labels");
  }

  const double n = static_cast<double>(n_spam + n_ham);
  model.log_prior_spam = std::log(static_cast<double>(n_spam) / n);
  model.log_prior_ham = std::log(static_cast<double>(n_ham) / n);

  const double denom_spam = total_spam + smoothing * static_cast<double>(vsize);
  const double denom_ham = total_ham + smoothing * static_cast<double>(vsize);
  for (std::size_t t = 0; t < vsize; ++t) {
    model.log_cond_spam[t] = std::log((w_spam[t] + smoothing) / denom_spam);
    model.log_cond_ham[t] = std::log((w_ham[t] + smoothing) / denom_ham);
  }
  return model;
}

double score(const NBModel& model, const SparseVector& v) {
  double s = model.log_prior_spam - model.log_prior_ham;
  for (const auto& [t, w] : v.entries) {
    s += w * (model.log_cond_spam[t] - model.log_cond_ham[t]);
  }
  return s;
}

ScoredPrediction classify(const NBModel& model, const SparseVector& v, double threshold) {
  ScoredPrediction p;
  p.score = score(model, v);
  p.predicted = p.score > threshold ? Label::Spam : Label::Ham;
  return p;
}

namespace {

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

void save_model(const NBModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write model file: " + path.string());
  out << "nbmodel v1 |V|=" << model.vocab_size() << " smoothing=" << fmt17(model.smoothing)
      << "\n";
  out << "spam " << fmt17(model.log_prior_spam) << "\n";
  out << "ham " << fmt17(model.log_prior_ham) << "\n";
  for (std::size_t t = 0; t < model.vocab_size(); ++t) {
    out << t << '\t' << fmt17(model.log_cond_spam[t]) << '\t' << fmt17(model.log_cond_ham[t])
        << '\n';
  }
}

NBModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read model file: " + path.string());
  std::string header;
  if (!std::getline(in, header)) throw InputError("model file is empty: " + path.string());
  std::size_t vsize = 0;
  double smoothing = 0.0;
  if (std::sscanf(header.c_str(), "nbmodel v1 |V|=%zu smoothing=%lf", &vsize, &smoothing) != 2) {
    throw InputError("bad model header: " + header);
  }
  NBModel model;
  model.smoothing = smoothing;
  model.log_cond_spam.assign(vsize, 0.0);
  model.log_cond_ham.assign(vsize, 0.0);

  std::string tag;
  if (!(in >> tag >> model.log_prior_spam) || tag != "spam") {
    throw InputError("bad model prior line (spam)");
  }
  if (!(in >> tag >> model.log_prior_ham) || tag != "ham") {
    throw InputError("bad model prior line (ham)");
  }
  for (std::size_t i = 0; i < vsize; ++i) {
    std::size_t t;
    double cs, ch;
    if (!(in >> t >> cs >> ch) || t >= vsize) {
      throw InputError("bad model term line " + std::to_string(i));
    }
    model.log_cond_spam[t] = cs;
    model.log_cond_ham[t] = ch;
  }
  return model;
}

}  // namespace spampipe
