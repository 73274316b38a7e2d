#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spampipe/errors.hpp"
#include "spampipe/pipeline.hpp"
#include "spampipe/textproc.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitInputError = 3;

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;  // key=value overrides
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("-c,--config", opts.config_path, "configuration file (key = value lines)");
  cmd->add_option("-s,--set", opts.sets, "override a config key, e.g. --set alpha=2.0")
      ->take_all();
}

spampipe::PipelineConfig resolve_config(const CommonOpts& opts) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const std::string& s : opts.sets) {
    std::size_t eq = s.find('=');
    if (eq == std::string::npos) {
      throw spampipe::ConfigError("--set expects key=value, got \"" + s + "\"");
    }
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (opts.config_path.empty()) {
    return spampipe::parse_config_text("", overrides);
  }
  return spampipe::parse_config_file(opts.config_path, overrides);
}

int cmd_run(const CommonOpts& opts) {
  spampipe::PipelineConfig cfg = resolve_config(opts);
  spampipe::EvalReport report = spampipe::run_pipeline(cfg);
  std::cout << spampipe::format_report(report);
  std::cout << "artifacts written to " << cfg.output_dir.string() << "\n";
  return 0;
}

int cmd_compare(const CommonOpts& opts) {
  spampipe::PipelineConfig cfg = resolve_config(opts);
  spampipe::CompareReport cr = spampipe::run_compare(cfg);
  std::cout << cr.table;
  std::cout << "artifacts written to " << cfg.output_dir.string() << "\n";
  return 0;
}

int cmd_gen(const CommonOpts& opts, const std::string& out_path) {
  spampipe::PipelineConfig cfg = resolve_config(opts);
  spampipe::Corpus corpus = spampipe::generate_synthetic(cfg.synthetic);
  spampipe::save_tsv(corpus, out_path);
  std::cout << "wrote " << corpus.size() << " documents (" << corpus.count(spampipe::Label::Spam)
            << " spam, " << corpus.count(spampipe::Label::Ham) << " ham) to " << out_path << "\n";
  return 0;
}

int cmd_stem() {
  std::string word;
  while (std::cin >> word) {
    for (char& c : word) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    std::cout << spampipe::stem(word) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spam-detection pipeline: subtopic clustering, descriptor/discriminator "
               "term weighting, Naive Bayes classification"};
  app.require_subcommand(1);

  CommonOpts run_opts, compare_opts, gen_opts;
  std::string gen_out = "corpus.tsv";

  CLI::App* run = app.add_subcommand("run", "run the full pipeline with cross-validation");
  add_common(run, run_opts);
  CLI::App* compare = app.add_subcommand("compare", "baseline (alpha=beta=0) vs adjusted run");
  add_common(compare, compare_opts);
  CLI::App* gen = app.add_subcommand("gen", "write a synthetic corpus to TSV");
  add_common(gen, gen_opts);
  gen->add_option("-o,--output", gen_out, "output TSV path");
  app.add_subcommand("stem", "read words from stdin, print their stems");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_opts);
    if (compare->parsed()) return cmd_compare(compare_opts);
    if (gen->parsed()) return cmd_gen(gen_opts, gen_out);
    return cmd_stem();
  } catch (const spampipe::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const spampipe::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
