#include <CLI11.hpp>
#include <omp.h>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "mlsa/harness.hpp"
#include "mlsa/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mlsa;

struct CommonOptions {
  std::string config;
  std::string task;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::string out;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_out) {
  cmd->add_option("--config", opts.config, "Config file of key = value lines")->check(CLI::ExistingFile);
  cmd->add_option("--task", opts.task, "Task: classification, regression, density, logistic or vaw");
  cmd->add_option("--set", opts.sets, "Override a config key, as key=value (repeatable)");
  cmd->add_option("--seed", opts.seed, "Root seed; required unless the config sets it");
  auto* out = cmd->add_option("--out", opts.out, "Output directory");
  if (needs_out) out->required();
  cmd->add_option("--threads", opts.threads, "OpenMP threads (0 keeps the default)")->check(CLI::NonNegativeNumber);
}

harness::RawConfig load(const CommonOptions& opts) {
  harness::RawConfig raw;
  if (!opts.config.empty()) raw = harness::load_config_file(opts.config);
  if (!opts.task.empty()) harness::set_value(raw, "task", opts.task);
  for (const auto& kv : opts.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
    harness::set_value(raw, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.seed) harness::set_value(raw, "seed", std::to_string(*opts.seed));
  return raw;
}

std::string file_stem(const std::string& id) {
  std::string out = id;
  for (char& ch : out) {
    if (ch == '/') ch = '_';
  }
  return out;
}

int write_run(const CommonOptions& opts, const std::vector<harness::ExperimentConfig>& configs, harness::Mode mode) {
  const harness::RunReport report = harness::run_experiments(configs, mode);
  fs::create_directories(opts.out);
  const std::string csv = harness::csv_text(report);
  io::write_text((fs::path(opts.out) / "results.csv").string(), csv);
  io::write_text((fs::path(opts.out) / "report.txt").string(), harness::report_text(report));
  std::cout << harness::summarize_csv({csv});
  std::size_t failed = 0;
  for (const auto& r : report.results) {
    if (r.ok) continue;
    ++failed;
    std::cerr << "FAIL " << r.instance_id;
    if (!r.failed_stage.empty()) std::cerr << " [" << r.failed_stage << "] " << r.error;
    for (const auto& c : r.certificates) {
      if (!c.passed()) std::cerr << " certificate:" << c.name;
    }
    for (const auto& c : r.checks) {
      if (!c.passed) std::cerr << " check:" << c.name;
    }
    std::cerr << '\n';
  }
  std::cout << report.results.size() - failed << "/" << report.results.size() << " instances passed\n";
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Median of level-set aggregation: leave-one-out predictors and their certificates"};
  app.require_subcommand(1);

  CommonOptions gen_opts, run_opts, audit_opts, sweep_opts;
  auto* gen = app.add_subcommand("gen", "Write the generated instances as text files");
  add_common(gen, gen_opts, true);
  auto* run = app.add_subcommand("run", "Run one configuration and write results.csv and report.txt");
  add_common(run, run_opts, true);
  auto* audit = app.add_subcommand("audit", "Run the assumption audits without the full predictor");
  add_common(audit, audit_opts, true);
  auto* sweep = app.add_subcommand("sweep", "Run every combination of comma-separated config values");
  add_common(sweep, sweep_opts, true);

  std::vector<std::string> csv_inputs;
  std::string report_out;
  auto* report = app.add_subcommand("report", "Summarize one or more results.csv files");
  report->add_option("inputs", csv_inputs, "CSV files")->required()->check(CLI::ExistingFile);
  report->add_option("--out", report_out, "Write the summary here instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    auto threads = [](const CommonOptions& o) {
      if (o.threads > 0) omp_set_num_threads(o.threads);
    };
    if (*gen) {
      threads(gen_opts);
      fs::create_directories(gen_opts.out);
      for (const auto& config : harness::expand(load(gen_opts))) {
        for (std::size_t rep = 0; rep < config.replicates; ++rep) {
          const std::string id = harness::instance_id(config, rep);
          const auto instance = harness::generate_instance(config, harness::instance_seed(config, rep));
          for (const auto& [suffix, text] : harness::instance_files(instance)) {
            const auto path = fs::path(gen_opts.out) / (file_stem(id) + "." + suffix);
            io::write_text(path.string(), text);
            std::cout << path.string() << '\n';
          }
        }
      }
      return 0;
    }
    if (*run) {
      threads(run_opts);
      return write_run(run_opts, {harness::single(load(run_opts))}, harness::Mode::full);
    }
    if (*audit) {
      threads(audit_opts);
      return write_run(audit_opts, harness::expand(load(audit_opts)), harness::Mode::audit_only);
    }
    if (*sweep) {
      threads(sweep_opts);
      return write_run(sweep_opts, harness::expand(load(sweep_opts)), harness::Mode::full);
    }
    if (*report) {
      std::vector<std::string> texts;
      for (const auto& path : csv_inputs) texts.push_back(io::read_text(path));
      const std::string summary = harness::summarize_csv(texts);
      if (report_out.empty()) {
        std::cout << summary;
      } else {
        io::write_text(report_out, summary);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
