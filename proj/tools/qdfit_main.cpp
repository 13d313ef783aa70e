#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qdfit/errors.hpp"
#include "qdfit/histogram.hpp"
#include "qdfit/ingest.hpp"
#include "qdfit/parallel.hpp"
#include "qdfit/plot.hpp"
#include "qdfit/quasi.hpp"
#include "qdfit/report.hpp"
#include "qdfit/synth.hpp"

namespace fs = std::filesystem;

namespace {

// exit codes: 1 usage/IO/validation, 2 parse, 3 numeric
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// key=value lines, '#' comments; command-line flags win over file values
std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw qdfit::IoError("cannot open config file: " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    const auto is_space = [](char c) {
      return c == ' ' || c == '\t' || c == '\r';
    };
    while (!s.empty() && is_space(s.front())) s.erase(s.begin());
    while (!s.empty() && is_space(s.back())) s.pop_back();
    return s;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw qdfit::ParseError(path + " line " + std::to_string(line_no) +
                              ": expected key=value");
    }
    entries[trim(text.substr(0, eq))] = trim(text.substr(eq + 1));
  }
  return entries;
}

class ConfigApplier {
 public:
  ConfigApplier(const CLI::App* cmd, const std::string& path)
      : cmd_(cmd), path_(path) {
    if (!path.empty()) entries_ = read_config_file(path);
  }

  template <typename T, typename Parse>
  void apply(const std::string& key, T& value, Parse parse) {
    const auto it = entries_.find(key);
    if (it == entries_.end()) return;
    seen_.insert(key);
    if (cmd_->count("--" + key) > 0) return;  // flag overrides the file
    try {
      value = parse(it->second);
    } catch (const std::exception&) {
      throw qdfit::ParseError(path_ + ": bad value for '" + key + "': " +
                              it->second);
    }
  }

  template <typename T, typename Parse>
  void apply(const std::string& key, std::optional<T>& value, Parse parse) {
    T raw{};
    const bool had = entries_.count(key) > 0;
    apply(key, raw, parse);
    if (had && cmd_->count("--" + key) == 0) value = raw;
  }

  void finish() const {
    for (const auto& [key, value] : entries_) {
      if (!seen_.count(key)) {
        throw qdfit::ParseError(path_ + ": unknown config key '" + key + "'");
      }
    }
  }

  static int to_int(const std::string& s) { return std::stoi(s); }
  static double to_double(const std::string& s) { return std::stod(s); }
  static std::uint64_t to_u64(const std::string& s) { return std::stoull(s); }
  static std::string to_string(const std::string& s) { return s; }

 private:
  const CLI::App* cmd_;
  std::string path_;
  std::map<std::string, std::string> entries_;
  std::set<std::string> seen_;
};

struct PipelineFlags {
  int bins = qdfit::kDefaultBins;
  int degree = 5;
  std::optional<double> omega;
  double grid_lo = 0.05;
  double grid_hi = 0.95;
  double grid_step = 0.002;
  int samples = 0;
  std::string zero_policy = "include";
  std::string out_dir = ".";
  int threads = 1;
  std::string config_path;
  CLI::App* cmd = nullptr;

  void attach(CLI::App* sub) {
    cmd = sub;
    sub->add_option("--bins", bins, "Histogram bin count");
    sub->add_option("--degree", degree, "Bezier segment degree");
    sub->add_option("--omega", omega,
                    "Fixed segmentation point; omit to grid-search");
    sub->add_option("--grid-lo", grid_lo, "Omega grid lower bound");
    sub->add_option("--grid-hi", grid_hi, "Omega grid upper bound");
    sub->add_option("--grid-step", grid_step, "Omega grid step");
    sub->add_option("--samples", samples,
                    "Curve sample count for resampling (0 = 16*bins)");
    sub->add_option("--zero-policy", zero_policy,
                    "Zero-deformation nodes: include|exclude");
    sub->add_option("--out-dir", out_dir, "Output directory");
    sub->add_option("--threads", threads, "Worker thread count");
    sub->add_option("--config", config_path,
                    "key=value config file (flags override it)");
  }

  void load_config() {
    ConfigApplier cfg(cmd, config_path);
    cfg.apply("bins", bins, ConfigApplier::to_int);
    cfg.apply("degree", degree, ConfigApplier::to_int);
    cfg.apply("omega", omega, ConfigApplier::to_double);
    cfg.apply("grid-lo", grid_lo, ConfigApplier::to_double);
    cfg.apply("grid-hi", grid_hi, ConfigApplier::to_double);
    cfg.apply("grid-step", grid_step, ConfigApplier::to_double);
    cfg.apply("samples", samples, ConfigApplier::to_int);
    cfg.apply("zero-policy", zero_policy, ConfigApplier::to_string);
    cfg.apply("out-dir", out_dir, ConfigApplier::to_string);
    cfg.apply("threads", threads, ConfigApplier::to_int);
    cfg.finish();
  }

  qdfit::PipelineConfig to_config(bool grid_threads) const {
    qdfit::PipelineConfig config;
    config.k_bins = bins;
    config.degree = degree;
    config.fixed_omega = omega;
    config.grid = {grid_lo, grid_hi, grid_step};
    config.sample_n = samples;
    config.zero_policy = qdfit::zero_policy_from_string(zero_policy);
    config.threads = grid_threads ? threads : 1;
    return config;
  }
};

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qdfit::IoError("cannot open for writing: " + path.string());
  out << text;
  if (!out) throw qdfit::IoError("write failed: " + path.string());
}

void write_case_outputs(const qdfit::FitReport& report, const fs::path& dir,
                        bool emit_histogram) {
  fs::create_directories(dir);
  write_text_file(dir / (report.case_id + ".report.json"),
                  qdfit::report_to_json(report));
  write_text_file(dir / (report.case_id + ".summary.csv"),
                  qdfit::report_summary_header() + "\n" +
                      qdfit::report_summary_row(report) + "\n");
  if (emit_histogram) {
    std::ostringstream csv;
    qdfit::write_histogram_csv(report.histogram, report.case_id, csv);
    write_text_file(dir / (report.case_id + ".histogram.csv"), csv.str());
  }
}

int run_fit(const std::string& input, const std::string& case_id,
            const PipelineFlags& flags, bool emit_histogram) {
  const qdfit::DisplacementField field =
      qdfit::read_displacement_file(input, case_id);
  const qdfit::FitReport report =
      qdfit::evaluate_case(field, flags.to_config(/*grid_threads=*/true));
  write_case_outputs(report, flags.out_dir, emit_histogram);
  std::cout << report.case_id << ": omega=" << report.omega
            << " mse=" << report.mse
            << " variance_index=" << report.variance_index << '\n';
  return 0;
}

int run_rank(const std::vector<std::string>& inputs,
             const PipelineFlags& flags, bool skip_errors,
             bool emit_histogram) {
  const qdfit::PipelineConfig config = flags.to_config(/*grid_threads=*/false);
  const int n = static_cast<int>(inputs.size());
  std::vector<std::optional<qdfit::FitReport>> slots(inputs.size());
  std::vector<std::string> failures(inputs.size());

  qdfit::parallel_for(n, flags.threads, [&](int i) {
    const auto& path = inputs[static_cast<std::size_t>(i)];
    try {
      const qdfit::DisplacementField field =
          qdfit::read_displacement_file(path);
      slots[static_cast<std::size_t>(i)] = qdfit::evaluate_case(field, config);
    } catch (const std::exception& e) {
      if (!skip_errors) throw;
      failures[static_cast<std::size_t>(i)] = e.what();
    }
  });

  std::vector<qdfit::FitReport> reports;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      reports.push_back(std::move(*slots[i]));
    } else if (!failures[i].empty()) {
      std::cerr << "skipped: " << failures[i] << '\n';
    }
  }
  if (reports.empty()) {
    throw qdfit::NumericError("all cases failed; nothing to rank");
  }

  const qdfit::RankedCases ranked = qdfit::rank_cases(std::move(reports));
  const fs::path dir(flags.out_dir);
  fs::create_directories(dir);
  for (const qdfit::FitReport& report : ranked.reports) {
    write_case_outputs(report, dir, emit_histogram);
  }
  std::ostringstream ranking;
  qdfit::write_ranking_csv(ranked, ranking);
  write_text_file(dir / "ranking.csv", ranking.str());

  for (std::size_t i = 0; i < ranked.reports.size(); ++i) {
    const qdfit::FitReport& r = ranked.reports[i];
    std::cout << (i + 1) << ". " << r.case_id
              << " variance_index=" << r.variance_index << '\n';
  }
  return 0;
}

int run_plot(const std::string& report_path, const std::string& hist_path,
             const std::string& out_path) {
  std::ifstream in(report_path, std::ios::binary);
  if (!in) throw qdfit::IoError("cannot open report: " + report_path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  const qdfit::FitReport report = qdfit::report_from_json(buffer.str());

  qdfit::HistogramDistribution hist = report.histogram;
  if (!hist_path.empty()) {
    std::ifstream hin(hist_path, std::ios::binary);
    if (!hin) throw qdfit::IoError("cannot open histogram: " + hist_path);
    std::string marker;
    hist = qdfit::read_histogram_csv(hin, &marker);
    if (!marker.empty() && marker != report.case_id) {
      throw UsageError("case id mismatch: report '" + report.case_id +
                       "' vs histogram '" + marker + "'");
    }
    hist.n_total = report.n_total;
    hist.zero_fraction = report.zero_fraction;
  }

  const fs::path svg_path(out_path);
  std::ostringstream svg;
  qdfit::write_plot_svg(report, hist, svg);
  write_text_file(svg_path, svg.str());

  fs::path csv_path(svg_path);
  csv_path.replace_extension(".plot.csv");
  std::ostringstream csv;
  qdfit::write_plot_csv(report, hist, csv);
  write_text_file(csv_path, csv.str());

  std::cout << "wrote " << svg_path.string() << " and " << csv_path.string()
            << '\n';
  return 0;
}

struct SynthFlags {
  std::size_t n = 1000;
  std::string law = "uniform:0,1";
  double zero_fraction = 0.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string case_id;
  std::string config_path;
  CLI::App* cmd = nullptr;

  void attach(CLI::App* sub) {
    cmd = sub;
    sub->add_option("--n", n, "Node count");
    sub->add_option("--law", law,
                    "uniform:lo,hi | gmix:m,s,w[;...] | lognormal:mu,sigma");
    sub->add_option("--zero-fraction", zero_fraction,
                    "Fraction of exact-zero nodes");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--out", out, "Output CSV path")->required();
    sub->add_option("--case-id", case_id,
                    "Case label (default: output filename stem)");
    sub->add_option("--config", config_path,
                    "key=value config file (flags override it)");
  }

  void load_config() {
    ConfigApplier cfg(cmd, config_path);
    cfg.apply("n", n, [](const std::string& s) {
      return static_cast<std::size_t>(ConfigApplier::to_u64(s));
    });
    cfg.apply("law", law, ConfigApplier::to_string);
    cfg.apply("zero-fraction", zero_fraction, ConfigApplier::to_double);
    cfg.apply("seed", seed, ConfigApplier::to_u64);
    cfg.apply("case-id", case_id, ConfigApplier::to_string);
    cfg.finish();
  }
};

int run_synth(const SynthFlags& flags) {
  qdfit::SynthSpec spec;
  spec.n_nodes = flags.n;
  spec.law = qdfit::parse_law(flags.law);
  spec.zero_fraction = flags.zero_fraction;
  spec.seed = flags.seed;

  const std::string id = flags.case_id.empty()
                             ? fs::path(flags.out).stem().string()
                             : flags.case_id;
  const qdfit::DisplacementField field = qdfit::generate_field(spec, id);

  std::ostringstream csv;
  qdfit::write_displacement_csv(field, csv);
  write_text_file(flags.out, csv.str());
  std::cout << "wrote " << field.n_total() << " nodes to " << flags.out
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformation-distribution scoring for FEA design cases"};
  app.require_subcommand(1);

  PipelineFlags fit_flags;
  std::string fit_input;
  std::string fit_case_id;
  bool fit_emit_histogram = false;
  CLI::App* fit = app.add_subcommand(
      "fit", "Fit one displacement export and write its report");
  fit->add_option("input", fit_input, "Displacement CSV")->required();
  fit->add_option("--case-id", fit_case_id,
                  "Case label (default: filename stem)");
  fit->add_flag("--emit-histogram", fit_emit_histogram,
                "Also write <case>.histogram.csv");
  fit_flags.attach(fit);

  PipelineFlags rank_flags;
  std::vector<std::string> rank_inputs;
  bool rank_skip_errors = false;
  bool rank_emit_histogram = false;
  CLI::App* rank = app.add_subcommand(
      "rank", "Evaluate several cases and rank them by variance");
  rank->add_option("inputs", rank_inputs, "Displacement CSVs")
      ->required()
      ->expected(-1);
  rank->add_flag("--skip-errors", rank_skip_errors,
                 "Skip failing cases instead of aborting");
  rank->add_flag("--emit-histogram", rank_emit_histogram,
                 "Also write per-case histogram CSVs");
  rank_flags.attach(rank);

  std::string plot_report;
  std::string plot_histogram;
  std::string plot_out;
  CLI::App* plot = app.add_subcommand(
      "plot", "Render a fitted case as SVG plus a plot.csv data file");
  plot->add_option("--report", plot_report, "Report JSON from fit/rank")
      ->required();
  plot->add_option("--histogram", plot_histogram,
                   "Histogram CSV (default: the one embedded in the report)");
  plot->add_option("--out", plot_out, "Output SVG path")->required();

  SynthFlags synth_flags;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic displacement export");
  synth_flags.attach(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (fit->parsed()) {
      fit_flags.load_config();
      return run_fit(fit_input, fit_case_id, fit_flags, fit_emit_histogram);
    }
    if (rank->parsed()) {
      rank_flags.load_config();
      return run_rank(rank_inputs, rank_flags, rank_skip_errors,
                      rank_emit_histogram);
    }
    if (plot->parsed()) {
      return run_plot(plot_report, plot_histogram, plot_out);
    }
    if (synth->parsed()) {
      synth_flags.load_config();
      return run_synth(synth_flags);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const qdfit::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const qdfit::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 1;
}
