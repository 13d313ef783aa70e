// Acceptance suite: runs every criterion at its stated tolerance and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qdfit/fitting.hpp"
#include "qdfit/ingest.hpp"
#include "qdfit/quasi.hpp"
#include "qdfit/report.hpp"
#include "qdfit/synth.hpp"
#include "test_support.hpp"
#include "text_parse.hpp"
#include "xml_check.hpp"

using namespace qdfit;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 8) failures.push_back(what);
    if (!ok && failures.size() == 8) failures.push_back("...");
  }
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// --- criterion 1: basis correctness ---------------------------------------

void criterion_basis(Checker& c) {
  const auto start = Clock::now();
  SplitMix64 rng(101);
  for (int w = 1; w <= 9; ++w) {
    const BasisConfig config{5, w / 10.0};
    for (int j = 0; j <= 1000; ++j) {
      const double t = j / 1000.0;
      const auto row = basis_row(config, t);
      double sum = 0.0;
      for (double v : row) {
        if (v < 0.0) c.expect(false, "negative basis value");
        sum += v;
      }
      if (std::abs(sum - 1.0) > 1e-12) {
        c.expect(false, "partition of unity off by " + fmt(sum - 1.0));
      }
      for (int i = 0; i < 11; ++i) {
        const bool left_dead = t >= config.omega && i < 5;
        const bool right_dead = t < config.omega && i > 5;
        if ((left_dead || right_dead) &&
            row[static_cast<std::size_t>(i)] != 0.0) {
          c.expect(false, "local support violated");
        }
      }
    }
  }
  for (int rep = 0; rep < 10; ++rep) {
    PiecewiseBezierCurve curve;
    curve.config = {5, rng.uniform(0.1, 0.9)};
    curve.controls.points.resize(11);
    for (auto& p : curve.controls.points) {
      p = {rng.uniform(0.0, 100.0), rng.uniform(-50.0, 50.0)};
    }
    for (int j = 0; j <= 100; ++j) {
      const double t = j / 100.0;
      const auto direct = curve_eval(curve, t);
      const auto reference = oracle::piecewise_point(curve, t);
      if (std::abs(direct.x - reference.x) > 1e-12 ||
          std::abs(direct.y - reference.y) > 1e-12) {
        c.expect(false, "de Casteljau disagreement at t=" + fmt(t));
      }
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 1.0, "runtime " + fmt(elapsed) + "s >= 1s");
}

// --- criterion 2: least-squares recovery ----------------------------------

void criterion_recovery(Checker& c) {
  const auto start = Clock::now();
  SplitMix64 rng(202);
  for (int rep = 0; rep < 100; ++rep) {
    PiecewiseBezierCurve curve;
    curve.config = {5, rng.uniform(0.1, 0.9)};
    curve.controls.points.resize(11);
    double x = 0.0;
    for (auto& p : curve.controls.points) {
      x += rng.uniform(1.0, 10.0);
      p = {x, rng.uniform(0.0, 10.0)};
    }

    const auto uniform_samples = curve_sample(curve, 349);
    const auto ts = chord_length_parameterize(uniform_samples);
    std::vector<Point2> points(350);
    double scale = 1.0;
    for (std::size_t k = 0; k < 350; ++k) {
      points[k] = curve_eval(curve, ts.ts[k]);
      scale = std::max({scale, std::abs(points[k].x), std::abs(points[k].y)});
    }

    const auto phi = assemble_design_matrix(ts, curve.config);
    const auto solved = solve_least_squares(phi, points);
    if (solved.rank_deficient) {
      c.expect(false, "unexpected rank deficiency");
      continue;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < 11; ++i) {
      worst = std::max(worst, std::abs(solved.controls.points[i].x -
                                       curve.controls.points[i].x));
      worst = std::max(worst, std::abs(solved.controls.points[i].y -
                                       curve.controls.points[i].y));
    }
    if (worst > 1e-8) {
      c.expect(false, "control recovery error " + fmt(worst));
    }

    for (int coord = 0; coord < 2; ++coord) {
      std::vector<double> residual(350);
      for (int k = 0; k < 350; ++k) {
        double fitted = 0.0;
        for (int i = 0; i < 11; ++i) {
          const auto& ctrl = solved.controls.points[static_cast<std::size_t>(i)];
          fitted += phi.at(k, i) * (coord == 0 ? ctrl.x : ctrl.y);
        }
        const auto& p = points[static_cast<std::size_t>(k)];
        residual[static_cast<std::size_t>(k)] =
            fitted - (coord == 0 ? p.x : p.y);
      }
      for (int i = 0; i < 11; ++i) {
        double dot = 0.0;
        for (int k = 0; k < 350; ++k) {
          dot += phi.at(k, i) * residual[static_cast<std::size_t>(k)];
        }
        if (std::abs(dot) > 1e-8 * scale) {
          c.expect(false, "residual orthogonality " + fmt(std::abs(dot)));
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 5.0, "runtime " + fmt(elapsed) + "s >= 5s");
}

// --- criterion 3: omega recovery ------------------------------------------

void criterion_omega(Checker& c) {
  const auto start = Clock::now();
  for (double target : {0.3, 0.4, 0.608, 0.7}) {
    const auto curve = kinked_density_curve(target, 350);
    const auto hist = generate_from_curve(curve, 350);
    const auto selection = select_omega(hist, OmegaGrid{0.05, 0.95, 0.002});
    if (std::abs(selection.omega - target) > 0.004) {
      c.expect(false, "omega " + fmt(target) + " recovered as " +
                          fmt(selection.omega));
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 60.0, "runtime " + fmt(elapsed) + "s >= 60s");
}

// --- criterion 4: quasi-distribution normalization ------------------------

void criterion_normalization(Checker& c) {
  SplitMix64 rng(404);
  for (int rep = 0; rep < 1000; ++rep) {
    HistogramDistribution hist;
    hist.k_bins = 350;
    hist.v_min = 0.0;
    hist.v_max = 1.0;
    hist.xi = 1.0 / 350;
    hist.n_total = 1000;
    hist.probs.resize(350);
    double sum = 0.0;
    for (double& p : hist.probs) {
      p = rng.uniform01();
      sum += p;
    }
    for (double& p : hist.probs) p /= sum;

    const auto fit = fit_curve(hist, rng.uniform(0.1, 0.9));
    const auto qd = normalize(fit.signal, hist.v_min, hist.xi);
    SampledSignal density;
    density.values = qd.density;
    const double integral = curve_area(density);
    if (std::abs(integral - 1.0) > 1e-9) {
      c.expect(false, "density integral " + fmt(integral));
    }

    if (rep % 100 == 0) {
      const auto base = normalize(fit.signal);
      for (double a : {1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3}) {
        SampledSignal scaled = fit.signal;
        for (double& v : scaled.values) v *= a;
        const auto qa = normalize(scaled);
        for (std::size_t k = 0; k < qa.density.size(); ++k) {
          if (std::abs(qa.density[k] - base.density[k]) >
              1e-12 * std::max(1.0, std::abs(base.density[k]))) {
            c.expect(false, "scale invariance broken at a=" + fmt(a));
          }
        }
      }
    }
  }
}

// --- criterion 5: variance oracle -----------------------------------------

void criterion_variance(Checker& c) {
  SplitMix64 rng(505);
  for (int rep = 0; rep < 1000; ++rep) {
    std::vector<double> density(350);
    for (double& p : density) {
      p = rng.uniform01();
      if (rng.uniform01() < 0.05) p = 0.0;
    }
    QuasiDistribution qd;
    qd.gamma = 1.0;
    qd.density = density;
    const double got = distribution_variance(qd);
    const double want = static_cast<double>(oracle::mass_variance(density));
    if (std::abs(got - want) > 1e-9 * std::max(1.0, std::abs(want))) {
      c.expect(false, "variance " + fmt(got) + " vs oracle " + fmt(want));
    }
  }

  QuasiDistribution uniform;
  uniform.gamma = 1.0;
  uniform.density.assign(350, 1.0 / 350);
  const double flat = distribution_variance(uniform);
  c.expect(std::abs(flat - 10208.25) <= 1e-9,
           "uniform variance " + fmt(flat) + " != 10208.25");
}

// --- criterion 6: end-to-end ranking --------------------------------------

void criterion_ranking(Checker& c) {
  const auto start = Clock::now();
  testsup::TempDir dir("acc_rank");

  std::string inputs;
  std::vector<std::string> expected;
  for (int j = 0; j < 16; ++j) {
    char name[16];
    std::snprintf(name, sizeof(name), "sep%02d", j);
    expected.push_back(name);
    const double half = 0.5 * (1.0 + 0.35 * j);
    std::ostringstream cmd;
    cmd << "synth --n 5000 --law 'gmix:" << (5.0 - half) << ",0.35,0.5;"
        << (5.0 + half) << ",0.35,0.5' --seed 4242 --out " << name << ".csv";
    const auto r = testsup::run_cli(cmd.str(), dir.path);
    if (r.exit_code != 0) {
      c.expect(false, std::string("synth failed for ") + name);
      return;
    }
    if (!inputs.empty()) inputs += ' ';
    inputs += std::string(name) + ".csv";
  }

  const auto one =
      testsup::run_cli("rank " + inputs + " --threads 1 --out-dir run1",
                       dir.path);
  const auto eight =
      testsup::run_cli("rank " + inputs + " --threads 8 --out-dir run8",
                       dir.path);
  c.expect(one.exit_code == 0, "rank --threads 1 failed");
  c.expect(eight.exit_code == 0, "rank --threads 8 failed");

  const std::string ranking1 = testsup::read_file(dir / "run1/ranking.csv");
  const std::string ranking8 = testsup::read_file(dir / "run8/ranking.csv");
  c.expect(!ranking1.empty() && ranking1 == ranking8,
           "ranking.csv differs between thread counts");

  int report_files = 0;
  for (const auto& name : expected) {
    report_files += testsup::fs::exists(dir / ("run1/" + name + ".report.json"));
  }
  c.expect(report_files == 16, "expected 16 per-case report files");

  std::istringstream in(ranking1);
  std::string line;
  std::getline(in, line);  // header
  for (int j = 0; j < 16; ++j) {
    if (!std::getline(in, line)) {
      c.expect(false, "ranking.csv has fewer than 16 rows");
      break;
    }
    const std::string id = line.substr(0, line.find(','));
    if (id != expected[static_cast<std::size_t>(j)]) {
      c.expect(false, "rank position " + std::to_string(j + 1) + " is " + id +
                          ", expected " + expected[static_cast<std::size_t>(j)]);
    }
  }

  const double elapsed = seconds_since(start);
  c.expect(elapsed < 30.0, "runtime " + fmt(elapsed) + "s >= 30s");
}

// --- criterion 7: pipeline throughput -------------------------------------

void criterion_throughput(Checker& c) {
  SynthSpec spec;
  spec.n_nodes = 5000;
  spec.law = GaussianMixtureLaw{{4.0, 7.5}, {0.8, 0.5}, {0.7, 0.3}};
  spec.zero_fraction = 0.05;
  spec.seed = 707;
  const auto field = generate_field(spec, "bench");
  const auto hist = build_histogram(field_magnitudes(field), 350);

  auto start = Clock::now();
  const auto selection = select_omega(hist, OmegaGrid{0.05, 0.95, 0.002});
  const double grid_time = seconds_since(start);
  c.expect(grid_time < 10.0,
           "full grid took " + fmt(grid_time) + "s >= 10s");
  c.expect(std::isfinite(selection.fit.mse), "grid fit not finite");

  start = Clock::now();
  const auto fixed = fit_curve(hist, 0.608);
  const double fixed_time = seconds_since(start);
  c.expect(fixed_time < 0.1,
           "fixed-omega fit took " + fmt(fixed_time) + "s >= 0.1s");
  c.expect(std::isfinite(fixed.mse), "fixed fit not finite");
}

// --- criterion 8: format contracts ----------------------------------------

void criterion_formats(Checker& c) {
  // CSV ingest round trip preserves values exactly
  SynthSpec spec;
  spec.n_nodes = 800;
  spec.law = LogNormalLaw{0.0, 1.2};
  spec.zero_fraction = 0.1;
  spec.seed = 808;
  const auto field = generate_field(spec, "rt");
  std::ostringstream csv;
  write_displacement_csv(field, csv);
  std::istringstream back(csv.str());
  const auto parsed = parse_displacement_csv(back, "rt");
  bool exact = parsed.n_total() == field.n_total();
  for (std::size_t i = 0; exact && i < field.nodes.size(); ++i) {
    exact = parsed.nodes[i].node_id == field.nodes[i].node_id &&
            parsed.nodes[i].ux == field.nodes[i].ux &&
            parsed.nodes[i].uy == field.nodes[i].uy &&
            parsed.nodes[i].uz == field.nodes[i].uz;
  }
  c.expect(exact, "ingest round trip not exact");

  testsup::TempDir dir("acc_fmt");

  // synth output byte-identical per seed
  const auto s1 = testsup::run_cli(
      "synth --n 5000 --law uniform:0,1 --seed 7 --out a.csv", dir.path);
  const auto s2 = testsup::run_cli(
      "synth --n 5000 --law uniform:0,1 --seed 7 --out b.csv", dir.path);
  c.expect(s1.exit_code == 0 && s2.exit_code == 0, "synth failed");
  const std::string file_a = testsup::read_file(dir / "a.csv");
  c.expect(!file_a.empty() && file_a == testsup::read_file(dir / "b.csv"),
           "synth output differs across runs with the same seed");

  // plot SVG well-formed with exactly two polylines, plot.csv matches
  const auto synth = testsup::run_cli(
      "synth --n 3000 --law 'gmix:4,0.6,0.6;8,0.5,0.4' --zero-fraction 0.05 "
      "--seed 17 --out p.csv",
      dir.path);
  const auto fit = testsup::run_cli("fit p.csv --emit-histogram", dir.path);
  const auto plot = testsup::run_cli(
      "plot --report p.report.json --histogram p.histogram.csv --out p.svg",
      dir.path);
  c.expect(synth.exit_code == 0 && fit.exit_code == 0 && plot.exit_code == 0,
           "synth/fit/plot pipeline failed");

  const std::string svg = testsup::read_file(dir / "p.svg");
  c.expect(testsup::xml_well_formed(svg), "plot SVG is not well-formed XML");
  c.expect(testsup::count_occurrences(svg, "<polyline") == 2,
           "plot SVG does not contain exactly 2 polylines");

  const auto report =
      report_from_json(testsup::read_file(dir / "p.report.json"));
  std::istringstream plot_csv(testsup::read_file(dir / "p.plot.csv"));
  std::string line;
  std::getline(plot_csv, line);
  c.expect(line == "k,prob,fit", "plot.csv header mismatch");
  std::size_t k = 0;
  bool matches = true;
  while (std::getline(plot_csv, line)) {
    const auto fields = testsup::split_csv(line);
    if (fields.size() != 3 || k >= report.signal.values.size() ||
        testsup::parse_double(fields[2]) != report.signal.values[k] ||
        testsup::parse_double(fields[1]) != report.histogram.probs[k]) {
      matches = false;
      break;
    }
    ++k;
  }
  c.expect(matches && k == report.signal.values.size(),
           "plot.csv does not match the report signal");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Checker&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "basis correctness", criterion_basis},
      {2, "least-squares recovery", criterion_recovery},
      {3, "segmentation point recovery", criterion_omega},
      {4, "quasi-distribution normalization", criterion_normalization},
      {5, "variance oracle", criterion_variance},
      {6, "end-to-end ranking", criterion_ranking},
      {7, "pipeline throughput", criterion_throughput},
      {8, "format contracts", criterion_formats},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    const auto start = Clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.expect(false, std::string("exception: ") + e.what());
    }
    const double elapsed = seconds_since(start);
    if (checker.failures.empty()) {
      std::printf("PASS criterion %d: %s (%.2fs)\n", criterion.id,
                  criterion.name, elapsed);
    } else {
      ++failed;
      std::printf("FAIL criterion %d: %s (%.2fs)\n", criterion.id,
                  criterion.name, elapsed);
      for (const auto& failure : checker.failures) {
        std::printf("      - %s\n", failure.c_str());
      }
    }
  }
  return failed;
}
