#include "qdfit/report.hpp"

#include <ostream>

#include <json.hpp>

#include "qdfit/errors.hpp"
#include "text_util.hpp"

namespace qdfit {

namespace {

using json = nlohmann::ordered_json;

json config_to_json(const PipelineConfig& config) {
  json j;
  j["k_bins"] = config.k_bins;
  j["degree"] = config.degree;
  j["omega_mode"] = config.fixed_omega ? "fixed" : "auto";
  if (config.fixed_omega) j["omega_fixed"] = *config.fixed_omega;
  j["grid"] = {{"lo", config.grid.lo},
               {"hi", config.grid.hi},
               {"step", config.grid.step}};
  j["samples"] = config.sample_n;
  j["zero_policy"] = to_string(config.zero_policy);
  j["threads"] = config.threads;
  return j;
}

json histogram_to_json(const HistogramDistribution& hist) {
  json j;
  j["k_bins"] = hist.k_bins;
  j["v_min"] = hist.v_min;
  j["v_max"] = hist.v_max;
  j["xi"] = hist.xi;
  j["n_total"] = hist.n_total;
  j["zero_fraction"] = hist.zero_fraction;
  j["zero_policy"] = to_string(hist.zero_policy);
  j["probs"] = hist.probs;
  return j;
}

}  // namespace

std::string report_to_json(const FitReport& report) {
  json j;
  j["case_id"] = report.case_id;
  j["n_total"] = report.n_total;
  j["zero_fraction"] = report.zero_fraction;
  j["omega"] = report.omega;
  j["mse"] = report.mse;
  j["gamma"] = report.gamma;
  j["negative_mass"] = report.negative_mass;
  j["mean_index"] = report.mean_index;
  j["variance_index"] = report.variance_index;
  j["mean_physical"] = report.mean_physical;
  j["variance_physical"] = report.variance_physical;
  j["value_variance"] = report.value_variance;
  j["warnings"] = report.warnings();
  j["config"] = config_to_json(report.config);
  j["histogram"] = histogram_to_json(report.histogram);

  json controls = json::array();
  for (const Point2& c : report.controls) {
    controls.push_back({c.x, c.y});
  }
  j["fit"] = {{"controls", std::move(controls)},
              {"signal", report.signal.values},
              {"source_n", report.signal.source_n}};
  j["quasi"] = {{"density", report.density}};
  return j.dump(2) + "\n";
}

FitReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    FitReport report;
    report.case_id = j.at("case_id").get<std::string>();
    report.n_total = j.at("n_total").get<std::size_t>();
    report.zero_fraction = j.at("zero_fraction").get<double>();
    report.omega = j.at("omega").get<double>();
    report.mse = j.at("mse").get<double>();
    report.gamma = j.at("gamma").get<double>();
    report.negative_mass = j.at("negative_mass").get<double>();
    report.mean_index = j.at("mean_index").get<double>();
    report.variance_index = j.at("variance_index").get<double>();
    report.mean_physical = j.at("mean_physical").get<double>();
    report.variance_physical = j.at("variance_physical").get<double>();
    report.value_variance = j.at("value_variance").get<double>();
    for (const auto& w : j.at("warnings")) {
      const std::string name = w.get<std::string>();
      if (name == "rank_deficient") report.rank_deficient = true;
      if (name == "non_monotone") report.non_monotone = true;
    }

    const json& cfg = j.at("config");
    report.config.k_bins = cfg.at("k_bins").get<int>();
    report.config.degree = cfg.at("degree").get<int>();
    if (cfg.at("omega_mode").get<std::string>() == "fixed") {
      report.config.fixed_omega = cfg.at("omega_fixed").get<double>();
    }
    report.config.grid.lo = cfg.at("grid").at("lo").get<double>();
    report.config.grid.hi = cfg.at("grid").at("hi").get<double>();
    report.config.grid.step = cfg.at("grid").at("step").get<double>();
    report.config.sample_n = cfg.at("samples").get<int>();
    report.config.zero_policy =
        zero_policy_from_string(cfg.at("zero_policy").get<std::string>());
    report.config.threads = cfg.at("threads").get<int>();

    const json& h = j.at("histogram");
    report.histogram.k_bins = h.at("k_bins").get<int>();
    report.histogram.v_min = h.at("v_min").get<double>();
    report.histogram.v_max = h.at("v_max").get<double>();
    report.histogram.xi = h.at("xi").get<double>();
    report.histogram.n_total = h.at("n_total").get<std::size_t>();
    report.histogram.zero_fraction = h.at("zero_fraction").get<double>();
    report.histogram.zero_policy =
        zero_policy_from_string(h.at("zero_policy").get<std::string>());
    report.histogram.probs = h.at("probs").get<std::vector<double>>();

    const json& fit = j.at("fit");
    for (const auto& c : fit.at("controls")) {
      report.controls.push_back({c.at(0).get<double>(), c.at(1).get<double>()});
    }
    report.signal.values = fit.at("signal").get<std::vector<double>>();
    report.signal.source_n = fit.at("source_n").get<int>();
    report.density = j.at("quasi").at("density").get<std::vector<double>>();
    return report;
  } catch (const json::exception& e) {
    throw ParseError(std::string("bad report JSON: ") + e.what());
  }
}

std::string report_summary_header() {
  return "case_id,n_total,zero_fraction,omega,mse,gamma,variance_index,"
         "variance_physical,warnings";
}

std::string report_summary_row(const FitReport& report) {
  std::string warnings;
  for (const std::string& w : report.warnings()) {
    if (!warnings.empty()) warnings += ';';
    warnings += w;
  }
  return report.case_id + ',' + std::to_string(report.n_total) + ',' +
         detail::format_double(report.zero_fraction) + ',' +
         detail::format_double(report.omega) + ',' +
         detail::format_double(report.mse) + ',' +
         detail::format_double(report.gamma) + ',' +
         detail::format_double(report.variance_index) + ',' +
         detail::format_double(report.variance_physical) + ',' + warnings;
}

void write_ranking_csv(const RankedCases& ranked, std::ostream& out) {
  out << report_summary_header() << '\n';
  for (const FitReport& report : ranked.reports) {
    out << report_summary_row(report) << '\n';
  }
}

}  // namespace qdfit
