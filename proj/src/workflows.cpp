#include "clusterlr/workflows.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "clusterlr/rng.hpp"

namespace clr {

using nlohmann::json;

namespace {

// Sub-seed streams carved out of the master seed.
constexpr std::uint64_t kStreamCounts = 0;     // +k for setting k
constexpr std::uint64_t kStreamTomography = 8;
constexpr std::uint64_t kStreamTomoBootstrap = 16;

GraphSpec graph_from_preset(const std::string& preset) {
  auto colon = preset.find(':');
  if (colon != std::string::npos) {
    std::string kind = preset.substr(0, colon);
    int n = 0;
    try {
      std::size_t used = 0;
      n = std::stoi(preset.substr(colon + 1), &used);
      if (used != preset.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("invalid graph preset '" + preset + "'");
    }
    if (kind == "tshape") return GraphSpec::t_shaped(n);
    if (kind == "linear") return GraphSpec::linear(n);
  }
  throw std::invalid_argument("unknown graph preset '" + preset +
                              "' (expected tshape:<n> or linear:<n>)");
}

}  // namespace

GraphSpec RunConfig::resolve_graph() const {
  if (graph) return *graph;
  return graph_from_preset(graph_preset);
}

NoiseSpec RunConfig::noise() const {
  NoiseSpec n;
  n.white_noise_p = white_noise_p;
  n.dephasing = extra_dephasing;
  return n;
}

RunConfig RunConfig::from_json(std::string_view text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("config is not valid JSON");
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "schema_version") {
        c.schema_version = value.get<int>();
        if (c.schema_version != 1)
          throw ParseError("unsupported config schema_version");
      } else if (key == "graph") {
        if (value.is_string()) {
          c.graph_preset = value.get<std::string>();
          try {
            graph_from_preset(c.graph_preset);
          } catch (const std::invalid_argument& e) {
            throw ParseError("config key 'graph': " + std::string(e.what()));
          }
        } else {
          std::vector<std::pair<int, int>> edges;
          for (const auto& e : value.at("edges"))
            edges.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
          c.graph = GraphSpec::create(value.at("n").get<int>(), std::move(edges));
        }
      } else if (key == "support") {
        c.support = value.get<std::vector<int>>();
      } else if (key == "max_product_size") {
        c.max_product_size = value.get<int>();
      } else if (key == "white_noise_p") {
        c.white_noise_p = value.get<double>();
      } else if (key == "extra_dephasing") {
        for (const auto& e : value) {
          DephasingEntry d;
          d.qubit = e.at("qubit").get<int>();
          d.basis = e.at("basis").get<std::string>();
          d.lambda = e.at("lambda").get<double>();
          c.extra_dephasing.push_back(std::move(d));
        }
      } else if (key == "events_per_setting") {
        c.events_per_setting = value.get<double>();
      } else if (key == "rate_constant") {
        c.rate_constant = value.get<double>();
      } else if (key == "duration_s") {
        c.duration_s = value.get<double>();
      } else if (key == "master_seed") {
        if (!value.is_number_unsigned())
          throw ParseError("config key 'master_seed': must be a nonnegative integer");
        c.master_seed = value.get<std::uint64_t>();
      } else if (key == "bootstrap_replicas") {
        c.bootstrap_replicas = value.get<int>();
      } else if (key == "tomo_bootstrap_replicas") {
        c.tomo_bootstrap_replicas = value.get<int>();
      } else if (key == "mle_tol") {
        c.mle_tol = value.get<double>();
      } else if (key == "mle_max_iter") {
        c.mle_max_iter = value.get<int>();
      } else if (key == "bootstrap_mle_tol") {
        c.bootstrap_mle_tol = value.get<double>();
      } else {
        throw ParseError("unknown config key '" + key + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError("config key '" + key + "': " + e.what());
    }
  }
  return c;
}

std::string RunConfig::to_json() const {
  json j;
  j["schema_version"] = schema_version;
  if (graph) {
    json edges = json::array();
    for (auto [u, v] : graph->edges) edges.push_back({u, v});
    j["graph"] = {{"n", graph->n}, {"edges", std::move(edges)}};
  } else {
    j["graph"] = graph_preset;
  }
  j["support"] = support;
  j["max_product_size"] = max_product_size;
  j["white_noise_p"] = white_noise_p;
  json dephasing = json::array();
  for (const DephasingEntry& e : extra_dephasing)
    dephasing.push_back({{"qubit", e.qubit}, {"basis", e.basis}, {"lambda", e.lambda}});
  j["extra_dephasing"] = std::move(dephasing);
  j["events_per_setting"] = events_per_setting;
  j["rate_constant"] = rate_constant;
  j["duration_s"] = duration_s;
  j["master_seed"] = master_seed;
  j["bootstrap_replicas"] = bootstrap_replicas;
  j["tomo_bootstrap_replicas"] = tomo_bootstrap_replicas;
  j["mle_tol"] = mle_tol;
  j["mle_max_iter"] = mle_max_iter;
  j["bootstrap_mle_tol"] = bootstrap_mle_tol;
  return j.dump(2) + "\n";
}

DeriveOutcome run_derive(const RunConfig& config) {
  GraphSpec g = config.resolve_graph();
  std::optional<ParadoxCertificate> cert =
      derive_ghz_paradox(g, config.support, config.max_product_size);
  if (!cert)
    throw std::runtime_error(
        "no GHZ-type paradox certificate exists on the requested support");
  DeriveOutcome out{*cert, {}};
  out.artifacts.push_back({"certificate.json", certificate_to_json(*cert, g)});
  out.artifacts.push_back({"transcript.txt", certificate_transcript(*cert, g)});
  return out;
}

AnalyzeOutcome run_analyze(const std::vector<CountsTable>& tables) {
  NonlocalityReport report = analyze_counts(tables, rho_psi());
  AnalyzeOutcome out{report, {}};
  out.artifacts.push_back({"report.json", report_to_json(report)});
  out.artifacts.push_back({"report.csv", report_to_csv(report)});
  out.artifacts.push_back({"fractions.csv", fraction_table_csv(tables)});
  return out;
}

namespace {

struct Anchor {
  const char* name;
  double value;
  double sigma;  // negative: no error bar published
};

struct SummaryRow {
  std::string name;
  double value;
  double sigma;  // negative: exact / not applicable
  Anchor anchor;
};

std::string fmt_fixed(double v, int prec) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(prec) << v;
  return out.str();
}

std::string summary_table(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "quantity                       simulated              reference\n";
  out << "-----------------------------------------------------------------\n";
  for (const SummaryRow& r : rows) {
    std::string sim = fmt_fixed(r.value, 4);
    if (r.sigma >= 0) sim += " +/- " + fmt_fixed(r.sigma, 4);
    std::string ref = fmt_fixed(r.anchor.value, 3);
    if (r.anchor.sigma >= 0) ref += " +/- " + fmt_fixed(r.anchor.sigma, 3);
    out << std::left << std::setw(31) << r.name << std::setw(23) << sim << ref
        << "\n";
  }
  return out.str();
}

}  // namespace

ReproduceOutcome run_reproduce(const RunConfig& config) {
  PipelineResult pipeline = generation_pipeline(config.noise());
  DensityMatrix target = rho_psi();
  const DensityMatrix& rho_sim = pipeline.final_state;

  // Model-exact stage fidelities (no counting statistics involved).
  double ghz_stage_fidelity = fidelity(pipeline.post_noise, densify(ghz4()));
  double exact_fidelity = fidelity(rho_sim, target);

  // Correlation measurements, one independent seed stream per setting.
  std::vector<CountsTable> tables;
  const auto& canon = canonical_settings();
  for (std::size_t k = 0; k < canon.size(); ++k) {
    std::vector<double> probs = outcome_probabilities(rho_sim, canon[k]);
    tables.push_back(sample_counts(
        canon[k], probs, config.events_per_setting,
        derive_seed(config.master_seed, kStreamCounts + k), config.duration_s,
        "simulated, white_noise_p=" + format_double(config.white_noise_p)));
  }
  NonlocalityReport report = analyze_counts(tables, target);

  // Tomography, MLE, and the tomography-derived statistics.
  TomographySet tomo = simulate_tomography(
      rho_sim, config.rate_constant, config.duration_s,
      derive_seed(config.master_seed, kStreamTomography),
      "simulated, white_noise_p=" + format_double(config.white_noise_p));
  MleResult mle = mle_reconstruct(tomo, config.mle_tol, config.mle_max_iter);

  Eigen::Vector2cd ketD = pol_ket(Pol::D), ketA = pol_ket(Pol::A);
  auto tomo_statistics = [&](const TomographySet& set) {
    MleResult rep = mle_reconstruct(set, config.bootstrap_mle_tol, config.mle_max_iter);
    auto [condD, probD] = conditional_state(rep.rho, 4, ketD);
    auto [condA, probA] = conditional_state(rep.rho, 4, ketA);
    (void)probD;
    (void)probA;
    double overlapD = 0.5 - ghz_witness(condD, +1);
    double overlapA = 0.5 - ghz_witness(condA, -1);
    return std::vector<double>{fidelity(rep.rho, target), overlapD, overlapA};
  };
  // Central values come from the full-tolerance MLE; the bootstrap
  // replicas may use a looser tolerance.
  auto [condD, probD] = conditional_state(mle.rho, 4, ketD);
  auto [condA, probA] = conditional_state(mle.rho, 4, ketA);
  (void)probD;
  (void)probA;
  double mle_fidelity = fidelity(mle.rho, target);
  double overlapD = 0.5 - ghz_witness(condD, +1);
  double overlapA = 0.5 - ghz_witness(condA, -1);
  std::vector<double> sigmas = bootstrap_sigmas(
      tomo, tomo_statistics, config.tomo_bootstrap_replicas,
      derive_seed(config.master_seed, kStreamTomoBootstrap));
  double fidelity_sigma = sigmas[0], overlapD_sigma = sigmas[1],
         overlapA_sigma = sigmas[2];

  // Reference values to reproduce, with published error bars.
  std::vector<SummaryRow> rows;
  rows.push_back({"fraction_XXXX", report.settings[0].fraction.value,
                  report.settings[0].fraction.sigma, {"", 0.81, 0.009}});
  rows.push_back({"fraction_XYYX", report.settings[1].fraction.value,
                  report.settings[1].fraction.sigma, {"", 0.822, 0.009}});
  rows.push_back({"fraction_YXYX", report.settings[2].fraction.value,
                  report.settings[2].fraction.sigma, {"", 0.798, 0.009}});
  rows.push_back({"fraction_YYXX", report.settings[3].fraction.value,
                  report.settings[3].fraction.sigma, {"", 0.812, 0.009}});
  rows.push_back({"expectation_XXXX", report.settings[0].expectation,
                  report.settings[0].expectation_sigma, {"", 0.626, 0.019}});
  rows.push_back({"expectation_XYYX", report.settings[1].expectation,
                  report.settings[1].expectation_sigma, {"", -0.646, 0.018}});
  rows.push_back({"expectation_YXYX", report.settings[2].expectation,
                  report.settings[2].expectation_sigma, {"", -0.595, 0.018}});
  rows.push_back({"expectation_YYXX", report.settings[3].expectation,
                  report.settings[3].expectation_sigma, {"", -0.628, 0.019}});
  rows.push_back({"S", report.S, report.S_sigma, {"", 2.50, 0.04}});
  rows.push_back({"lr_bound", report.lr_bound, report.lr_bound_sigma,
                  {"", 0.57, 0.016}});
  rows.push_back({"counting_significance", report.counting_significance, -1,
                  {"", 12.0, -1}});
  rows.push_back({"mermin_significance", report.mermin_significance, -1,
                  {"", 12.0, -1}});
  rows.push_back({"fidelity_mle_vs_target", mle_fidelity, fidelity_sigma,
                  {"", 0.68, 0.02}});
  rows.push_back({"cond_fidelity_D_vs_ghz3p", overlapD, overlapD_sigma,
                  {"", 0.74, 0.01}});
  rows.push_back({"cond_fidelity_A_vs_ghz3m", overlapA, overlapA_sigma,
                  {"", 0.72, 0.01}});
  rows.push_back({"witness_D", 0.5 - overlapD, overlapD_sigma, {"", -0.24, 0.01}});
  rows.push_back({"witness_A", 0.5 - overlapA, overlapA_sigma, {"", -0.22, 0.01}});
  rows.push_back({"ghz_stage_fidelity", ghz_stage_fidelity, -1, {"", 0.78, 0.02}});

  std::ostringstream summary;
  summary << "four-photon mixed-state run, white_noise_p="
          << format_double(config.white_noise_p)
          << ", events_per_setting=" << format_double(config.events_per_setting)
          << ", seed=" << config.master_seed << "\n";
  summary << "model-exact fidelity of the simulated state to the target: "
          << fmt_fixed(exact_fidelity, 6) << "\n\n";
  summary << summary_table(rows);

  json sj;
  for (const SummaryRow& r : rows) {
    json e;
    e["value"] = r.value;
    if (r.sigma >= 0) e["sigma"] = r.sigma;
    e["reference"] = r.anchor.value;
    if (r.anchor.sigma >= 0) e["reference_sigma"] = r.anchor.sigma;
    sj[r.name] = std::move(e);
  }
  sj["exact_fidelity_simulated_vs_target"] = exact_fidelity;

  ReproduceOutcome out;
  out.report = report;
  out.mle_fidelity = mle_fidelity;
  out.summary = summary.str();
  out.artifacts.push_back({"config.json", config.to_json()});
  out.artifacts.push_back({"rho_simulated.json", density_matrix_to_json(rho_sim)});
  out.artifacts.push_back({"counts.csv", counts_to_csv(tables)});
  out.artifacts.push_back({"tomography_counts.csv", tomography_to_csv(tomo)});
  out.artifacts.push_back({"rho_mle.json", mle_to_json(mle)});
  out.artifacts.push_back({"report.json", report_to_json(report)});
  out.artifacts.push_back({"report.csv", report_to_csv(report)});
  out.artifacts.push_back({"fractions.csv", fraction_table_csv(tables)});
  out.artifacts.push_back({"summary.json", sj.dump(2) + "\n"});
  out.artifacts.push_back({"summary.txt", out.summary});
  return out;
}

}  // namespace clr
