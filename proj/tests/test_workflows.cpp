#include <doctest.h>

#include "clusterlr/io.hpp"
#include "clusterlr/workflows.hpp"

using clr::RunConfig;

namespace {

const clr::Artifact& find_artifact(const std::vector<clr::Artifact>& artifacts,
                                   const std::string& name) {
  for (const auto& a : artifacts)
    if (a.name == name) return a;
  FAIL("missing artifact " << name);
  static clr::Artifact none;
  return none;
}

// Small statistics so the bootstrap stages stay fast.
RunConfig fast_config() {
  RunConfig c;
  c.events_per_setting = 500;
  c.rate_constant = 2.0;
  c.bootstrap_replicas = 100;
  c.tomo_bootstrap_replicas = 100;
  c.mle_tol = 1e-8;
  c.bootstrap_mle_tol = 1e-6;
  return c;
}

}  // namespace

TEST_CASE("config defaults") {
  RunConfig c;
  CHECK(c.graph_preset == "tshape:5");
  CHECK(c.support == std::vector<int>{1, 2, 3, 4});
  CHECK(c.white_noise_p == 0.625);
  CHECK(c.events_per_setting == 1900.0);
  CHECK(c.rate_constant == doctest::Approx(256.0 / 23).epsilon(1e-15));
  CHECK(c.master_seed == 20210906);
  auto g = c.resolve_graph();
  CHECK(g.n == 5);
  CHECK(g.edges == clr::GraphSpec::t_shaped(5).edges);
}

TEST_CASE("config json round-trips through its own serialization") {
  RunConfig c;
  c.white_noise_p = 0.8;
  c.master_seed = 99;
  c.extra_dephasing.push_back({2, "RL", 0.25});
  c.graph = clr::GraphSpec::linear(6);
  c.support = {1, 2, 3, 4};
  auto text = c.to_json();
  auto back = RunConfig::from_json(text);
  CHECK(back.to_json() == text);
  CHECK(back.white_noise_p == 0.8);
  CHECK(back.master_seed == 99);
  REQUIRE(back.graph.has_value());
  CHECK(back.graph->edges == c.graph->edges);
  REQUIRE(back.extra_dephasing.size() == 1);
  CHECK(back.extra_dephasing[0].basis == "RL");
}

TEST_CASE("config parsing accepts presets and rejects unknown keys") {
  auto c = RunConfig::from_json(R"({"graph": "linear:7", "white_noise_p": 1.0})");
  CHECK(c.resolve_graph().n == 7);
  CHECK(c.white_noise_p == 1.0);
  CHECK(c.events_per_setting == 1900.0);

  auto custom = RunConfig::from_json(
      R"({"graph": {"n": 4, "edges": [[1,2],[2,3],[2,4]]}})");
  CHECK(custom.resolve_graph().edges == clr::GraphSpec::t_shaped(4).edges);

  CHECK_THROWS_AS(RunConfig::from_json(R"({"bogus_key": 1})"), clr::ParseError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"schema_version": 2})"), clr::ParseError);
  CHECK_THROWS_AS(RunConfig::from_json("not json"), clr::ParseError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"graph": "ring:5"})"), clr::ParseError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"white_noise_p": "high"})"), clr::ParseError);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"master_seed": -4})"), clr::ParseError);
}

TEST_CASE("derive run emits a verified certificate") {
  RunConfig c;
  auto out = clr::run_derive(c);
  CHECK(clr::verify_certificate(out.certificate, c.resolve_graph()));
  const auto& cert_json = find_artifact(out.artifacts, "certificate.json");
  auto back = clr::certificate_from_json(cert_json.content);
  CHECK(back.strings.size() == out.certificate.strings.size());
  const auto& transcript = find_artifact(out.artifacts, "transcript.txt");
  CHECK(transcript.content.find("sign product = -1") != std::string::npos);

  c.graph_preset = "linear:6";
  c.support = {2, 3, 4, 5};
  CHECK_THROWS_AS(clr::run_derive(c), std::runtime_error);
}

TEST_CASE("analyze run reports on externally supplied counts") {
  auto noisy = clr::add_white_noise(clr::rho_psi(), 0.625);
  std::vector<clr::CountsTable> tables;
  std::uint64_t seed = 500;
  for (const auto& s : clr::canonical_settings())
    tables.push_back(
        clr::sample_counts(s, clr::outcome_probabilities(noisy, s), 1900, seed++));
  auto out = clr::run_analyze(tables);
  CHECK(out.report.S == doctest::Approx(2.5).epsilon(0.05));
  find_artifact(out.artifacts, "report.json");
  find_artifact(out.artifacts, "fractions.csv");
  const auto& csv = find_artifact(out.artifacts, "report.csv");
  CHECK(csv.content == clr::report_to_csv(out.report));
}

TEST_CASE("reproduce runs are deterministic end to end") {
  auto config = fast_config();
  auto first = clr::run_reproduce(config);
  auto second = clr::run_reproduce(config);
  REQUIRE(first.artifacts.size() == second.artifacts.size());
  for (std::size_t i = 0; i < first.artifacts.size(); ++i) {
    CHECK(first.artifacts[i].name == second.artifacts[i].name);
    bool same = first.artifacts[i].content == second.artifacts[i].content;
    CHECK(same);
    if (!same) MESSAGE("artifact differs: " << first.artifacts[i].name);
  }
  CHECK(first.summary == second.summary);

  // A different seed must actually change the data.
  auto other = config;
  other.master_seed = 7;
  auto third = clr::run_reproduce(other);
  CHECK(third.artifacts[2].content != first.artifacts[2].content);
}

TEST_CASE("reproduce emits the full artifact set") {
  auto out = clr::run_reproduce(fast_config());
  const char* expected[] = {"config.json",   "rho_simulated.json", "counts.csv",
                            "tomography_counts.csv", "rho_mle.json", "report.json",
                            "report.csv",    "fractions.csv",      "summary.json",
                            "summary.txt"};
  REQUIRE(out.artifacts.size() == 10);
  for (const char* name : expected) find_artifact(out.artifacts, name);
  CHECK(out.summary == find_artifact(out.artifacts, "summary.txt").content);
  CHECK(out.mle_fidelity > 0.3);
  CHECK(out.report.S > 2.0);

  // Artifacts parse back with the expected content types.
  auto rho = clr::density_matrix_from_json(
      find_artifact(out.artifacts, "rho_simulated.json").content);
  CHECK(rho.num_qubits() == 4);
  auto tables =
      clr::counts_from_csv(find_artifact(out.artifacts, "counts.csv").content);
  CHECK(tables.size() == 4);
  auto tomo = clr::tomography_from_csv(
      find_artifact(out.artifacts, "tomography_counts.csv").content);
  CHECK(tomo.num_qubits == 4);
  auto cfg = RunConfig::from_json(find_artifact(out.artifacts, "config.json").content);
  CHECK(cfg.events_per_setting == 500);
}
