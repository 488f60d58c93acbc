#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "clusterlr.h"

namespace {

std::string take(char* s) {
  REQUIRE(s != nullptr);
  std::string out(s);
  clr_string_free(s);
  return out;
}

struct States {
  clr_state* psi = nullptr;
  States() { REQUIRE(clr_state_named("rho_psi", &psi) == CLR_OK); }
  ~States() { clr_state_free(psi); }
};

}  // namespace

TEST_CASE("version and status names") {
  CHECK(clr_version() != nullptr);
  CHECK(std::string(clr_status_name(CLR_OK)) == "CLR_OK");
  CHECK(std::string(clr_status_name(CLR_ERR_PARSE)) == "CLR_ERR_PARSE");
  CHECK(std::string(clr_status_name(CLR_ERR_NO_PARADOX)) == "CLR_ERR_NO_PARADOX");
  CHECK(clr_last_error() != nullptr);
}

TEST_CASE("seed derivation matches across calls") {
  CHECK(clr_derive_seed(20210906, 8) == clr_derive_seed(20210906, 8));
  CHECK(clr_derive_seed(20210906, 8) != clr_derive_seed(20210906, 9));
  CHECK(clr_derive_seed(1, 0) != clr_derive_seed(2, 0));
}

TEST_CASE("graph construction, formatting, and errors") {
  clr_graph* g = nullptr;
  REQUIRE(clr_graph_tshape(5, &g) == CLR_OK);
  char* formatted = nullptr;
  REQUIRE(clr_graph_format(g, &formatted) == CLR_OK);
  auto text = take(formatted);
  CHECK(text.find("n=5") != std::string::npos);
  clr_graph* back = nullptr;
  REQUIRE(clr_graph_parse(text.c_str(), &back) == CLR_OK);
  char* second = nullptr;
  REQUIRE(clr_graph_format(back, &second) == CLR_OK);
  CHECK(take(second) == text);
  clr_graph_free(back);
  clr_graph_free(g);

  clr_graph* bad = nullptr;
  CHECK(clr_graph_tshape(3, &bad) == CLR_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::strlen(clr_last_error()) > 0);
  CHECK(clr_graph_parse("gibberish", &bad) == CLR_ERR_PARSE);
  CHECK(clr_graph_parse(nullptr, &bad) == CLR_ERR_INVALID_ARGUMENT);

  int u[] = {1, 2};
  int v[] = {2, 3};
  clr_graph* custom = nullptr;
  REQUIRE(clr_graph_create(3, u, v, 2, &custom) == CLR_OK);
  clr_graph_free(custom);
  int self[] = {1};
  CHECK(clr_graph_create(3, self, self, 1, &custom) == CLR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("certificate derivation over the C boundary") {
  clr_graph* g = nullptr;
  REQUIRE(clr_graph_tshape(5, &g) == CLR_OK);
  int support[] = {1, 2, 3, 4};
  clr_cert* cert = nullptr;
  REQUIRE(clr_derive_paradox(g, support, 4, 3, &cert) == CLR_OK);

  int ok = 0;
  REQUIRE(clr_cert_verify(cert, g, &ok) == CLR_OK);
  CHECK(ok == 1);
  ok = 0;
  REQUIRE(clr_cert_lr_contradiction(cert, &ok) == CLR_OK);
  CHECK(ok == 1);

  char* json = nullptr;
  REQUIRE(clr_cert_to_json(cert, g, &json) == CLR_OK);
  auto text = take(json);
  clr_cert* parsed = nullptr;
  REQUIRE(clr_cert_parse_json(text.c_str(), &parsed) == CLR_OK);
  char* transcript = nullptr;
  REQUIRE(clr_cert_transcript(parsed, g, &transcript) == CLR_OK);
  CHECK(take(transcript).find("sign product = -1") != std::string::npos);
  clr_cert_free(parsed);
  clr_cert_free(cert);

  // Interior window of a line graph: structurally fine, no certificate.
  clr_graph* line = nullptr;
  REQUIRE(clr_graph_linear(6, &line) == CLR_OK);
  int interior[] = {2, 3, 4, 5};
  clr_cert* none = nullptr;
  CHECK(clr_derive_paradox(line, interior, 4, 3, &none) == CLR_ERR_NO_PARADOX);
  CHECK(none == nullptr);
  CHECK(std::strlen(clr_last_error()) > 0);
  clr_graph_free(line);
  clr_graph_free(g);
}

TEST_CASE("state construction and closed-form checks") {
  States s;
  int n = 0;
  REQUIRE(clr_state_num_qubits(s.psi, &n) == CLR_OK);
  CHECK(n == 4);

  double e = 0;
  REQUIRE(clr_state_expectation(s.psi, "XXXX", &e) == CLR_OK);
  CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(clr_state_expectation(s.psi, "XYYX", &e) == CLR_OK);
  CHECK(e == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(clr_state_expectation(s.psi, "+iXXXX", &e) == CLR_ERR_INVALID_ARGUMENT);
  CHECK(clr_state_expectation(s.psi, "XX", &e) == CLR_ERR_INVALID_ARGUMENT);
  CHECK(clr_state_expectation(s.psi, "QQQQ", &e) == CLR_ERR_PARSE);

  clr_state* noisy = nullptr;
  REQUIRE(clr_state_add_white_noise(s.psi, 0.625, &noisy) == CLR_OK);
  double f = 0;
  REQUIRE(clr_state_fidelity(noisy, s.psi, &f) == CLR_OK);
  CHECK(f == doctest::Approx(0.671875).epsilon(1e-10));

  double eig[16];
  REQUIRE(clr_state_eigenvalues(noisy, eig, 16) == CLR_OK);
  CHECK(eig[0] == doctest::Approx(0.3359375).epsilon(1e-12));
  CHECK(clr_state_eigenvalues(noisy, eig, 4) == CLR_ERR_INVALID_ARGUMENT);
  clr_state_free(noisy);

  clr_state* cond = nullptr;
  double prob = 0;
  REQUIRE(clr_state_conditional(s.psi, 4, 'D', &cond, &prob) == CLR_OK);
  CHECK(prob == doctest::Approx(0.5).epsilon(1e-12));
  clr_state* ghz = nullptr;
  REQUIRE(clr_state_named("ghz3+", &ghz) == CLR_OK);
  REQUIRE(clr_state_fidelity(cond, ghz, &f) == CLR_OK);
  CHECK(f >= 1.0 - 1e-10);
  double w = 0;
  REQUIRE(clr_ghz_witness(cond, 1, &w) == CLR_OK);
  CHECK(w == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(clr_ghz_witness(s.psi, 1, &w) == CLR_ERR_INVALID_ARGUMENT);
  clr_state_free(ghz);
  clr_state_free(cond);

  CHECK(clr_state_named("nonsense", &noisy) == CLR_ERR_INVALID_ARGUMENT);
  CHECK(clr_state_named(nullptr, &noisy) == CLR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("pipeline stages and local equivalence") {
  clr_state* final_state = nullptr;
  REQUIRE(clr_state_pipeline(1.0, "final", &final_state) == CLR_OK);
  States s;
  double f = 0;
  REQUIRE(clr_state_fidelity(final_state, s.psi, &f) == CLR_OK);
  CHECK(f >= 1.0 - 1e-10);
  clr_state_free(final_state);

  clr_state* ghz4 = nullptr;
  REQUIRE(clr_state_named("ghz4", &ghz4) == CLR_OK);
  clr_state* post_noise = nullptr;
  REQUIRE(clr_state_pipeline(0.625, "noise", &post_noise) == CLR_OK);
  REQUIRE(clr_state_fidelity(post_noise, ghz4, &f) == CLR_OK);
  CHECK(f == doctest::Approx(0.625 + 0.375 / 16).epsilon(1e-10));
  clr_state_free(post_noise);
  clr_state_free(ghz4);

  CHECK(clr_state_pipeline(0.5, "cooldown", &post_noise) == CLR_ERR_INVALID_ARGUMENT);
  CHECK(clr_state_pipeline(1.5, "final", &post_noise) == CLR_ERR_INVALID_ARGUMENT);

  // Partial trace of the five-qubit T cluster matches the phi mixture.
  clr_graph* g = nullptr;
  REQUIRE(clr_graph_tshape(5, &g) == CLR_OK);
  clr_state* cluster = nullptr;
  REQUIRE(clr_state_cluster(g, &cluster) == CLR_OK);
  int keep[] = {1, 2, 3, 4};
  clr_state* reduced = nullptr;
  REQUIRE(clr_state_partial_trace(cluster, keep, 4, &reduced) == CLR_OK);
  clr_state* phi = nullptr;
  REQUIRE(clr_state_named("rho_phi", &phi) == CLR_OK);
  REQUIRE(clr_state_fidelity(reduced, phi, &f) == CLR_OK);
  CHECK(f >= 1.0 - 1e-9);
  clr_state_free(phi);
  clr_state_free(reduced);
  clr_state_free(cluster);
  clr_graph_free(g);
}

TEST_CASE("state JSON and dephasing") {
  States s;
  char* json = nullptr;
  REQUIRE(clr_state_to_json(s.psi, &json) == CLR_OK);
  auto text = take(json);
  clr_state* back = nullptr;
  REQUIRE(clr_state_from_json(text.c_str(), &back) == CLR_OK);
  double f = 0;
  REQUIRE(clr_state_fidelity(back, s.psi, &f) == CLR_OK);
  CHECK(f >= 1.0 - 1e-12);
  clr_state_free(back);
  CHECK(clr_state_from_json("{]", &back) == CLR_ERR_PARSE);

  clr_state* dephased = nullptr;
  REQUIRE(clr_state_dephase(s.psi, 4, "DA", 1.0, &dephased) == CLR_OK);
  REQUIRE(clr_state_fidelity(dephased, s.psi, &f) == CLR_OK);
  CHECK(f >= 1.0 - 1e-12);  // rho_psi is already D/A-diagonal on qubit 4
  clr_state_free(dephased);
  CHECK(clr_state_dephase(s.psi, 4, "QQ", 1.0, &dephased) == CLR_ERR_INVALID_ARGUMENT);
  CHECK(clr_state_dephase(s.psi, 9, "DA", 1.0, &dephased) == CLR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("counts, analysis, and report values") {
  States s;
  clr_state* noisy = nullptr;
  REQUIRE(clr_state_add_white_noise(s.psi, 0.625, &noisy) == CLR_OK);

  const char* settings[] = {"XXXX", "XYYX", "YXYX", "YYXX"};
  std::vector<clr_counts*> tables;
  for (int k = 0; k < 4; ++k) {
    clr_counts* t = nullptr;
    REQUIRE(clr_counts_simulate(noisy, settings[k], 1900, clr_derive_seed(20210906, k),
                                60, &t) == CLR_OK);
    tables.push_back(t);
  }
  char* setting_name = nullptr;
  REQUIRE(clr_counts_setting(tables[0], &setting_name) == CLR_OK);
  CHECK(take(setting_name) == "XXXX");

  double value = 0, sigma = 0;
  int64_t n_events = 0;
  REQUIRE(clr_counts_fraction(tables[0], 1, &value, &sigma, &n_events) == CLR_OK);
  CHECK(value == doctest::Approx(0.8125).epsilon(0.05));
  CHECK(n_events > 1600);
  REQUIRE(clr_counts_expectation(tables[1], &value, &sigma) == CLR_OK);
  CHECK(value == doctest::Approx(-0.625).epsilon(0.1));

  char* csv = nullptr;
  REQUIRE(clr_counts_array_to_csv(tables.data(), tables.size(), &csv) == CLR_OK);
  auto text = take(csv);
  clr_counts** parsed = nullptr;
  size_t parsed_count = 0;
  REQUIRE(clr_counts_parse_csv(text.c_str(), &parsed, &parsed_count) == CLR_OK);
  CHECK(parsed_count == 4);

  clr_report* report = nullptr;
  REQUIRE(clr_analyze(parsed, parsed_count, &report) == CLR_OK);
  double S = 0, bound = 0, z = 0;
  REQUIRE(clr_report_value(report, "S", &S) == CLR_OK);
  REQUIRE(clr_report_value(report, "lr_bound", &bound) == CLR_OK);
  REQUIRE(clr_report_value(report, "counting_significance", &z) == CLR_OK);
  CHECK(S == doctest::Approx(2.5).epsilon(0.05));
  CHECK(bound == doctest::Approx(0.5625).epsilon(0.08));
  CHECK(z > 10.0);
  double fr = 0;
  REQUIRE(clr_report_value(report, "fraction_XXXX", &fr) == CLR_OK);
  CHECK(fr == doctest::Approx(0.8125).epsilon(0.05));
  CHECK(clr_report_value(report, "entropy", &fr) == CLR_ERR_INVALID_ARGUMENT);

  char* report_json = nullptr;
  REQUIRE(clr_report_to_json(report, &report_json) == CLR_OK);
  CHECK(take(report_json).find("mermin") != std::string::npos);
  char* report_csv = nullptr;
  REQUIRE(clr_report_to_csv(report, &report_csv) == CLR_OK);
  CHECK(take(report_csv).find("statistic,value,sigma") == 0);
  clr_report_free(report);

  // Analysis needs all four settings exactly once.
  clr_report* partial = nullptr;
  CHECK(clr_analyze(parsed, 3, &partial) == CLR_ERR_INVALID_ARGUMENT);
  clr_counts_array_free(parsed, parsed_count);

  CHECK(clr_counts_parse_csv("not,a,counts,csv", &parsed, &parsed_count) ==
        CLR_ERR_PARSE);
  CHECK(std::strlen(clr_last_error()) > 0);
  clr_counts* bad = nullptr;
  CHECK(clr_counts_simulate(noisy, "XQXX", 1900, 1, 60, &bad) == CLR_ERR_PARSE);
  CHECK(clr_counts_simulate(noisy, "XXXX", -5, 1, 60, &bad) == CLR_ERR_INVALID_ARGUMENT);

  for (auto* t : tables) clr_counts_free(t);
  clr_state_free(noisy);
}

TEST_CASE("tomography and MLE over the C boundary") {
  States s;
  clr_tomo* tomo = nullptr;
  REQUIRE(clr_tomo_simulate(s.psi, 256.0 / 23, 60, clr_derive_seed(20210906, 8),
                            &tomo) == CLR_OK);
  char* csv = nullptr;
  REQUIRE(clr_tomo_to_csv(tomo, &csv) == CLR_OK);
  auto text = take(csv);
  clr_tomo* parsed = nullptr;
  REQUIRE(clr_tomo_parse_csv(text.c_str(), &parsed) == CLR_OK);

  clr_mle* mle = nullptr;
  REQUIRE(clr_mle_reconstruct(parsed, 1e-8, 4000, &mle) == CLR_OK);
  double ll = 0;
  int iterations = 0, converged = 0;
  REQUIRE(clr_mle_info(mle, &ll, &iterations, &converged) == CLR_OK);
  CHECK(converged == 1);
  CHECK(iterations >= 1);
  clr_state* estimate = nullptr;
  REQUIRE(clr_mle_state(mle, &estimate) == CLR_OK);
  double f = 0;
  REQUIRE(clr_state_fidelity(estimate, s.psi, &f) == CLR_OK);
  CHECK(f > 0.5);  // small-sample bias keeps this away from 1
  char* mle_json = nullptr;
  REQUIRE(clr_mle_to_json(mle, &mle_json) == CLR_OK);
  CHECK(take(mle_json).find("log_likelihood") != std::string::npos);

  clr_state_free(estimate);
  clr_mle_free(mle);
  clr_tomo_free(parsed);
  clr_tomo_free(tomo);

  CHECK(clr_tomo_parse_csv("projector,count,duration_s\n", &parsed) == CLR_ERR_PARSE);
  CHECK(clr_mle_reconstruct(nullptr, 1e-8, 100, &mle) == CLR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("bundles expose the end-to-end artifacts") {
  const char* config =
      R"({"events_per_setting": 400, "rate_constant": 2.0,
          "bootstrap_replicas": 100, "tomo_bootstrap_replicas": 100,
          "mle_tol": 1e-7, "bootstrap_mle_tol": 1e-5})";
  clr_bundle* bundle = nullptr;
  REQUIRE(clr_reproduce(config, &bundle) == CLR_OK);
  size_t count = 0;
  REQUIRE(clr_bundle_count(bundle, &count) == CLR_OK);
  CHECK(count == 10);
  bool saw_report = false;
  for (size_t i = 0; i < count; ++i) {
    REQUIRE(clr_bundle_name(bundle, i) != nullptr);
    REQUIRE(clr_bundle_content(bundle, i) != nullptr);
    if (std::string(clr_bundle_name(bundle, i)) == "report.json") saw_report = true;
  }
  CHECK(saw_report);
  CHECK(std::string(clr_bundle_summary(bundle)).find("four-photon") !=
        std::string::npos);
  CHECK(clr_bundle_name(bundle, count) == nullptr);
  clr_bundle_free(bundle);

  clr_bundle* rejected = nullptr;
  CHECK(clr_reproduce(R"({"bogus": 1})", &rejected) == CLR_ERR_PARSE);
  CHECK(rejected == nullptr);
  CHECK(clr_analyze_bundle(nullptr, &rejected) == CLR_ERR_INVALID_ARGUMENT);

  clr_bundle* derive = nullptr;
  REQUIRE(clr_derive_bundle("{}", &derive) == CLR_OK);
  REQUIRE(clr_bundle_count(derive, &count) == CLR_OK);
  CHECK(count == 2);
  clr_bundle_free(derive);

  States s;
  clr_state* noisy = nullptr;
  REQUIRE(clr_state_add_white_noise(s.psi, 0.625, &noisy) == CLR_OK);
  std::vector<clr_counts*> tables;
  const char* settings[] = {"XXXX", "XYYX", "YXYX", "YYXX"};
  for (int k = 0; k < 4; ++k) {
    clr_counts* t = nullptr;
    REQUIRE(clr_counts_simulate(noisy, settings[k], 900, 50 + k, 60, &t) == CLR_OK);
    tables.push_back(t);
  }
  char* csv = nullptr;
  REQUIRE(clr_counts_array_to_csv(tables.data(), tables.size(), &csv) == CLR_OK);
  auto text = take(csv);
  clr_bundle* analysis = nullptr;
  REQUIRE(clr_analyze_bundle(text.c_str(), &analysis) == CLR_OK);
  REQUIRE(clr_bundle_count(analysis, &count) == CLR_OK);
  CHECK(count == 3);
  clr_bundle_free(analysis);
  for (auto* t : tables) clr_counts_free(t);
  clr_state_free(noisy);
}
