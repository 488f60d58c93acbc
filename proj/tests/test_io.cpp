#include <doctest.h>

#include <random>

#include "clusterlr/io.hpp"
#include "clusterlr/nonlocality.hpp"
#include "clusterlr/paradox.hpp"

using clr::CountsTable;
using clr::DensityMatrix;
using clr::Setting;
using clr::TomographySet;

namespace {

DensityMatrix random_density(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> gauss;
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXcd a(d, d);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) a(i, j) = {gauss(rng), gauss(rng)};
  Eigen::MatrixXcd m = a * a.adjoint();
  return DensityMatrix(n, m / m.trace());
}

std::vector<CountsTable> sample_tables(double p, std::uint64_t seed, double events) {
  auto noisy = clr::add_white_noise(clr::rho_psi(), p);
  std::vector<CountsTable> tables;
  for (const auto& s : clr::canonical_settings())
    tables.push_back(
        clr::sample_counts(s, clr::outcome_probabilities(noisy, s), events, seed++));
  return tables;
}

}  // namespace

TEST_CASE("density matrix JSON round-trips bitwise") {
  std::mt19937_64 rng(61);
  for (int rep = 0; rep < 50; ++rep) {
    auto rho = random_density(rng, 2);
    auto text = clr::density_matrix_to_json(rho);
    auto back = clr::density_matrix_from_json(text);
    CHECK(back.matrix() == rho.matrix());
    CHECK(clr::density_matrix_to_json(back) == text);
  }
}

TEST_CASE("density matrix JSON parsing errors") {
  CHECK_THROWS_AS(clr::density_matrix_from_json("not json"), clr::ParseError);
  CHECK_THROWS_AS(clr::density_matrix_from_json(R"({"entries": []})"), clr::ParseError);
  CHECK_THROWS_AS(clr::density_matrix_from_json(R"({"n": 1, "entries": [[1,0]]})"),
                  clr::ParseError);
  CHECK_THROWS_AS(clr::density_matrix_from_json(R"({"n": 99, "entries": []})"),
                  clr::ParseError);
  // Structurally valid JSON that is not a density matrix; the state check
  // is reported as a parse failure of the document.
  CHECK_THROWS_AS(
      clr::density_matrix_from_json(
          R"({"n": 1, "entries": [[1,0],[0,0],[0,0],[1,0]]})"),
      clr::ParseError);
}

TEST_CASE("certificate JSON round-trips and validates") {
  auto g = clr::GraphSpec::t_shaped(5);
  auto cert = *clr::derive_ghz_paradox(g, {1, 2, 3, 4});
  auto text = clr::certificate_to_json(cert, g);
  auto back = clr::certificate_from_json(text);
  CHECK(back.support == cert.support);
  CHECK(back.signs == cert.signs);
  CHECK(back.generator_recipe == cert.generator_recipe);
  REQUIRE(back.strings.size() == cert.strings.size());
  for (std::size_t i = 0; i < cert.strings.size(); ++i)
    CHECK(back.strings[i] == cert.strings[i]);
  CHECK(clr::verify_certificate(back, g));

  CHECK_THROWS_AS(clr::certificate_from_json("[]"), clr::ParseError);
  CHECK_THROWS_AS(clr::certificate_from_json(R"({"strings": []})"), clr::ParseError);

  // A declared signs array must match the sign prefixes on the strings.
  auto tampered = text;
  auto pos = tampered.find("-YXYZ");
  REQUIRE(pos != std::string::npos);
  tampered[pos] = '+';
  try {
    clr::certificate_from_json(tampered);
    FAIL_CHECK("expected a sign-mismatch parse error");
  } catch (const clr::ParseError& e) {
    CHECK(std::string(e.what()).find("disagree") != std::string::npos);
  }
}

TEST_CASE("counts CSV round-trips byte for byte") {
  auto tables = sample_tables(0.625, 300, 1900);
  auto text = clr::counts_to_csv(tables);
  auto back = clr::counts_from_csv(text);
  REQUIRE(back.size() == tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    CHECK(back[i].setting == tables[i].setting);
    CHECK(back[i].counts == tables[i].counts);
    CHECK(back[i].duration_s == tables[i].duration_s);
  }
  CHECK(clr::counts_to_csv(back) == text);
}

TEST_CASE("counts CSV errors name the offending line") {
  CHECK_THROWS_AS(clr::counts_from_csv(""), clr::ParseError);
  CHECK_THROWS_AS(clr::counts_from_csv("setting,outcome,count,duration_s\n"),
                  clr::ParseError);
  auto expect_message = [](const std::string& text, const std::string& needle) {
    try {
      clr::counts_from_csv(text);
      FAIL_CHECK("expected a parse error mentioning " << needle);
    } catch (const clr::ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  std::string header = "setting,outcome,count,duration_s\n";
  expect_message("bad header\nX,D,1,60\n", "header");
  expect_message(header + "X,D,1,60\nX,A,-3,60\n", "line 3");
  expect_message(header + "X,D,1.5,60\n", "line 2");
  expect_message(header + "X,D,1,60,extra\n", "expected 4 fields");
  expect_message(header + "X,D,1,60\nX,D,2,60\n", "duplicate");
  expect_message(header + "X,Q,1,60\n", "line 2");
  expect_message(header + "X,D,1,0\n", "duration");
}

TEST_CASE("tomography CSV round-trips byte for byte") {
  auto t = clr::simulate_tomography(clr::rho_psi(), 256.0 / 23, 60, 71);
  auto text = clr::tomography_to_csv(t);
  auto back = clr::tomography_from_csv(text);
  CHECK(back.num_qubits == t.num_qubits);
  CHECK(back.counts == t.counts);
  CHECK(back.duration_s == t.duration_s);
  CHECK(clr::tomography_to_csv(back) == text);
}

TEST_CASE("tomography CSV requires the complete family") {
  auto t = clr::simulate_tomography(clr::densify(clr::bell_phi_plus()), 10, 60, 72);
  auto text = clr::tomography_to_csv(t);
  // Drop the last data row: one projector goes missing.
  auto cut = text.substr(0, text.rfind("RR"));
  CHECK_THROWS_AS(clr::tomography_from_csv(cut), clr::ParseError);
  try {
    clr::tomography_from_csv(cut);
  } catch (const clr::ParseError& e) {
    CHECK(std::string(e.what()).find("missing") != std::string::npos);
  }
  auto duplicated = text + text.substr(text.rfind("RR"));
  CHECK_THROWS_AS(clr::tomography_from_csv(duplicated), clr::ParseError);
  CHECK_THROWS_AS(clr::tomography_from_csv("projector,count,duration_s\n"),
                  clr::ParseError);
}

TEST_CASE("doubles survive the text format exactly") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int rep = 0; rep < 1000; ++rep) {
    double x = u(rng) * std::pow(10.0, int(u(rng) * 30));
    CHECK(std::stod(clr::format_double(x)) == x);
  }
  CHECK(clr::format_double(0.5) == "0.5");
  CHECK(clr::format_double(-1) == "-1");
}

TEST_CASE("report serializations carry the headline numbers") {
  auto tables = sample_tables(0.625, 400, 1900);
  auto report = clr::analyze_counts(tables, clr::add_white_noise(clr::rho_psi(), 0.625));
  auto json = clr::report_to_json(report);
  CHECK(json.find("\"S\"") != std::string::npos);
  CHECK(json.find("counting_significance") != std::string::npos);
  CHECK(json.find("XXXX") != std::string::npos);
  auto csv = clr::report_to_csv(report);
  CHECK(csv.find("statistic,value,sigma") == 0);
  CHECK(csv.find("\nS,") != std::string::npos);
  CHECK(csv.find("lr_bound,") != std::string::npos);
  CHECK(csv.find("fraction_XXXX,") != std::string::npos);
  CHECK(csv.find("expectation_YYXX,") != std::string::npos);

  auto fractions = clr::fraction_table_csv(tables);
  CHECK(fractions.find("setting,outcome,fraction,sigma") == 0);
  // 4 settings x 16 outcomes plus the header.
  CHECK(std::count(fractions.begin(), fractions.end(), '\n') == 65);
}

TEST_CASE("mle JSON embeds the state and the optimizer diagnostics") {
  auto t = clr::simulate_tomography(clr::densify(clr::bell_phi_plus()), 30, 60, 73);
  auto r = clr::mle_reconstruct(t, 1e-8, 2000);
  auto text = clr::mle_to_json(r);
  CHECK(text.find("\"entries\"") != std::string::npos);
  CHECK(text.find("log_likelihood") != std::string::npos);
  CHECK(text.find("iterations") != std::string::npos);
  CHECK(text.find("converged") != std::string::npos);
}
