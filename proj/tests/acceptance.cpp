// Acceptance gate: one line per criterion, [PASS] or [FAIL], exit 1 on
// any failure. Criterion 7's experiment-scale band is checked exactly
// as stated; see the line's diagnostics when it fails.
#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "clusterlr/io.hpp"
#include "clusterlr/nonlocality.hpp"
#include "clusterlr/rng.hpp"
#include "clusterlr/tomography.hpp"
#include "clusterlr/workflows.hpp"

using namespace clr;

namespace {

int failures = 0;

void report(int k, bool pass, const std::string& text) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", k, text.c_str());
  if (!pass) ++failures;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// The four-equation certificate every T graph should produce on its
// first four qubits.
bool is_branch_certificate(const ParadoxCertificate& cert) {
  const std::vector<std::string> strings = {"+ZXZZ", "+YYZZ", "+ZYYZ", "+YXYZ"};
  const std::vector<int> signs = {1, 1, 1, -1};
  const std::vector<std::vector<int>> recipe = {{2}, {1, 2}, {2, 3}, {1, 2, 3}};
  if (cert.support != std::vector<int>{1, 2, 3, 4}) return false;
  if (cert.signs != signs || cert.generator_recipe != recipe) return false;
  if (cert.strings.size() != 4) return false;
  for (std::size_t i = 0; i < 4; ++i)
    if (cert.strings[i].str() != strings[i]) return false;
  return true;
}

void criterion_1() {
  bool pass = true;
  double worst_ms = 0;
  for (int n = 4; n <= 10; ++n) {
    auto t0 = std::chrono::steady_clock::now();
    auto g = GraphSpec::t_shaped(n);
    auto cert = derive_ghz_paradox(g, {1, 2, 3, 4});
    double elapsed = ms_since(t0);
    worst_ms = std::max(worst_ms, elapsed);
    if (!cert || !is_branch_certificate(*cert) || !verify_certificate(*cert, g) ||
        elapsed >= 1000) {
      pass = false;
      break;
    }
  }
  report(1, pass,
         "T graphs N=4..10 derive the exact four-equation certificate" +
             fmt(" (worst %.1f ms)", worst_ms));
}

void criterion_2() {
  bool pass = true;
  double worst = 1.0;
  for (int n : {5, 6, 7}) {
    auto rho = densify(cluster_state(GraphSpec::t_shaped(n)));
    double f = fidelity(partial_trace(rho, {1, 2, 3, 4}), rho_phi());
    worst = std::min(worst, f);
    if (f < 1.0 - 1e-9) pass = false;
  }
  auto u = LocalUnitary::identity(4).set(1, hadamard()).set(3, hadamard()).set(
      4, hadamard());
  double f = fidelity(apply_local(u, rho_phi()), rho_psi());
  worst = std::min(worst, f);
  if (f < 1.0 - 1e-9) pass = false;
  report(2, pass,
         "reduced T clusters give the target mixture, Hadamard-equivalent forms match" +
             fmt(" (min fidelity 1-%.1e)", 1.0 - worst));
}

void criterion_3() {
  auto target = rho_psi();
  const double expected[4] = {1, -1, -1, -1};
  bool pass = true;
  std::array<std::pair<double, double>, 4> es;
  const auto& canon = canonical_settings();
  for (int k = 0; k < 4; ++k) {
    double e = expectation(target, canon[static_cast<std::size_t>(k)].pauli());
    es[static_cast<std::size_t>(k)] = {e, 0.0};
    if (std::abs(e - expected[k]) > 1e-10) pass = false;
  }
  auto [S, sigma] = mermin_S(es);
  (void)sigma;
  if (std::abs(S - 4.0) > 1e-10) pass = false;
  report(3, pass, fmt("ideal correlations are +1/-1/-1/-1 and S = %.12f", S));
}

void criterion_4() {
  auto t0 = std::chrono::steady_clock::now();
  bool pass = lr_enumerate_max_S() == 2.0 && lr_enumerate_min_S() == -2.0;
  double t_enum = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  pass = pass && verify_counting_bound();
  double t_count = ms_since(t0);
  t0 = std::chrono::steady_clock::now();
  auto cert = derive_ghz_paradox(GraphSpec::t_shaped(5), {1, 2, 3, 4});
  pass = pass && cert && paradox_lr_contradiction(*cert);
  double t_lr = ms_since(t0);
  pass = pass && t_enum < 1000 && t_count < 1000 && t_lr < 1000;
  report(4, pass,
         "local strategies cap S at 2, counting bound holds, certificate defeats "
         "every assignment" +
             fmt(" (%.1f/%.1f/%.1f ms)", t_enum, t_count, t_lr));
}

void criterion_5() {
  bool pass = true;
  double worst = 0;
  auto check = [&](double got, double want) {
    worst = std::max(worst, std::abs(got - want));
    if (std::abs(got - want) > 1e-10) pass = false;
  };
  auto target = rho_psi();
  const auto& canon = canonical_settings();
  for (double p : {0.0, 0.25, 0.625, 1.0}) {
    NoiseSpec noise;
    noise.white_noise_p = p;
    auto rho = generation_pipeline(noise).final_state;

    std::array<std::pair<double, double>, 4> es;
    for (int k = 0; k < 4; ++k) {
      const auto& s = canon[static_cast<std::size_t>(k)];
      es[static_cast<std::size_t>(k)] = {expectation(rho, s.pauli()), 0.0};
      int parity = predicted_parity(target, s);
      auto probs = outcome_probabilities(rho, s);
      double fraction = 0;
      for (int o = 0; o < 16; ++o)
        if (outcome_parity(o, 4) == parity) fraction += probs[static_cast<std::size_t>(o)];
      check(fraction, p + (1 - p) / 2);
    }
    check(mermin_S(es).first, 4 * p);
    check(fidelity(rho, target), p + (1 - p) / 8);

    auto [cond_d, prob_d] = conditional_state(rho, 4, pol_ket(Pol::D));
    auto [cond_a, prob_a] = conditional_state(rho, 4, pol_ket(Pol::A));
    (void)prob_d;
    (void)prob_a;
    check(ghz_witness(cond_d, +1), 0.5 - (p + (1 - p) / 8));
    check(ghz_witness(cond_a, -1), 0.5 - (p + (1 - p) / 8));
  }
  report(5, pass,
         fmt("white-noise closed forms (S, fractions, fidelity, witnesses) hold to "
             "%.1e",
             worst));
}

void criterion_6() {
  auto t0 = std::chrono::steady_clock::now();
  NoiseSpec noise;
  noise.white_noise_p = 0.625;
  auto rho = generation_pipeline(noise).final_state;
  auto target = rho_psi();
  const auto& canon = canonical_settings();

  const int seeds = 20;
  double mean_S = 0, mean_bound = 0, min_counting = 1e9, min_mermin = 1e9;
  double mean_counting = 0, mean_mermin = 0;
  std::array<double, 4> mean_fraction = {0, 0, 0, 0};
  for (int i = 0; i < seeds; ++i) {
    std::vector<CountsTable> tables;
    for (std::size_t k = 0; k < 4; ++k)
      tables.push_back(sample_counts(canon[k], outcome_probabilities(rho, canon[k]),
                                     1900, derive_seed(20210906 + i, k)));
    auto report_i = analyze_counts(tables, target);
    mean_S += report_i.S;
    mean_bound += report_i.lr_bound;
    mean_counting += report_i.counting_significance;
    mean_mermin += report_i.mermin_significance;
    min_counting = std::min(min_counting, report_i.counting_significance);
    min_mermin = std::min(min_mermin, report_i.mermin_significance);
    for (std::size_t k = 0; k < 4; ++k)
      mean_fraction[k] += report_i.settings[k].fraction.value;
  }
  mean_S /= seeds;
  mean_bound /= seeds;
  mean_counting /= seeds;
  mean_mermin /= seeds;
  bool pass = mean_S >= 2.40 && mean_S <= 2.60 && mean_bound >= 0.54 &&
              mean_bound <= 0.59 && mean_counting >= 10 && mean_mermin >= 10;
  for (double& f : mean_fraction) {
    f /= seeds;
    if (f < 0.79 || f > 0.83) pass = false;
  }
  double elapsed = ms_since(t0);
  pass = pass && elapsed < 60000;
  report(6, pass,
         fmt("20-seed statistics: mean S %.3f, bound %.3f,", mean_S, mean_bound) +
             fmt(" significances %.1f/%.1f sigma (min %.1f)", mean_counting,
                 mean_mermin, std::min(min_counting, min_mermin)) +
             fmt(" in %.0f ms", elapsed));
}

void criterion_7() {
  auto target = rho_psi();

  // High statistics: about 4.2 million expected counts.
  auto big = simulate_tomography(target, 400 * 256.0 / 23, 60, derive_seed(1, 8));
  auto mle = mle_reconstruct(big, 1e-10, 5000);
  double f_big = fidelity(mle.rho, target);
  bool pass = f_big >= 0.99;
  double min_eig = eigenvalues(mle.rho).back();
  pass = pass && min_eig >= -1e-9;
  pass = pass && std::abs(mle.rho.matrix().trace().real() - 1.0) <= 1e-9;
  for (std::size_t i = 1; i < mle.ll_trace.size(); ++i)
    if (mle.ll_trace[i] < mle.ll_trace[i - 1]) pass = false;

  // Experiment scale: calibrated rate on the p = 0.625 source, 20 seeds;
  // the stated band is [0.60, 0.75] for every seed.
  NoiseSpec noise;
  noise.white_noise_p = 0.625;
  auto rho = generation_pipeline(noise).final_state;
  int in_band = 0;
  double mean = 0, lo = 1, hi = 0;
  const int seeds = 20;
  for (int i = 0; i < seeds; ++i) {
    auto t = simulate_tomography(rho, 256.0 / 23, 60, derive_seed(20210906 + i, 8));
    double f = fidelity(mle_reconstruct(t, 1e-8, 5000).rho, target);
    mean += f;
    lo = std::min(lo, f);
    hi = std::max(hi, f);
    if (f >= 0.60 && f <= 0.75) ++in_band;
  }
  mean /= seeds;
  bool band_pass = in_band == seeds;
  pass = pass && band_pass;

  report(7, pass,
         fmt("high-count reconstruction F = %.4f (PSD, monotone);", f_big) +
             fmt(" experiment-scale band [0.60,0.75]: %2.0f/20 seeds in band,",
                 double(in_band)) +
             fmt(" F mean %.3f, range [%.3f, %.3f]", mean, lo, hi) +
             (band_pass ? ""
                        : " -- small-sample likelihood bias at ~1e4 counts sits "
                          "below the stated band; see README"));
}

void criterion_8() {
  NoiseSpec noise;
  noise.white_noise_p = 0.625;
  auto rho = generation_pipeline(noise).final_state;
  Eigen::Vector2cd ketD = pol_ket(Pol::D), ketA = pol_ket(Pol::A);
  bool pass = true;
  std::string detail;
  for (std::uint64_t seed : {20210906ull, 20210907ull}) {
    auto tomo = simulate_tomography(rho, 32 * 256.0 / 23, 60, derive_seed(seed, 8));
    auto mle = mle_reconstruct(tomo, 1e-10, 5000);
    double wD = ghz_witness(conditional_state(mle.rho, 4, ketD).first, +1);
    double wA = ghz_witness(conditional_state(mle.rho, 4, ketA).first, -1);
    auto stats = [&](const TomographySet& set) {
      auto rep = mle_reconstruct(set, 1e-8, 5000);
      return std::vector<double>{
          ghz_witness(conditional_state(rep.rho, 4, ketD).first, +1),
          ghz_witness(conditional_state(rep.rho, 4, ketA).first, -1)};
    };
    auto sigmas = bootstrap_sigmas(tomo, stats, 100, derive_seed(seed, 16));
    double zD = -wD / sigmas[0], zA = -wA / sigmas[1];
    if (!(wD <= -0.10 && wA <= -0.10 && zD >= 5 && zA >= 5)) pass = false;
    detail += fmt(" [wD %.3f at %.1f sigma,", wD, zD) + fmt(" wA %.3f at %.1f sigma]", wA, zA);
  }
  report(8, pass, "conditional witnesses on both branches are negative at >=5 sigma" + detail);
}

void criterion_9() {
  RunConfig config;
  config.bootstrap_replicas = 100;
  config.tomo_bootstrap_replicas = 100;
  config.bootstrap_mle_tol = 1e-6;
  auto first = run_reproduce(config);
  auto second = run_reproduce(config);
  bool pass = first.artifacts.size() == second.artifacts.size();
  std::string mismatch;
  if (pass)
    for (std::size_t i = 0; i < first.artifacts.size(); ++i)
      if (first.artifacts[i].name != second.artifacts[i].name ||
          first.artifacts[i].content != second.artifacts[i].content) {
        pass = false;
        mismatch = " (differs: " + first.artifacts[i].name + ")";
        break;
      }
  auto shifted = config;
  shifted.master_seed += 1;
  auto third = run_reproduce(shifted);
  bool seed_changes = false;
  for (std::size_t i = 0; i < std::min(first.artifacts.size(), third.artifacts.size()); ++i)
    if (third.artifacts[i].name == "counts.csv" &&
        third.artifacts[i].content != first.artifacts[i].content)
      seed_changes = true;
  pass = pass && seed_changes;
  report(9, pass,
         "end-to-end run is byte-identical across repeats and seed-sensitive" +
             mismatch + " (property suites run in the unit test binary)");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
