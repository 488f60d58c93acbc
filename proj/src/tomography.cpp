#include "clusterlr/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "clusterlr/rng.hpp"

namespace clr {

namespace {

const Pol kTomoLetters[4] = {Pol::H, Pol::V, Pol::D, Pol::R};

void check_tomo(const TomographySet& t) {
  int n = t.num_qubits;
  std::size_t expected = 1;
  for (int k = 0; k < n; ++k) expected *= 4;
  if (n < 1 || n > kMaxDenseQubits)
    throw std::invalid_argument("tomography register size out of range");
  if (t.projectors.size() != expected || t.counts.size() != expected)
    throw DimensionError("tomography set is not the full 4^n projector family");
  for (double c : t.counts)
    if (c < 0 || std::floor(c) != c || !std::isfinite(c))
      throw std::invalid_argument("counts must be nonnegative integers");
}

// Rows are projector kets (transposed), one per tomography projector.
Eigen::MatrixXcd ket_matrix(const TomographySet& t) {
  Eigen::Index d = Eigen::Index(1) << t.num_qubits;
  Eigen::MatrixXcd K(static_cast<Eigen::Index>(t.projectors.size()), d);
  for (std::size_t i = 0; i < t.projectors.size(); ++i)
    K.row(static_cast<Eigen::Index>(i)) =
        product_ket(t.projectors[i].labels).amplitudes().transpose();
  return K;
}

// <l|P|l> for the tomography letters and single-qubit Paulis; rows in
// kTomoLetters order, columns I,X,Y,Z.
constexpr double kDesign[4][4] = {
    {1, 0, 0, 1},   // H
    {1, 0, 0, -1},  // V
    {1, 1, 0, 0},   // D
    {1, 0, 1, 0},   // R
};

struct InversionCache {
  Eigen::MatrixXd design;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
};

const InversionCache& inversion_cache(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<InversionCache>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return *it->second;
  std::size_t rows = 1;
  for (int k = 0; k < n; ++k) rows *= 4;
  auto entry = std::make_unique<InversionCache>();
  entry->design.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < rows; ++j) {
      double v = 1.0;
      std::size_t pi = i, pj = j;
      for (int q = 0; q < n; ++q) {
        std::size_t shift = static_cast<std::size_t>(2 * (n - 1 - q));
        v *= kDesign[(pi >> shift) & 3][(pj >> shift) & 3];
      }
      entry->design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  entry->qr.compute(entry->design);
  if (entry->qr.rank() != entry->design.rows())
    throw std::logic_error("tomography design matrix is rank deficient");
  auto [pos, ok] = cache.emplace(n, std::move(entry));
  (void)ok;
  return *pos->second;
}

Eigen::MatrixXcd pauli_kron(int n, std::size_t index) {
  // Builds kron(f_1, ..., f_n) by wrapping factors from the right, so
  // qubit 1 ends up most significant.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = n - 1; q >= 0; --q) {
    std::size_t shift = static_cast<std::size_t>(2 * (n - 1 - q));
    Eigen::Matrix2cd f = pauli_matrix(static_cast<Pauli>((index >> shift) & 3));
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    next << m * f(0, 0), m * f(0, 1), m * f(1, 0), m * f(1, 1);
    m = std::move(next);
  }
  return m;
}

}  // namespace

std::vector<ProjectorString> tomography_settings(int n) {
  if (n < 1 || n > kMaxDenseQubits)
    throw std::invalid_argument("register size out of range");
  std::size_t total = 1;
  for (int k = 0; k < n; ++k) total *= 4;
  std::vector<ProjectorString> out;
  out.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    ProjectorString p;
    p.labels.resize(static_cast<std::size_t>(n));
    for (int q = 0; q < n; ++q) {
      std::size_t shift = static_cast<std::size_t>(2 * (n - 1 - q));
      p.labels[static_cast<std::size_t>(q)] = kTomoLetters[(i >> shift) & 3];
    }
    out.push_back(std::move(p));
  }
  return out;
}

TomographySet simulate_tomography(const DensityMatrix& rho, double rate_constant,
                                  double duration_s, std::uint64_t seed,
                                  const std::string& provenance) {
  if (!(rate_constant > 0)) throw std::invalid_argument("rate constant must be positive");
  if (!(duration_s > 0)) throw std::invalid_argument("duration must be positive");
  TomographySet t;
  t.num_qubits = rho.num_qubits();
  t.projectors = tomography_settings(t.num_qubits);
  t.counts.resize(t.projectors.size());
  t.duration_s = duration_s;
  t.meta.seed = seed;
  t.meta.provenance = provenance;
  CountSampler sampler(seed);
  for (std::size_t i = 0; i < t.projectors.size(); ++i) {
    double q = projector_probability(rho, t.projectors[i]);
    t.counts[i] = static_cast<double>(sampler.poisson(rate_constant * duration_s * q));
  }
  return t;
}

Eigen::MatrixXcd linear_inversion(const TomographySet& t) {
  check_tomo(t);
  int n = t.num_qubits;
  const InversionCache& cache = inversion_cache(n);
  Eigen::Index rows = cache.design.rows();
  Eigen::VectorXd counts(rows);
  if (tomography_settings(n) != t.projectors)
    throw std::invalid_argument("projectors are not in canonical order");
  for (Eigen::Index i = 0; i < rows; ++i)
    counts(i) = t.counts[static_cast<std::size_t>(i)];
  if (counts.sum() <= 0)
    throw std::invalid_argument("tomography counts are all zero");
  // counts ~ s * q = (s / 2^n) * design * t_coeffs; the scale cancels in
  // the final trace normalization.
  Eigen::VectorXd coeffs = cache.qr.solve(counts);
  Eigen::Index d = Eigen::Index(1) << n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index j = 0; j < rows; ++j) {
    if (coeffs(j) == 0.0) continue;
    rho += coeffs(j) * pauli_kron(n, static_cast<std::size_t>(j));
  }
  double trace = rho.trace().real();
  if (trace <= 0)
    throw std::invalid_argument("tomography counts are degenerate (nonpositive trace)");
  rho /= trace;
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return rho;
}

namespace {

struct MleModel {
  Eigen::MatrixXcd K;      // projector kets as rows
  Eigen::MatrixXcd Kconj;  // conjugate, cached
  Eigen::VectorXd counts;
  double total = 0;

  Eigen::VectorXd probs(const Eigen::MatrixXcd& rho) const {
    return (Kconj * rho).cwiseProduct(K).rowwise().sum().real();
  }

  // Poisson log-likelihood with the scale profiled out, up to a
  // data-only constant.
  double log_likelihood(const Eigen::VectorXd& q) const {
    double qsum = q.sum();
    if (qsum <= 0) return -std::numeric_limits<double>::infinity();
    double ll = 0;
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (counts(i) == 0) continue;
      if (q(i) <= 0) return -std::numeric_limits<double>::infinity();
      ll += counts(i) * std::log(q(i));
    }
    ll += total * std::log(total / qsum) - total;
    return ll;
  }
};

Eigen::MatrixXcd normalized_rho(const Eigen::MatrixXcd& T) {
  Eigen::MatrixXcd rho = T * T.adjoint();
  return rho / rho.trace().real();
}

}  // namespace

MleResult mle_reconstruct(const TomographySet& t, double tol, int max_iter) {
  check_tomo(t);
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  int n = t.num_qubits;
  Eigen::Index d = Eigen::Index(1) << n;

  MleModel model;
  model.K = ket_matrix(t);
  model.Kconj = model.K.conjugate();
  model.counts.resize(static_cast<Eigen::Index>(t.counts.size()));
  for (std::size_t i = 0; i < t.counts.size(); ++i)
    model.counts(static_cast<Eigen::Index>(i)) = t.counts[i];
  model.total = model.counts.sum();
  if (model.total <= 0) throw std::invalid_argument("tomography counts are all zero");

  // Initializer: eigenvalue-clamped linear inversion, mixed with a trace
  // of identity so the Cholesky factor exists.
  Eigen::MatrixXcd init = linear_inversion(t);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(init);
  Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
  double csum = clamped.sum();
  if (csum <= 0) {
    clamped.setConstant(1.0 / static_cast<double>(d));
  } else {
    clamped /= csum;
  }
  Eigen::MatrixXcd rho0 = eig.eigenvectors() * clamped.asDiagonal() *
                          eig.eigenvectors().adjoint();
  const double mix = 1e-6;
  rho0 = (1.0 - mix) * rho0 +
         mix / static_cast<double>(d) * Eigen::MatrixXcd::Identity(d, d);
  rho0 = 0.5 * (rho0 + rho0.adjoint()).eval();
  Eigen::LLT<Eigen::MatrixXcd> llt(rho0);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("initializer factorization failed");
  Eigen::MatrixXcd T = llt.matrixL();

  MleResult result{DensityMatrix(n, rho0), 0, 0, false,
                   "linear inversion, eigenvalues clamped at 0", {}};

  Eigen::MatrixXcd rho = normalized_rho(T);
  Eigen::VectorXd q = model.probs(rho);
  double ll = model.log_likelihood(q);
  result.ll_trace.push_back(ll);
  double eta = 0.0;

  for (int iter = 0; iter < max_iter; ++iter) {
    double tau = T.squaredNorm();
    double scale = model.total / q.sum();
    Eigen::VectorXd w(q.size());
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      double qi = std::max(q(i), 1e-300);
      w(i) = model.counts(i) / qi - scale;
    }
    // F = sum_i w_i |p_i><p_i|; gradient in T is ((F - tr(F rho) I)/tau) T.
    Eigen::MatrixXcd F = model.K.transpose() * (w.asDiagonal() * model.Kconj);
    F = 0.5 * (F + F.adjoint()).eval();
    double fbar = (F * rho).trace().real();
    Eigen::MatrixXcd grad = (F * T - fbar * T) / tau;
    grad = Eigen::MatrixXcd(grad.triangularView<Eigen::Lower>());
    double gnorm = grad.norm();
    if (gnorm == 0) {
      result.converged = true;
      break;
    }
    if (eta == 0.0) eta = 0.1 * T.norm() / gnorm;

    bool accepted = false;
    double trial_eta = eta * 2.0;
    for (int halving = 0; halving < 60; ++halving) {
      Eigen::MatrixXcd Tn = T + trial_eta * grad;
      Eigen::MatrixXcd rhon = normalized_rho(Tn);
      Eigen::VectorXd qn = model.probs(rhon);
      double lln = model.log_likelihood(qn);
      if (lln > ll) {
        double gain = lln - ll;
        T = std::move(Tn);
        rho = std::move(rhon);
        q = std::move(qn);
        ll = lln;
        eta = trial_eta;
        result.ll_trace.push_back(ll);
        ++result.iterations;
        accepted = true;
        if (gain <= tol * (std::abs(ll) + 1.0)) result.converged = true;
        break;
      }
      trial_eta *= 0.5;
    }
    if (!accepted) {
      // No ascent direction improves the likelihood at any step size.
      result.converged = true;
      break;
    }
    if (result.converged) break;
  }

  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  result.rho = DensityMatrix(n, std::move(rho));
  result.log_likelihood = ll;
  return result;
}

std::pair<DensityMatrix, double> conditional_state(const DensityMatrix& rho,
                                                   int qubit,
                                                   const Eigen::Vector2cd& ket) {
  int n = rho.num_qubits();
  if (n < 2) throw std::invalid_argument("conditioning needs at least two qubits");
  if (qubit < 1 || qubit > n) throw std::invalid_argument("qubit index out of range");
  if (std::abs(ket.norm() - 1.0) > kStructuralTol)
    throw std::invalid_argument("conditioning ket is not normalized");
  Eigen::Index d = rho.dim();
  Eigen::Index mask = Eigen::Index(1) << (n - qubit);
  Eigen::Index dr = d / 2;
  // <ket|_q rho |ket>_q as a matrix on the remaining qubits.
  auto expand = [&](Eigen::Index i) {
    Eigen::Index low = i & (mask - 1);
    return ((i ^ low) << 1) | low;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dr, dr);
  for (Eigen::Index r = 0; r < dr; ++r) {
    Eigen::Index r0 = expand(r);
    for (Eigen::Index c = 0; c < dr; ++c) {
      Eigen::Index c0 = expand(c);
      Complex acc = 0;
      for (int br = 0; br < 2; ++br)
        for (int bc = 0; bc < 2; ++bc)
          acc += std::conj(ket(br)) * ket(bc) *
                 rho.matrix()(r0 | (br ? mask : 0), c0 | (bc ? mask : 0));
      out(r, c) = acc;
    }
  }
  double prob = out.trace().real();
  if (prob < 1e-12)
    throw std::invalid_argument("conditional branch has (near) zero probability");
  out /= prob;
  out = 0.5 * (out + out.adjoint()).eval();
  return {DensityMatrix(n - 1, std::move(out)), prob};
}

double ghz_witness(const DensityMatrix& rho3, int sign) {
  if (rho3.num_qubits() != 3)
    throw DimensionError("GHZ witness needs a three-qubit state");
  StateVector target = ghz3(sign);
  double overlap = (target.amplitudes().adjoint() * rho3.matrix() *
                    target.amplitudes())(0, 0)
                       .real();
  return 0.5 - overlap;
}

namespace {

double stddev(const std::vector<double>& xs) {
  std::size_t b = xs.size();
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(b);
  double var = 0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(b - 1));
}

void check_replicas(int replicas) {
  if (replicas < 100)
    throw std::invalid_argument("bootstrap needs at least 100 replicas");
}

}  // namespace

std::vector<double> bootstrap_sigmas(
    const TomographySet& t,
    const std::function<std::vector<double>(const TomographySet&)>& statistics,
    int replicas, std::uint64_t seed) {
  check_replicas(replicas);
  check_tomo(t);
  double total = 0;
  for (double c : t.counts) total += c;
  if (total <= 0)
    throw std::invalid_argument("bootstrap input counts are all zero");
  std::vector<std::vector<double>> samples;
  for (int b = 0; b < replicas; ++b) {
    TomographySet rep = t;
    CountSampler sampler(derive_seed(seed, static_cast<std::uint64_t>(b)));
    for (double& c : rep.counts)
      c = static_cast<double>(sampler.poisson(c));
    samples.push_back(statistics(rep));
    if (samples.back().size() != samples.front().size())
      throw std::logic_error("bootstrap statistic changed dimension");
  }
  std::vector<double> out;
  for (std::size_t k = 0; k < samples.front().size(); ++k) {
    std::vector<double> xs;
    xs.reserve(samples.size());
    for (const auto& s : samples) xs.push_back(s[k]);
    out.push_back(stddev(xs));
  }
  return out;
}

double bootstrap_sigma(const TomographySet& t,
                       const std::function<double(const TomographySet&)>& statistic,
                       int replicas, std::uint64_t seed) {
  return bootstrap_sigmas(
      t,
      [&](const TomographySet& rep) {
        return std::vector<double>{statistic(rep)};
      },
      replicas, seed)[0];
}

double bootstrap_sigma(const CountsTable& t,
                       const std::function<double(const CountsTable&)>& statistic,
                       int replicas, std::uint64_t seed) {
  check_replicas(replicas);
  if (t.total() <= 0)
    throw std::invalid_argument("bootstrap input counts are all zero");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(replicas));
  for (int b = 0; b < replicas; ++b) {
    CountsTable rep = t;
    CountSampler sampler(derive_seed(seed, static_cast<std::uint64_t>(b)));
    for (double& c : rep.counts)
      c = static_cast<double>(sampler.poisson(c));
    xs.push_back(statistic(rep));
  }
  return stddev(xs);
}

}  // namespace clr
