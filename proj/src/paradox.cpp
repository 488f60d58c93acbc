#include "clusterlr/paradox.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "clusterlr/states.hpp"

namespace clr {

namespace {

struct Candidate {
  PauliString full;               // over the whole register, phase +/-1
  std::vector<int> recipe;        // 1-based generator indices
  std::uint64_t parity_mask = 0;  // one bit per (support position, X/Y/Z)
  int sign = 1;
};

// Visit index combinations {0..count-1} of the given size in
// lexicographic order; stop when f returns true.
bool for_each_combination(int count, int size,
                          const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (size > count) return false;
  while (true) {
    if (f(idx)) return true;
    int k = size - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == count - size + k) --k;
    if (k < 0) return false;
    ++idx[static_cast<std::size_t>(k)];
    for (int j = k + 1; j < size; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

std::vector<int> normalize_support(const GraphSpec& g, std::vector<int> support) {
  if (support.empty()) throw std::invalid_argument("support is empty");
  std::sort(support.begin(), support.end());
  support.erase(std::unique(support.begin(), support.end()), support.end());
  for (int q : support)
    if (q < 1 || q > g.n) throw std::invalid_argument("support qubit out of range");
  return support;
}

}  // namespace

std::optional<ParadoxCertificate> derive_ghz_paradox(const GraphSpec& g,
                                                     std::vector<int> support,
                                                     int max_product_size) {
  support = normalize_support(g, support);
  if (max_product_size < 1)
    throw std::invalid_argument("max_product_size must be positive");
  std::vector<PauliString> gens = stabilizer_generators(g);
  std::set<int> in_support(support.begin(), support.end());
  std::map<int, int> support_pos;
  for (std::size_t i = 0; i < support.size(); ++i)
    support_pos[support[i]] = static_cast<int>(i);

  // Stage 1: generator products, by increasing size then lex indices,
  // kept when their support lies inside the requested window.
  std::vector<Candidate> candidates;
  int gcount = g.n;
  for (int size = 1; size <= std::min(max_product_size, gcount); ++size) {
    for_each_combination(gcount, size, [&](const std::vector<int>& idx) {
      PauliString prod = PauliString::identity(static_cast<std::size_t>(g.n));
      for (int i : idx) prod = prod * gens[static_cast<std::size_t>(i)];
      for (int q : prod.support())
        if (!in_support.count(q)) return false;
      Candidate c;
      c.full = prod;
      for (int i : idx) c.recipe.push_back(i + 1);
      c.sign = prod.sign();
      for (int q : prod.support()) {
        int op = static_cast<int>(prod.op(q)) - 1;  // X=0, Y=1, Z=2
        c.parity_mask ^= std::uint64_t(1) << (3 * support_pos.at(q) + op);
      }
      candidates.push_back(std::move(c));
      return false;
    });
  }

  // Stage 2: smallest candidate subset with every (qubit, observable)
  // count even and sign product -1. XOR of masks tracks the parities.
  int m = static_cast<int>(candidates.size());
  if (m > 24)
    throw std::invalid_argument("candidate set too large for exhaustive subset search");
  std::optional<ParadoxCertificate> found;
  for (int size = 3; size <= m && !found; ++size) {
    for_each_combination(m, size, [&](const std::vector<int>& idx) {
      std::uint64_t mask = 0;
      int sign = 1;
      for (int i : idx) {
        mask ^= candidates[static_cast<std::size_t>(i)].parity_mask;
        sign *= candidates[static_cast<std::size_t>(i)].sign;
      }
      if (mask != 0 || sign != -1) return false;
      ParadoxCertificate cert;
      cert.support = support;
      for (int i : idx) {
        const Candidate& c = candidates[static_cast<std::size_t>(i)];
        PauliString restricted = c.full.restricted_to(support);
        cert.signs.push_back(restricted.sign());
        cert.strings.push_back(PauliString(0, restricted.ops()));
        cert.generator_recipe.push_back(c.recipe);
      }
      found = std::move(cert);
      return true;
    });
  }
  return found;
}

bool verify_certificate(const ParadoxCertificate& cert, const GraphSpec& g,
                        double tol) {
  std::size_t width = cert.support.size();
  if (width == 0 || cert.strings.size() < 3) return false;
  if (cert.signs.size() != cert.strings.size()) return false;
  std::vector<int> sorted = cert.support;
  std::sort(sorted.begin(), sorted.end());
  if (std::unique(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("certificate support repeats a qubit");
  for (int q : cert.support)
    if (q < 1 || q > g.n)
      throw DimensionError("certificate support does not fit the graph");
  for (const PauliString& s : cert.strings)
    if (s.size() != width)
      throw DimensionError("certificate string length does not match support");

  StateVector state = cluster_state(g);
  for (std::size_t k = 0; k < cert.strings.size(); ++k) {
    if (cert.signs[k] != 1 && cert.signs[k] != -1) return false;
    PauliString embedded = cert.strings[k].embedded(
        static_cast<std::size_t>(g.n), cert.support);
    double e = expectation(state, embedded);
    if (std::abs(e - cert.signs[k]) > tol) return false;
  }

  // Parity condition: every (qubit, observable) pair appears evenly.
  for (std::size_t pos = 0; pos < width; ++pos) {
    int counts[4] = {0, 0, 0, 0};
    for (const PauliString& s : cert.strings)
      ++counts[static_cast<int>(s.ops()[pos])];
    for (int op = 1; op <= 3; ++op)
      if (counts[op] % 2 != 0) return false;
  }
  int sign = 1;
  for (int s : cert.signs) sign *= s;
  return sign == -1;
}

std::string certificate_transcript(const ParadoxCertificate& cert, const GraphSpec& g) {
  std::ostringstream out;
  out << "GHZ-type paradox on qubits {";
  for (std::size_t i = 0; i < cert.support.size(); ++i)
    out << (i ? "," : "") << cert.support[i];
  out << "} of the graph state with n=" << g.n << ", edges";
  for (auto [u, v] : g.edges) out << " " << u << "-" << v;
  out << "\n\nstabilizer generators:\n";
  std::vector<PauliString> gens = stabilizer_generators(g);
  for (int k = 1; k <= g.n; ++k)
    out << "  g" << k << " = " << gens[static_cast<std::size_t>(k - 1)].str() << "\n";
  out << "\ncertificate strings (restricted to the support):\n";
  for (std::size_t k = 0; k < cert.strings.size(); ++k) {
    std::string recipe;
    for (std::size_t j = 0; j < cert.generator_recipe[k].size(); ++j) {
      if (j) recipe += "*";
      recipe += "g" + std::to_string(cert.generator_recipe[k][j]);
    }
    out << "  S" << k + 1 << " = " << recipe << " = "
        << (cert.signs[k] < 0 ? "-" : "+");
    for (Pauli p : cert.strings[k].ops()) out << pauli_char(p);
    out << "\n";
  }
  out << "\nper-qubit observable counts (all even):\n";
  for (std::size_t pos = 0; pos < cert.support.size(); ++pos) {
    int counts[4] = {0, 0, 0, 0};
    for (const PauliString& s : cert.strings)
      ++counts[static_cast<int>(s.ops()[pos])];
    out << "  qubit " << cert.support[pos] << ":";
    const char* names = "IXYZ";
    for (int op = 1; op <= 3; ++op)
      if (counts[op]) out << " " << names[op] << "=" << counts[op];
    out << "\n";
  }
  int sign = 1;
  for (int s : cert.signs) sign *= s;
  out << "\nsign product = " << (sign < 0 ? "-1" : "+1") << "\n";
  out << "local-realistic reading: any fixed +/-1 assignment to the\n"
         "observables makes the product of all equations +1, while the\n"
         "quantum signs multiply to -1.\n";
  return out.str();
}

}  // namespace clr
