#include "clusterlr/pauli.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace clr {

char pauli_char(Pauli p) {
  switch (p) {
    case Pauli::I: return 'I';
    case Pauli::X: return 'X';
    case Pauli::Y: return 'Y';
    case Pauli::Z: return 'Z';
  }
  throw std::invalid_argument("corrupt Pauli value");
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default:
      throw ParseError(std::string("invalid Pauli letter '") + c + "'");
  }
}

PauliString::PauliString(int phase_power, std::vector<Pauli> ops)
    : phase_power_(((phase_power % 4) + 4) % 4), ops_(std::move(ops)) {}

PauliString PauliString::identity(std::size_t n) {
  return PauliString(0, std::vector<Pauli>(n, Pauli::I));
}

PauliString PauliString::from_ops(std::string_view ops, int sign) {
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("sign must be +1 or -1");
  std::vector<Pauli> v;
  v.reserve(ops.size());
  for (char c : ops) v.push_back(pauli_from_char(c));
  return PauliString(sign == 1 ? 0 : 2, std::move(v));
}

PauliString PauliString::parse(std::string_view text) {
  int phase = 0;
  std::size_t pos = 0;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') phase = 2;
    ++pos;
  }
  if (pos < text.size() && text[pos] == 'i') {
    phase += 1;
    ++pos;
  }
  if (pos >= text.size())
    throw ParseError("Pauli string has no operators: '" + std::string(text) + "'");
  std::vector<Pauli> v;
  v.reserve(text.size() - pos);
  for (; pos < text.size(); ++pos) v.push_back(pauli_from_char(text[pos]));
  return PauliString(phase, std::move(v));
}

Pauli PauliString::op(int qubit) const {
  if (qubit < 1 || static_cast<std::size_t>(qubit) > ops_.size())
    throw std::invalid_argument("qubit index out of range");
  return ops_[static_cast<std::size_t>(qubit - 1)];
}

Complex PauliString::phase() const {
  static const Complex table[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[phase_power_];
}

int PauliString::sign() const {
  if (!has_real_phase())
    throw std::invalid_argument("Pauli string has imaginary phase");
  return phase_power_ == 0 ? 1 : -1;
}

namespace {

// Single-qubit product a*b -> (extra phase power, resulting op).
// Cyclic order XY = iZ, YZ = iX, ZX = iY; reversed order gives -i.
std::pair<int, Pauli> single_product(Pauli a, Pauli b) {
  if (a == Pauli::I) return {0, b};
  if (b == Pauli::I) return {0, a};
  if (a == b) return {0, Pauli::I};
  int ia = static_cast<int>(a), ib = static_cast<int>(b);
  // X=1, Y=2, Z=3: cyclic successor means ib == ia % 3 + 1.
  bool cyclic = ib == ia % 3 + 1;
  Pauli rest = static_cast<Pauli>(6 - ia - ib);
  return {cyclic ? 1 : 3, rest};
}

}  // namespace

PauliString PauliString::operator*(const PauliString& rhs) const {
  if (ops_.size() != rhs.ops_.size())
    throw DimensionError("Pauli string lengths differ");
  int phase = phase_power_ + rhs.phase_power_;
  std::vector<Pauli> v(ops_.size());
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    auto [extra, op] = single_product(ops_[k], rhs.ops_[k]);
    phase += extra;
    v[k] = op;
  }
  return PauliString(phase, std::move(v));
}

bool PauliString::commutes_with(const PauliString& other) const {
  if (ops_.size() != other.ops_.size())
    throw DimensionError("Pauli string lengths differ");
  int anti = 0;
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    Pauli a = ops_[k], b = other.ops_[k];
    if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
  }
  return anti % 2 == 0;
}

std::vector<int> PauliString::support() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < ops_.size(); ++k)
    if (ops_[k] != Pauli::I) out.push_back(static_cast<int>(k + 1));
  return out;
}

PauliString PauliString::restricted_to(const std::vector<int>& qubits) const {
  std::set<int> keep(qubits.begin(), qubits.end());
  for (int q : qubits)
    if (q < 1 || static_cast<std::size_t>(q) > ops_.size())
      throw std::invalid_argument("restriction qubit out of range");
  std::vector<Pauli> v;
  v.reserve(keep.size());
  for (std::size_t k = 0; k < ops_.size(); ++k) {
    int q = static_cast<int>(k + 1);
    if (keep.count(q)) {
      v.push_back(ops_[k]);
    } else if (ops_[k] != Pauli::I) {
      throw std::invalid_argument("restriction drops a non-identity operator");
    }
  }
  return PauliString(phase_power_, std::move(v));
}

PauliString PauliString::embedded(std::size_t n, const std::vector<int>& qubits) const {
  if (qubits.size() != ops_.size())
    throw DimensionError("embedding position count does not match string length");
  std::vector<Pauli> v(n, Pauli::I);
  std::set<int> seen;
  for (std::size_t k = 0; k < qubits.size(); ++k) {
    int q = qubits[k];
    if (q < 1 || static_cast<std::size_t>(q) > n)
      throw std::invalid_argument("embedding qubit out of range");
    if (!seen.insert(q).second)
      throw std::invalid_argument("embedding positions repeat");
    v[static_cast<std::size_t>(q - 1)] = ops_[k];
  }
  return PauliString(phase_power_, std::move(v));
}

std::string PauliString::str() const {
  std::string out;
  out += phase_power_ >= 2 ? '-' : '+';
  if (phase_power_ % 2 == 1) out += 'i';
  for (Pauli p : ops_) out += pauli_char(p);
  return out;
}

GraphSpec GraphSpec::create(int n, std::vector<std::pair<int, int>> edges) {
  if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
  std::set<std::pair<int, int>> canon;
  for (auto [u, v] : edges) {
    if (u == v) throw std::invalid_argument("graph has a self-loop");
    if (u < 1 || u > n || v < 1 || v > n)
      throw std::invalid_argument("graph edge vertex out of range");
    canon.insert({std::min(u, v), std::max(u, v)});
  }
  GraphSpec g;
  g.n = n;
  g.edges.assign(canon.begin(), canon.end());
  return g;
}

GraphSpec GraphSpec::linear(int n) {
  std::vector<std::pair<int, int>> e;
  for (int k = 1; k < n; ++k) e.push_back({k, k + 1});
  return create(n, std::move(e));
}

GraphSpec GraphSpec::t_shaped(int n) {
  if (n < 4) throw std::invalid_argument("T-shaped graph needs at least 4 vertices");
  std::vector<std::pair<int, int>> e = {{1, 2}, {2, 3}, {2, 4}};
  for (int k = 4; k < n; ++k) e.push_back({k, k + 1});
  return create(n, std::move(e));
}

GraphSpec GraphSpec::parse(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  int n = -1;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(in, line)) {
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
      line.pop_back();
    if (line.empty()) continue;
    if (n < 0) {
      if (line.rfind("n=", 0) != 0)
        throw ParseError("line " + std::to_string(lineno) + ": expected n=<int>");
      try {
        std::size_t used = 0;
        n = std::stoi(line.substr(2), &used);
        if (used != line.size() - 2) throw std::invalid_argument("");
      } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(lineno) + ": invalid vertex count");
      }
      continue;
    }
    std::istringstream row(line);
    int u = 0, v = 0;
    std::string extra;
    if (!(row >> u >> v) || (row >> extra))
      throw ParseError("line " + std::to_string(lineno) + ": expected '<u> <v>'");
    edges.push_back({u, v});
  }
  if (n < 0) throw ParseError("graph text has no n=<int> header");
  try {
    return create(n, std::move(edges));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid graph: ") + e.what());
  }
}

std::string GraphSpec::format() const {
  std::ostringstream out;
  out << "n=" << n << "\n";
  for (auto [u, v] : edges) out << u << " " << v << "\n";
  return out.str();
}

std::vector<int> GraphSpec::neighbors(int v) const {
  if (v < 1 || v > n) throw std::invalid_argument("vertex out of range");
  std::vector<int> out;
  for (auto [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PauliString> stabilizer_generators(const GraphSpec& g) {
  std::vector<PauliString> gens;
  gens.reserve(static_cast<std::size_t>(g.n));
  for (int k = 1; k <= g.n; ++k) {
    std::vector<Pauli> ops(static_cast<std::size_t>(g.n), Pauli::I);
    ops[static_cast<std::size_t>(k - 1)] = Pauli::X;
    for (int nb : g.neighbors(k)) ops[static_cast<std::size_t>(nb - 1)] = Pauli::Z;
    gens.emplace_back(0, std::move(ops));
  }
  return gens;
}

}  // namespace clr
