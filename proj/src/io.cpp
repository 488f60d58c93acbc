#include "clusterlr/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace clr {

using nlohmann::json;

std::string format_double(double v) {
  // Shortest decimal that parses back to the same double; always at most
  // 17 significant digits.
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, end);
}

namespace {

json parse_json(std::string_view text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw ParseError(std::string(what) + " is not valid JSON");
  return j;
}

long long parse_count_field(const std::string& field, int lineno) {
  long long c = 0;
  auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), c);
  if (ec != std::errc() || p != field.data() + field.size())
    throw ParseError("line " + std::to_string(lineno) + ": invalid count '" + field + "'");
  if (c < 0)
    throw ParseError("line " + std::to_string(lineno) + ": negative count");
  return c;
}

double parse_duration_field(const std::string& field, int lineno) {
  try {
    std::size_t used = 0;
    double d = std::stod(field, &used);
    if (used != field.size() || !(d > 0)) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(lineno) + ": invalid duration '" + field + "'");
  }
}

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

std::string density_matrix_to_json(const DensityMatrix& rho) {
  json j;
  j["n"] = rho.num_qubits();
  json entries = json::array();
  const Eigen::MatrixXcd& m = rho.matrix();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      entries.push_back({m(r, c).real(), m(r, c).imag()});
  j["entries"] = std::move(entries);
  return j.dump(2) + "\n";
}

DensityMatrix density_matrix_from_json(std::string_view text) {
  json j = parse_json(text, "density matrix");
  if (!j.contains("n") || !j["n"].is_number_integer())
    throw ParseError("density matrix JSON lacks an integer 'n'");
  int n = j["n"].get<int>();
  if (n < 1 || n > kMaxDenseQubits)
    throw ParseError("density matrix register size out of range");
  Eigen::Index d = Eigen::Index(1) << n;
  if (!j.contains("entries") || !j["entries"].is_array() ||
      j["entries"].size() != static_cast<std::size_t>(d * d))
    throw ParseError("density matrix JSON 'entries' must hold 4^n pairs");
  Eigen::MatrixXcd m(d, d);
  std::size_t k = 0;
  for (const auto& e : j["entries"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ParseError("density matrix entry " + std::to_string(k) +
                       " is not an [re, im] pair");
    m(static_cast<Eigen::Index>(k) / d, static_cast<Eigen::Index>(k) % d) =
        Complex(e[0].get<double>(), e[1].get<double>());
    ++k;
  }
  try {
    return DensityMatrix(n, std::move(m));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("density matrix JSON: ") + e.what());
  }
}

std::string certificate_to_json(const ParadoxCertificate& cert, const GraphSpec& g) {
  json j;
  j["schema_version"] = 1;
  j["graph"]["n"] = g.n;
  json edges = json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  j["graph"]["edges"] = std::move(edges);
  j["support"] = cert.support;
  json strings = json::array();
  for (std::size_t k = 0; k < cert.strings.size(); ++k) {
    std::string s = cert.signs[k] < 0 ? "-" : "+";
    for (Pauli p : cert.strings[k].ops()) s += pauli_char(p);
    strings.push_back(s);
  }
  j["strings"] = std::move(strings);
  j["signs"] = cert.signs;
  j["generator_recipe"] = cert.generator_recipe;
  return j.dump(2) + "\n";
}

ParadoxCertificate certificate_from_json(std::string_view text) {
  json j = parse_json(text, "certificate");
  ParadoxCertificate cert;
  if (!j.contains("support") || !j["support"].is_array())
    throw ParseError("certificate JSON lacks 'support'");
  for (const auto& q : j["support"]) {
    if (!q.is_number_integer()) throw ParseError("certificate support must be integers");
    cert.support.push_back(q.get<int>());
  }
  if (!j.contains("strings") || !j["strings"].is_array() || j["strings"].size() < 3)
    throw ParseError("certificate JSON needs at least three strings");
  for (const auto& s : j["strings"]) {
    if (!s.is_string()) throw ParseError("certificate strings must be strings");
    PauliString p = PauliString::parse(s.get<std::string>());
    if (!p.has_real_phase()) throw ParseError("certificate string has imaginary phase");
    cert.signs.push_back(p.sign());
    cert.strings.push_back(PauliString(0, p.ops()));
  }
  if (j.contains("signs")) {
    std::vector<int> declared = j["signs"].get<std::vector<int>>();
    if (declared != cert.signs)
      throw ParseError("certificate 'signs' disagree with the string prefixes");
  }
  if (j.contains("generator_recipe"))
    cert.generator_recipe = j["generator_recipe"].get<std::vector<std::vector<int>>>();
  else
    cert.generator_recipe.assign(cert.strings.size(), {});
  return cert;
}

std::string counts_to_csv(const std::vector<CountsTable>& tables) {
  std::ostringstream out;
  out << "setting,outcome,count,duration_s\n";
  for (const CountsTable& t : tables) {
    for (std::size_t o = 0; o < t.counts.size(); ++o) {
      out << t.setting.str() << ","
          << outcome_labels(t.setting, static_cast<int>(o)) << ","
          << static_cast<long long>(std::llround(t.counts[o])) << ","
          << format_double(t.duration_s) << "\n";
    }
  }
  return out.str();
}

std::vector<CountsTable> counts_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  std::vector<CountsTable> tables;
  std::vector<std::vector<bool>> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "setting,outcome,count,duration_s")
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected header 'setting,outcome,count,duration_s'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != 4)
      throw ParseError("line " + std::to_string(lineno) + ": expected 4 fields");
    Setting s;
    int outcome = 0;
    try {
      s = Setting::parse(cells[0]);
      outcome = outcome_index(s, cells[1]);
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
    long long count = parse_count_field(cells[2], lineno);
    double duration = parse_duration_field(cells[3], lineno);
    std::size_t idx = tables.size();
    for (std::size_t k = 0; k < tables.size(); ++k)
      if (tables[k].setting == s) idx = k;
    if (idx == tables.size()) {
      CountsTable t;
      t.setting = s;
      t.counts.assign(std::size_t(1) << s.num_qubits(), 0.0);
      t.duration_s = duration;
      tables.push_back(std::move(t));
      seen.push_back(std::vector<bool>(std::size_t(1) << s.num_qubits(), false));
    } else if (std::abs(tables[idx].duration_s - duration) > 1e-12) {
      throw ParseError("line " + std::to_string(lineno) +
                       ": duration differs within setting " + s.str());
    }
    if (seen[idx][static_cast<std::size_t>(outcome)])
      throw ParseError("line " + std::to_string(lineno) + ": duplicate outcome " +
                       cells[1] + " for setting " + s.str());
    seen[idx][static_cast<std::size_t>(outcome)] = true;
    tables[idx].counts[static_cast<std::size_t>(outcome)] = static_cast<double>(count);
  }
  if (!header_seen) throw ParseError("counts CSV is empty");
  if (tables.empty()) throw ParseError("counts CSV has no data rows");
  return tables;
}

std::string tomography_to_csv(const TomographySet& t) {
  std::ostringstream out;
  out << "projector,count,duration_s\n";
  for (std::size_t i = 0; i < t.projectors.size(); ++i) {
    out << t.projectors[i].str() << ","
        << static_cast<long long>(std::llround(t.counts[i])) << ","
        << format_double(t.duration_s) << "\n";
  }
  return out.str();
}

TomographySet tomography_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  TomographySet t;
  std::vector<std::pair<std::string, double>> rows;
  double duration = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "projector,count,duration_s")
        throw ParseError("line " + std::to_string(lineno) +
                         ": expected header 'projector,count,duration_s'");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != 3)
      throw ParseError("line " + std::to_string(lineno) + ": expected 3 fields");
    long long count = parse_count_field(cells[1], lineno);
    double d = parse_duration_field(cells[2], lineno);
    if (rows.empty()) {
      duration = d;
    } else if (std::abs(duration - d) > 1e-12) {
      throw ParseError("line " + std::to_string(lineno) + ": duration differs across rows");
    }
    rows.push_back({cells[0], static_cast<double>(count)});
  }
  if (!header_seen) throw ParseError("tomography CSV is empty");
  if (rows.empty()) throw ParseError("tomography CSV has no data rows");
  int n = static_cast<int>(rows.front().first.size());
  t.num_qubits = n;
  t.projectors = tomography_settings(n);
  t.counts.assign(t.projectors.size(), 0.0);
  t.duration_s = duration;
  std::vector<bool> seen(t.projectors.size(), false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    ProjectorString p;
    try {
      p = ProjectorString::parse(rows[r].first);
    } catch (const ParseError& e) {
      throw ParseError("projector '" + rows[r].first + "': " + e.what());
    }
    auto it = std::find(t.projectors.begin(), t.projectors.end(), p);
    if (it == t.projectors.end())
      throw ParseError("projector " + rows[r].first + " is not in the {H,V,D,R}^n family");
    std::size_t idx = static_cast<std::size_t>(it - t.projectors.begin());
    if (seen[idx])
      throw ParseError("projector " + rows[r].first + " appears twice");
    seen[idx] = true;
    t.counts[idx] = rows[r].second;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i])
      throw ParseError("projector " + t.projectors[i].str() + " is missing");
  return t;
}

std::string mle_to_json(const MleResult& r) {
  json j = json::parse(density_matrix_to_json(r.rho));
  j["meta"]["log_likelihood"] = r.log_likelihood;
  j["meta"]["iterations"] = r.iterations;
  j["meta"]["converged"] = r.converged;
  j["meta"]["initializer"] = r.initializer;
  return j.dump(2) + "\n";
}

namespace {

json report_json_object(const NonlocalityReport& r) {
  json j;
  j["schema_version"] = 1;
  json settings = json::array();
  for (const SettingStats& st : r.settings) {
    json s;
    s["setting"] = st.setting.str();
    s["expected_parity"] = st.expected_parity;
    s["fraction"] = st.fraction.value;
    s["fraction_sigma"] = st.fraction.sigma;
    s["n_events"] = st.fraction.n_events;
    s["expectation"] = st.expectation;
    s["expectation_sigma"] = st.expectation_sigma;
    settings.push_back(std::move(s));
  }
  j["settings"] = std::move(settings);
  j["S"] = r.S;
  j["S_sigma"] = r.S_sigma;
  j["lr_bound"] = r.lr_bound;
  j["lr_bound_sigma"] = r.lr_bound_sigma;
  j["counting_significance_sigma"] = r.counting_significance;
  j["mermin_significance_sigma"] = r.mermin_significance;
  return j;
}

}  // namespace

std::string report_to_json(const NonlocalityReport& r) {
  return report_json_object(r).dump(2) + "\n";
}

std::string report_to_csv(const NonlocalityReport& r) {
  std::ostringstream out;
  out << "statistic,value,sigma\n";
  for (const SettingStats& st : r.settings)
    out << "fraction_" << st.setting.str() << "," << format_double(st.fraction.value)
        << "," << format_double(st.fraction.sigma) << "\n";
  for (const SettingStats& st : r.settings)
    out << "expectation_" << st.setting.str() << "," << format_double(st.expectation)
        << "," << format_double(st.expectation_sigma) << "\n";
  out << "S," << format_double(r.S) << "," << format_double(r.S_sigma) << "\n";
  out << "lr_bound," << format_double(r.lr_bound) << ","
      << format_double(r.lr_bound_sigma) << "\n";
  out << "counting_significance," << format_double(r.counting_significance) << ",0\n";
  out << "mermin_significance," << format_double(r.mermin_significance) << ",0\n";
  return out.str();
}

std::string fraction_table_csv(const std::vector<CountsTable>& tables) {
  std::ostringstream out;
  out << "setting,outcome,fraction,sigma\n";
  for (const CountsTable& t : tables) {
    double total = t.total();
    if (total <= 0) throw std::invalid_argument("counts table is empty");
    for (std::size_t o = 0; o < t.counts.size(); ++o) {
      double f = t.counts[o] / total;
      double sigma = std::sqrt(std::max(f * (1.0 - f), 0.0) / total);
      out << t.setting.str() << "," << outcome_labels(t.setting, static_cast<int>(o))
          << "," << format_double(f) << "," << format_double(sigma) << "\n";
    }
  }
  return out.str();
}

}  // namespace clr
