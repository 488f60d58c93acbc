#include "clusterlr.h"

#include <cstring>
#include <new>
#include <string>

#include "clusterlr/rng.hpp"
#include "clusterlr/workflows.hpp"

// Handle definitions. Each opaque struct wraps exactly one core object;
// the C surface never exposes Eigen or std types.

struct clr_graph {
  clr::GraphSpec g;
};
struct clr_cert {
  clr::ParadoxCertificate c;
};
struct clr_state {
  clr::DensityMatrix rho;
};
struct clr_counts {
  clr::CountsTable t;
};
struct clr_report {
  clr::NonlocalityReport r;
};
struct clr_tomo {
  clr::TomographySet t;
};
struct clr_mle {
  clr::MleResult r;
};
struct clr_bundle {
  std::vector<clr::Artifact> artifacts;
  std::string summary;
};

namespace {

thread_local std::string g_last_error = "no error";

struct NoParadox : std::runtime_error {
  using std::runtime_error::runtime_error;
};

clr_status fail(clr_status code, const char* what) {
  g_last_error = what;
  return code;
}

// Runs f, translating exceptions to status codes.
template <typename F>
clr_status guarded(F&& f) {
  try {
    f();
    return CLR_OK;
  } catch (const clr::ParseError& e) {
    return fail(CLR_ERR_PARSE, e.what());
  } catch (const NoParadox& e) {
    return fail(CLR_ERR_NO_PARADOX, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(CLR_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(CLR_ERR_NUMERIC, e.what());
  }
}

template <typename T>
clr_status require(const T* p, const char* name) {
  if (p) return CLR_OK;
  return fail(CLR_ERR_INVALID_ARGUMENT, (std::string(name) + " is NULL").c_str());
}

#define CLR_REQUIRE(p)                              \
  do {                                              \
    clr_status s_ = require((p), #p);               \
    if (s_ != CLR_OK) return s_;                    \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

clr::RunConfig parse_config(const char* config_json) {
  return clr::RunConfig::from_json(config_json && *config_json ? config_json : "{}");
}

}  // namespace

const char* clr_version(void) { return "1.0.0"; }

const char* clr_status_name(clr_status status) {
  switch (status) {
    case CLR_OK: return "CLR_OK";
    case CLR_ERR_INVALID_ARGUMENT: return "CLR_ERR_INVALID_ARGUMENT";
    case CLR_ERR_PARSE: return "CLR_ERR_PARSE";
    case CLR_ERR_NO_PARADOX: return "CLR_ERR_NO_PARADOX";
    case CLR_ERR_NUMERIC: return "CLR_ERR_NUMERIC";
  }
  return "CLR_ERR_UNKNOWN";
}

const char* clr_last_error(void) { return g_last_error.c_str(); }

void clr_string_free(char* s) { delete[] s; }

uint64_t clr_derive_seed(uint64_t master, uint64_t stream) {
  return clr::derive_seed(master, stream);
}

/* ---- graphs and certificates ---- */

clr_status clr_graph_linear(int n, clr_graph** out) {
  CLR_REQUIRE(out);
  return guarded([&] { *out = new clr_graph{clr::GraphSpec::linear(n)}; });
}

clr_status clr_graph_tshape(int n, clr_graph** out) {
  CLR_REQUIRE(out);
  return guarded([&] { *out = new clr_graph{clr::GraphSpec::t_shaped(n)}; });
}

clr_status clr_graph_create(int n, const int* edges_u, const int* edges_v,
                            size_t num_edges, clr_graph** out) {
  CLR_REQUIRE(out);
  if (num_edges > 0) {
    CLR_REQUIRE(edges_u);
    CLR_REQUIRE(edges_v);
  }
  return guarded([&] {
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < num_edges; ++i) edges.push_back({edges_u[i], edges_v[i]});
    *out = new clr_graph{clr::GraphSpec::create(n, std::move(edges))};
  });
}

clr_status clr_graph_parse(const char* text, clr_graph** out) {
  CLR_REQUIRE(text);
  CLR_REQUIRE(out);
  return guarded([&] { *out = new clr_graph{clr::GraphSpec::parse(text)}; });
}

clr_status clr_graph_format(const clr_graph* g, char** out) {
  CLR_REQUIRE(g);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(g->g.format()); });
}

void clr_graph_free(clr_graph* g) { delete g; }

clr_status clr_derive_paradox(const clr_graph* g, const int* support,
                              size_t support_len, int max_product_size,
                              clr_cert** out) {
  CLR_REQUIRE(g);
  CLR_REQUIRE(support);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::vector<int> sup(support, support + support_len);
    auto cert = clr::derive_ghz_paradox(g->g, std::move(sup), max_product_size);
    if (!cert)
      throw NoParadox("no GHZ-type paradox certificate exists on this support");
    *out = new clr_cert{std::move(*cert)};
  });
}

clr_status clr_cert_parse_json(const char* text, clr_cert** out) {
  CLR_REQUIRE(text);
  CLR_REQUIRE(out);
  return guarded([&] { *out = new clr_cert{clr::certificate_from_json(text)}; });
}

clr_status clr_cert_to_json(const clr_cert* c, const clr_graph* g, char** out) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(g);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::certificate_to_json(c->c, g->g)); });
}

clr_status clr_cert_transcript(const clr_cert* c, const clr_graph* g, char** out) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(g);
  CLR_REQUIRE(out);
  return guarded(
      [&] { *out = dup_string(clr::certificate_transcript(c->c, g->g)); });
}

clr_status clr_cert_verify(const clr_cert* c, const clr_graph* g, int* ok) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(g);
  CLR_REQUIRE(ok);
  return guarded([&] { *ok = clr::verify_certificate(c->c, g->g) ? 1 : 0; });
}

clr_status clr_cert_lr_contradiction(const clr_cert* c, int* ok) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(ok);
  return guarded([&] { *ok = clr::paradox_lr_contradiction(c->c) ? 1 : 0; });
}

void clr_cert_free(clr_cert* c) { delete c; }

/* ---- states ---- */

clr_status clr_state_named(const char* name, clr_state** out) {
  CLR_REQUIRE(name);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::string n = name;
    if (n == "bell") {
      *out = new clr_state{clr::densify(clr::bell_phi_plus())};
    } else if (n == "ghz3+") {
      *out = new clr_state{clr::densify(clr::ghz3(+1))};
    } else if (n == "ghz3-") {
      *out = new clr_state{clr::densify(clr::ghz3(-1))};
    } else if (n == "ghz4") {
      *out = new clr_state{clr::densify(clr::ghz4())};
    } else if (n == "rho_phi") {
      *out = new clr_state{clr::rho_phi()};
    } else if (n == "rho_psi") {
      *out = new clr_state{clr::rho_psi()};
    } else {
      throw std::invalid_argument("unknown state name '" + n + "'");
    }
  });
}

clr_status clr_state_cluster(const clr_graph* g, clr_state** out) {
  CLR_REQUIRE(g);
  CLR_REQUIRE(out);
  return guarded(
      [&] { *out = new clr_state{clr::densify(clr::cluster_state(g->g))}; });
}

clr_status clr_state_pipeline(double white_noise_p, const char* stage,
                              clr_state** out) {
  CLR_REQUIRE(stage);
  CLR_REQUIRE(out);
  return guarded([&] {
    clr::NoiseSpec noise;
    noise.white_noise_p = white_noise_p;
    clr::PipelineResult r = clr::generation_pipeline(noise);
    std::string s = stage;
    if (s == "fusion") {
      *out = new clr_state{std::move(r.post_fusion)};
    } else if (s == "noise") {
      *out = new clr_state{std::move(r.post_noise)};
    } else if (s == "final") {
      *out = new clr_state{std::move(r.final_state)};
    } else {
      throw std::invalid_argument("unknown pipeline stage '" + s + "'");
    }
  });
}

clr_status clr_state_num_qubits(const clr_state* s, int* out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(out);
  *out = s->rho.num_qubits();
  return CLR_OK;
}

clr_status clr_state_to_json(const clr_state* s, char** out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::density_matrix_to_json(s->rho)); });
}

clr_status clr_state_from_json(const char* text, clr_state** out) {
  CLR_REQUIRE(text);
  CLR_REQUIRE(out);
  return guarded(
      [&] { *out = new clr_state{clr::density_matrix_from_json(text)}; });
}

clr_status clr_state_fidelity(const clr_state* a, const clr_state* b, double* out) {
  CLR_REQUIRE(a);
  CLR_REQUIRE(b);
  CLR_REQUIRE(out);
  return guarded([&] { *out = clr::fidelity(a->rho, b->rho); });
}

clr_status clr_state_expectation(const clr_state* s, const char* pauli,
                                 double* out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(pauli);
  CLR_REQUIRE(out);
  return guarded([&] {
    *out = clr::expectation(s->rho, clr::PauliString::parse(pauli));
  });
}

clr_status clr_state_add_white_noise(const clr_state* s, double p,
                                     clr_state** out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(out);
  return guarded(
      [&] { *out = new clr_state{clr::add_white_noise(s->rho, p)}; });
}

clr_status clr_state_dephase(const clr_state* s, int qubit, const char* basis,
                             double lambda, clr_state** out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(basis);
  CLR_REQUIRE(out);
  return guarded([&] {
    *out = new clr_state{
        clr::dephase(s->rho, qubit, clr::basis_pair(basis), lambda)};
  });
}

clr_status clr_state_partial_trace(const clr_state* s, const int* keep,
                                   size_t keep_len, clr_state** out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(keep);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::vector<int> k(keep, keep + keep_len);
    *out = new clr_state{clr::partial_trace(s->rho, k)};
  });
}

clr_status clr_state_conditional(const clr_state* s, int qubit, char label,
                                 clr_state** out, double* prob) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(out);
  CLR_REQUIRE(prob);
  return guarded([&] {
    auto [rho, p] = clr::conditional_state(
        s->rho, qubit, clr::pol_ket(clr::pol_from_char(label)));
    *out = new clr_state{std::move(rho)};
    *prob = p;
  });
}

clr_status clr_state_eigenvalues(const clr_state* s, double* buf, size_t len) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(buf);
  return guarded([&] {
    std::vector<double> vals = clr::eigenvalues(s->rho);
    if (len < vals.size())
      throw std::invalid_argument("eigenvalue buffer is too small");
    for (std::size_t i = 0; i < vals.size(); ++i) buf[i] = vals[i];
  });
}

void clr_state_free(clr_state* s) { delete s; }

/* ---- counting and analysis ---- */

clr_status clr_counts_simulate(const clr_state* s, const char* setting,
                               double expected_total, uint64_t seed,
                               double duration_s, clr_counts** out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(setting);
  CLR_REQUIRE(out);
  return guarded([&] {
    clr::Setting set = clr::Setting::parse(setting);
    std::vector<double> probs = clr::outcome_probabilities(s->rho, set);
    *out = new clr_counts{
        clr::sample_counts(set, probs, expected_total, seed, duration_s)};
  });
}

clr_status clr_counts_to_csv(const clr_counts* c, char** out) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::counts_to_csv({c->t})); });
}

clr_status clr_counts_array_to_csv(const clr_counts* const* arr, size_t count,
                                   char** out) {
  CLR_REQUIRE(arr);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::vector<clr::CountsTable> tables;
    tables.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (!arr[i]) throw std::invalid_argument("counts array holds a NULL entry");
      tables.push_back(arr[i]->t);
    }
    *out = dup_string(clr::counts_to_csv(tables));
  });
}

clr_status clr_counts_parse_csv(const char* text, clr_counts*** out,
                                size_t* count) {
  CLR_REQUIRE(text);
  CLR_REQUIRE(out);
  CLR_REQUIRE(count);
  return guarded([&] {
    std::vector<clr::CountsTable> tables = clr::counts_from_csv(text);
    clr_counts** arr = new clr_counts*[tables.size()];
    for (std::size_t i = 0; i < tables.size(); ++i)
      arr[i] = new clr_counts{std::move(tables[i])};
    *out = arr;
    *count = tables.size();
  });
}

void clr_counts_array_free(clr_counts** arr, size_t count) {
  if (!arr) return;
  for (size_t i = 0; i < count; ++i) delete arr[i];
  delete[] arr;
}

clr_status clr_counts_setting(const clr_counts* c, char** out) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(c->t.setting.str()); });
}

clr_status clr_counts_fraction(const clr_counts* c, int expected_parity,
                               double* value, double* sigma, int64_t* n_events) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(value);
  CLR_REQUIRE(sigma);
  return guarded([&] {
    clr::FractionStat f = clr::fraction_predicted(c->t, expected_parity);
    *value = f.value;
    *sigma = f.sigma;
    if (n_events) *n_events = f.n_events;
  });
}

clr_status clr_counts_expectation(const clr_counts* c, double* value,
                                  double* sigma) {
  CLR_REQUIRE(c);
  CLR_REQUIRE(value);
  CLR_REQUIRE(sigma);
  return guarded([&] {
    auto [e, s] = clr::expectation_from_counts(c->t);
    *value = e;
    *sigma = s;
  });
}

void clr_counts_free(clr_counts* c) { delete c; }

clr_status clr_analyze(clr_counts* const* tables, size_t count,
                       clr_report** out) {
  CLR_REQUIRE(tables);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::vector<clr::CountsTable> ts;
    for (size_t i = 0; i < count; ++i) {
      if (!tables[i]) throw std::invalid_argument("counts table is NULL");
      ts.push_back(tables[i]->t);
    }
    *out = new clr_report{clr::analyze_counts(ts, clr::rho_psi())};
  });
}

clr_status clr_report_to_json(const clr_report* r, char** out) {
  CLR_REQUIRE(r);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::report_to_json(r->r)); });
}

clr_status clr_report_to_csv(const clr_report* r, char** out) {
  CLR_REQUIRE(r);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::report_to_csv(r->r)); });
}

clr_status clr_report_value(const clr_report* r, const char* name, double* out) {
  CLR_REQUIRE(r);
  CLR_REQUIRE(name);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::string n = name;
    if (n == "S") {
      *out = r->r.S;
    } else if (n == "S_sigma") {
      *out = r->r.S_sigma;
    } else if (n == "lr_bound") {
      *out = r->r.lr_bound;
    } else if (n == "lr_bound_sigma") {
      *out = r->r.lr_bound_sigma;
    } else if (n == "counting_significance") {
      *out = r->r.counting_significance;
    } else if (n == "mermin_significance") {
      *out = r->r.mermin_significance;
    } else {
      for (const clr::SettingStats& st : r->r.settings) {
        if (n == "fraction_" + st.setting.str()) {
          *out = st.fraction.value;
          return;
        }
        if (n == "expectation_" + st.setting.str()) {
          *out = st.expectation;
          return;
        }
      }
      throw std::invalid_argument("unknown report value '" + n + "'");
    }
  });
}

void clr_report_free(clr_report* r) { delete r; }

/* ---- tomography ---- */

clr_status clr_tomo_simulate(const clr_state* s, double rate_constant,
                             double duration_s, uint64_t seed, clr_tomo** out) {
  CLR_REQUIRE(s);
  CLR_REQUIRE(out);
  return guarded([&] {
    *out = new clr_tomo{
        clr::simulate_tomography(s->rho, rate_constant, duration_s, seed)};
  });
}

clr_status clr_tomo_to_csv(const clr_tomo* t, char** out) {
  CLR_REQUIRE(t);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::tomography_to_csv(t->t)); });
}

clr_status clr_tomo_parse_csv(const char* text, clr_tomo** out) {
  CLR_REQUIRE(text);
  CLR_REQUIRE(out);
  return guarded([&] { *out = new clr_tomo{clr::tomography_from_csv(text)}; });
}

void clr_tomo_free(clr_tomo* t) { delete t; }

clr_status clr_mle_reconstruct(const clr_tomo* t, double tol, int max_iter,
                               clr_mle** out) {
  CLR_REQUIRE(t);
  CLR_REQUIRE(out);
  return guarded(
      [&] { *out = new clr_mle{clr::mle_reconstruct(t->t, tol, max_iter)}; });
}

clr_status clr_mle_state(const clr_mle* m, clr_state** out) {
  CLR_REQUIRE(m);
  CLR_REQUIRE(out);
  return guarded([&] { *out = new clr_state{m->r.rho}; });
}

clr_status clr_mle_info(const clr_mle* m, double* log_likelihood,
                        int* iterations, int* converged) {
  CLR_REQUIRE(m);
  if (log_likelihood) *log_likelihood = m->r.log_likelihood;
  if (iterations) *iterations = m->r.iterations;
  if (converged) *converged = m->r.converged ? 1 : 0;
  return CLR_OK;
}

clr_status clr_mle_to_json(const clr_mle* m, char** out) {
  CLR_REQUIRE(m);
  CLR_REQUIRE(out);
  return guarded([&] { *out = dup_string(clr::mle_to_json(m->r)); });
}

void clr_mle_free(clr_mle* m) { delete m; }

clr_status clr_ghz_witness(const clr_state* three_qubit, int sign, double* out) {
  CLR_REQUIRE(three_qubit);
  CLR_REQUIRE(out);
  return guarded([&] { *out = clr::ghz_witness(three_qubit->rho, sign); });
}

/* ---- end-to-end runs ---- */

clr_status clr_reproduce(const char* config_json, clr_bundle** out) {
  CLR_REQUIRE(out);
  return guarded([&] {
    clr::ReproduceOutcome r = clr::run_reproduce(parse_config(config_json));
    *out = new clr_bundle{std::move(r.artifacts), std::move(r.summary)};
  });
}

clr_status clr_derive_bundle(const char* config_json, clr_bundle** out) {
  CLR_REQUIRE(out);
  return guarded([&] {
    clr::RunConfig config = parse_config(config_json);
    clr::DeriveOutcome r;
    try {
      r = clr::run_derive(config);
    } catch (const std::runtime_error& e) {
      throw NoParadox(e.what());
    }
    std::string transcript;
    for (const clr::Artifact& a : r.artifacts)
      if (a.name == "transcript.txt") transcript = a.content;
    *out = new clr_bundle{std::move(r.artifacts), std::move(transcript)};
  });
}

clr_status clr_analyze_bundle(const char* counts_csv, clr_bundle** out) {
  CLR_REQUIRE(counts_csv);
  CLR_REQUIRE(out);
  return guarded([&] {
    std::vector<clr::CountsTable> tables = clr::counts_from_csv(counts_csv);
    clr::AnalyzeOutcome r = clr::run_analyze(tables);
    std::string summary;
    for (const clr::Artifact& a : r.artifacts)
      if (a.name == "report.csv") summary = a.content;
    *out = new clr_bundle{std::move(r.artifacts), std::move(summary)};
  });
}

clr_status clr_bundle_count(const clr_bundle* b, size_t* out) {
  CLR_REQUIRE(b);
  CLR_REQUIRE(out);
  *out = b->artifacts.size();
  return CLR_OK;
}

const char* clr_bundle_name(const clr_bundle* b, size_t index) {
  if (!b || index >= b->artifacts.size()) return nullptr;
  return b->artifacts[index].name.c_str();
}

const char* clr_bundle_content(const clr_bundle* b, size_t index) {
  if (!b || index >= b->artifacts.size()) return nullptr;
  return b->artifacts[index].content.c_str();
}

const char* clr_bundle_summary(const clr_bundle* b) {
  if (!b) return "";
  return b->summary.c_str();
}

void clr_bundle_free(clr_bundle* b) { delete b; }
