/* C interface to the clusterlr library.
 *
 * Every function returns clr_status (CLR_OK on success) and reports
 * results through out-parameters. On failure the out-parameters are
 * untouched and clr_last_error() describes the problem for the calling
 * thread. Objects are opaque handles released with their _free function;
 * strings returned through char** are owned by the caller and released
 * with clr_string_free. Qubits and graph vertices are numbered from 1.
 */
#ifndef CLUSTERLR_H
#define CLUSTERLR_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clr_status {
  CLR_OK = 0,
  CLR_ERR_INVALID_ARGUMENT = 1, /* bad parameter or contract violation */
  CLR_ERR_PARSE = 2,            /* malformed textual input */
  CLR_ERR_NO_PARADOX = 3,       /* derivation found no certificate */
  CLR_ERR_NUMERIC = 4,          /* numerical failure (non-PSD input, ...) */
} clr_status;

const char* clr_version(void);
const char* clr_status_name(clr_status status);
/* Message from the most recent failing call on this thread; never NULL. */
const char* clr_last_error(void);
void clr_string_free(char* s);

/* Sub-stream seed (master XOR a hash of the stream index); the same rule
 * the end-to-end runs use, so callers can reproduce individual stages. */
uint64_t clr_derive_seed(uint64_t master, uint64_t stream);

/* ---- graphs and paradox certificates ---------------------------------- */

typedef struct clr_graph clr_graph;
typedef struct clr_cert clr_cert;

clr_status clr_graph_linear(int n, clr_graph** out);
clr_status clr_graph_tshape(int n, clr_graph** out);
clr_status clr_graph_create(int n, const int* edges_u, const int* edges_v,
                            size_t num_edges, clr_graph** out);
/* Text format: "n=<int>" line, then one "<u> <v>" line per edge. */
clr_status clr_graph_parse(const char* text, clr_graph** out);
clr_status clr_graph_format(const clr_graph* g, char** out);
void clr_graph_free(clr_graph* g);

/* Search generator products of up to max_product_size factors. Fails
 * with CLR_ERR_NO_PARADOX when the support admits no certificate. */
clr_status clr_derive_paradox(const clr_graph* g, const int* support,
                              size_t support_len, int max_product_size,
                              clr_cert** out);
clr_status clr_cert_parse_json(const char* text, clr_cert** out);
clr_status clr_cert_to_json(const clr_cert* c, const clr_graph* g, char** out);
clr_status clr_cert_transcript(const clr_cert* c, const clr_graph* g, char** out);
/* ok = 1 when every string stabilizes the graph state with its stated
 * sign and the parity/sign conditions hold. */
clr_status clr_cert_verify(const clr_cert* c, const clr_graph* g, int* ok);
/* ok = 1 when assignment enumeration confirms the local-realism clash. */
clr_status clr_cert_lr_contradiction(const clr_cert* c, int* ok);
void clr_cert_free(clr_cert* c);

/* ---- states ------------------------------------------------------------ */

typedef struct clr_state clr_state;

/* Names: "bell", "ghz3+", "ghz3-", "ghz4", "rho_phi", "rho_psi". */
clr_status clr_state_named(const char* name, clr_state** out);
clr_status clr_state_cluster(const clr_graph* g, clr_state** out);
/* The four-photon source pipeline; stage is "fusion", "noise", or
 * "final" (after the built-in D/A dephasing of qubit 4). */
clr_status clr_state_pipeline(double white_noise_p, const char* stage,
                              clr_state** out);
clr_status clr_state_num_qubits(const clr_state* s, int* out);
clr_status clr_state_to_json(const clr_state* s, char** out);
clr_status clr_state_from_json(const char* text, clr_state** out);
clr_status clr_state_fidelity(const clr_state* a, const clr_state* b, double* out);
/* text is a signed Pauli string such as "-YXYZ" (real phase only). */
clr_status clr_state_expectation(const clr_state* s, const char* pauli, double* out);
clr_status clr_state_add_white_noise(const clr_state* s, double p, clr_state** out);
/* basis is "HV", "DA", or "RL". */
clr_status clr_state_dephase(const clr_state* s, int qubit, const char* basis,
                             double lambda, clr_state** out);
clr_status clr_state_partial_trace(const clr_state* s, const int* keep,
                                   size_t keep_len, clr_state** out);
/* label is one of H,V,D,A,R,L; prob receives the branch probability. */
clr_status clr_state_conditional(const clr_state* s, int qubit, char label,
                                 clr_state** out, double* prob);
/* Descending spectrum into buf (length >= 2^n). */
clr_status clr_state_eigenvalues(const clr_state* s, double* buf, size_t len);
void clr_state_free(clr_state* s);

/* ---- counting and analysis -------------------------------------------- */

typedef struct clr_counts clr_counts;
typedef struct clr_report clr_report;

/* setting is e.g. "XYYX"; Poisson counts around expected_total. */
clr_status clr_counts_simulate(const clr_state* s, const char* setting,
                               double expected_total, uint64_t seed,
                               double duration_s, clr_counts** out);
clr_status clr_counts_to_csv(const clr_counts* c, char** out);
/* Several tables in one CSV (single header, one block per setting). */
clr_status clr_counts_array_to_csv(const clr_counts* const* arr, size_t count,
                                   char** out);
/* One CSV may hold several settings; returns them all. Caller frees each
 * handle and the array via clr_counts_array_free. */
clr_status clr_counts_parse_csv(const char* text, clr_counts*** out, size_t* count);
void clr_counts_array_free(clr_counts** arr, size_t count);
clr_status clr_counts_setting(const clr_counts* c, char** out);
clr_status clr_counts_fraction(const clr_counts* c, int expected_parity,
                               double* value, double* sigma, int64_t* n_events);
clr_status clr_counts_expectation(const clr_counts* c, double* value, double* sigma);
void clr_counts_free(clr_counts* c);

/* Tables must cover settings XXXX, XYYX, YXYX, YYXX exactly once; the
 * parities are read from the ideal mixed target state. */
clr_status clr_analyze(clr_counts* const* tables, size_t count, clr_report** out);
clr_status clr_report_to_json(const clr_report* r, char** out);
clr_status clr_report_to_csv(const clr_report* r, char** out);
/* name: "S", "S_sigma", "lr_bound", "lr_bound_sigma",
 * "counting_significance", "mermin_significance", "fraction_<SETTING>",
 * "expectation_<SETTING>". */
clr_status clr_report_value(const clr_report* r, const char* name, double* out);
void clr_report_free(clr_report* r);

/* ---- tomography --------------------------------------------------------- */

typedef struct clr_tomo clr_tomo;
typedef struct clr_mle clr_mle;

clr_status clr_tomo_simulate(const clr_state* s, double rate_constant,
                             double duration_s, uint64_t seed, clr_tomo** out);
clr_status clr_tomo_to_csv(const clr_tomo* t, char** out);
clr_status clr_tomo_parse_csv(const char* text, clr_tomo** out);
void clr_tomo_free(clr_tomo* t);

clr_status clr_mle_reconstruct(const clr_tomo* t, double tol, int max_iter,
                               clr_mle** out);
clr_status clr_mle_state(const clr_mle* m, clr_state** out);
clr_status clr_mle_info(const clr_mle* m, double* log_likelihood,
                        int* iterations, int* converged);
clr_status clr_mle_to_json(const clr_mle* m, char** out);
void clr_mle_free(clr_mle* m);

/* sign is +1 or -1; W = 1/2 - overlap with the corresponding GHZ3. */
clr_status clr_ghz_witness(const clr_state* three_qubit, int sign, double* out);

/* ---- end-to-end runs ---------------------------------------------------- */

typedef struct clr_bundle clr_bundle;

/* config_json may be "{}" for all defaults; see the config schema in the
 * README. Artifact contents depend only on the config, byte for byte. */
clr_status clr_reproduce(const char* config_json, clr_bundle** out);
clr_status clr_derive_bundle(const char* config_json, clr_bundle** out);
/* Analysis artifacts for counts CSV text (report.json and friends). */
clr_status clr_analyze_bundle(const char* counts_csv, clr_bundle** out);
clr_status clr_bundle_count(const clr_bundle* b, size_t* out);
const char* clr_bundle_name(const clr_bundle* b, size_t index);
const char* clr_bundle_content(const clr_bundle* b, size_t index);
/* Convenience: the bundle's summary.txt, or "" when absent. */
const char* clr_bundle_summary(const clr_bundle* b);
void clr_bundle_free(clr_bundle* b);

#ifdef __cplusplus
}
#endif

#endif /* CLUSTERLR_H */
