// Command-line front end. Talks to the library exclusively through the
// C API in clusterlr.h; JSON is used only to assemble config documents.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "clusterlr.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;     // bad flags or argument values
constexpr int kExitData = 3;      // unreadable or malformed input
constexpr int kExitAnalysis = 4;  // derivation or numerics failed

// Sub-stream indices, matching the layout of the end-to-end run so a
// standalone stage reproduces the corresponding stage of `reproduce`.
constexpr uint64_t kStreamCounts = 0;  // +k for canonical setting k
constexpr uint64_t kStreamTomography = 8;

struct Fail {
  int code;
  std::string message;
};

int exit_code(clr_status s) {
  switch (s) {
    case CLR_OK:
      return 0;
    case CLR_ERR_INVALID_ARGUMENT:
      return kExitUsage;
    case CLR_ERR_PARSE:
      return kExitData;
    default:
      return kExitAnalysis;
  }
}

void check(clr_status s) {
  if (s != CLR_OK) throw Fail{exit_code(s), clr_last_error()};
}

std::string take_string(char* s) {
  std::string out(s ? s : "");
  clr_string_free(s);
  return out;
}

template <typename T, void (*F)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { F(p); }
};
using GraphPtr = std::unique_ptr<clr_graph, HandleDeleter<clr_graph, clr_graph_free>>;
using CertPtr = std::unique_ptr<clr_cert, HandleDeleter<clr_cert, clr_cert_free>>;
using StatePtr = std::unique_ptr<clr_state, HandleDeleter<clr_state, clr_state_free>>;
using TomoPtr = std::unique_ptr<clr_tomo, HandleDeleter<clr_tomo, clr_tomo_free>>;
using MlePtr = std::unique_ptr<clr_mle, HandleDeleter<clr_mle, clr_mle_free>>;
using BundlePtr = std::unique_ptr<clr_bundle, HandleDeleter<clr_bundle, clr_bundle_free>>;

struct CountsList {
  std::vector<clr_counts*> tables;
  ~CountsList() {
    for (clr_counts* c : tables) clr_counts_free(c);
  }
};

// "-" means stdin.
std::string read_input(const std::string& path) {
  std::ostringstream buf;
  if (path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Fail{kExitData, "cannot open '" + path + "'"};
    buf << in.rdbuf();
    if (in.bad()) throw Fail{kExitData, "cannot read '" + path + "'"};
  }
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Fail{kExitData, "cannot open '" + path.string() + "' for writing"};
  out << content;
  if (!out) throw Fail{kExitData, "cannot write '" + path.string() + "'"};
}

// "-" means stdout.
void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  write_file(path, content);
}

void write_bundle(const clr_bundle* b, const std::string& out_dir) {
  size_t count = 0;
  check(clr_bundle_count(b, &count));
  fs::create_directories(out_dir);
  for (size_t i = 0; i < count; ++i)
    write_file(fs::path(out_dir) / clr_bundle_name(b, i), clr_bundle_content(b, i));
  std::cerr << "wrote " << count << " files to " << out_dir << "\n";
}

int parse_int(const std::string& text, const std::string& what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Fail{kExitUsage, "invalid " + what + " '" + text + "'"};
  return value;
}

// "1-4" or "1,2,3,4" (forms may mix: "1,3-5").
std::vector<int> parse_support(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    auto dash = token.find('-', 1);
    if (dash != std::string::npos) {
      int lo = parse_int(token.substr(0, dash), "support");
      int hi = parse_int(token.substr(dash + 1), "support");
      if (hi < lo) throw Fail{kExitUsage, "empty support range '" + token + "'"};
      for (int q = lo; q <= hi; ++q) out.push_back(q);
    } else {
      out.push_back(parse_int(token, "support"));
    }
  }
  if (out.empty()) throw Fail{kExitUsage, "support is empty"};
  return out;
}

// Accepts the presets tshape:<n> and linear:<n>, otherwise a file in the
// "n=<int>" + edge-lines format ("-" for stdin).
GraphPtr resolve_graph(const std::string& arg) {
  clr_graph* g = nullptr;
  auto colon = arg.find(':');
  if (colon != std::string::npos) {
    std::string kind = arg.substr(0, colon);
    if (kind == "tshape" || kind == "linear") {
      int n = parse_int(arg.substr(colon + 1), "graph preset size");
      check(kind == "tshape" ? clr_graph_tshape(n, &g) : clr_graph_linear(n, &g));
      return GraphPtr(g);
    }
  }
  std::string text = read_input(arg);
  check(clr_graph_parse(text.c_str(), &g));
  return GraphPtr(g);
}

struct DeriveOpts {
  std::string graph = "tshape:5";
  std::string support = "1-4";
  int max_product_size = 3;
  std::string out_dir = ".";
};

int cmd_derive(const DeriveOpts& o) {
  GraphPtr g = resolve_graph(o.graph);
  std::vector<int> support = parse_support(o.support);
  clr_cert* cert = nullptr;
  check(clr_derive_paradox(g.get(), support.data(), support.size(),
                           o.max_product_size, &cert));
  CertPtr c(cert);
  char* json = nullptr;
  check(clr_cert_to_json(c.get(), g.get(), &json));
  char* transcript = nullptr;
  check(clr_cert_transcript(c.get(), g.get(), &transcript));
  std::string transcript_text = take_string(transcript);
  fs::create_directories(o.out_dir);
  write_file(fs::path(o.out_dir) / "certificate.json", take_string(json));
  write_file(fs::path(o.out_dir) / "transcript.txt", transcript_text);
  std::cout << transcript_text;
  return 0;
}

struct StateOpts {
  std::string name;
  std::string cluster;
  std::string stage;
  double noise_p = 0.625;
  std::string out = "-";
};

int cmd_state(const StateOpts& o) {
  clr_state* s = nullptr;
  if (!o.name.empty()) {
    check(clr_state_named(o.name.c_str(), &s));
  } else if (!o.cluster.empty()) {
    GraphPtr g = resolve_graph(o.cluster);
    check(clr_state_cluster(g.get(), &s));
  } else {
    check(clr_state_pipeline(o.noise_p, o.stage.c_str(), &s));
  }
  StatePtr sp(s);
  char* json = nullptr;
  check(clr_state_to_json(sp.get(), &json));
  write_output(o.out, take_string(json));
  return 0;
}

struct SimulateOpts {
  double noise_p = 0.625;
  double events = 1900;
  uint64_t seed = 20210906;
  double duration = 60;
  std::string out = "-";
};

int cmd_simulate(const SimulateOpts& o) {
  clr_state* s = nullptr;
  check(clr_state_pipeline(o.noise_p, "final", &s));
  StatePtr sp(s);
  static const char* kSettings[4] = {"XXXX", "XYYX", "YXYX", "YYXX"};
  CountsList list;
  for (uint64_t k = 0; k < 4; ++k) {
    clr_counts* c = nullptr;
    check(clr_counts_simulate(sp.get(), kSettings[k], o.events,
                              clr_derive_seed(o.seed, kStreamCounts + k),
                              o.duration, &c));
    list.tables.push_back(c);
  }
  char* csv = nullptr;
  check(clr_counts_array_to_csv(list.tables.data(), list.tables.size(), &csv));
  write_output(o.out, take_string(csv));
  return 0;
}

struct TomoOpts {
  std::string in;
  double noise_p = 0.625;
  double rate = 256.0 / 23.0;
  double duration = 60;
  uint64_t seed = 20210906;
  double tol = 1e-10;
  int max_iter = 5000;
  bool no_mle = false;
  std::string out_dir = ".";
};

int cmd_tomo(const TomoOpts& o) {
  clr_tomo* t = nullptr;
  if (!o.in.empty()) {
    std::string text = read_input(o.in);
    check(clr_tomo_parse_csv(text.c_str(), &t));
  } else {
    clr_state* s = nullptr;
    check(clr_state_pipeline(o.noise_p, "final", &s));
    StatePtr sp(s);
    check(clr_tomo_simulate(sp.get(), o.rate, o.duration,
                            clr_derive_seed(o.seed, kStreamTomography), &t));
  }
  TomoPtr tp(t);
  fs::create_directories(o.out_dir);
  if (o.in.empty()) {
    char* csv = nullptr;
    check(clr_tomo_to_csv(tp.get(), &csv));
    write_file(fs::path(o.out_dir) / "tomography_counts.csv", take_string(csv));
  }
  if (o.no_mle) return 0;

  clr_mle* m = nullptr;
  check(clr_mle_reconstruct(tp.get(), o.tol, o.max_iter, &m));
  MlePtr mp(m);
  char* json = nullptr;
  check(clr_mle_to_json(mp.get(), &json));
  write_file(fs::path(o.out_dir) / "rho_mle.json", take_string(json));

  double ll = 0;
  int iterations = 0, converged = 0;
  check(clr_mle_info(mp.get(), &ll, &iterations, &converged));
  std::cout << "log-likelihood " << ll << " after " << iterations
            << " iterations" << (converged ? "" : " (not converged)") << "\n";
  clr_state* rec = nullptr;
  check(clr_mle_state(mp.get(), &rec));
  StatePtr rp(rec);
  int n = 0;
  check(clr_state_num_qubits(rp.get(), &n));
  if (n == 4) {
    clr_state* target = nullptr;
    check(clr_state_named("rho_psi", &target));
    StatePtr tgt(target);
    double f = 0;
    check(clr_state_fidelity(rp.get(), tgt.get(), &f));
    std::cout << "fidelity to the ideal mixed target: " << f << "\n";
  }
  return 0;
}

struct AnalyzeOpts {
  std::string in;
  std::string out_dir = ".";
};

int cmd_analyze(const AnalyzeOpts& o) {
  std::string text = read_input(o.in);
  clr_bundle* b = nullptr;
  check(clr_analyze_bundle(text.c_str(), &b));
  BundlePtr bp(b);
  write_bundle(bp.get(), o.out_dir);
  size_t count = 0;
  check(clr_bundle_count(bp.get(), &count));
  for (size_t i = 0; i < count; ++i)
    if (std::string(clr_bundle_name(bp.get(), i)) == "report.csv")
      std::cout << clr_bundle_content(bp.get(), i);
  return 0;
}

struct ReproduceOpts {
  std::string config;
  std::string out_dir = ".";
  uint64_t seed = 0;
  bool seed_set = false;
  double events = 0;
  bool events_set = false;
  double noise_p = 0;
  bool noise_set = false;
};

int cmd_reproduce(const ReproduceOpts& o) {
  nlohmann::json cfg = nlohmann::json::object();
  if (!o.config.empty()) {
    cfg = nlohmann::json::parse(read_input(o.config), nullptr, false);
    if (cfg.is_discarded() || !cfg.is_object())
      throw Fail{kExitData, "config '" + o.config + "' is not a JSON object"};
  }
  if (o.seed_set) cfg["master_seed"] = o.seed;
  if (o.events_set) cfg["events_per_setting"] = o.events;
  if (o.noise_set) cfg["white_noise_p"] = o.noise_p;
  clr_bundle* b = nullptr;
  check(clr_reproduce(cfg.dump().c_str(), &b));
  BundlePtr bp(b);
  write_bundle(bp.get(), o.out_dir);
  std::cout << clr_bundle_summary(bp.get());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "graph-state paradox derivation and four-photon mixed-state simulation"};
  app.set_version_flag("--version", [] { return std::string(clr_version()); });
  app.require_subcommand(1);

  DeriveOpts derive;
  CLI::App* cmd = app.add_subcommand(
      "derive", "derive a loss-tolerant GHZ-type paradox certificate");
  cmd->add_option("--graph", derive.graph,
                  "tshape:<n>, linear:<n>, or a graph file")
      ->capture_default_str();
  cmd->add_option("--support", derive.support,
                  "surviving qubits, e.g. 1-4 or 1,2,3,4")
      ->capture_default_str();
  cmd->add_option("--max-product-size", derive.max_product_size,
                  "largest generator product to search")
      ->capture_default_str();
  cmd->add_option("--out-dir", derive.out_dir, "artifact directory")
      ->capture_default_str();

  StateOpts state;
  cmd = app.add_subcommand("state", "emit a model state as JSON");
  auto* source = cmd->add_option_group("source")->require_option(1);
  source->add_option("--name", state.name,
                     "bell, ghz3+, ghz3-, ghz4, rho_phi, or rho_psi");
  source->add_option("--cluster", state.cluster,
                     "graph state for tshape:<n>, linear:<n>, or a graph file");
  source->add_option("--pipeline", state.stage,
                     "source pipeline stage: fusion, noise, or final");
  cmd->add_option("--noise-p", state.noise_p,
                  "white-noise admixture for --pipeline")
      ->capture_default_str();
  cmd->add_option("--out", state.out, "output file (- for stdout)")
      ->capture_default_str();

  SimulateOpts simulate;
  cmd = app.add_subcommand(
      "simulate", "simulate counts for the four canonical settings");
  cmd->add_option("--noise-p", simulate.noise_p, "white-noise admixture")
      ->capture_default_str();
  cmd->add_option("--events-per-setting", simulate.events,
                  "expected events per setting")
      ->capture_default_str();
  cmd->add_option("--seed", simulate.seed, "master seed")
      ->capture_default_str();
  cmd->add_option("--duration", simulate.duration, "acquisition seconds")
      ->capture_default_str();
  cmd->add_option("--out", simulate.out, "counts CSV (- for stdout)")
      ->capture_default_str();

  TomoOpts tomo;
  cmd = app.add_subcommand(
      "tomo", "simulate tomography counts and reconstruct the state");
  cmd->add_option("--in", tomo.in,
                  "tomography CSV to reconstruct instead of simulating");
  cmd->add_option("--noise-p", tomo.noise_p, "white-noise admixture")
      ->capture_default_str();
  cmd->add_option("--rate", tomo.rate, "counts per second at unit probability")
      ->capture_default_str();
  cmd->add_option("--duration", tomo.duration, "seconds per projector")
      ->capture_default_str();
  cmd->add_option("--seed", tomo.seed, "master seed")->capture_default_str();
  cmd->add_option("--tol", tomo.tol, "reconstruction convergence tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", tomo.max_iter, "reconstruction iteration cap")
      ->capture_default_str();
  cmd->add_flag("--no-mle", tomo.no_mle, "write counts only");
  cmd->add_option("--out-dir", tomo.out_dir, "artifact directory")
      ->capture_default_str();

  AnalyzeOpts analyze;
  cmd = app.add_subcommand(
      "analyze", "nonlocality report from a counts CSV");
  cmd->add_option("--in", analyze.in, "counts CSV (- for stdin)")->required();
  cmd->add_option("--out-dir", analyze.out_dir, "artifact directory")
      ->capture_default_str();

  ReproduceOpts reproduce;
  cmd = app.add_subcommand(
      "reproduce", "full run: pipeline, counts, tomography, report");
  cmd->add_option("--config", reproduce.config, "config JSON file");
  cmd->add_option("--out-dir", reproduce.out_dir, "artifact directory")
      ->capture_default_str();
  auto* seed_opt = cmd->add_option("--seed", reproduce.seed, "master seed");
  auto* events_opt = cmd->add_option("--events-per-setting", reproduce.events,
                                     "expected events per setting");
  auto* noise_opt =
      cmd->add_option("--noise-p", reproduce.noise_p, "white-noise admixture");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  reproduce.seed_set = seed_opt->count() > 0;
  reproduce.events_set = events_opt->count() > 0;
  reproduce.noise_set = noise_opt->count() > 0;

  try {
    if (app.got_subcommand("derive")) return cmd_derive(derive);
    if (app.got_subcommand("state")) return cmd_state(state);
    if (app.got_subcommand("simulate")) return cmd_simulate(simulate);
    if (app.got_subcommand("tomo")) return cmd_tomo(tomo);
    if (app.got_subcommand("analyze")) return cmd_analyze(analyze);
    return cmd_reproduce(reproduce);
  } catch (const Fail& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitAnalysis;
  }
}
