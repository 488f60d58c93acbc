#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clusterlr/io.hpp"

// End-to-end runs behind the CLI. Everything is pure: a run maps a
// config to a list of named artifacts (file contents), so identical
// configs give byte-identical artifacts.

namespace clr {

struct RunConfig {
  int schema_version = 1;
  // Graph preset "tshape:<n>" or "linear:<n>"; a custom graph overrides it.
  std::string graph_preset = "tshape:5";
  std::optional<GraphSpec> graph;
  std::vector<int> support = {1, 2, 3, 4};
  int max_product_size = 3;

  double white_noise_p = 0.625;
  std::vector<DephasingEntry> extra_dephasing;

  double events_per_setting = 1900.0;
  // Counts per second of unit projector probability; the default gives
  // projector VVVD an expected 120 counts per 60 s at the default noise.
  double rate_constant = 256.0 / 23.0;
  double duration_s = 60.0;

  std::uint64_t master_seed = 20210906;
  int bootstrap_replicas = 500;       // counts statistics
  int tomo_bootstrap_replicas = 200;  // statistics that re-run the MLE
  double mle_tol = 1e-10;
  int mle_max_iter = 5000;
  double bootstrap_mle_tol = 1e-8;

  GraphSpec resolve_graph() const;
  NoiseSpec noise() const;

  // Missing keys keep their defaults; unknown keys are rejected.
  static RunConfig from_json(std::string_view text);
  std::string to_json() const;
};

struct Artifact {
  std::string name;
  std::string content;
};

struct DeriveOutcome {
  ParadoxCertificate certificate;
  std::vector<Artifact> artifacts;  // certificate.json, transcript.txt
};

// Throws std::runtime_error when no certificate exists on the support.
DeriveOutcome run_derive(const RunConfig& config);

struct AnalyzeOutcome {
  NonlocalityReport report;
  std::vector<Artifact> artifacts;  // report.json, report.csv, fractions.csv
};

// Tables must cover the canonical settings; target is the ideal mixed
// state the parities are read from.
AnalyzeOutcome run_analyze(const std::vector<CountsTable>& tables);

struct ReproduceOutcome {
  NonlocalityReport report;
  double mle_fidelity = 0.0;
  std::vector<Artifact> artifacts;
  std::string summary;  // also present as summary.txt
};

// Pipeline -> correlation counts -> tomography -> MLE -> witnesses ->
// report, with every stage seeded from config.master_seed.
ReproduceOutcome run_reproduce(const RunConfig& config);

}  // namespace clr
