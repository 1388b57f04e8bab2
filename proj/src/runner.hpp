// Experiment orchestration behind the C API: forward runs, reconstruction
// variants, gauge checks, convergence studies, and the self test. Each
// command realizes the config on its grids, runs the pipeline, writes CSV
// outputs plus a report, and records named metrics for callers.
#pragma once

#include <map>
#include <optional>
#include <string>

#include "config.hpp"
#include "recon.hpp"

namespace rt {

struct Session {
  Config cfg;
  std::map<std::string, double> metrics;
  std::string last_error;
  // conjugation machinery cached per (grid sizes, nmodes); media are fixed by
  // the config so the attenuation needs no key of its own
  std::map<std::string, ReconContext> ctx_cache;
};

Session make_session(const Config& cfg);

// Writes g.csv, the truth fields, and forward_manifest.txt into out_dir.
void cmd_forward(Session& s, const std::string& out_dir);

// variant: solenoidal | divfree | twodata | remark. data2 only for twodata.
void cmd_reconstruct(Session& s, const std::string& variant, const std::string& data_path,
                     const std::string& data2_path, const std::string& out_dir);

// Requires [source2]; verifies the gauge relation between the two sources.
void cmd_gauge(Session& s, const std::string& out_dir);

// variant: poisson | solenoidal | divfree | twodata; doubles the grids per
// level and emits convergence.csv.
void cmd_convergence(Session& s, int levels, const std::string& variant,
                     const std::string& out_dir);

// Small fixed battery of internal checks; throws on failure.
void cmd_selftest(Session& s, const std::string& out_dir);

}  // namespace rt
