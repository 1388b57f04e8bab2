// Command-line front end; links only the public C API.
#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "radtomo/radtomo.h"

namespace {

int exit_code(rt_status st) {
  switch (st) {
    case RT_OK: return 0;
    case RT_ERR_CONFIG: return 2;
    case RT_ERR_DIVERGED: return 3;
    case RT_ERR_DATA: return 4;
    case RT_ERR_PRECONDITION: return 5;
    default: return 1;
  }
}

int finish(rt_session* s, rt_status st) {
  if (st != RT_OK) {
    std::fprintf(stderr, "error (%s): %s\n", rt_status_name(st),
                 rt_session_last_error(s));
  } else {
    for (int i = 0; i < rt_metric_count(s); ++i) {
      const char* key = rt_metric_key(s, i);
      double value = 0.0;
      if (key && rt_metric(s, key, &value) == RT_OK)
        std::printf("%s = %.6g\n", key, value);
    }
  }
  const int code = exit_code(st);
  rt_session_destroy(s);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"radtomo: transport forward solves and source reconstruction on the unit disk"};
  app.require_subcommand(1);

  std::string config, out, variant = "divfree", data, data2;
  unsigned long long seed = 0;
  bool seed_set = false;
  int levels = 2;

  app.add_option("--config", config, "config file")->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory (default: config run.out)");
  app.add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { seed_set = true; });

  auto* fwd = app.add_subcommand("forward", "solve the forward problem, write boundary data");
  auto* rec = app.add_subcommand("reconstruct", "reconstruct sources from boundary data");
  rec->add_option("--variant", variant, "solenoidal | divfree | twodata | remark");
  rec->add_option("--data", data, "boundary data CSV")->required();
  rec->add_option("--data2", data2, "second data file (twodata)");
  auto* gau = app.add_subcommand("gauge", "verify a gauge-equivalent source pair");
  auto* con = app.add_subcommand("convergence", "error vs resolution study");
  con->add_option("--levels", levels, "number of refinement levels (>= 2)");
  std::string con_variant = "divfree";
  con->add_option("--variant", con_variant, "poisson | solenoidal | divfree | twodata");
  auto* st = app.add_subcommand("selftest", "run the built-in checks");

  CLI11_PARSE(app, argc, argv);

  rt_session* s = nullptr;
  rt_status status = rt_session_create(config.empty() ? nullptr : config.c_str(), &s);
  if (status != RT_OK) return finish(s, status);
  if (seed_set) rt_session_set_seed(s, seed);
  const char* outp = out.empty() ? nullptr : out.c_str();

  if (fwd->parsed()) {
    status = rt_run_forward(s, outp);
  } else if (rec->parsed()) {
    status = rt_run_reconstruct(s, variant.c_str(), data.c_str(),
                                data2.empty() ? nullptr : data2.c_str(), outp);
  } else if (gau->parsed()) {
    status = rt_run_gauge(s, outp);
  } else if (con->parsed()) {
    status = rt_run_convergence(s, levels, con_variant.c_str(), outp);
  } else if (st->parsed()) {
    status = rt_run_selftest(s, outp);
  }
  return finish(s, status);
}
