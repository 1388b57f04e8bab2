#include "radtomo/radtomo.h"

#include <string>

#include "csvio.hpp"
#include "errors.hpp"
#include "runner.hpp"
#include "transport.hpp"

struct rt_session {
  rt::Session impl;
};

namespace {

constexpr const char* kDefaultConfig = R"cfg(
[grid]
nr = 24
nbeta = 96
ntheta = 32
nmodes = 8

[medium]
M = 1
a = gaussian 0.0 0.0 0.5 0.6
k0 = gaussian 0.0 0.0 0.5 0.2
k1 = constant 0.0

[source]
f0 = gaussian 0.0 0.0 0.3 1.0

[solver]
tol = 1e-8
max_iter = 100
)cfg";

rt_status guard(rt_session* s, const char* what, auto&& fn) {
  try {
    fn();
    s->impl.last_error.clear();
    return RT_OK;
  } catch (const rt::ConfigError& e) {
    s->impl.last_error = e.what();
    return RT_ERR_CONFIG;
  } catch (const std::invalid_argument& e) {
    s->impl.last_error = e.what();
    return RT_ERR_CONFIG;
  } catch (const rt::DivergenceError& e) {
    s->impl.last_error = e.what();
    return RT_ERR_DIVERGED;
  } catch (const rt::DataConsistencyError& e) {
    s->impl.last_error = e.what();
    return RT_ERR_DATA;
  } catch (const rt::PreconditionError& e) {
    s->impl.last_error = e.what();
    return RT_ERR_PRECONDITION;
  } catch (const rt::HAccuracyError& e) {
    s->impl.last_error = e.what();
    return RT_ERR_PRECONDITION;
  } catch (const rt::IoError& e) {
    s->impl.last_error = e.what();
    return RT_ERR_IO;
  } catch (const std::exception& e) {
    s->impl.last_error = std::string(what) + ": " + e.what();
    return RT_ERR_INTERNAL;
  }
}

std::string out_dir_of(const rt_session* s, const char* out_dir) {
  return out_dir ? std::string(out_dir) : s->impl.cfg.run.out;
}

}  // namespace

extern "C" {

const char* rt_version(void) { return "0.1.0"; }

const char* rt_status_name(rt_status status) {
  switch (status) {
    case RT_OK: return "ok";
    case RT_ERR_INTERNAL: return "internal error";
    case RT_ERR_CONFIG: return "config error";
    case RT_ERR_DIVERGED: return "solver divergence";
    case RT_ERR_DATA: return "data-consistency failure";
    case RT_ERR_PRECONDITION: return "precondition failure";
    case RT_ERR_IO: return "io error";
  }
  return "unknown";
}

rt_status rt_session_create(const char* config_path, rt_session** out) {
  if (!out) return RT_ERR_CONFIG;
  *out = new rt_session{};
  rt_session* s = *out;
  const rt_status st = guard(s, "session_create", [&] {
    const rt::Config cfg = config_path ? rt::parse_config_file(config_path)
                                       : rt::parse_config_text(kDefaultConfig);
    s->impl = rt::make_session(cfg);
  });
  if (st != RT_OK && st != RT_ERR_CONFIG) return st;
  return st;
}

rt_status rt_session_create_from_string(const char* config_text, rt_session** out) {
  if (!out || !config_text) return RT_ERR_CONFIG;
  *out = new rt_session{};
  rt_session* s = *out;
  return guard(s, "session_create", [&] {
    s->impl = rt::make_session(rt::parse_config_text(config_text));
  });
}

void rt_session_destroy(rt_session* session) { delete session; }

const char* rt_session_last_error(const rt_session* session) {
  return session ? session->impl.last_error.c_str() : "null session";
}

rt_status rt_session_set_seed(rt_session* session, unsigned long long seed) {
  if (!session) return RT_ERR_CONFIG;
  session->impl.cfg.run.seed = seed;
  return RT_OK;
}

rt_status rt_run_forward(rt_session* session, const char* out_dir) {
  if (!session) return RT_ERR_CONFIG;
  return guard(session, "forward",
               [&] { rt::cmd_forward(session->impl, out_dir_of(session, out_dir)); });
}

rt_status rt_run_reconstruct(rt_session* session, const char* variant,
                             const char* data_path, const char* data2_path,
                             const char* out_dir) {
  if (!session) return RT_ERR_CONFIG;
  if (!variant || !data_path) {
    session->impl.last_error = "reconstruct needs a variant and a data file";
    return RT_ERR_CONFIG;
  }
  return guard(session, "reconstruct", [&] {
    rt::cmd_reconstruct(session->impl, variant, data_path,
                        data2_path ? data2_path : "", out_dir_of(session, out_dir));
  });
}

rt_status rt_run_gauge(rt_session* session, const char* out_dir) {
  if (!session) return RT_ERR_CONFIG;
  return guard(session, "gauge",
               [&] { rt::cmd_gauge(session->impl, out_dir_of(session, out_dir)); });
}

rt_status rt_run_convergence(rt_session* session, int levels, const char* variant,
                             const char* out_dir) {
  if (!session) return RT_ERR_CONFIG;
  return guard(session, "convergence", [&] {
    rt::cmd_convergence(session->impl, levels, variant ? variant : "divfree",
                        out_dir_of(session, out_dir));
  });
}

rt_status rt_run_selftest(rt_session* session, const char* out_dir) {
  if (!session) return RT_ERR_CONFIG;
  return guard(session, "selftest",
               [&] { rt::cmd_selftest(session->impl, out_dir_of(session, out_dir)); });
}

rt_status rt_metric(const rt_session* session, const char* key, double* out) {
  if (!session || !key || !out) return RT_ERR_CONFIG;
  const auto it = session->impl.metrics.find(key);
  if (it == session->impl.metrics.end()) return RT_ERR_CONFIG;
  *out = it->second;
  return RT_OK;
}

int rt_metric_count(const rt_session* session) {
  return session ? static_cast<int>(session->impl.metrics.size()) : 0;
}

const char* rt_metric_key(const rt_session* session, int index) {
  if (!session || index < 0) return nullptr;
  int i = 0;
  for (const auto& [k, v] : session->impl.metrics) {
    (void)v;
    if (i++ == index) return k.c_str();
  }
  return nullptr;
}

}  // extern "C"
