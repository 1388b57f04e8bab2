/*
 * radtomo C API: forward transport solves and source reconstruction on the
 * unit disk behind an opaque session handle. All functions return rt_status;
 * rt_session_last_error gives the detailed message of the last failure.
 */
#ifndef RADTOMO_RADTOMO_H
#define RADTOMO_RADTOMO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct rt_session rt_session;

typedef enum rt_status {
  RT_OK = 0,
  RT_ERR_INTERNAL = 1,
  RT_ERR_CONFIG = 2,        /* config parse/validation or usage error */
  RT_ERR_DIVERGED = 3,      /* forward source iteration did not converge */
  RT_ERR_DATA = 4,          /* boundary data fails the range condition */
  RT_ERR_PRECONDITION = 5,  /* subcriticality / boundary-vanishing violated */
  RT_ERR_IO = 6             /* file read/write failure */
} rt_status;

const char* rt_version(void);
const char* rt_status_name(rt_status status);

/* Creates a session from a config file; config_path == NULL uses built-in
 * defaults (useful for selftest). */
rt_status rt_session_create(const char* config_path, rt_session** out);
rt_status rt_session_create_from_string(const char* config_text, rt_session** out);
void rt_session_destroy(rt_session* session);

const char* rt_session_last_error(const rt_session* session);

/* Overrides applied after config parsing (CLI flags). */
rt_status rt_session_set_seed(rt_session* session, unsigned long long seed);

/* Commands. out_dir == NULL uses the config's run.out. */
rt_status rt_run_forward(rt_session* session, const char* out_dir);
rt_status rt_run_reconstruct(rt_session* session, const char* variant,
                             const char* data_path, const char* data2_path,
                             const char* out_dir);
rt_status rt_run_gauge(rt_session* session, const char* out_dir);
rt_status rt_run_convergence(rt_session* session, int levels, const char* variant,
                             const char* out_dir);
rt_status rt_run_selftest(rt_session* session, const char* out_dir);

/* Named scalar results of the last command (e.g. "recon.err_F",
 * "forward.mass_balance.rel_error"). Returns RT_ERR_CONFIG for unknown keys. */
rt_status rt_metric(const rt_session* session, const char* key, double* out);

/* Number of metrics and key access for enumeration. */
int rt_metric_count(const rt_session* session);
const char* rt_metric_key(const rt_session* session, int index);

#ifdef __cplusplus
}
#endif

#endif /* RADTOMO_RADTOMO_H */
