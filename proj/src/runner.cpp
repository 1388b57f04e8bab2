#include "runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "csvio.hpp"
#include "elliptic.hpp"
#include "gauge.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rt {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return dir.back() == '/' ? dir + name : dir + "/" + name;
}

struct Realized {
  PolarGrid grid;
  DirectionGrid dirs;
  MediumSpec medium;
  SourceSpec source;
};

Realized realize(const Config& cfg, int scale = 1) {
  Realized r;
  r.grid = PolarGrid(cfg.grid.nr * scale, cfg.grid.nbeta * scale);
  r.dirs = DirectionGrid(cfg.grid.ntheta * scale);
  r.medium = make_medium(cfg.medium, r.grid);
  r.source = make_source(cfg.source, r.grid);
  return r;
}

ReconOptions recon_options(const Config& cfg, int scale = 1) {
  ReconOptions opt;
  opt.nmodes = cfg.grid.nmodes;
  opt.h_ray = cfg.grid.h_ray > 0 ? cfg.grid.h_ray / scale : 0.5 / (cfg.grid.nr * scale);
  return opt;
}

const ReconContext& context_for(Session& s, const Realized& r, const ReconOptions& opt) {
  std::ostringstream key;
  key << r.grid.nr << ':' << r.grid.nbeta << ':' << r.dirs.ntheta << ':' << opt.nmodes;
  auto it = s.ctx_cache.find(key.str());
  if (it == s.ctx_cache.end())
    it = s.ctx_cache.emplace(key.str(), make_recon_context(r.medium, r.dirs, opt)).first;
  return it->second;
}

// Deterministic standard normal (Box-Muller on the raw generator output, so
// results do not depend on the standard library's distribution internals).
double gauss(std::mt19937_64& rng) {
  const double u1 = ((rng() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = (rng() >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

void add_noise(BoundaryData& g, double noise_std, std::uint64_t seed) {
  const double scale = noise_std * *std::max_element(g.v.begin(), g.v.end(),
                                                     [](double a, double b) {
                                                       return std::abs(a) < std::abs(b);
                                                     });
  std::mt19937_64 rng(seed);
  for (int j = 0; j < g.bnd.nbeta; ++j)
    for (int m = 0; m < g.dirs.ntheta; ++m) {
      const double n = gauss(rng);
      if (g.nu_dot_theta(j, m) > 0.0) g.at(j, m) += std::abs(scale) * n;
    }
}

void put_grid_params(Report& rep, const Config& cfg, const Realized& r) {
  rep.add("grid.nr", long(r.grid.nr));
  rep.add("grid.nbeta", long(r.grid.nbeta));
  rep.add("grid.ntheta", long(r.dirs.ntheta));
  rep.add("grid.nmodes", long(cfg.grid.nmodes));
  rep.add("medium.M", long(r.medium.degree()));
  rep.add("solver.tol", cfg.solver.tol);
  rep.add("solver.max_iter", long(cfg.solver.max_iter));
}

ScalarField masked(const ScalarField& f, const ScalarField& mask) {
  ScalarField out = f;
  for (int k = 0; k < out.size(); ++k) out.v[k] *= mask.v[k];
  return out;
}

}  // namespace

Session make_session(const Config& cfg) {
#ifdef _OPENMP
  if (const char* t = std::getenv("RADTOMO_THREADS")) {
    const int n = std::atoi(t);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
  Session s;
  s.cfg = cfg;
  return s;
}

void cmd_forward(Session& s, const std::string& out_dir) {
  const Config& cfg = s.cfg;
  Realized r = realize(cfg);
  ensure_dir(out_dir);

  ForwardResult fw =
      solve_forward(r.medium, r.source, r.dirs, cfg.solver.tol, cfg.solver.max_iter,
                    cfg.h_ray());
  BoundaryData g = extract_boundary_data(fw.u);
  MassBalance mb = check_mass_balance(fw.u, g, r.medium, r.source);

  write_boundary_csv(join(out_dir, "g.csv"), g, cfg.hash);
  write_scalar_csv(join(out_dir, "truth_f0.csv"), r.source.f0, cfg.hash);
  write_scalar_csv(join(out_dir, "truth_Fx.csv"), r.source.F.x, cfg.hash);
  write_scalar_csv(join(out_dir, "truth_Fy.csv"), r.source.F.y, cfg.hash);

  Report rep;
  put_grid_params(rep, cfg, r);
  rep.add("grid.h_ray", cfg.h_ray());
  rep.add("forward.iterations", long(fw.iterations));
  rep.add("forward.residual", fw.residual);
  rep.add("forward.mass_balance.boundary_flux", mb.boundary_flux);
  rep.add("forward.mass_balance.volume_source", mb.volume_source);
  rep.add("forward.mass_balance.rel_error", mb.rel_error);
  rep.add("output.data", "g.csv");
  rep.add("output.truth", "truth_f0.csv truth_Fx.csv truth_Fy.csv");
  write_report(join(out_dir, "forward_manifest.txt"), rep, cfg.hash);

  s.metrics["forward.iterations"] = fw.iterations;
  s.metrics["forward.residual"] = fw.residual;
  s.metrics["forward.mass_balance.rel_error"] = mb.rel_error;
}

void cmd_reconstruct(Session& s, const std::string& variant, const std::string& data_path,
                     const std::string& data2_path, const std::string& out_dir) {
  const Config& cfg = s.cfg;
  if (variant != "solenoidal" && variant != "divfree" && variant != "twodata" &&
      variant != "remark")
    throw std::invalid_argument("unknown reconstruction variant: " + variant);
  if (variant == "twodata" && data2_path.empty())
    throw std::invalid_argument("variant twodata needs a second data file (--data2)");

  Realized r = realize(cfg);
  ensure_dir(out_dir);

  BoundaryData g = read_boundary_csv(data_path);
  if (g.bnd.nbeta != r.grid.nbeta || g.dirs.ntheta != r.dirs.ntheta)
    throw std::invalid_argument("boundary data grid does not match the config grid");
  const bool noisy = cfg.solver.noise_std > 0.0;
  if (noisy) add_noise(g, cfg.solver.noise_std, cfg.run.seed);

  ReconOptions opt = recon_options(cfg);
  const ReconContext& ctx = context_for(s, r, opt);

  ReconResult res;
  if (variant == "solenoidal") {
    res = recover_solenoidal(g, r.medium, ctx, opt);
  } else if (variant == "divfree") {
    res = recover_divfree(g, r.medium, ctx, opt);
  } else if (variant == "twodata") {
    BoundaryData g2 = read_boundary_csv(data2_path);
    if (g2.bnd.nbeta != r.grid.nbeta || g2.dirs.ntheta != r.dirs.ntheta)
      throw std::invalid_argument("second data file grid does not match the config grid");
    if (noisy) add_noise(g2, cfg.solver.noise_std, cfg.run.seed + 1);
    res = recover_twodata(g, g2, r.medium, ctx, opt);
  } else {
    const ScalarField mask = make_mask(cfg.run, r.grid);
    res = recover_F_where_f0_zero(g, r.medium, mask, ctx, opt);
  }

  Report rep;
  put_grid_params(rep, cfg, r);
  rep.add("recon.variant", variant);
  rep.add("recon.input.data", data_path);
  if (!data2_path.empty()) rep.add("recon.input.data2", data2_path);
  rep.add("recon.noisy_data", noisy ? "yes" : "no");
  if (noisy) rep.add("recon.noise_std", cfg.solver.noise_std);
  rep.add("recon.range_residual", res.diag.range_residual);
  rep.add("recon.range_warned", res.diag.range_warned ? "yes" : "no");
  rep.add("recon.neg_mode_mass", res.diag.neg_mass);
  for (size_t i = 0; i < res.diag.cascade_residuals.size(); ++i)
    rep.add("recon.cascade_residual." + std::to_string(i + 1),
            res.diag.cascade_residuals[i]);

  // error metrics against the configured source, when one is present
  const bool have_truth = !cfg.source.f0.empty() ||
                          cfg.source.F.kind != VectorExpr::Kind::Zero;
  if (have_truth) {
    const std::string norm_tag = " | rel_l2, polar weight r*dr*dbeta, nr=" +
                                 std::to_string(r.grid.nr) +
                                 " nbeta=" + std::to_string(r.grid.nbeta);
    if (res.has_f0) {
      const double e = rel_l2_error(res.f0, r.source.f0);
      rep.add("metric.err_f0", format_double(e) + norm_tag);
      s.metrics["recon.err_f0"] = e;
    }
    VectorField truthF = r.source.F;
    if (variant == "solenoidal") truthF = hodge_decompose(truthF).solenoidal;
    if (variant == "remark") {
      const ScalarField mask = make_mask(cfg.run, r.grid);
      truthF.x = masked(truthF.x, mask);
      truthF.y = masked(truthF.y, mask);
    }
    const double eF = rel_l2_error(res.F, truthF);
    rep.add(variant == "solenoidal" ? "metric.err_Fs" : "metric.err_F",
            format_double(eF) + norm_tag);
    s.metrics["recon.err_F"] = eF;
  }

  if (res.has_f0) write_scalar_csv(join(out_dir, "recon_f0.csv"), res.f0, cfg.hash);
  write_scalar_csv(join(out_dir, "recon_Fx.csv"), res.F.x, cfg.hash);
  write_scalar_csv(join(out_dir, "recon_Fy.csv"), res.F.y, cfg.hash);
  write_scalar_csv(join(out_dir, "recon_head.csv"), res.head, cfg.hash);
  write_modes_csv(join(out_dir, "recon_modes.csv"), res.modes, cfg.hash);
  write_report(join(out_dir, "recon_report.txt"), rep, cfg.hash);

  s.metrics["recon.range_residual"] = res.diag.range_residual;
  s.metrics["recon.neg_mode_mass"] = res.diag.neg_mass;
}

void cmd_gauge(Session& s, const std::string& out_dir) {
  const Config& cfg = s.cfg;
  if (!cfg.source2)
    throw std::invalid_argument("gauge needs a [source2] section in the config");
  Realized r = realize(cfg);
  ensure_dir(out_dir);
  SourceSpec src2 = make_source(*cfg.source2, r.grid);

  // the partner construction doubles as the boundary-vanishing check
  VectorField predicted =
      gauge_partner(r.source.f0, src2.f0, src2.F, r.medium);
  GaugeReport gr = gauge_verify(r.source, src2, r.medium, r.dirs, cfg.solver.tol,
                                cfg.solver.max_iter, cfg.h_ray());

  VectorField dev = r.source.F;
  for (int k = 0; k < dev.x.size(); ++k) {
    dev.x.v[k] -= predicted.x.v[k];
    dev.y.v[k] -= predicted.y.v[k];
  }

  Report rep;
  put_grid_params(rep, cfg, r);
  rep.add("gauge.data_sup_diff", gr.data_sup_diff);
  rep.add("gauge.data_sup_scale", gr.data_sup_scale);
  rep.add("gauge.data_l2_diff", gr.data_l2_diff);
  rep.add("gauge.data_l2_scale", gr.data_l2_scale);
  rep.add("gauge.converse_residual_l2", gr.converse_residual_l2);
  rep.add("gauge.converse_rel", gr.converse_rel);
  rep.add("gauge.partner_deviation_l2", l2_norm(dev));
  rep.add("gauge.norms", "sup and l2 over boundary nodes x directions; converse in "
                         "L2(disk), polar weight");
  write_report(join(out_dir, "gauge_report.txt"), rep, cfg.hash);

  s.metrics["gauge.data_sup_diff"] = gr.data_sup_diff;
  s.metrics["gauge.data_l2_diff"] = gr.data_l2_diff;
  s.metrics["gauge.converse_residual_l2"] = gr.converse_residual_l2;
  s.metrics["gauge.partner_deviation_l2"] = l2_norm(dev);
}

namespace {

// Manufactured Poisson solution with analytic Laplacian and a harmonic part
// exercising the boundary data path.
double manufactured_u(double x, double y) {
  const double r2 = x * x + y * y;
  const double b = std::atan2(y, x);
  return std::sin(kPi * r2) * (1.0 + 0.5 * std::cos(3.0 * b)) + x;
}

double manufactured_lap(double x, double y) {
  const double r2 = x * x + y * y;
  const double b = std::atan2(y, x);
  const double ang = 1.0 + 0.5 * std::cos(3.0 * b);
  const double f = std::sin(kPi * r2);
  const double rad = 4.0 * kPi * std::cos(kPi * r2) - 4.0 * kPi * kPi * r2 * f;
  return rad * ang - 4.5 * f * std::cos(3.0 * b) / r2;
}

double poisson_manufactured_error(int nr, int nbeta) {
  PolarGrid g(nr, nbeta);
  ScalarField rhs(g);
  std::vector<double> bc(nbeta);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nbeta; ++j) {
      const cplx z = g.node(i, j);
      rhs.at(i, j) = manufactured_lap(z.real(), z.imag());
    }
  for (int j = 0; j < nbeta; ++j) {
    const cplx z = std::polar(1.0, g.beta(j));
    bc[j] = manufactured_u(z.real(), z.imag());
  }
  ScalarField u = poisson_dirichlet_real(rhs, bc);
  double worst = 0.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nbeta; ++j) {
      const cplx z = g.node(i, j);
      worst = std::max(worst, std::abs(u.at(i, j) - manufactured_u(z.real(), z.imag())));
    }
  return worst;
}

}  // namespace

void cmd_convergence(Session& s, int levels, const std::string& variant,
                     const std::string& out_dir) {
  const Config& cfg = s.cfg;
  if (levels < 2) throw std::invalid_argument("convergence needs at least 2 levels");
  ensure_dir(out_dir);

  std::ostringstream csv;
  csv << manifest_line(cfg.hash) << "\n";

  if (variant == "poisson") {
    csv << "level,nr,nbeta,max_error,order\n";
    double prev = 0.0;
    for (int l = 0; l < levels; ++l) {
      const int scale = 1 << l;
      const double err = poisson_manufactured_error(cfg.grid.nr * scale,
                                                    cfg.grid.nbeta * scale);
      const double order = (l == 0) ? 0.0 : std::log2(prev / err);
      csv << l << ',' << cfg.grid.nr * scale << ',' << cfg.grid.nbeta * scale << ','
          << format_double(err) << ',' << format_double(order) << '\n';
      s.metrics["convergence.err." + std::to_string(l)] = err;
      if (l > 0) s.metrics["convergence.order." + std::to_string(l)] = order;
      prev = err;
    }
  } else {
    csv << "level,nr,nbeta,ntheta,err_f0,err_F\n";
    double prev_f = -1.0;
    for (int l = 0; l < levels; ++l) {
      const int scale = 1 << l;
      Realized r = realize(cfg, scale);
      ReconOptions opt = recon_options(cfg, scale);
      ForwardResult fw = solve_forward(r.medium, r.source, r.dirs, cfg.solver.tol,
                                       cfg.solver.max_iter, opt.h_ray);
      BoundaryData g = extract_boundary_data(fw.u);
      const ReconContext& ctx = context_for(s, r, opt);

      double ef0 = 0.0, eF = 0.0;
      if (variant == "divfree") {
        ReconResult res = recover_divfree(g, r.medium, ctx, opt);
        ef0 = rel_l2_error(res.f0, r.source.f0);
        eF = rel_l2_error(res.F, r.source.F);
      } else if (variant == "solenoidal") {
        ReconResult res = recover_solenoidal(g, r.medium, ctx, opt);
        eF = rel_l2_error(res.F, hodge_decompose(r.source.F).solenoidal);
      } else if (variant == "twodata") {
        SourceSpec iso = r.source;
        iso.F = VectorField(r.grid);
        ForwardResult fi = solve_forward(r.medium, iso, r.dirs, cfg.solver.tol,
                                         cfg.solver.max_iter, opt.h_ray);
        BoundaryData gi = extract_boundary_data(fi.u);
        ReconResult res = recover_twodata(g, gi, r.medium, ctx, opt);
        ef0 = rel_l2_error(res.f0, r.source.f0);
        eF = rel_l2_error(res.F, r.source.F);
      } else {
        throw std::invalid_argument("unknown convergence variant: " + variant);
      }
      csv << l << ',' << r.grid.nr << ',' << r.grid.nbeta << ',' << r.dirs.ntheta << ','
          << format_double(ef0) << ',' << format_double(eF) << '\n';
      s.metrics["convergence.err_f0." + std::to_string(l)] = ef0;
      s.metrics["convergence.err_F." + std::to_string(l)] = eF;
      prev_f = eF;
      (void)prev_f;
    }
  }

  std::ofstream out(join(out_dir, "convergence.csv"));
  if (!out) throw IoError("cannot write convergence.csv");
  out << csv.str();
}

void cmd_selftest(Session& s, const std::string& out_dir) {
  ensure_dir(out_dir);
  Report rep;
  int failures = 0;
  auto check = [&](const std::string& name, bool ok, double value) {
    rep.add("selftest." + name, std::string(ok ? "PASS" : "FAIL") + " (" +
                                    format_double(value) + ")");
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << "  " << format_double(value)
              << "\n";
    if (!ok) ++failures;
    s.metrics["selftest." + name] = value;
  };

  PolarGrid g(24, 96);
  DirectionGrid dirs(32);

  // gaussian medium with mild scattering
  MediumSpec med;
  med.a = ScalarField(g);
  med.kcoef.assign(2, ScalarField(g));
  SourceSpec src;
  src.f0 = ScalarField(g);
  src.F = VectorField(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) {
      const cplx z = g.node(i, j);
      const double r2 = std::norm(z);
      med.a.at(i, j) = 0.6 * std::exp(-r2 / 0.25);
      med.kcoef[0].at(i, j) = 0.2 * std::exp(-r2 / 0.25);
      src.f0.at(i, j) = std::exp(-r2 / 0.09);
    }

  // 1. non-scattering forward solve equals the direct transport integral
  {
    MediumSpec clean = med;
    for (auto& k : clean.kcoef)
      std::fill(k.v.begin(), k.v.end(), 0.0);
    ForwardResult fw = solve_forward(clean, src, dirs, 1e-10, 50, 0.5 / g.nr);
    AngularField direct = apply_T1inv(source_field(src, dirs), clean, 0.5 / g.nr);
    double worst = 0.0;
    for (size_t k = 0; k < fw.u.v.size(); ++k)
      worst = std::max(worst, std::abs(fw.u.v[k] - direct.v[k]));
    check("nonscattering_exactness", worst <= 1e-12, worst);
  }

  // 2. Poisson manufactured solution
  {
    const double err = poisson_manufactured_error(32, 128);
    check("poisson_manufactured", err < 5e-3, err);
  }

  // 3. conjugation coefficients invert each other
  {
    HOptions hopt;
    hopt.h_ray = 0.5 / g.nr;
    HFunction h = compute_h(med.a, dirs, hopt);
    ConjugationCoeffs cc = conjugation_coeffs(h, 10);
    double worst = 0.0;
    for (int node = 0; node < g.size(); node += 7) {
      for (int n = 0; n <= 10; ++n) {
        cplx conv = 0.0;
        for (int k = 0; k <= n; ++k)
          conv += cc.alpha_vol[k].v[node] * cc.beta_vol[n - k].v[node];
        worst = std::max(worst, std::abs(conv - (n == 0 ? 1.0 : 0.0)));
      }
    }
    check("conjugation_inverse", worst < 1e-8, worst);
    check("h_negative_mass", cc.neg_mass < 1e-2, cc.neg_mass);
  }

  // 4. Bukhgeim-Cauchy reproduces analytic boundary data
  {
    BoundaryModeSequence bm(g.nbeta, 4);
    const BoundaryGrid bg(g.nbeta);
    for (int j = 0; j < g.nbeta; ++j) {
      const cplx zeta = bg.node(j);
      bm.modes[0][j] = zeta * zeta;
    }
    ModeSequence v = bukhgeim_cauchy(bm, g, g.nr - 2);
    double worst = 0.0;
    for (int i = 0; i < g.nr - 2; ++i)
      for (int j = 0; j < g.nbeta; ++j) {
        const cplx z = g.node(i, j);
        worst = std::max(worst, std::abs(v.modes[0].at(i, j) - z * z));
      }
    check("bukhgeim_cauchy_analytic", worst < 5e-3, worst);
  }

  // 5. forward mass balance
  {
    ForwardResult fw = solve_forward(med, src, dirs, 1e-9, 100, 0.5 / g.nr);
    BoundaryData bd = extract_boundary_data(fw.u);
    MassBalance mb = check_mass_balance(fw.u, bd, med, src);
    check("mass_balance", mb.rel_error < 2e-2, mb.rel_error);
  }

  write_report(join(out_dir, "selftest_report.txt"), rep, s.cfg.hash);
  if (failures > 0)
    throw std::runtime_error("selftest: " + std::to_string(failures) + " check(s) failed");
}

}  // namespace rt
