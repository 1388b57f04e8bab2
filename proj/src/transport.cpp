#include "transport.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rt {

ScalarField MediumSpec::sigma_a() const {
  ScalarField s = a;
  const ScalarField& k0 = kcoef.at(0);
  for (int i = 0; i < s.size(); ++i) s.v[i] -= k0.v[i];
  return s;
}

double MediumSpec::subcritical_margin() const {
  ScalarField s = sigma_a();
  double m = s.v[0];
  for (double x : s.v) m = std::min(m, x);
  return m;
}

ComplexField SourceSpec::f1() const {
  ComplexField out(F.grid());
  for (int i = 0; i < out.size(); ++i) out.v[i] = cplx(F.x.v[i], F.y.v[i]) * 0.5;
  return out;
}

double exit_length(cplx z, cplx theta) {
  const double zt = z.real() * theta.real() + z.imag() * theta.imag();
  const double disc = 1.0 - std::norm(z) + zt * zt;
  return -zt + std::sqrt(std::max(0.0, disc));
}

RayResult ray_integral(const ScalarField& a, cplx z, cplx theta, double step) {
  if (std::abs(z) > 1.0 + 1e-12) throw std::domain_error("ray_integral: start outside disk");
  const double tau = exit_length(z, theta);
  if (tau <= 0.0) return {0.0, tau};
  const int n = std::max(1, static_cast<int>(std::ceil(tau / step)));
  const double h = tau / n;
  double acc = 0.5 * (interpolate(a, z) + interpolate(a, z + tau * theta));
  for (int k = 1; k < n; ++k) acc += interpolate(a, z + (k * h) * theta);
  return {acc * h, tau};
}

namespace {

// exp(-x) for small positive x; cubic Taylor keeps the per-step error below
// x^4/24 which is negligible at ray-march step sizes.
inline double decay(double x) { return 1.0 - x * (1.0 - 0.5 * x * (1.0 - x / 3.0)); }

}  // namespace

AngularField apply_T1inv(const AngularField& s, const MediumSpec& medium, double h_ray) {
  const PolarGrid& g = s.grid;
  const DirectionGrid& dirs = s.dirs;
  AngularField out(g, dirs);

  for (int m = 0; m < dirs.ntheta; ++m) {
    const cplx theta = dirs.dir(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int node = 0; node < g.size(); ++node) {
      const int i = node / g.nbeta, j = node % g.nbeta;
      const cplx x = g.node(i, j);
      const double tau = exit_length(x, -theta);
      const int n = std::max(1, static_cast<int>(std::ceil(tau / h_ray)));
      const double h = tau / n;

      InterpWeights w = interp_weights(g, x);
      double a_prev = interp_apply(medium.a, w);
      double f_prev = interp_apply_slice(s, m, w);
      double att = 1.0;
      double acc = 0.5 * f_prev;  // trapezoid end point s = 0
      for (int k = 1; k <= n; ++k) {
        const cplx p = x - (k * h) * theta;
        w = interp_weights(g, p);
        const double a_cur = interp_apply(medium.a, w);
        const double f_cur = interp_apply_slice(s, m, w);
        att *= decay(0.5 * h * (a_prev + a_cur));
        acc += (k == n ? 0.5 : 1.0) * att * f_cur;
        a_prev = a_cur;
      }
      out.v[out.slice_offset(m) + node] = acc * h;
    }
  }
  return out;
}

AngularField apply_K(const AngularField& u, const MediumSpec& medium) {
  const PolarGrid& g = u.grid;
  const DirectionGrid& dirs = u.dirs;
  const int M = medium.degree();
  std::vector<ComplexField> modes = angular_modes(u, M);  // u_0 ... u_{-M}

  AngularField out(g, dirs);
  for (int m = 0; m < dirs.ntheta; ++m) {
    double* slice = out.slice(m);
    for (int node = 0; node < g.size(); ++node) {
      double acc = medium.kcoef[0].v[node] * modes[0].v[node].real();
      for (int n = 1; n <= M; ++n) {
        const cplx c = modes[n].v[node] * std::polar(1.0, -n * dirs.theta(m));
        acc += 2.0 * medium.kcoef[n].v[node] * c.real();
      }
      slice[node] = acc;
    }
  }
  return out;
}

AngularField source_field(const SourceSpec& source, const DirectionGrid& dirs) {
  const PolarGrid& g = source.f0.grid;
  AngularField f(g, dirs);
  for (int m = 0; m < dirs.ntheta; ++m) {
    const cplx t = dirs.dir(m);
    double* slice = f.slice(m);
    for (int node = 0; node < g.size(); ++node)
      slice[node] =
          source.f0.v[node] + t.real() * source.F.x.v[node] + t.imag() * source.F.y.v[node];
  }
  return f;
}

ForwardResult solve_forward(const MediumSpec& medium, const SourceSpec& source,
                            const DirectionGrid& dirs, double tol, int max_iter,
                            double h_ray) {
  const AngularField f = source_field(source, dirs);
  AngularField u1 = apply_T1inv(f, medium, h_ray);
  const double ref = max_abs(u1);
  if (ref == 0.0) return {std::move(u1), 1, 0.0};

  AngularField u = u1;
  for (int it = 1; it <= max_iter; ++it) {
    AngularField ku = apply_K(u, medium);
    double res;
    if (max_abs(ku) == 0.0) {
      // no scattering contribution: u1 is already the fixed point
      res = 0.0;
      u = u1;
    } else {
      AngularField scat = apply_T1inv(ku, medium, h_ray);
      res = 0.0;
      for (size_t k = 0; k < u.v.size(); ++k) {
        const double unew = u1.v[k] + scat.v[k];
        res = std::max(res, std::abs(unew - u.v[k]));
        u.v[k] = unew;
      }
      res /= ref;
    }
    if (res < tol) return {std::move(u), it, res};
  }
  throw DivergenceError("solve_forward: source iteration did not converge");
}

BoundaryData extract_boundary_data(const AngularField& u) {
  const PolarGrid& g = u.grid;
  BoundaryData out(BoundaryGrid(g.nbeta), u.dirs);
  const double r1 = g.radius(g.nr - 1);
  const double slope = (1.0 - r1) / g.dr();
  for (int j = 0; j < g.nbeta; ++j) {
    for (int m = 0; m < u.dirs.ntheta; ++m) {
      if (out.nu_dot_theta(j, m) <= 0.0) continue;
      const double uo = u.at(g.nr - 1, j, m);
      const double ui = u.at(g.nr - 2, j, m);
      out.at(j, m) = uo + slope * (uo - ui);
    }
  }
  return out;
}

MassBalance check_mass_balance(const AngularField& u, const BoundaryData& g,
                               const MediumSpec& medium, const SourceSpec& source) {
  MassBalance mb;
  const double arc = g.bnd.arc_weight();
  const double wtheta = g.dirs.weight();
  for (int j = 0; j < g.bnd.nbeta; ++j)
    for (int m = 0; m < g.dirs.ntheta; ++m)
      mb.boundary_flux += arc * wtheta * g.nu_dot_theta(j, m) * g.at(j, m);

  const ComplexField u0 = angular_mode(u, 0);
  const ScalarField sa = medium.sigma_a();
  const PolarGrid& pg = u.grid;
  const double cell = pg.dr() * pg.dbeta();
  for (int i = 0; i < pg.nr; ++i) {
    const double w = pg.radius(i) * cell;
    for (int j = 0; j < pg.nbeta; ++j) {
      const int node = pg.index(i, j);
      mb.volume_source += w * (source.f0.v[node] - sa.v[node] * u0.v[node].real());
    }
  }
  const double scale = std::max(std::abs(mb.boundary_flux), std::abs(mb.volume_source));
  mb.rel_error = scale > 0.0 ? std::abs(mb.boundary_flux - mb.volume_source) / scale : 0.0;
  return mb;
}

}  // namespace rt
