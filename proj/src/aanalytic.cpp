#include "aanalytic.hpp"

#include <algorithm>
#include <cmath>

namespace rt {

BoundaryModeSequence BoundaryModeSequence::shifted(int s) const {
  BoundaryModeSequence out;
  out.nbeta = nbeta;
  out.modes.assign(modes.begin() + s, modes.end());
  return out;
}

BoundaryModeSequence boundary_modes(const BoundaryData& g, int nmodes) {
  const int nt = g.dirs.ntheta;
  if (nmodes > nt / 2)
    throw std::invalid_argument("boundary_modes: mode count too large for ntheta");
  BoundaryModeSequence out(g.bnd.nbeta, nmodes + 1);
  for (int n = 0; n <= nmodes; ++n) {
    std::vector<cplx> phase(nt);
    for (int m = 0; m < nt; ++m) phase[m] = std::polar(1.0, n * g.dirs.theta(m));
    for (int j = 0; j < g.bnd.nbeta; ++j) {
      cplx acc = 0.0;
      for (int m = 0; m < nt; ++m) acc += phase[m] * g.at(j, m);
      out.modes[n][j] = acc / double(nt);
    }
  }
  return out;
}

double weighted_norm(const BoundaryModeSequence& g) {
  double best = 0.0;
  for (int j = 0; j < g.nbeta; ++j) {
    double acc = 0.0;
    for (int p = 0; p < g.count(); ++p)
      acc += (1.0 + double(p) * p) * std::abs(g.modes[p][j]);
    best = std::max(best, acc);
  }
  return best;
}

std::vector<double> radon_transform(const ScalarField& a, int ns, cplx theta,
                                    double step) {
  std::vector<double> out(ns, 0.0);
  const cplx perp = theta * cplx(0.0, 1.0);  // counter-clockwise rotation by pi/2
  for (int k = 0; k < ns; ++k) {
    const double s = -1.0 + 2.0 * k / (ns - 1);
    const double half = 1.0 - s * s;
    if (half <= 0.0) continue;
    const double t1 = std::sqrt(half);
    const cplx base = s * perp;
    const int n = std::max(1, static_cast<int>(std::ceil(2.0 * t1 / step)));
    const double h = 2.0 * t1 / n;
    double acc = 0.5 * (interpolate(a, base - t1 * theta) + interpolate(a, base + t1 * theta));
    for (int q = 1; q < n; ++q) acc += interpolate(a, base + (-t1 + q * h) * theta);
    out[k] = acc * h;
  }
  return out;
}

std::vector<double> hilbert_line(const std::vector<double>& h, double smin, double ds) {
  const int n = static_cast<int>(h.size());
  const double smax = smin + (n - 1) * ds;
  std::vector<double> out(n, 0.0);

  // derivative for the diagonal limit of (h(t)-h(s))/(s-t)
  std::vector<double> hp(n);
  hp[0] = (h[1] - h[0]) / ds;
  for (int i = 1; i < n - 1; ++i) hp[i] = (h[i + 1] - h[i - 1]) / (2.0 * ds);
  hp[n - 1] = (h[n - 1] - h[n - 2]) / ds;

  for (int i = 0; i < n; ++i) {
    const double s = smin + i * ds;
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double w = (k == 0 || k == n - 1) ? 0.5 : 1.0;
      if (k == i) {
        acc += w * (-hp[i]);
      } else {
        const double t = smin + k * ds;
        acc += w * (h[k] - h[i]) / (s - t);
      }
    }
    acc *= ds;
    if (h[i] != 0.0) {
      const double da = s - smin, db = s - smax;
      if (da != 0.0 && db != 0.0) acc += h[i] * std::log(std::abs(da / db));
    }
    out[i] = acc / kPi;
  }
  return out;
}

namespace {

// Catmull-Rom interpolation on a uniform grid, clamped at the ends.
double interp_cubic(const std::vector<double>& f, double smin, double ds, double s) {
  const int n = static_cast<int>(f.size());
  double x = (s - smin) / ds;
  if (x <= 0.0) return f[0];
  if (x >= n - 1) return f[n - 1];
  int i = static_cast<int>(x);
  if (i > n - 2) i = n - 2;
  const double t = x - i;
  const double fm = (i > 0) ? f[i - 1] : 2.0 * f[0] - f[1];
  const double fp = (i + 2 < n) ? f[i + 2] : 2.0 * f[n - 1] - f[n - 2];
  const double a0 = -0.5 * fm + 1.5 * f[i] - 1.5 * f[i + 1] + 0.5 * fp;
  const double a1 = fm - 2.5 * f[i] + 2.0 * f[i + 1] - 0.5 * fp;
  const double a2 = -0.5 * fm + 0.5 * f[i + 1];
  return ((a0 * t + a1) * t + a2) * t + f[i];
}

}  // namespace

namespace {

// h at one point: the Radon value is re-evaluated by chord quadrature at the
// exact offset (its sqrt edge behavior tolerates no grid interpolation); the
// Hilbert transform is smooth across the support edge and interpolates well.
cplx h_at(const ScalarField& a, cplx z, cplx theta, cplx perp,
          const std::vector<double>& hra, double ds, double ray_step) {
  const double da = ray_integral(a, z, theta, ray_step).integral;
  const double s = z.real() * perp.real() + z.imag() * perp.imag();
  const double back = ray_integral(a, z, -theta, ray_step).integral;
  const double rs = da + back;  // chord integral through z along theta
  const double hs = interp_cubic(hra, -1.0, ds, s);
  return da - 0.5 * cplx(rs, -hs);
}

}  // namespace

HFunction compute_h(const ScalarField& a, const DirectionGrid& dirs, HOptions opt) {
  const PolarGrid& g = a.grid;
  if (opt.h_ray <= 0.0) opt.h_ray = 0.5 / g.nr;
  if (opt.ray_step <= 0.0) opt.ray_step = opt.h_ray / 4.0;
  if (opt.ns <= 0) opt.ns = 4 * g.nbeta;

  HFunction h;
  h.vol = ComplexAngularField(g, dirs);
  h.nbeta = g.nbeta;
  h.bnd.assign(static_cast<size_t>(g.nbeta) * dirs.ntheta, cplx{});
  const BoundaryGrid bg(g.nbeta);

  const double ds = 2.0 / (opt.ns - 1);
  for (int m = 0; m < dirs.ntheta; ++m) {
    const cplx theta = dirs.dir(m);
    const cplx perp = theta * cplx(0.0, 1.0);
    const std::vector<double> ra = radon_transform(a, opt.ns, theta, opt.ray_step);
    const std::vector<double> hra = hilbert_line(ra, -1.0, ds);

    cplx* slice = h.vol.slice(m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int node = 0; node < g.size(); ++node) {
      const cplx z = g.node(node / g.nbeta, node % g.nbeta);
      slice[node] = h_at(a, z, theta, perp, hra, ds, opt.ray_step);
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (int j = 0; j < g.nbeta; ++j)
      h.bnd[static_cast<size_t>(j) * dirs.ntheta + m] =
          h_at(a, bg.node(j), theta, perp, hra, ds, opt.ray_step);
  }
  return h;
}

namespace {

// Coefficients for one node given h(theta_m): alpha_k are the nonnegative
// angular modes of e^{-h}; beta is the reciprocal power series of alpha, so
// that alpha * beta is the unit sequence exactly. (The directly transformed
// modes of e^{+h} agree with beta to within the negative-mode mass, which is
// also accumulated here as the h-accuracy diagnostic.)
void exp_coeffs(const cplx* hrow, int stride, int nt, int kmax, cplx* alpha, cplx* beta,
                double& neg_mass) {
  std::vector<cplx> em(nt), ep(nt);
  for (int m = 0; m < nt; ++m) {
    em[m] = std::exp(-hrow[static_cast<size_t>(m) * stride]);
    ep[m] = std::exp(hrow[static_cast<size_t>(m) * stride]);
  }
  double massm = 0.0, massp = 0.0;
  for (int k = -(nt / 2 - 1); k <= kmax; ++k) {
    cplx am = 0.0, ap = 0.0;
    for (int m = 0; m < nt; ++m) {
      const cplx ph = std::polar(1.0, -k * (kTwoPi * m / nt));
      am += em[m] * ph;
      ap += ep[m] * ph;
    }
    am /= double(nt);
    ap /= double(nt);
    if (k < 0) {
      massm += std::abs(am);
      massp += std::abs(ap);
    } else {
      alpha[k] = am;
    }
  }
  neg_mass = std::max(massm, massp);

  beta[0] = 1.0 / alpha[0];
  for (int n = 1; n <= kmax; ++n) {
    cplx acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += alpha[k] * beta[n - k];
    beta[n] = -acc / alpha[0];
  }
}

}  // namespace

ConjugationCoeffs conjugation_coeffs(const HFunction& h, int kmax, double fail_threshold) {
  const PolarGrid& g = h.vol.grid;
  const int nt = h.vol.dirs.ntheta;
  if (kmax > nt / 2 - 1) kmax = nt / 2 - 1;

  ConjugationCoeffs cc;
  cc.kmax = kmax;
  cc.grid = g;
  cc.alpha_vol.assign(kmax + 1, ComplexField(g));
  cc.beta_vol.assign(kmax + 1, ComplexField(g));
  cc.alpha_bnd.assign(kmax + 1, std::vector<cplx>(h.nbeta));
  cc.beta_bnd.assign(kmax + 1, std::vector<cplx>(h.nbeta));

  std::vector<double> mass_vol(g.size(), 0.0), mass_bnd(h.nbeta, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int node = 0; node < g.size(); ++node) {
    std::vector<cplx> al(kmax + 1), be(kmax + 1);
    exp_coeffs(h.vol.v.data() + node, g.size(), nt, kmax, al.data(), be.data(),
               mass_vol[node]);
    for (int k = 0; k <= kmax; ++k) {
      cc.alpha_vol[k].v[node] = al[k];
      cc.beta_vol[k].v[node] = be[k];
    }
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < h.nbeta; ++j) {
    std::vector<cplx> al(kmax + 1), be(kmax + 1);
    exp_coeffs(h.bnd.data() + static_cast<size_t>(j) * nt, 1, nt, kmax, al.data(),
               be.data(), mass_bnd[j]);
    for (int k = 0; k <= kmax; ++k) {
      cc.alpha_bnd[k][j] = al[k];
      cc.beta_bnd[k][j] = be[k];
    }
  }

  cc.neg_mass = 0.0;
  for (double x : mass_vol) cc.neg_mass = std::max(cc.neg_mass, x);
  for (double x : mass_bnd) cc.neg_mass = std::max(cc.neg_mass, x);
  if (cc.neg_mass > fail_threshold)
    throw HAccuracyError("conjugation_coeffs: negative-mode mass " +
                         std::to_string(cc.neg_mass) +
                         " exceeds threshold (under-resolved Radon/Hilbert grids)");
  return cc;
}

ModeSequence apply_eG(const ModeSequence& u, int sign, const ConjugationCoeffs& cc) {
  const auto& co = (sign < 0) ? cc.alpha_vol : cc.beta_vol;
  const int P = u.count();
  ModeSequence out;
  out.modes.assign(P, ComplexField(cc.grid));
  for (int p = 0; p < P; ++p) {
    const int kend = std::min(cc.kmax, P - 1 - p);
    for (int node = 0; node < cc.grid.size(); ++node) {
      cplx acc = 0.0;
      for (int k = 0; k <= kend; ++k) acc += co[k].v[node] * u.modes[p + k].v[node];
      out.modes[p].v[node] = acc;
    }
  }
  return out;
}

BoundaryModeSequence apply_eG(const BoundaryModeSequence& g, int sign,
                              const ConjugationCoeffs& cc) {
  const auto& co = (sign < 0) ? cc.alpha_bnd : cc.beta_bnd;
  const int P = g.count();
  BoundaryModeSequence out(g.nbeta, P);
  for (int p = 0; p < P; ++p) {
    const int kend = std::min(cc.kmax, P - 1 - p);
    for (int j = 0; j < g.nbeta; ++j) {
      cplx acc = 0.0;
      for (int k = 0; k <= kend; ++k) acc += co[k][j] * g.modes[p + k][j];
      out.modes[p][j] = acc;
    }
  }
  return out;
}

ModeSequence bukhgeim_cauchy(const BoundaryModeSequence& g, const PolarGrid& grid,
                             int nrings) {
  const int P = g.count();
  if (nrings < 1 || nrings > grid.nr) throw std::invalid_argument("bukhgeim_cauchy: nrings");
  if (1.0 - grid.radius(nrings - 1) < grid.dr() - 1e-12)
    throw NearBoundaryError("bukhgeim_cauchy: target within one radial cell of the boundary");

  ModeSequence out;
  out.modes.assign(P, ComplexField(grid));
  const BoundaryGrid bg(g.nbeta);
  const double w = bg.arc_weight() / kTwoPi;  // dbeta/(2 pi)

  std::vector<cplx> zeta(g.nbeta);
  for (int j = 0; j < g.nbeta; ++j) zeta[j] = bg.node(j);

  const int ntargets = nrings * grid.nbeta;
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<cplx> acc(P), series(P + 2);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int t = 0; t < ntargets; ++t) {
      const cplx z = grid.node(t / grid.nbeta, t % grid.nbeta);
      std::fill(acc.begin(), acc.end(), cplx{});
      for (int j = 0; j < g.nbeta; ++j) {
        const cplx dz = zeta[j] - z;
        const cplx c1 = zeta[j] / dz;
        const cplx rho = std::conj(dz) / dz;
        const double two_re = 2.0 * c1.real();
        series[P] = series[P + 1] = 0.0;
        for (int p = P - 1; p >= 0; --p)
          series[p] = (p + 2 < P) ? rho * (g.modes[p + 2][j] + series[p + 2]) : cplx{};
        for (int p = 0; p < P; ++p)
          acc[p] += w * (g.modes[p][j] * c1 + two_re * series[p]);
      }
      for (int p = 0; p < P; ++p) out.modes[p].v[t] = acc[p];
    }
  }
  return out;
}

namespace {

// Spectral d/dbeta of one boundary mode row.
std::vector<cplx> dbeta_row(const std::vector<cplx>& row) {
  const int nb = static_cast<int>(row.size());
  std::vector<cplx> hat(nb), out(nb);
  for (int m = 0; m < nb; ++m) {
    cplx acc = 0.0;
    for (int j = 0; j < nb; ++j) acc += row[j] * std::polar(1.0, -kTwoPi * m * j / nb);
    hat[m] = acc / double(nb);
  }
  for (int m = 0; m < nb; ++m) {
    int ms = (m < nb / 2) ? m : (m == nb / 2 ? 0 : m - nb);
    hat[m] *= cplx(0.0, double(ms));
  }
  for (int j = 0; j < nb; ++j) {
    cplx acc = 0.0;
    for (int m = 0; m < nb; ++m) acc += hat[m] * std::polar(1.0, kTwoPi * m * j / nb);
    out[j] = acc;
  }
  return out;
}

}  // namespace

BoundaryModeSequence bukhgeim_hilbert(const BoundaryModeSequence& g) {
  const int P = g.count();
  const int nb = g.nbeta;
  const BoundaryGrid bg(nb);
  const double dbeta = bg.arc_weight();

  std::vector<std::vector<cplx>> gbeta(P);
  for (int p = 0; p < P; ++p) gbeta[p] = dbeta_row(g.modes[p]);

  std::vector<cplx> zeta(nb);
  for (int j = 0; j < nb; ++j) zeta[j] = bg.node(j);

  BoundaryModeSequence out(nb, P);
#ifdef _OPENMP
#pragma omp parallel
#endif
  {
    std::vector<cplx> acc(P), series(P + 2);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
    for (int l = 0; l < nb; ++l) {
      const cplx z = zeta[l];
      std::fill(acc.begin(), acc.end(), cplx{});
      for (int j = 0; j < nb; ++j) {
        cplx c1, rho;
        double two_re;
        if (j == l) {
          rho = -std::conj(z) / z;
          two_re = 1.0;
        } else {
          const cplx dz = zeta[j] - z;
          c1 = zeta[j] / dz;
          rho = std::conj(dz) / dz;
          two_re = 2.0 * c1.real();
        }
        series[P] = series[P + 1] = 0.0;
        for (int p = P - 1; p >= 0; --p)
          series[p] = (p + 2 < P) ? rho * (g.modes[p + 2][j] + series[p + 2]) : cplx{};
        for (int p = 0; p < P; ++p) {
          cplx pv_part;
          if (j == l)
            pv_part = gbeta[p][l] / cplx(0.0, 1.0);  // (dg/dbeta)/(i) = dg/dzeta * zeta
          else
            pv_part = (g.modes[p][j] - g.modes[p][l]) * c1;
          acc[p] += cplx(0.0, dbeta) * (pv_part + two_re * series[p]);
        }
      }
      for (int p = 0; p < P; ++p)
        out.modes[p][l] = (acc[p] / kPi) + cplx(0.0, 1.0) * g.modes[p][l];
    }
  }
  return out;
}

double range_residual(const BoundaryModeSequence& g) {
  const double ng = weighted_norm(g);
  BoundaryModeSequence hg = bukhgeim_hilbert(g);
  BoundaryModeSequence res(g.nbeta, g.count());
  for (int p = 0; p < g.count(); ++p)
    for (int j = 0; j < g.nbeta; ++j)
      res.modes[p][j] = g.modes[p][j] + cplx(0.0, 1.0) * hg.modes[p][j];
  const double nr = weighted_norm(res);
  return ng > 0.0 ? nr / ng : nr;
}

}  // namespace rt
