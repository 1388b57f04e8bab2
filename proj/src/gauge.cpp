#include "gauge.hpp"

#include <algorithm>
#include <cmath>

#include "elliptic.hpp"

namespace rt {

namespace {

ScalarField quotient(const ScalarField& f0, const ScalarField& f0_tilde,
                     const MediumSpec& medium) {
  const ScalarField sa = medium.sigma_a();
  double margin = sa.v[0];
  for (double x : sa.v) margin = std::min(margin, x);
  if (margin <= 0.0)
    throw PreconditionError("gauge: sigma_a = a - k0 must be strictly positive");
  ScalarField psi(f0.grid);
  for (int k = 0; k < psi.size(); ++k) psi.v[k] = (f0.v[k] - f0_tilde.v[k]) / sa.v[k];
  return psi;
}

double boundary_trace_max(const ScalarField& psi) {
  const PolarGrid& g = psi.grid;
  const double slope = (1.0 - g.radius(g.nr - 1)) / g.dr();
  double worst = 0.0;
  for (int j = 0; j < g.nbeta; ++j) {
    const double po = psi.at(g.nr - 1, j), pi = psi.at(g.nr - 2, j);
    worst = std::max(worst, std::abs(po + slope * (po - pi)));
  }
  return worst;
}

}  // namespace

VectorField gauge_partner(const ScalarField& f0, const ScalarField& f0_tilde,
                          const VectorField& F_tilde, const MediumSpec& medium,
                          double boundary_tol) {
  ScalarField psi = quotient(f0, f0_tilde, medium);
  const double trace = boundary_trace_max(psi);
  if (trace > boundary_tol)
    throw PreconditionError("gauge_partner: (f0 - f0_tilde)/sigma_a does not vanish on "
                            "the boundary (trace " + std::to_string(trace) + ")");
  const VectorField gp = gradient(psi);
  VectorField F = F_tilde;
  for (int k = 0; k < F.x.size(); ++k) {
    F.x.v[k] += gp.x.v[k];
    F.y.v[k] += gp.y.v[k];
  }
  return F;
}

GaugeReport gauge_verify(const SourceSpec& pair_a, const SourceSpec& pair_b,
                         const MediumSpec& medium, const DirectionGrid& dirs,
                         double tol, int max_iter, double h_ray) {
  GaugeReport rep;
  ForwardResult fa = solve_forward(medium, pair_a, dirs, tol, max_iter, h_ray);
  ForwardResult fb = solve_forward(medium, pair_b, dirs, tol, max_iter, h_ray);
  rep.iterations_a = fa.iterations;
  rep.iterations_b = fb.iterations;

  const BoundaryData ga = extract_boundary_data(fa.u);
  const BoundaryData gb = extract_boundary_data(fb.u);
  const double arc = ga.bnd.arc_weight() * ga.dirs.weight();
  double l2d = 0.0, l2a = 0.0, l2b = 0.0;
  for (size_t k = 0; k < ga.v.size(); ++k) {
    const double diff = ga.v[k] - gb.v[k];
    rep.data_sup_diff = std::max(rep.data_sup_diff, std::abs(diff));
    rep.data_sup_scale = std::max({rep.data_sup_scale, std::abs(ga.v[k]), std::abs(gb.v[k])});
    l2d += diff * diff * arc;
    l2a += ga.v[k] * ga.v[k] * arc;
    l2b += gb.v[k] * gb.v[k] * arc;
  }
  rep.data_l2_diff = std::sqrt(l2d);
  rep.data_l2_scale = std::sqrt(std::max(l2a, l2b));

  // converse identity: F_a - F_b should equal grad((f0_a - f0_b)/sigma_a)
  ScalarField psi = quotient(pair_a.f0, pair_b.f0, medium);
  const VectorField gp = gradient(psi);
  VectorField res(pair_a.F.grid());
  VectorField dF(pair_a.F.grid());
  for (int k = 0; k < res.x.size(); ++k) {
    dF.x.v[k] = pair_a.F.x.v[k] - pair_b.F.x.v[k];
    dF.y.v[k] = pair_a.F.y.v[k] - pair_b.F.y.v[k];
    res.x.v[k] = dF.x.v[k] - gp.x.v[k];
    res.y.v[k] = dF.y.v[k] - gp.y.v[k];
  }
  rep.converse_residual_l2 = l2_norm(res);
  const double nd = l2_norm(dF);
  rep.converse_rel = nd > 0.0 ? rep.converse_residual_l2 / nd : rep.converse_residual_l2;
  return rep;
}

}  // namespace rt
