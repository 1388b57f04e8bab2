#include "elliptic.hpp"

#include <cmath>

namespace rt {

namespace {

// Thomas algorithm for a complex tridiagonal system; overwrites the inputs.
void solve_tridiag(std::vector<cplx>& lower, std::vector<cplx>& diag,
                   std::vector<cplx>& upper, std::vector<cplx>& rhs) {
  const int n = static_cast<int>(diag.size());
  for (int i = 1; i < n; ++i) {
    const cplx m = lower[i] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (int i = n - 2; i >= 0; --i) rhs[i] = (rhs[i] - upper[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

ComplexField poisson_dirichlet(const PoissonProblem& p) {
  const PolarGrid& g = p.rhs.grid;
  const int nr = g.nr, nb = g.nbeta;
  if (static_cast<int>(p.bc.size()) != nb)
    throw std::invalid_argument("poisson_dirichlet: bc size mismatch");
  const double h = g.dr();

  // angular DFT of rhs per ring and of the boundary values
  std::vector<cplx> w(nb);
  for (int j = 0; j < nb; ++j) w[j] = std::polar(1.0, -kTwoPi * j / nb);
  std::vector<std::vector<cplx>> rhat(nb, std::vector<cplx>(nr));
  for (int i = 0; i < nr; ++i) {
    const cplx* row = p.rhs.v.data() + g.index(i, 0);
    for (int m = 0; m < nb; ++m) {
      cplx acc = 0.0;
      for (int j = 0; j < nb; ++j) acc += row[j] * w[(static_cast<long>(m) * j) % nb];
      rhat[m][i] = acc / double(nb);
    }
  }
  std::vector<cplx> bhat(nb);
  for (int m = 0; m < nb; ++m) {
    cplx acc = 0.0;
    for (int j = 0; j < nb; ++j) acc += p.bc[j] * w[(static_cast<long>(m) * j) % nb];
    bhat[m] = acc / double(nb);
  }

  // per-mode radial tridiagonal solves
  std::vector<std::vector<cplx>> uhat(nb);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int m = 0; m < nb; ++m) {
    const int ms = (m <= nb / 2) ? m : m - nb;
    const double m2 = double(ms) * ms;
    const double parity = (ms % 2 == 0) ? 1.0 : -1.0;
    std::vector<cplx> lo(nr), di(nr), up(nr), rr = rhat[m];
    for (int i = 0; i < nr; ++i) {
      const double r = g.radius(i);
      lo[i] = 1.0 / (h * h) - 1.0 / (2.0 * h * r);
      di[i] = -2.0 / (h * h) - m2 / (r * r);
      up[i] = 1.0 / (h * h) + 1.0 / (2.0 * h * r);
    }
    // center: ghost value u(-r0) = parity * u(r0)
    di[0] += parity * lo[0];
    // boundary: ghost averages with the last ring to the Dirichlet value
    di[nr - 1] -= up[nr - 1];
    rr[nr - 1] -= 2.0 * bhat[m] * up[nr - 1];
    solve_tridiag(lo, di, up, rr);
    uhat[m] = std::move(rr);
  }

  // synthesis
  ComplexField out(g);
  for (int i = 0; i < nr; ++i) {
    cplx* row = out.v.data() + g.index(i, 0);
    for (int j = 0; j < nb; ++j) {
      cplx acc = 0.0;
      for (int m = 0; m < nb; ++m)
        acc += uhat[m][i] * std::conj(w[(static_cast<long>(m) * j) % nb]);
      row[j] = acc;
    }
  }
  return out;
}

ScalarField poisson_dirichlet_real(const ScalarField& rhs, const std::vector<double>& bc) {
  PoissonProblem p;
  p.rhs = to_complex(rhs);
  p.bc.assign(bc.begin(), bc.end());
  ComplexField u = poisson_dirichlet(p);
  ScalarField out(rhs.grid);
  for (int k = 0; k < out.size(); ++k) out.v[k] = u.v[k].real();
  return out;
}

std::vector<ComplexField> dbar_cascade(const ComplexField& u_deep2,
                                       const ComplexField& u_deep1,
                                       const MediumSpec& medium,
                                       const BoundaryModeSequence& g, int M) {
  std::vector<ComplexField> out;
  if (M <= 1) return out;
  const PolarGrid& grid = u_deep1.grid;
  ComplexField prev2 = u_deep2;  // u_{-M+j-2}
  ComplexField prev1 = u_deep1;  // u_{-M+j-1}
  for (int j = 1; j <= M - 1; ++j) {
    const ScalarField& kc = medium.k(M - j + 1);  // k_{-M+j-1}
    ComplexField prod(grid);
    for (int n = 0; n < grid.size(); ++n)
      prod.v[n] = (medium.a.v[n] - kc.v[n]) * prev1.v[n];
    ComplexField rhs = d(d(prev2));
    const ComplexField dp = d(prod);
    for (int n = 0; n < grid.size(); ++n) rhs.v[n] = -4.0 * (rhs.v[n] + dp.v[n]);

    PoissonProblem p;
    p.rhs = std::move(rhs);
    p.bc = g.modes.at(M - j);  // trace of u_{-M+j}
    ComplexField next = poisson_dirichlet(p);
    out.push_back(next);
    prev2 = std::move(prev1);
    prev1 = std::move(next);
  }
  return out;
}

VectorField gradient(const ScalarField& phi) {
  const ComplexField gb = dbar(to_complex(phi));
  VectorField out(phi.grid);
  for (int k = 0; k < phi.size(); ++k) {
    out.x.v[k] = 2.0 * gb.v[k].real();
    out.y.v[k] = 2.0 * gb.v[k].imag();
  }
  return out;
}

HodgeParts hodge_decompose(const VectorField& F) {
  const PolarGrid& g = F.grid();
  ComplexField f1(g);
  for (int k = 0; k < g.size(); ++k) f1.v[k] = cplx(F.x.v[k], F.y.v[k]) * 0.5;
  const ComplexField df1 = d(f1);
  ScalarField div(g);
  for (int k = 0; k < g.size(); ++k) div.v[k] = 4.0 * df1.v[k].real();

  HodgeParts parts;
  parts.phi = poisson_dirichlet_real(div, std::vector<double>(g.nbeta, 0.0));
  const VectorField gp = gradient(parts.phi);
  parts.solenoidal = F;
  for (int k = 0; k < g.size(); ++k) {
    parts.solenoidal.x.v[k] -= gp.x.v[k];
    parts.solenoidal.y.v[k] -= gp.y.v[k];
  }
  return parts;
}

}  // namespace rt
