#include <doctest.h>

#include <cmath>
#include <random>

#include "elliptic.hpp"

using namespace rt;

namespace {

double bump(cplx z, cplx c, double w) { return std::exp(-std::norm(z - c) / (w * w)); }

// manufactured solution with analytic Laplacian
double mu_val(cplx z) {
  const double r2 = std::norm(z);
  const double b = std::atan2(z.imag(), z.real());
  return std::sin(kPi * r2) * (1.0 + 0.5 * std::cos(3.0 * b)) + z.real();
}
double mu_lap(cplx z) {
  const double r2 = std::norm(z);
  const double b = std::atan2(z.imag(), z.real());
  const double ang = 1.0 + 0.5 * std::cos(3.0 * b);
  const double f = std::sin(kPi * r2);
  const double rad = 4.0 * kPi * std::cos(kPi * r2) - 4.0 * kPi * kPi * r2 * f;
  return rad * ang - 4.5 * f * std::cos(3.0 * b) / r2;
}

double manufactured_error(int nr, int nbeta) {
  PolarGrid g(nr, nbeta);
  ScalarField rhs(g);
  std::vector<double> bc(nbeta);
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nbeta; ++j) rhs.at(i, j) = mu_lap(g.node(i, j));
  for (int j = 0; j < nbeta; ++j) bc[j] = mu_val(std::polar(1.0, g.beta(j)));
  ScalarField u = poisson_dirichlet_real(rhs, bc);
  double worst = 0.0;
  for (int i = 0; i < nr; ++i)
    for (int j = 0; j < nbeta; ++j)
      worst = std::max(worst, std::abs(u.at(i, j) - mu_val(g.node(i, j))));
  return worst;
}

}  // namespace

TEST_CASE("harmonic extension of Re(zeta)") {
  PolarGrid g(32, 64);
  ScalarField rhs(g);
  std::vector<double> bc(g.nbeta);
  for (int j = 0; j < g.nbeta; ++j) bc[j] = std::cos(g.beta(j));
  ScalarField u = poisson_dirichlet_real(rhs, bc);
  double worst = 0.0;
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j)
      worst = std::max(worst, std::abs(u.at(i, j) - g.node(i, j).real()));
  CHECK(worst < 1e-10);  // exact up to the solve: bc mode is resolved exactly
}

TEST_CASE("rhs 4 with unit boundary gives r^2") {
  PolarGrid g(32, 64);
  ScalarField rhs(g);
  for (auto& v : rhs.v) v = 4.0;
  ScalarField u = poisson_dirichlet_real(rhs, std::vector<double>(g.nbeta, 1.0));
  double worst = 0.0;
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) {
      const double r = g.radius(i);
      worst = std::max(worst, std::abs(u.at(i, j) - r * r));
    }
  CHECK(worst < 5e-4);  // O(h^2) from the Dirichlet ghost at h = 1/32
}

TEST_CASE("manufactured solution converges at second order") {
  const double e1 = manufactured_error(24, 96);
  const double e2 = manufactured_error(48, 192);
  const double e3 = manufactured_error(96, 384);
  const double o12 = std::log2(e1 / e2);
  const double o23 = std::log2(e2 / e3);
  CHECK(o12 > 1.7);
  CHECK(o12 < 2.3);
  CHECK(o23 > 1.7);
  CHECK(o23 < 2.3);
}

TEST_CASE("zero data yields the zero field exactly") {
  PolarGrid g(16, 32);
  PoissonProblem p;
  p.rhs = ComplexField(g);
  p.bc.assign(g.nbeta, cplx{});
  ComplexField u = poisson_dirichlet(p);
  for (const cplx& v : u.v) CHECK(std::abs(v) == 0.0);
}

TEST_CASE("dbar cascade is empty for M = 1 and zero for zero input") {
  PolarGrid g(16, 32);
  MediumSpec med;
  med.a = ScalarField(g);
  med.kcoef.assign(2, ScalarField(g));
  BoundaryModeSequence gm(g.nbeta, 4);
  CHECK(dbar_cascade(ComplexField(g), ComplexField(g), med, gm, 1).empty());

  MediumSpec med2 = med;
  med2.kcoef.assign(3, ScalarField(g));
  auto out = dbar_cascade(ComplexField(g), ComplexField(g), med2, gm, 2);
  REQUIRE(out.size() == 1);
  CHECK(max_abs(out[0]) == 0.0);
}

TEST_CASE("hodge decomposition separates gradients from rotations") {
  PolarGrid g(48, 192);
  const cplx c(0.15, -0.05);
  const double w = 0.35;

  // divergence-free input: perp-gradient of a bump
  VectorField Fperp(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) {
      const cplx z = g.node(i, j);
      const double v = bump(z, c, w);
      const double gx = v * (-2.0 * (z.real() - c.real()) / (w * w));
      const double gy = v * (-2.0 * (z.imag() - c.imag()) / (w * w));
      Fperp.x.at(i, j) = -gy;
      Fperp.y.at(i, j) = gx;
    }
  HodgeParts hp = hodge_decompose(Fperp);
  CHECK(max_abs(hp.phi) < 5e-3);
  CHECK(rel_l2_error(hp.solenoidal, Fperp) < 2e-2);

  // pure gradient input recovers the potential and kills the solenoidal part
  VectorField Fgrad(g);
  ScalarField phi0(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) {
      const cplx z = g.node(i, j);
      const double v = bump(z, c, 0.3);
      phi0.at(i, j) = v;
      Fgrad.x.at(i, j) = v * (-2.0 * (z.real() - c.real()) / 0.09);
      Fgrad.y.at(i, j) = v * (-2.0 * (z.imag() - c.imag()) / 0.09);
    }
  HodgeParts hg = hodge_decompose(Fgrad);
  CHECK(l2_norm(hg.solenoidal) < 2e-2 * l2_norm(Fgrad));
  ScalarField dphi = hg.phi;
  for (int k = 0; k < dphi.size(); ++k) dphi.v[k] -= phi0.v[k];
  CHECK(max_abs(dphi) < 5e-3);
}

TEST_CASE("hodge solenoidal output satisfies Re(d f1s) = 0 and is idempotent") {
  PolarGrid g(48, 192);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // random smooth field from a few bumps
  VectorField F(g);
  for (int t = 0; t < 4; ++t) {
    const cplx c(0.4 * u(rng), 0.4 * u(rng));
    const double w = 0.3 + 0.1 * std::abs(u(rng));
    const double ax = u(rng), ay = u(rng);
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nbeta; ++j) {
        const double v = bump(g.node(i, j), c, w);
        F.x.at(i, j) += ax * v;
        F.y.at(i, j) += ay * v;
      }
  }
  HodgeParts hp = hodge_decompose(F);

  ComplexField f1s(g);
  for (int k = 0; k < g.size(); ++k)
    f1s.v[k] = cplx(hp.solenoidal.x.v[k], hp.solenoidal.y.v[k]) * 0.5;
  ComplexField df = d(f1s);
  double worst = 0.0;
  for (int i = 1; i < g.nr - 1; ++i)
    for (int j = 0; j < g.nbeta; ++j) worst = std::max(worst, std::abs(df.at(i, j).real()));
  CHECK(worst < 0.05 * max_abs(F.x));

  HodgeParts again = hodge_decompose(hp.solenoidal);
  CHECK(max_abs(again.phi) < 1e-2 * max_abs(hp.solenoidal.x));
  CHECK(rel_l2_error(again.solenoidal, hp.solenoidal) < 1e-2);
}
