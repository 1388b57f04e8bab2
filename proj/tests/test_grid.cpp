#include <doctest.h>

#include <cmath>
#include <random>

#include "grid.hpp"

using namespace rt;

namespace {

AngularField make_angular(const PolarGrid& g, const DirectionGrid& d,
                          double (*fn)(cplx, double)) {
  AngularField f(g, d);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j)
      for (int m = 0; m < d.ntheta; ++m) f.at(i, j, m) = fn(g.node(i, j), d.theta(m));
  return f;
}

}  // namespace

TEST_CASE("angular modes of trivial fields") {
  PolarGrid g(8, 16);
  DirectionGrid d(16);

  auto ones = make_angular(g, d, [](cplx, double) { return 1.0; });
  auto m = angular_modes(ones, 4);
  for (int node = 0; node < g.size(); ++node) {
    CHECK(m[0].v[node].real() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::abs(m[0].v[node].imag()) < 1e-14);
    for (int n = 1; n <= 4; ++n) CHECK(std::abs(m[n].v[node]) < 1e-14);
  }

  auto cosf = make_angular(g, d, [](cplx, double t) { return std::cos(t); });
  m = angular_modes(cosf, 4);
  for (int node = 0; node < g.size(); ++node) {
    CHECK(m[1].v[node].real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(std::abs(m[0].v[node]) < 1e-13);
    CHECK(std::abs(m[2].v[node]) < 1e-13);
  }
}

TEST_CASE("angular modes round-trip band-limited fields against the direct DFT") {
  PolarGrid g(6, 12);
  DirectionGrid d(32);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // random band-limited real field: coefficients for modes 0..6
  const int nmax = 6;
  std::vector<std::vector<cplx>> coef(g.size(), std::vector<cplx>(nmax + 1));
  for (auto& row : coef) {
    row[0] = u(rng);
    for (int n = 1; n <= nmax; ++n) row[n] = cplx(u(rng), u(rng));
  }
  AngularField f(g, d);
  for (int node = 0; node < g.size(); ++node)
    for (int m = 0; m < d.ntheta; ++m) {
      double val = coef[node][0].real();
      for (int n = 1; n <= nmax; ++n)
        val += 2.0 * (coef[node][n] * std::polar(1.0, n * d.theta(m))).real();
      f.v[f.slice_offset(m) + node] = val;
    }

  auto modes = angular_modes(f, nmax);
  for (int node = 0; node < g.size(); ++node)
    for (int n = 0; n <= nmax; ++n)
      CHECK(std::abs(modes[n].v[node] - std::conj(coef[node][n])) < 1e-12);

  // synthesis back to samples
  AngularField back = angular_synthesis_real(modes, d);
  for (size_t k = 0; k < f.v.size(); ++k)
    CHECK(back.v[k] == doctest::Approx(f.v[k]).epsilon(1e-12));

  // Parseval under the normalized measure
  for (int node = 0; node < g.size(); node += 11) {
    double lhs = 0.0;
    for (int m = 0; m < d.ntheta; ++m) {
      const double v = f.v[f.slice_offset(m) + node];
      lhs += v * v / d.ntheta;
    }
    double rhs = std::norm(modes[0].v[node]);
    for (int n = 1; n <= nmax; ++n) rhs += 2.0 * std::norm(modes[n].v[node]);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("angular modes rejects too many modes") {
  PolarGrid g(4, 8);
  DirectionGrid d(8);
  AngularField f(g, d);
  CHECK_THROWS_AS(angular_modes(f, 5), std::invalid_argument);
}

TEST_CASE("d and dbar on holomorphic and anti-holomorphic monomials") {
  PolarGrid g(64, 128);
  ComplexField z(g), zb(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) {
      z.at(i, j) = g.node(i, j);
      zb.at(i, j) = std::conj(g.node(i, j));
    }

  ComplexField dz = d(z), dbz = dbar(z);
  ComplexField dzb = d(zb), dbzb = dbar(zb);
  for (int i = 1; i < g.nr - 1; ++i)
    for (int j = 0; j < g.nbeta; j += 5) {
      CHECK(std::abs(dz.at(i, j) - 1.0) < 1e-10);
      CHECK(std::abs(dbz.at(i, j)) < 1e-10);
      CHECK(std::abs(dbzb.at(i, j) - 1.0) < 1e-10);
      CHECK(std::abs(dzb.at(i, j)) < 1e-10);
    }
}

TEST_CASE("d of |z|^2 equals conj(z) and matches Cartesian finite differences") {
  PolarGrid g(64, 128);
  ComplexField f(g);
  ScalarField fr(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) {
      f.at(i, j) = std::norm(g.node(i, j));
      fr.at(i, j) = std::norm(g.node(i, j));
    }
  ComplexField df = d(f);
  for (int i = 1; i < g.nr - 1; ++i)
    for (int j = 0; j < g.nbeta; j += 7)
      CHECK(std::abs(df.at(i, j) - std::conj(g.node(i, j))) < 2e-4);

  // independent check through Cartesian central differences of interpolated samples
  const double eps = 1e-4;
  for (int i = 20; i < 44; i += 6)
    for (int j = 0; j < g.nbeta; j += 31) {
      const cplx p = g.node(i, j);
      const double fx =
          (interpolate(fr, p + cplx(eps, 0)) - interpolate(fr, p - cplx(eps, 0))) / (2 * eps);
      const double fy =
          (interpolate(fr, p + cplx(0, eps)) - interpolate(fr, p - cplx(0, eps))) / (2 * eps);
      const cplx dfd = 0.5 * cplx(fx, -fy);
      CHECK(std::abs(df.at(i, j) - dfd) < 5e-3);
    }
}

TEST_CASE("conjugation rule dbar(conj f) = conj(d f) holds exactly") {
  PolarGrid g(16, 32);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ComplexField f(g), fc(g);
  for (int k = 0; k < f.size(); ++k) {
    f.v[k] = cplx(u(rng), u(rng));
    fc.v[k] = std::conj(f.v[k]);
  }
  ComplexField lhs = dbar(fc), rhs = d(f);
  for (int k = 0; k < f.size(); ++k) CHECK(lhs.v[k] == std::conj(rhs.v[k]));
}

TEST_CASE("4 d dbar approximates the Laplacian at second order") {
  auto err_at = [](int nr, int nbeta) {
    PolarGrid g(nr, nbeta);
    ComplexField f(g);
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nbeta; ++j) {
        const cplx z = g.node(i, j);
        f.at(i, j) = std::exp(-std::norm(z) / 0.3) * (1.0 + 0.3 * z.real());
      }
    ComplexField lap = d(dbar(f));
    double worst = 0.0;
    for (int i = 2; i < g.nr - 2; ++i)
      for (int j = 0; j < g.nbeta; ++j) {
        const cplx z = g.node(i, j);
        const double r2 = std::norm(z);
        const double e = std::exp(-r2 / 0.3);
        const double base = e * (4.0 * r2 / 0.09 - 4.0 / 0.3);
        const double exact = base + 0.3 * (z.real() * base - (4.0 / 0.3) * e * z.real());
        worst = std::max(worst, std::abs(4.0 * lap.at(i, j) - exact));
      }
    return worst;
  };
  const double e1 = err_at(32, 64);
  const double e2 = err_at(64, 128);
  CHECK(e2 < e1 / 2.5);  // ~second order
}

TEST_CASE("interpolation basics") {
  PolarGrid g(16, 32);
  ScalarField c(g);
  for (auto& v : c.v) v = 4.25;
  CHECK(interpolate(c, cplx(0.3, -0.2)) == doctest::Approx(4.25));
  CHECK(interpolate(c, cplx(0.0, 0.0)) == doctest::Approx(4.25));

  ScalarField re(g);
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) re.at(i, j) = g.node(i, j).real();
  CHECK(interpolate(re, g.node(7, 12)) == doctest::Approx(re.at(7, 12)).epsilon(1e-14));

  CHECK_THROWS_AS(interpolate(c, cplx(1.5, 0.0)), std::domain_error);
}

TEST_CASE("interpolation of a Gaussian bump is second-order accurate") {
  PolarGrid g(64, 256);
  ScalarField f(g);
  auto bump = [](cplx z) {
    return std::exp(-(std::norm(z - cplx(0.2, -0.1))) / 0.16);
  };
  for (int i = 0; i < g.nr; ++i)
    for (int j = 0; j < g.nbeta; ++j) f.at(i, j) = bump(g.node(i, j));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ur(0.05, 0.95), ub(0.0, kTwoPi);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const cplx p = std::polar(ur(rng), ub(rng));
    worst = std::max(worst, std::abs(interpolate(f, p) - bump(p)));
  }
  CHECK(worst < 5e-4);  // O(h^2) at h = 1/64
}
