// Forward solver for the stationary transport boundary value problem on the
// unit disk: theta.grad(u) + a u - K u = f, u = 0 on the incoming boundary,
// solved by source iteration u <- T1^{-1} f + T1^{-1} K u.
#pragma once

#include "grid.hpp"

namespace rt {

// Attenuation a plus scattering-kernel Fourier coefficients k_0, k_{-1}, ...,
// k_{-M} of k(z,cos t) = k_0(z) + 2 sum_{n=1}^{M} k_{-n}(z) cos(n t).
struct MediumSpec {
  ScalarField a;
  std::vector<ScalarField> kcoef;

  int degree() const { return static_cast<int>(kcoef.size()) - 1; }
  const ScalarField& k(int n) const { return kcoef.at(n); }  // k_{-n}
  ScalarField sigma_a() const;                               // a - k_0
  double subcritical_margin() const;                         // min(a - k_0)
};

// Linearly anisotropic source f(z,theta) = f0(z) + theta.F(z); the complex
// form f1 = (F1 + i F2)/2 carries the +-1 angular modes.
struct SourceSpec {
  ScalarField f0;
  VectorField F;

  ComplexField f1() const;
};

// Exiting radiation g(zeta,theta) on boundary nodes x directions; zero stored
// at incoming pairs (nu.theta < 0).
struct BoundaryData {
  BoundaryGrid bnd;
  DirectionGrid dirs;
  std::vector<double> v;

  BoundaryData() = default;
  BoundaryData(const BoundaryGrid& b, const DirectionGrid& d)
      : bnd(b), dirs(d), v(static_cast<size_t>(b.nbeta) * d.ntheta, 0.0) {}

  double& at(int j, int m) { return v[static_cast<size_t>(j) * dirs.ntheta + m]; }
  double at(int j, int m) const { return v[static_cast<size_t>(j) * dirs.ntheta + m]; }
  // nu(zeta_j).theta_m = cos(beta_j - theta_m)
  double nu_dot_theta(int j, int m) const { return std::cos(bnd.beta(j) - dirs.theta(m)); }
};

struct RayResult {
  double integral;  // int_0^tau a(z + t theta) dt
  double tau;       // distance from z to the boundary along theta
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Divergent beam transform of a from z in direction theta (unit), composite
// trapezoid with step <= step. Exit length has the closed form
// tau = -z.theta + sqrt(1 - |z|^2 + (z.theta)^2).
RayResult ray_integral(const ScalarField& a, cplx z, cplx theta, double step);

double exit_length(cplx z, cplx theta);

// [T1^{-1} s](x,theta) = int_{-tau_-}^{0} exp(-int_s^0 a) s(x+s theta, theta) ds,
// ray marching with step h_ray and trapezoid-accumulated attenuation.
AngularField apply_T1inv(const AngularField& s, const MediumSpec& medium, double h_ray);

// (K u)(z,theta) = sum_{|n|<=M} k_{-|n|}(z) u_n(z) e^{i n theta}, evaluated by
// angular mode multiplication (exact for the finite kernel).
AngularField apply_K(const AngularField& u, const MediumSpec& medium);

struct ForwardResult {
  AngularField u;
  int iterations = 0;
  double residual = 0.0;  // last relative sup-norm update
};

// Source iteration for u = T1^{-1} f + T1^{-1} K u. Stops when the relative
// update ||u_new - u_old|| / ||u_1|| drops below tol; throws DivergenceError
// after max_iter sweeps.
ForwardResult solve_forward(const MediumSpec& medium, const SourceSpec& source,
                            const DirectionGrid& dirs, double tol, int max_iter,
                            double h_ray);

// Builds the angular source field f(z,theta) = f0 + theta.F.
AngularField source_field(const SourceSpec& source, const DirectionGrid& dirs);

// Outgoing trace of u, by linear radial extrapolation from the two outermost
// rings; exact zeros on incoming pairs.
BoundaryData extract_boundary_data(const AngularField& u);

// Identity obtained by integrating the transport equation over the phase
// space: boundary outflow equals the volume integral of f0 - sigma_a u_0.
struct MassBalance {
  double boundary_flux = 0.0;
  double volume_source = 0.0;
  double rel_error = 0.0;
};
MassBalance check_mass_balance(const AngularField& u, const BoundaryData& g,
                               const MediumSpec& medium, const SourceSpec& source);

}  // namespace rt
