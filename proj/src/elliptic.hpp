// Dirichlet Poisson solver on the unit disk (angular Fourier decomposition,
// tridiagonal radial solves), the sequential dbar-cascade that recovers the
// shallow angular modes, and the Hodge decomposition of vector fields.
#pragma once

#include "aanalytic.hpp"
#include "grid.hpp"
#include "transport.hpp"

namespace rt {

struct PoissonProblem {
  ComplexField rhs;
  std::vector<cplx> bc;  // boundary values at zeta_j, j = 0..nbeta-1
};

// Solves Laplace(u) = rhs with u = bc on the unit circle. Per angular mode m
// the radial ODE u'' + u'/r - m^2 u / r^2 = rhs_m is discretized with second
// order differences; center regularity enters through the parity ghost ring
// u_m(-r) = (-1)^m u_m(r) and the Dirichlet value through a ghost ring
// averaging to bc at r = 1.
ComplexField poisson_dirichlet(const PoissonProblem& p);

// Convenience wrapper for real data.
ScalarField poisson_dirichlet_real(const ScalarField& rhs, const std::vector<double>& bc);

// Recovers modes u_{-M+1}, ..., u_{-1} from the two deepest known modes
// u_{-M-1}, u_{-M}: step j solves
//   Laplace(u_{-M+j}) = -4 d^2 u_{-M+j-2} - 4 d[(a - k_{-M+j-1}) u_{-M+j-1}]
// with Dirichlet data g_{-M+j}, each step feeding the next. Returns the list
// ordered by increasing mode (u_{-M+1} first); empty when M = 1.
std::vector<ComplexField> dbar_cascade(const ComplexField& u_deep2,
                                       const ComplexField& u_deep1,
                                       const MediumSpec& medium,
                                       const BoundaryModeSequence& g, int M);

// F = grad(phi) + Fs with phi = 0 on the boundary and div(Fs) = 0.
// div F is evaluated as 4 Re d(f1) with f1 = (F1 + i F2)/2.
struct HodgeParts {
  ScalarField phi;
  VectorField solenoidal;
};
HodgeParts hodge_decompose(const VectorField& F);

// Gradient of a real field via 2*(Re dbar, Im dbar).
VectorField gradient(const ScalarField& phi);

}  // namespace rt
