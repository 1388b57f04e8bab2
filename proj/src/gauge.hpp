// Gauge-equivalent source pairs: two linearly anisotropic sources produce the
// same outgoing data exactly when their vector parts differ by the gradient of
// (f0 - f0_tilde)/sigma_a with that quotient vanishing on the boundary.
#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "transport.hpp"

namespace rt {

// F = F_tilde + grad((f0 - f0_tilde)/sigma_a). Requires sigma_a > 0 and the
// quotient's boundary trace below boundary_tol in magnitude.
VectorField gauge_partner(const ScalarField& f0, const ScalarField& f0_tilde,
                          const VectorField& F_tilde, const MediumSpec& medium,
                          double boundary_tol = 1e-8);

struct GaugeReport {
  double data_sup_diff = 0.0;
  double data_l2_diff = 0.0;
  double data_sup_scale = 0.0;  // max of the two data sup norms
  double data_l2_scale = 0.0;
  double converse_residual_l2 = 0.0;  // ||F_A - F_B - grad(psi)||_L2
  double converse_rel = 0.0;          // relative to ||F_A - F_B||_L2
  int iterations_a = 0;
  int iterations_b = 0;
};

// Solves the forward problem for both sources and compares their boundary
// data; also evaluates the converse gradient identity.
GaugeReport gauge_verify(const SourceSpec& pair_a, const SourceSpec& pair_b,
                         const MediumSpec& medium, const DirectionGrid& dirs,
                         double tol, int max_iter, double h_ray);

}  // namespace rt
