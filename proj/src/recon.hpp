// End-to-end source reconstruction from outgoing boundary data: interior mode
// recovery through the conjugated Bukhgeim-Cauchy extension, then the
// Poisson/Hodge stage that produces the scalar source and the visible part of
// the vector source.
#pragma once

#include "aanalytic.hpp"
#include "elliptic.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "transport.hpp"

namespace rt {

struct ReconOptions {
  int nmodes = 32;             // truncation N of the recovered stack
  double h_ray = 0.0;          // 0 -> 0.5/nr
  int hilbert_ns = 0;          // Radon/Hilbert s-grid size; 0 -> 4*nbeta
  double warn_residual = 0.2;  // range residual above this is flagged
  double fail_residual = 1.0;  // above this the data is rejected
  double subcritical_delta = 1e-9;
};

// Per-medium cache of the conjugation machinery (h depends only on the
// attenuation and grids, not on the data).
struct ReconContext {
  PolarGrid grid;
  DirectionGrid dirs;
  ConjugationCoeffs cc;
};

ReconContext make_recon_context(const MediumSpec& medium, const DirectionGrid& dirs,
                                const ReconOptions& opt);

struct ReconDiagnostics {
  double range_residual = 0.0;
  bool range_warned = false;
  double neg_mass = 0.0;
  std::vector<double> cascade_residuals;  // L2 dbar-equation residual per step
  int iterations = 0;                     // unused by recon; kept for reports
};

struct ReconResult {
  // <head, u_{-1}, ..., u_{-N}> where head is u_0 - phi (solenoidal variant)
  // or u_0 / v_0 / w_0 for the variants that pin the gauge.
  ModeSequence modes;
  ScalarField head;  // real part of the head entry
  bool has_f0 = false;
  ScalarField f0;
  VectorField F;  // solenoidal part, or the full field when recoverable
  ReconDiagnostics diag;
};

// Stack <u_{-1}, ..., u_{-N}> from boundary data: boundary modes, conjugation
// e^{-G} of the M-shifted stack, Bukhgeim-Cauchy extension, e^{+G} back, and
// the dbar-cascade for the shallow modes.
ModeSequence recover_interior_modes(const BoundaryData& g, const MediumSpec& medium,
                                    const ReconContext& ctx, const ReconOptions& opt,
                                    ReconDiagnostics* diag = nullptr);

// Scalar head u_0 - phi and the solenoidal part Fs of the vector source.
ReconResult recover_solenoidal(const BoundaryData& g, const MediumSpec& medium,
                               const ReconContext& ctx, const ReconOptions& opt);

// Assuming div F = 0 a priori: recovers u_0, f_0 and the full F.
ReconResult recover_divfree(const BoundaryData& g, const MediumSpec& medium,
                            const ReconContext& ctx, const ReconOptions& opt);

// From the pair (g_full, g_iso): v-branch recovers f_0, w-branch recovers the
// full F; requires a subcritical medium.
ReconResult recover_twodata(const BoundaryData& g_full, const BoundaryData& g_iso,
                            const MediumSpec& medium, const ReconContext& ctx,
                            const ReconOptions& opt);

// On a mask where f_0 is known to vanish, recovers the full F from single
// data; requires a subcritical medium. Mask values: 1 inside, 0 outside.
ReconResult recover_F_where_f0_zero(const BoundaryData& g, const MediumSpec& medium,
                                    const ScalarField& mask, const ReconContext& ctx,
                                    const ReconOptions& opt);

}  // namespace rt
