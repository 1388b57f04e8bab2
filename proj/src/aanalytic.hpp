// A-analytic machinery: the h-function built from divergent-beam, Radon and
// Hilbert transforms of the attenuation, the conjugation operators e^{+-G}
// that exchange attenuated and attenuation-free mode systems, the
// Bukhgeim-Cauchy integral that extends L2-analytic boundary sequences into
// the disk, the Bukhgeim-Hilbert transform, and the range-condition residual
// (I + iH)g used as a data-consistency diagnostic.
#pragma once

#include "errors.hpp"
#include "grid.hpp"
#include "transport.hpp"

namespace rt {

// Stack of complex interior fields for consecutive nonpositive angular modes;
// entry p holds the mode at stack position p (leading entry first). The left
// shift L drops the leading entry.
struct ModeSequence {
  std::vector<ComplexField> modes;

  int count() const { return static_cast<int>(modes.size()); }
};

// The same stack restricted to boundary nodes: modes[p][j] at zeta_j.
struct BoundaryModeSequence {
  int nbeta = 0;
  std::vector<std::vector<cplx>> modes;

  BoundaryModeSequence() = default;
  BoundaryModeSequence(int nbeta_, int count)
      : nbeta(nbeta_), modes(count, std::vector<cplx>(nbeta_, cplx{})) {}
  int count() const { return static_cast<int>(modes.size()); }

  BoundaryModeSequence shifted(int s) const;  // L^s: drop the s leading rows
};

// Nonpositive angular modes <g_0, g_{-1}, ..., g_{-nmodes}> of boundary data
// (the trace vanishes on incoming pairs, so the stored data is the full trace).
BoundaryModeSequence boundary_modes(const BoundaryData& g, int nmodes);

// sup over boundary nodes of sum_p <p>^2 |g_p|, <p> = sqrt(1+p^2); the
// discrete weighted-sequence norm used by the range diagnostic.
double weighted_norm(const BoundaryModeSequence& g);

// Radon transform Ra(s_k, theta_perp) = int a(s_k theta_perp + t theta) dt by
// chord quadrature; zero for |s_k| >= 1. The s-grid is uniform on [-1,1].
std::vector<double> radon_transform(const ScalarField& a, int ns, cplx theta,
                                    double step);

// Classical Hilbert transform (1/pi) PV int h(t)/(s-t) dt of compactly
// supported samples on a uniform grid, by singularity subtraction; evaluated
// at the same grid points.
std::vector<double> hilbert_line(const std::vector<double>& h, double smin, double ds);

// h(z,theta) = Da(z,theta) - (1/2)(I - iH) Ra(z.theta_perp, theta_perp),
// evaluated on interior nodes and on the boundary nodes.
struct HFunction {
  ComplexAngularField vol;
  std::vector<cplx> bnd;  // [j*ntheta + m]
  int nbeta = 0;
};

struct HOptions {
  int ns = 0;           // Radon/Hilbert s-grid size; 0 = 4*nbeta
  double ray_step = 0;  // Da ray step; 0 = h_ray/4 given h_ray below
  double h_ray = 0;     // base ray step; 0 = 0.5/nr
};

HFunction compute_h(const ScalarField& a, const DirectionGrid& dirs, HOptions opt = {});

// Fourier coefficients alpha_k, beta_k (k >= 0) of e^{-h}, e^{+h} per node,
// with the negative-mode l1 mass kept as an accuracy diagnostic.
struct ConjugationCoeffs {
  int kmax = 0;
  PolarGrid grid;
  std::vector<ComplexField> alpha_vol, beta_vol;       // [k]
  std::vector<std::vector<cplx>> alpha_bnd, beta_bnd;  // [k][j]
  double neg_mass = 0.0;  // max over nodes and both exponentials
};

ConjugationCoeffs conjugation_coeffs(const HFunction& h, int kmax,
                                     double fail_threshold = 5e-2);

// (e^{-G} u)_n = sum_k alpha_k u_{n-k} (deeper stack entries), and beta for
// e^{+G}; entries falling off the truncated stack are dropped.
ModeSequence apply_eG(const ModeSequence& u, int sign, const ConjugationCoeffs& cc);
BoundaryModeSequence apply_eG(const BoundaryModeSequence& g, int sign,
                              const ConjugationCoeffs& cc);

// Thrown when Bukhgeim-Cauchy targets are within one radial cell of the
// boundary, where the boundary quadrature cannot resolve the kernel.
class NearBoundaryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bukhgeim-Cauchy operator: extends an L2-analytic boundary stack to grid
// nodes on rings 0..nrings-1 (outer rings left zero for the caller to fill).
// Trapezoid quadrature over the boundary nodes; the j-series is truncated by
// the available stack depth.
ModeSequence bukhgeim_cauchy(const BoundaryModeSequence& g, const PolarGrid& grid,
                             int nrings);

// Bukhgeim-Hilbert transform on the circle. The principal value is handled by
// singularity subtraction (PV of the Cauchy kernel over the circle is i*pi),
// and the series factor at the singular node takes its tangential limit
// -conj(zeta)/zeta.
BoundaryModeSequence bukhgeim_hilbert(const BoundaryModeSequence& g);

// Normalized weighted norm of (I + iH)g; small for traces of L2-analytic
// sequences, O(1) for generic data.
double range_residual(const BoundaryModeSequence& g);

}  // namespace rt
