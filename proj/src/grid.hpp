// Geometry of the unit disk: polar and direction grids, field containers,
// angular Fourier transforms, the Cauchy-Riemann operators d/dbar in polar
// form, and bilinear interpolation.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

namespace rt {

using cplx = std::complex<double>;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Cell-centered polar grid on the unit disk: r_i = (i+1/2)/nr, beta_j = 2*pi*j/nbeta.
// Node (i,j) sits at z = r_i * exp(i*beta_j).
struct PolarGrid {
  int nr = 0;
  int nbeta = 0;

  PolarGrid() = default;
  PolarGrid(int nr_, int nbeta_) : nr(nr_), nbeta(nbeta_) {
    if (nr < 4) throw std::invalid_argument("PolarGrid: nr must be >= 4");
    if (nbeta < 8 || nbeta % 2 != 0)
      throw std::invalid_argument("PolarGrid: nbeta must be even and >= 8");
  }

  double dr() const { return 1.0 / nr; }
  double dbeta() const { return kTwoPi / nbeta; }
  double radius(int i) const { return (i + 0.5) / nr; }
  double beta(int j) const { return kTwoPi * j / nbeta; }
  cplx node(int i, int j) const { return std::polar(radius(i), beta(j)); }
  int size() const { return nr * nbeta; }
  int index(int i, int j) const { return i * nbeta + j; }

  bool operator==(const PolarGrid&) const = default;
};

// Uniform directions theta_m = 2*pi*m/ntheta with normalized angular measure
// (each node weighs 1/ntheta, so the weights sum to 1).
struct DirectionGrid {
  int ntheta = 0;

  DirectionGrid() = default;
  explicit DirectionGrid(int ntheta_) : ntheta(ntheta_) {
    if (ntheta < 4 || ntheta % 2 != 0)
      throw std::invalid_argument("DirectionGrid: ntheta must be even and >= 4");
  }

  double theta(int m) const { return kTwoPi * m / ntheta; }
  cplx dir(int m) const { return std::polar(1.0, theta(m)); }
  double weight() const { return 1.0 / ntheta; }

  bool operator==(const DirectionGrid&) const = default;
};

// Boundary nodes zeta_j = exp(i*beta_j) of the unit circle; the outer normal
// at zeta is zeta itself and each node carries arc weight 2*pi/nbeta.
struct BoundaryGrid {
  int nbeta = 0;

  BoundaryGrid() = default;
  explicit BoundaryGrid(int nbeta_) : nbeta(nbeta_) {}

  double beta(int j) const { return kTwoPi * j / nbeta; }
  cplx node(int j) const { return std::polar(1.0, beta(j)); }
  cplx normal(int j) const { return node(j); }
  double arc_weight() const { return kTwoPi / nbeta; }
};

template <typename T>
struct GridField {
  PolarGrid grid;
  std::vector<T> v;

  GridField() = default;
  explicit GridField(const PolarGrid& g, T fill = T{}) : grid(g), v(g.size(), fill) {}

  T& at(int i, int j) { return v[grid.index(i, j)]; }
  const T& at(int i, int j) const { return v[grid.index(i, j)]; }
  int size() const { return static_cast<int>(v.size()); }
};

using ScalarField = GridField<double>;
using ComplexField = GridField<cplx>;

struct VectorField {
  ScalarField x, y;

  VectorField() = default;
  explicit VectorField(const PolarGrid& g) : x(g), y(g) {}
  const PolarGrid& grid() const { return x.grid; }
};

// Samples on PolarGrid x DirectionGrid. Stored direction-major so the
// (i,j)-plane of one direction is contiguous (ray marching interpolates
// within a single direction slice).
template <typename T>
struct AngularGridField {
  PolarGrid grid;
  DirectionGrid dirs;
  std::vector<T> v;

  AngularGridField() = default;
  AngularGridField(const PolarGrid& g, const DirectionGrid& d)
      : grid(g), dirs(d), v(static_cast<size_t>(g.size()) * d.ntheta, T{}) {}

  T& at(int i, int j, int m) { return v[slice_offset(m) + grid.index(i, j)]; }
  const T& at(int i, int j, int m) const { return v[slice_offset(m) + grid.index(i, j)]; }
  size_t slice_offset(int m) const { return static_cast<size_t>(m) * grid.size(); }
  const T* slice(int m) const { return v.data() + slice_offset(m); }
  T* slice(int m) { return v.data() + slice_offset(m); }
};

using AngularField = AngularGridField<double>;
using ComplexAngularField = AngularGridField<cplx>;

// --- Angular Fourier transforms -------------------------------------------
//
// Convention: field(z,theta) = sum_n c_n(z) e^{i n theta} under the normalized
// measure, so c_n(z) = (1/ntheta) sum_m field(z,theta_m) e^{-i n theta_m}.
// angular_modes returns the nonpositive-mode stack <c_0, c_{-1}, ..., c_{-N}>.

std::vector<ComplexField> angular_modes(const AngularField& f, int nmodes);
std::vector<ComplexField> angular_modes(const ComplexAngularField& f, int nmodes);

// Single mode c_n (any sign of n), as above.
ComplexField angular_mode(const AngularField& f, int n);

// Rebuild a real field from its nonpositive modes, using conjugate symmetry
// c_n = conj(c_{-n}): f = c_0 + 2 Re sum_{n>=1} conj(c_{-n}) e^{i n theta}.
AngularField angular_synthesis_real(const std::vector<ComplexField>& modes,
                                    const DirectionGrid& dirs);

// --- Cauchy-Riemann operators ----------------------------------------------
//
// dbar = e^{i beta}/2 (d_r + (i/r) d_beta),  d = e^{-i beta}/2 (d_r - (i/r) d_beta).
// d_beta is evaluated spectrally per ring; d_r by centered differences with
// second-order one-sided stencils on the innermost/outermost rings.

ComplexField dbar(const ComplexField& f);
ComplexField d(const ComplexField& f);
ComplexField to_complex(const ScalarField& f);

// Spectral d/dbeta per ring (exact for band-limited rings).
ComplexField dbeta_spectral(const ComplexField& f);

// --- Interpolation ----------------------------------------------------------
//
// Bilinear in (r,beta) with angular wrap-around. Radii below the innermost
// ring fall back to that ring's angular interpolant; radii above the
// outermost ring clamp to it. Throws for |point| > 1 + 1e-12.

double interpolate(const ScalarField& f, cplx point);
cplx interpolate(const ComplexField& f, cplx point);

// Interpolation weights for one point, reusable across fields on one grid.
struct InterpWeights {
  int i0, i1, j0, j1;
  double w00, w01, w10, w11;
};
InterpWeights interp_weights(const PolarGrid& g, cplx point);

template <typename T>
inline T interp_apply(const GridField<T>& f, const InterpWeights& w) {
  return f.v[f.grid.index(w.i0, w.j0)] * w.w00 + f.v[f.grid.index(w.i0, w.j1)] * w.w01 +
         f.v[f.grid.index(w.i1, w.j0)] * w.w10 + f.v[f.grid.index(w.i1, w.j1)] * w.w11;
}

// Same weights applied to one direction slice of an angular field.
template <typename T>
inline T interp_apply_slice(const AngularGridField<T>& f, int m, const InterpWeights& w) {
  const T* s = f.slice(m);
  return s[f.grid.index(w.i0, w.j0)] * w.w00 + s[f.grid.index(w.i0, w.j1)] * w.w01 +
         s[f.grid.index(w.i1, w.j0)] * w.w10 + s[f.grid.index(w.i1, w.j1)] * w.w11;
}

// --- Norms and metrics -------------------------------------------------------

double max_abs(const ScalarField& f);
double max_abs(const ComplexField& f);
double max_abs(const AngularField& f);

// L2 norm over the disk with polar area weight r*dr*dbeta.
double l2_norm(const ScalarField& f);
double l2_norm(const ComplexField& f);
double l2_norm(const VectorField& f);

// Relative L2 error ||a-b|| / ||b||; falls back to the absolute error when
// ||b|| = 0.
double rel_l2_error(const ScalarField& a, const ScalarField& b);
double rel_l2_error(const VectorField& a, const VectorField& b);

}  // namespace rt
