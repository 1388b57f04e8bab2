#include "grid.hpp"

#include <algorithm>
#include <cmath>

namespace rt {

namespace {

// (1/ntheta) sum_m f(theta_m) e^{-i n theta_m}, sequential fixed order.
template <typename T>
ComplexField mode_of(const AngularGridField<T>& f, int n) {
  const int ntheta = f.dirs.ntheta;
  ComplexField out(f.grid);
  std::vector<cplx> phase(ntheta);
  for (int m = 0; m < ntheta; ++m) phase[m] = std::polar(1.0, -n * f.dirs.theta(m));
  for (int node = 0; node < f.grid.size(); ++node) {
    cplx acc = 0.0;
    for (int m = 0; m < ntheta; ++m) acc += phase[m] * f.v[f.slice_offset(m) + node];
    out.v[node] = acc / static_cast<double>(ntheta);
  }
  return out;
}

template <typename T>
std::vector<ComplexField> modes_of(const AngularGridField<T>& f, int nmodes) {
  if (nmodes > f.dirs.ntheta / 2)
    throw std::invalid_argument("angular_modes: mode count too large for ntheta");
  std::vector<ComplexField> out;
  out.reserve(nmodes + 1);
  for (int n = 0; n <= nmodes; ++n) out.push_back(mode_of(f, -n));
  return out;
}

}  // namespace

std::vector<ComplexField> angular_modes(const AngularField& f, int nmodes) {
  return modes_of(f, nmodes);
}

std::vector<ComplexField> angular_modes(const ComplexAngularField& f, int nmodes) {
  return modes_of(f, nmodes);
}

ComplexField angular_mode(const AngularField& f, int n) { return mode_of(f, n); }

AngularField angular_synthesis_real(const std::vector<ComplexField>& modes,
                                    const DirectionGrid& dirs) {
  const PolarGrid& g = modes.at(0).grid;
  AngularField out(g, dirs);
  for (int m = 0; m < dirs.ntheta; ++m) {
    double* s = out.slice(m);
    for (int node = 0; node < g.size(); ++node) {
      double acc = modes[0].v[node].real();
      for (size_t n = 1; n < modes.size(); ++n) {
        const cplx c = std::conj(modes[n].v[node]) * std::polar(1.0, double(n) * dirs.theta(m));
        acc += 2.0 * c.real();
      }
      s[node] = acc;
    }
  }
  return out;
}

ComplexField dbeta_spectral(const ComplexField& f) {
  const int nr = f.grid.nr, nb = f.grid.nbeta;
  ComplexField out(f.grid);
  std::vector<cplx> hat(nb);
  std::vector<cplx> w(nb);
  for (int j = 0; j < nb; ++j) w[j] = std::polar(1.0, -kTwoPi * j / nb);
  for (int i = 0; i < nr; ++i) {
    const cplx* row = f.v.data() + f.grid.index(i, 0);
    // forward DFT of the ring
    for (int m = 0; m < nb; ++m) {
      cplx acc = 0.0;
      for (int j = 0; j < nb; ++j) acc += row[j] * w[(static_cast<long>(m) * j) % nb];
      hat[m] = acc / double(nb);
    }
    // multiply by i*m with signed mode index; Nyquist mode dropped
    for (int m = 0; m < nb; ++m) {
      int ms = (m <= nb / 2) ? m : m - nb;
      if (m == nb / 2) ms = 0;
      hat[m] *= cplx(0.0, double(ms));
    }
    // inverse DFT
    cplx* orow = out.v.data() + out.grid.index(i, 0);
    for (int j = 0; j < nb; ++j) {
      cplx acc = 0.0;
      for (int m = 0; m < nb; ++m) acc += hat[m] * std::conj(w[(static_cast<long>(m) * j) % nb]);
      orow[j] = acc;
    }
  }
  return out;
}

namespace {

// Radial derivative, centered inside, second-order one-sided at the edges.
ComplexField dr_fd(const ComplexField& f) {
  const int nr = f.grid.nr, nb = f.grid.nbeta;
  const double h = f.grid.dr();
  ComplexField out(f.grid);
  for (int j = 0; j < nb; ++j) {
    out.at(0, j) = (-3.0 * f.at(0, j) + 4.0 * f.at(1, j) - f.at(2, j)) / (2.0 * h);
    for (int i = 1; i < nr - 1; ++i)
      out.at(i, j) = (f.at(i + 1, j) - f.at(i - 1, j)) / (2.0 * h);
    out.at(nr - 1, j) =
        (3.0 * f.at(nr - 1, j) - 4.0 * f.at(nr - 2, j) + f.at(nr - 3, j)) / (2.0 * h);
  }
  return out;
}

}  // namespace

ComplexField dbar(const ComplexField& f) {
  ComplexField fr = dr_fd(f);
  ComplexField fb = dbeta_spectral(f);
  ComplexField out(f.grid);
  for (int i = 0; i < f.grid.nr; ++i) {
    const double r = f.grid.radius(i);
    for (int j = 0; j < f.grid.nbeta; ++j) {
      const cplx e = std::polar(0.5, f.grid.beta(j));
      out.at(i, j) = e * (fr.at(i, j) + cplx(0.0, 1.0 / r) * fb.at(i, j));
    }
  }
  return out;
}

ComplexField d(const ComplexField& f) {
  // d f = conj(dbar(conj f)): keeps the conjugation rule exact at every node
  ComplexField fc(f.grid);
  for (int k = 0; k < f.size(); ++k) fc.v[k] = std::conj(f.v[k]);
  ComplexField out = dbar(fc);
  for (int k = 0; k < out.size(); ++k) out.v[k] = std::conj(out.v[k]);
  return out;
}

ComplexField to_complex(const ScalarField& f) {
  ComplexField out(f.grid);
  for (int k = 0; k < f.size(); ++k) out.v[k] = f.v[k];
  return out;
}

InterpWeights interp_weights(const PolarGrid& g, cplx point) {
  const double r = std::abs(point);
  if (r > 1.0 + 1e-12) throw std::domain_error("interpolate: point outside the unit disk");

  InterpWeights w{};
  // radial cell: clamp to [r_0, r_{nr-1}]
  const double x = r * g.nr - 0.5;  // fractional ring index
  double tr;
  if (x <= 0.0) {
    w.i0 = w.i1 = 0;
    tr = 0.0;
  } else if (x >= g.nr - 1) {
    w.i0 = w.i1 = g.nr - 1;
    tr = 0.0;
  } else {
    w.i0 = static_cast<int>(x);
    w.i1 = w.i0 + 1;
    tr = x - w.i0;
  }

  double beta = std::atan2(point.imag(), point.real());
  if (beta < 0.0) beta += kTwoPi;
  const double y = beta / g.dbeta();
  int j0 = static_cast<int>(y);
  if (j0 >= g.nbeta) j0 = g.nbeta - 1;
  const double tb = y - j0;
  w.j0 = j0;
  w.j1 = (j0 + 1) % g.nbeta;

  w.w00 = (1.0 - tr) * (1.0 - tb);
  w.w01 = (1.0 - tr) * tb;
  w.w10 = tr * (1.0 - tb);
  w.w11 = tr * tb;
  return w;
}

double interpolate(const ScalarField& f, cplx point) {
  return interp_apply(f, interp_weights(f.grid, point));
}

cplx interpolate(const ComplexField& f, cplx point) {
  return interp_apply(f, interp_weights(f.grid, point));
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const ComplexField& f) {
  double m = 0.0;
  for (const cplx& x : f.v) m = std::max(m, std::abs(x));
  return m;
}

double max_abs(const AngularField& f) {
  double m = 0.0;
  for (double x : f.v) m = std::max(m, std::abs(x));
  return m;
}

namespace {

template <typename T>
double l2_impl(const GridField<T>& f) {
  double acc = 0.0;
  const double h = f.grid.dr() * f.grid.dbeta();
  for (int i = 0; i < f.grid.nr; ++i) {
    const double w = f.grid.radius(i) * h;
    for (int j = 0; j < f.grid.nbeta; ++j) acc += std::norm(cplx(f.at(i, j))) * w;
  }
  return std::sqrt(acc);
}

}  // namespace

double l2_norm(const ScalarField& f) { return l2_impl(f); }
double l2_norm(const ComplexField& f) { return l2_impl(f); }

double l2_norm(const VectorField& f) {
  const double nx = l2_norm(f.x), ny = l2_norm(f.y);
  return std::sqrt(nx * nx + ny * ny);
}

double rel_l2_error(const ScalarField& a, const ScalarField& b) {
  ScalarField diff = a;
  for (int k = 0; k < diff.size(); ++k) diff.v[k] -= b.v[k];
  const double nb = l2_norm(b);
  return nb > 0.0 ? l2_norm(diff) / nb : l2_norm(diff);
}

double rel_l2_error(const VectorField& a, const VectorField& b) {
  VectorField diff = a;
  for (int k = 0; k < diff.x.size(); ++k) {
    diff.x.v[k] -= b.x.v[k];
    diff.y.v[k] -= b.y.v[k];
  }
  const double nb = l2_norm(b);
  return nb > 0.0 ? l2_norm(diff) / nb : l2_norm(diff);
}

}  // namespace rt
