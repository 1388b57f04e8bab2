#include "recon.hpp"

#include <algorithm>
#include <cmath>

namespace rt {

namespace {

void validate(const BoundaryData& g, const MediumSpec& medium, const ReconOptions& opt) {
  const int M = medium.degree();
  if (opt.nmodes < M + 2)
    throw std::invalid_argument("recon: mode truncation must be at least M+2");
  if (g.bnd.nbeta != medium.a.grid.nbeta)
    throw std::invalid_argument("recon: boundary data and medium grids differ");
}

// Linear radial blend between the last Bukhgeim-Cauchy ring and the known
// boundary trace, filling rings [first_fill, nr).
void blend_to_boundary(ComplexField& f, int first_fill, const std::vector<cplx>& trace) {
  const PolarGrid& g = f.grid;
  const double r_in = g.radius(first_fill - 1);
  for (int i = first_fill; i < g.nr; ++i) {
    const double t = (g.radius(i) - r_in) / (1.0 - r_in);
    for (int j = 0; j < g.nbeta; ++j)
      f.at(i, j) = (1.0 - t) * f.at(first_fill - 1, j) + t * trace[j];
  }
}

ScalarField real_part(const ComplexField& f) {
  ScalarField out(f.grid);
  for (int k = 0; k < f.size(); ++k) out.v[k] = f.v[k].real();
  return out;
}

// || dbar u_n + d u_{n-2} + c u_{n-1} ||_L2 of one mode equation.
double mode_equation_residual(const ComplexField& un, const ComplexField& un2,
                              const ScalarField& c, const ComplexField& un1) {
  ComplexField res = dbar(un);
  const ComplexField dn2 = d(un2);
  for (int k = 0; k < res.size(); ++k)
    res.v[k] += dn2.v[k] + c.v[k] * un1.v[k];
  return l2_norm(res);
}

}  // namespace

ReconContext make_recon_context(const MediumSpec& medium, const DirectionGrid& dirs,
                                const ReconOptions& opt) {
  HOptions hopt;
  hopt.h_ray = opt.h_ray > 0 ? opt.h_ray : 0.5 / medium.a.grid.nr;
  hopt.ns = opt.hilbert_ns;
  HFunction h = compute_h(medium.a, dirs, hopt);
  ReconContext ctx;
  ctx.grid = medium.a.grid;
  ctx.dirs = dirs;
  ctx.cc = conjugation_coeffs(h, opt.nmodes);
  return ctx;
}

ModeSequence recover_interior_modes(const BoundaryData& g, const MediumSpec& medium,
                                    const ReconContext& ctx, const ReconOptions& opt,
                                    ReconDiagnostics* diag) {
  validate(g, medium, opt);
  const int N = opt.nmodes;
  const int M = medium.degree();
  const PolarGrid& grid = ctx.grid;

  // boundary modes g_0 ... g_{-N}; the conjugated shifted stack is the trace
  // of the L2-analytic extension
  const BoundaryModeSequence gm = boundary_modes(g, N);
  const BoundaryModeSequence vb = apply_eG(gm.shifted(M), -1, ctx.cc);

  const double res = range_residual(vb);
  if (diag) {
    diag->range_residual = res;
    diag->range_warned = res > opt.warn_residual;
    diag->neg_mass = ctx.cc.neg_mass;
  }
  if (res > opt.fail_residual)
    throw DataConsistencyError("recover_interior_modes: range-condition residual " +
                               std::to_string(res) + " exceeds threshold");

  // interior extension and conjugation back: positions p hold u_{-M-p}
  const int nrings = grid.nr - 2;  // keep 2.5 cells clear of the boundary
  ModeSequence v = bukhgeim_cauchy(vb, grid, nrings);
  ModeSequence lmu = apply_eG(v, +1, ctx.cc);
  for (int p = 0; p < lmu.count(); ++p)
    blend_to_boundary(lmu.modes[p], nrings, gm.modes[M + p]);

  // shallow modes u_{-M+1} ... u_{-1}
  std::vector<ComplexField> shallow;
  if (M >= 2) {
    shallow = dbar_cascade(lmu.modes[1], lmu.modes[0], medium, gm, M);
    if (diag) {
      ComplexField prev2 = lmu.modes[1], prev1 = lmu.modes[0];
      for (int j = 1; j <= M - 1; ++j) {
        const ScalarField& kc = medium.k(M - j + 1);
        ScalarField c(grid);
        for (int k = 0; k < c.size(); ++k) c.v[k] = medium.a.v[k] - kc.v[k];
        diag->cascade_residuals.push_back(
            mode_equation_residual(shallow[j - 1], prev2, c, prev1));
        prev2 = prev1;
        prev1 = shallow[j - 1];
      }
    }
  }

  ModeSequence out;
  out.modes.reserve(N);
  for (int n = 1; n <= N; ++n) {
    if (n <= M - 1)
      out.modes.push_back(shallow[M - 1 - n]);
    else
      out.modes.push_back(lmu.modes[n - M]);
  }
  return out;
}

namespace {

// Shared tail of the single-data pipelines: Poisson solve for the head entry
// with Dirichlet data g_0, then f1-type combination of the first two modes.
struct HeadStage {
  ScalarField head;      // real solution of the head Poisson problem
  ComplexField f1_part;  // d(u_{-2}) + (a - k_{-1}) u_{-1}
};

HeadStage head_stage(const ModeSequence& lu, const BoundaryData& g,
                     const MediumSpec& medium, bool real_rhs) {
  const PolarGrid& grid = lu.modes[0].grid;
  const ComplexField& u1 = lu.modes[0];  // u_{-1}
  const ComplexField& u2 = lu.modes[1];  // u_{-2}

  ScalarField amk(grid);
  const ScalarField& k1 = medium.k(1);
  for (int k = 0; k < amk.size(); ++k) amk.v[k] = medium.a.v[k] - k1.v[k];

  ComplexField prod(grid);
  for (int k = 0; k < grid.size(); ++k) prod.v[k] = amk.v[k] * u1.v[k];
  ComplexField rhs = d(d(u2));
  const ComplexField dp = d(prod);
  for (int k = 0; k < grid.size(); ++k) {
    cplx val = -4.0 * (rhs.v[k] + dp.v[k]);
    rhs.v[k] = real_rhs ? cplx(val.real(), 0.0) : val;
  }

  const BoundaryModeSequence g0 = boundary_modes(g, 0);
  PoissonProblem p;
  p.rhs = std::move(rhs);
  p.bc = g0.modes[0];
  HeadStage st;
  st.head = real_part(poisson_dirichlet(p));

  st.f1_part = d(u2);
  for (int k = 0; k < grid.size(); ++k) st.f1_part.v[k] += amk.v[k] * u1.v[k];
  return st;
}

VectorField vector_from_f1(const ComplexField& f1) {
  VectorField F(f1.grid);
  for (int k = 0; k < f1.size(); ++k) {
    F.x.v[k] = 2.0 * f1.v[k].real();
    F.y.v[k] = 2.0 * f1.v[k].imag();
  }
  return F;
}

ModeSequence with_head(const ScalarField& head, const ModeSequence& lu) {
  ModeSequence m;
  m.modes.reserve(lu.count() + 1);
  m.modes.push_back(to_complex(head));
  for (const auto& f : lu.modes) m.modes.push_back(f);
  return m;
}

void require_subcritical(const MediumSpec& medium, double delta) {
  if (medium.subcritical_margin() < delta)
    throw PreconditionError("medium is not subcritical: min(a - k0) = " +
                            std::to_string(medium.subcritical_margin()));
}

}  // namespace

ReconResult recover_solenoidal(const BoundaryData& g, const MediumSpec& medium,
                               const ReconContext& ctx, const ReconOptions& opt) {
  ReconResult r;
  ModeSequence lu = recover_interior_modes(g, medium, ctx, opt, &r.diag);
  // head Poisson problem carries u_0 - phi: RHS is the real part
  HeadStage st = head_stage(lu, g, medium, /*real_rhs=*/true);

  ComplexField f1s = dbar(to_complex(st.head));
  for (int k = 0; k < f1s.size(); ++k) f1s.v[k] += st.f1_part.v[k];
  r.F = vector_from_f1(f1s);
  r.head = st.head;
  r.modes = with_head(st.head, lu);
  return r;
}

ReconResult recover_divfree(const BoundaryData& g, const MediumSpec& medium,
                            const ReconContext& ctx, const ReconOptions& opt) {
  ReconResult r;
  ModeSequence lu = recover_interior_modes(g, medium, ctx, opt, &r.diag);
  HeadStage st = head_stage(lu, g, medium, /*real_rhs=*/true);  // phi == 0: head is u_0

  ComplexField f1 = dbar(to_complex(st.head));
  for (int k = 0; k < f1.size(); ++k) f1.v[k] += st.f1_part.v[k];
  r.F = vector_from_f1(f1);
  r.head = st.head;

  // f_0 = 2 Re d(u_{-1}) + (a - k_0) u_0
  const ComplexField du1 = d(lu.modes[0]);
  const ScalarField sa = medium.sigma_a();
  r.f0 = ScalarField(ctx.grid);
  for (int k = 0; k < r.f0.size(); ++k)
    r.f0.v[k] = 2.0 * du1.v[k].real() + sa.v[k] * st.head.v[k];
  r.has_f0 = true;
  r.modes = with_head(st.head, lu);
  return r;
}

ReconResult recover_twodata(const BoundaryData& g_full, const BoundaryData& g_iso,
                            const MediumSpec& medium, const ReconContext& ctx,
                            const ReconOptions& opt) {
  require_subcritical(medium, opt.subcritical_delta);

  // v-branch: isotropic-source data determines f_0
  ReconResult r;
  ModeSequence lv = recover_interior_modes(g_iso, medium, ctx, opt, &r.diag);
  HeadStage vst = head_stage(lv, g_iso, medium, /*real_rhs=*/false);
  const ComplexField dv1 = d(lv.modes[0]);
  const ScalarField sa = medium.sigma_a();
  r.f0 = ScalarField(ctx.grid);
  for (int k = 0; k < r.f0.size(); ++k)
    r.f0.v[k] = 2.0 * dv1.v[k].real() + sa.v[k] * vst.head.v[k];
  r.has_f0 = true;

  // w-branch: the data difference isolates the vector source
  BoundaryData gt = g_full;
  for (size_t k = 0; k < gt.v.size(); ++k) gt.v[k] -= g_iso.v[k];
  ReconDiagnostics wdiag;
  ModeSequence lw = recover_interior_modes(gt, medium, ctx, opt, &wdiag);
  r.diag.range_residual = std::max(r.diag.range_residual, wdiag.range_residual);
  r.diag.range_warned = r.diag.range_warned || wdiag.range_warned;

  const ComplexField dw1 = d(lw.modes[0]);
  ScalarField w0(ctx.grid);
  for (int k = 0; k < w0.size(); ++k) w0.v[k] = -2.0 * dw1.v[k].real() / sa.v[k];

  ScalarField amk(ctx.grid);
  const ScalarField& k1 = medium.k(1);
  for (int k = 0; k < amk.size(); ++k) amk.v[k] = medium.a.v[k] - k1.v[k];
  ComplexField f1 = dbar(to_complex(w0));
  const ComplexField dw2 = d(lw.modes[1]);
  for (int k = 0; k < f1.size(); ++k)
    f1.v[k] += dw2.v[k] + amk.v[k] * lw.modes[0].v[k];
  r.F = vector_from_f1(f1);
  r.head = w0;
  r.modes = with_head(vst.head, lv);
  return r;
}

ReconResult recover_F_where_f0_zero(const BoundaryData& g, const MediumSpec& medium,
                                    const ScalarField& mask, const ReconContext& ctx,
                                    const ReconOptions& opt) {
  require_subcritical(medium, opt.subcritical_delta);

  ReconResult r;
  ModeSequence lu = recover_interior_modes(g, medium, ctx, opt, &r.diag);
  const ScalarField sa = medium.sigma_a();

  // u_0 = -2 Re d(u_{-1}) / sigma_a on the mask
  const ComplexField du1 = d(lu.modes[0]);
  ScalarField u0(ctx.grid);
  for (int k = 0; k < u0.size(); ++k) u0.v[k] = -2.0 * du1.v[k].real() / sa.v[k];

  ScalarField amk(ctx.grid);
  const ScalarField& k1 = medium.k(1);
  for (int k = 0; k < amk.size(); ++k) amk.v[k] = medium.a.v[k] - k1.v[k];

  ComplexField f1 = dbar(to_complex(u0));
  const ComplexField du2 = d(lu.modes[1]);
  for (int k = 0; k < f1.size(); ++k)
    f1.v[k] += du2.v[k] + amk.v[k] * lu.modes[0].v[k];

  r.F = vector_from_f1(f1);
  for (int k = 0; k < mask.size(); ++k) {
    if (mask.v[k] == 0.0) {
      r.F.x.v[k] = 0.0;
      r.F.y.v[k] = 0.0;
    }
  }
  r.head = u0;
  r.modes = with_head(u0, lu);
  return r;
}

}  // namespace rt
