// Experiment configuration: a flat sectioned key = value text format with
// repeated primitive lines that sum into fields. Self-describing and
// diff-able; explicit field CSVs are accepted through the csv primitive.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "grid.hpp"
#include "transport.hpp"

namespace rt {

// Parametric field primitive. gaussian: amp*exp(-|z-c|^2/width^2);
// bump: amp*exp(-rho^2/(R^2-rho^2)) inside |z-c| < R and 0 outside (smooth,
// exactly compactly supported); polyr: sum_k coefs[k] r^k; csv: field loaded
// from a CSV file on the run grid.
struct Primitive {
  enum class Kind { Constant, Gaussian, PolyR, Bump, Csv };
  Kind kind = Kind::Constant;
  double cx = 0, cy = 0, width = 1, amp = 0;
  std::vector<double> coefs;
  std::string path;

  double eval(double x, double y) const;
  // analytic gradient; throws ConfigError for csv-backed primitives
  void grad(double x, double y, double& gx, double& gy) const;
};

struct FieldExpr {
  std::vector<Primitive> prims;

  bool empty() const { return prims.empty(); }
  double eval(double x, double y) const;
};

struct VectorExpr {
  enum class Kind { Zero, Components, Gradient, PerpGradient };
  Kind kind = Kind::Zero;
  FieldExpr x, y;  // Components
  FieldExpr psi;   // Gradient / PerpGradient potential
};

struct GridConfig {
  int nr = 64;
  int nbeta = 256;
  int ntheta = 64;
  int nmodes = 32;
  double h_ray = 0.0;  // 0 -> 0.5/nr
};

struct MediumConfig {
  int degree = 1;               // M
  FieldExpr a;
  std::vector<FieldExpr> k;     // k[0]=k_0 ... k[M]=k_{-M}
};

struct SourceConfig {
  FieldExpr f0;
  VectorExpr F;
};

struct SolverConfig {
  double tol = 1e-7;
  int max_iter = 200;
  double noise_std = 0.0;
};

struct RunConfig {
  std::string out = "out";
  std::uint64_t seed = 1;
  std::string mask = "all";  // remark variant: all | annulus RMIN RMAX
  double mask_rmin = 0.0, mask_rmax = 1.0;
};

struct Config {
  GridConfig grid;
  MediumConfig medium;
  SourceConfig source;
  std::optional<SourceConfig> source2;
  SolverConfig solver;
  RunConfig run;
  std::string text;     // canonical input text
  std::uint64_t hash = 0;

  double h_ray() const { return grid.h_ray > 0 ? grid.h_ray : 0.5 / grid.nr; }
};

Config parse_config_text(const std::string& text);
Config parse_config_file(const std::string& path);

// Realizations on a grid.
ScalarField eval_field(const FieldExpr& e, const PolarGrid& g);
VectorField eval_vector(const VectorExpr& e, const PolarGrid& g);
MediumSpec make_medium(const MediumConfig& mc, const PolarGrid& g);
SourceSpec make_source(const SourceConfig& sc, const PolarGrid& g);
ScalarField make_mask(const RunConfig& rc, const PolarGrid& g);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace rt
