#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "csvio.hpp"

namespace rt {

double Primitive::eval(double x, double y) const {
  switch (kind) {
    case Kind::Constant:
      return amp;
    case Kind::Gaussian: {
      const double dx = x - cx, dy = y - cy;
      return amp * std::exp(-(dx * dx + dy * dy) / (width * width));
    }
    case Kind::Bump: {
      const double dx = x - cx, dy = y - cy;
      const double rho2 = dx * dx + dy * dy, r2 = width * width;
      if (rho2 >= r2) return 0.0;
      return amp * std::exp(-rho2 / (r2 - rho2));
    }
    case Kind::PolyR: {
      const double r = std::sqrt(x * x + y * y);
      double acc = 0.0;
      for (size_t k = coefs.size(); k-- > 0;) acc = acc * r + coefs[k];
      return acc;
    }
    case Kind::Csv:
      throw ConfigError("csv-backed fields are evaluated per grid, not pointwise");
  }
  return 0.0;
}

void Primitive::grad(double x, double y, double& gx, double& gy) const {
  switch (kind) {
    case Kind::Constant:
      gx = gy = 0.0;
      return;
    case Kind::Gaussian: {
      const double v = eval(x, y);
      gx = v * (-2.0 * (x - cx) / (width * width));
      gy = v * (-2.0 * (y - cy) / (width * width));
      return;
    }
    case Kind::Bump: {
      const double dx = x - cx, dy = y - cy;
      const double rho2 = dx * dx + dy * dy, r2 = width * width;
      if (rho2 >= r2) {
        gx = gy = 0.0;
        return;
      }
      const double den = r2 - rho2;
      const double v = amp * std::exp(-rho2 / den);
      const double dd = -r2 / (den * den);  // d/d(rho2) of -rho2/den
      gx = v * dd * 2.0 * dx;
      gy = v * dd * 2.0 * dy;
      return;
    }
    case Kind::PolyR: {
      const double r = std::sqrt(x * x + y * y);
      if (r == 0.0) {
        gx = gy = 0.0;
        return;
      }
      double dp = 0.0;
      for (size_t k = coefs.size(); k-- > 1;) dp = dp * r + k * coefs[k];
      gx = dp * x / r;
      gy = dp * y / r;
      return;
    }
    case Kind::Csv:
      throw ConfigError("gradient sources cannot use csv primitives");
  }
}

double FieldExpr::eval(double x, double y) const {
  double acc = 0.0;
  for (const Primitive& p : prims) acc += p.eval(x, y);
  return acc;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

namespace {

struct Line {
  int number;
  std::string section;
  std::string key;
  std::string value;
};

[[noreturn]] void fail(const Line& ln, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(ln.number) + " (" + ln.section + "." +
                    ln.key + "): " + msg);
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

double to_double(const Line& ln, const std::string& s) {
  try {
    size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ln, "expected a number, got '" + s + "'");
  }
}

long to_int(const Line& ln, const std::string& s) {
  try {
    size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ln, "expected an integer, got '" + s + "'");
  }
}

Primitive parse_primitive(const Line& ln, const std::vector<std::string>& tok, size_t off) {
  if (off >= tok.size()) fail(ln, "missing primitive");
  Primitive p;
  const std::string& kind = tok[off];
  auto need = [&](size_t n) {
    if (tok.size() - off - 1 != n)
      fail(ln, "'" + kind + "' takes " + std::to_string(n) + " argument(s)");
  };
  if (kind == "constant") {
    need(1);
    p.kind = Primitive::Kind::Constant;
    p.amp = to_double(ln, tok[off + 1]);
  } else if (kind == "gaussian" || kind == "bump") {
    need(4);
    p.kind = (kind == "gaussian") ? Primitive::Kind::Gaussian : Primitive::Kind::Bump;
    p.cx = to_double(ln, tok[off + 1]);
    p.cy = to_double(ln, tok[off + 2]);
    p.width = to_double(ln, tok[off + 3]);
    p.amp = to_double(ln, tok[off + 4]);
    if (p.width <= 0.0) fail(ln, "width must be > 0");
  } else if (kind == "polyr") {
    if (tok.size() - off - 1 < 1) fail(ln, "'polyr' needs at least one coefficient");
    p.kind = Primitive::Kind::PolyR;
    for (size_t i = off + 1; i < tok.size(); ++i) p.coefs.push_back(to_double(ln, tok[i]));
  } else if (kind == "csv") {
    need(1);
    p.kind = Primitive::Kind::Csv;
    p.path = tok[off + 1];
  } else {
    fail(ln, "unknown primitive '" + kind + "'");
  }
  return p;
}

void parse_vector(const Line& ln, const std::vector<std::string>& tok, VectorExpr& v) {
  if (tok.empty()) fail(ln, "missing vector expression");
  if (tok[0] == "gradient" || tok[0] == "perp_gradient") {
    const auto want =
        (tok[0] == "gradient") ? VectorExpr::Kind::Gradient : VectorExpr::Kind::PerpGradient;
    if (v.kind != VectorExpr::Kind::Zero && v.kind != want)
      fail(ln, "cannot mix vector forms");
    v.kind = want;
    v.psi.prims.push_back(parse_primitive(ln, tok, 1));
  } else if (tok[0] == "zero") {
    if (v.kind != VectorExpr::Kind::Zero) fail(ln, "cannot mix vector forms");
  } else {
    fail(ln, "vector fields use 'gradient <prim>', 'perp_gradient <prim>', 'zero', or "
             "component lines Fx/Fy");
  }
}

}  // namespace

Config parse_config_text(const std::string& text) {
  Config cfg;
  cfg.text = text;
  cfg.hash = fnv1a64(text);
  cfg.medium.k.resize(1);

  std::istringstream is(text);
  std::string raw;
  std::string section;
  int lineno = 0;
  bool have_source2 = false;
  SourceConfig source2;
  int declared_kmax = -1;

  while (std::getline(is, raw)) {
    ++lineno;
    const size_t hashpos = raw.find('#');
    if (hashpos != std::string::npos) raw.erase(hashpos);
    // trim
    const size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const size_t e = raw.find_last_not_of(" \t\r");
    std::string line = raw.substr(b, e - b + 1);

    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("config line " + std::to_string(lineno) + ": malformed section");
      section = line.substr(1, line.size() - 2);
      if (section != "grid" && section != "medium" && section != "source" &&
          section != "source2" && section != "solver" && section != "run")
        throw ConfigError("config line " + std::to_string(lineno) + ": unknown section [" +
                          section + "]");
      if (section == "source2") have_source2 = true;
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    Line ln;
    ln.number = lineno;
    ln.section = section;
    {
      std::string k = line.substr(0, eq);
      const size_t ke = k.find_last_not_of(" \t");
      ln.key = k.substr(0, ke + 1);
    }
    ln.value = line.substr(eq + 1);
    const std::vector<std::string> tok = tokens(ln.value);
    if (tok.empty()) fail(ln, "empty value");

    if (section == "grid") {
      if (ln.key == "nr") cfg.grid.nr = static_cast<int>(to_int(ln, tok[0]));
      else if (ln.key == "nbeta") cfg.grid.nbeta = static_cast<int>(to_int(ln, tok[0]));
      else if (ln.key == "ntheta") cfg.grid.ntheta = static_cast<int>(to_int(ln, tok[0]));
      else if (ln.key == "nmodes") cfg.grid.nmodes = static_cast<int>(to_int(ln, tok[0]));
      else if (ln.key == "h_ray") cfg.grid.h_ray = to_double(ln, tok[0]);
      else fail(ln, "unknown grid key");
    } else if (section == "medium") {
      if (ln.key == "M") {
        declared_kmax = static_cast<int>(to_int(ln, tok[0]));
        if (declared_kmax < 1) fail(ln, "M must be >= 1");
        cfg.medium.degree = declared_kmax;
        cfg.medium.k.resize(declared_kmax + 1);
      } else if (ln.key == "a") {
        cfg.medium.a.prims.push_back(parse_primitive(ln, tok, 0));
      } else if (ln.key.size() >= 2 && ln.key[0] == 'k') {
        int idx = 0;
        try {
          idx = std::stoi(ln.key.substr(1));
        } catch (const std::exception&) {
          fail(ln, "unknown medium key");
        }
        if (idx < 0) fail(ln, "kernel index must be >= 0");
        if (declared_kmax >= 0 && idx > declared_kmax)
          fail(ln, "kernel degree exceeds declared M");
        if (idx >= static_cast<int>(cfg.medium.k.size())) cfg.medium.k.resize(idx + 1);
        cfg.medium.k[idx].prims.push_back(parse_primitive(ln, tok, 0));
      } else {
        fail(ln, "unknown medium key");
      }
    } else if (section == "source" || section == "source2") {
      SourceConfig& sc = (section == "source") ? cfg.source : source2;
      if (ln.key == "f0") sc.f0.prims.push_back(parse_primitive(ln, tok, 0));
      else if (ln.key == "F") parse_vector(ln, tok, sc.F);
      else if (ln.key == "Fx" || ln.key == "Fy") {
        if (sc.F.kind != VectorExpr::Kind::Zero &&
            sc.F.kind != VectorExpr::Kind::Components)
          fail(ln, "cannot mix vector forms");
        sc.F.kind = VectorExpr::Kind::Components;
        (ln.key == "Fx" ? sc.F.x : sc.F.y).prims.push_back(parse_primitive(ln, tok, 0));
      } else fail(ln, "unknown source key");
    } else if (section == "solver") {
      if (ln.key == "tol") cfg.solver.tol = to_double(ln, tok[0]);
      else if (ln.key == "max_iter") cfg.solver.max_iter = static_cast<int>(to_int(ln, tok[0]));
      else if (ln.key == "noise_std") cfg.solver.noise_std = to_double(ln, tok[0]);
      else fail(ln, "unknown solver key");
    } else if (section == "run") {
      if (ln.key == "out") cfg.run.out = tok[0];
      else if (ln.key == "seed") cfg.run.seed = static_cast<std::uint64_t>(to_int(ln, tok[0]));
      else if (ln.key == "mask") {
        cfg.run.mask = tok[0];
        if (tok[0] == "annulus") {
          if (tok.size() != 3) fail(ln, "mask annulus takes RMIN RMAX");
          cfg.run.mask_rmin = to_double(ln, tok[1]);
          cfg.run.mask_rmax = to_double(ln, tok[2]);
        } else if (tok[0] != "all" && tok[0] != "none") {
          fail(ln, "mask is 'all', 'none', or 'annulus RMIN RMAX'");
        }
      } else fail(ln, "unknown run key");
    } else {
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": key outside any section");
    }
  }

  if (have_source2) cfg.source2 = source2;

  // cross-field validation
  if (cfg.grid.nr < 4) throw ConfigError("grid.nr must be >= 4");
  if (cfg.grid.nbeta < 8 || cfg.grid.nbeta % 2)
    throw ConfigError("grid.nbeta must be even and >= 8");
  if (cfg.grid.ntheta < 8 || cfg.grid.ntheta % 2)
    throw ConfigError("grid.ntheta must be even and >= 8");
  if (cfg.grid.nmodes > cfg.grid.ntheta / 2)
    throw ConfigError("grid.nmodes must be at most ntheta/2");
  if (cfg.grid.nmodes < cfg.medium.degree + 2)
    throw ConfigError("grid.nmodes must be at least medium M + 2");
  if (static_cast<int>(cfg.medium.k.size()) != cfg.medium.degree + 1)
    cfg.medium.k.resize(cfg.medium.degree + 1);
  if (cfg.solver.tol <= 0) throw ConfigError("solver.tol must be > 0");
  if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter must be >= 1");
  if (cfg.solver.noise_std < 0) throw ConfigError("solver.noise_std must be >= 0");
  return cfg;
}

Config parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

ScalarField eval_field(const FieldExpr& e, const PolarGrid& g) {
  ScalarField out(g);
  for (const Primitive& p : e.prims) {
    if (p.kind == Primitive::Kind::Csv) {
      ScalarField loaded = read_scalar_csv(p.path, g);
      for (int k = 0; k < out.size(); ++k) out.v[k] += loaded.v[k];
      continue;
    }
    for (int i = 0; i < g.nr; ++i)
      for (int j = 0; j < g.nbeta; ++j) {
        const cplx z = g.node(i, j);
        out.at(i, j) += p.eval(z.real(), z.imag());
      }
  }
  return out;
}

VectorField eval_vector(const VectorExpr& e, const PolarGrid& g) {
  VectorField out(g);
  switch (e.kind) {
    case VectorExpr::Kind::Zero:
      return out;
    case VectorExpr::Kind::Components:
      out.x = eval_field(e.x, g);
      out.y = eval_field(e.y, g);
      return out;
    case VectorExpr::Kind::Gradient:
    case VectorExpr::Kind::PerpGradient: {
      for (int i = 0; i < g.nr; ++i)
        for (int j = 0; j < g.nbeta; ++j) {
          const cplx z = g.node(i, j);
          double gx = 0, gy = 0;
          for (const Primitive& p : e.psi.prims) {
            double px, py;
            p.grad(z.real(), z.imag(), px, py);
            gx += px;
            gy += py;
          }
          if (e.kind == VectorExpr::Kind::Gradient) {
            out.x.at(i, j) = gx;
            out.y.at(i, j) = gy;
          } else {  // rotate by +pi/2: (-d/dy, d/dx)
            out.x.at(i, j) = -gy;
            out.y.at(i, j) = gx;
          }
        }
      return out;
    }
  }
  return out;
}

MediumSpec make_medium(const MediumConfig& mc, const PolarGrid& g) {
  MediumSpec med;
  med.a = eval_field(mc.a, g);
  for (const FieldExpr& e : mc.k) med.kcoef.push_back(eval_field(e, g));
  if (med.kcoef.empty()) med.kcoef.push_back(ScalarField(g));
  return med;
}

SourceSpec make_source(const SourceConfig& sc, const PolarGrid& g) {
  SourceSpec s;
  s.f0 = eval_field(sc.f0, g);
  s.F = eval_vector(sc.F, g);
  return s;
}

ScalarField make_mask(const RunConfig& rc, const PolarGrid& g) {
  ScalarField mask(g);
  for (int i = 0; i < g.nr; ++i) {
    const double r = g.radius(i);
    double val = 0.0;
    if (rc.mask == "all") val = 1.0;
    else if (rc.mask == "annulus") val = (r >= rc.mask_rmin && r <= rc.mask_rmax) ? 1.0 : 0.0;
    for (int j = 0; j < g.nbeta; ++j) mask.at(i, j) = val;
  }
  return mask;
}

}  // namespace rt
