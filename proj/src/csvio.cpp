#include "csvio.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace rt {

namespace {
constexpr const char* kVersion = "0.1.0";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string manifest_line(std::uint64_t config_hash) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "# radtomo %s config=%016" PRIx64, kVersion, config_hash);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw IoError("cannot create directory " + path + ": " + ec.message());
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

}  // namespace

void write_scalar_csv(const std::string& path, const ScalarField& f,
                      std::uint64_t config_hash) {
  std::ofstream out = open_out(path);
  out << manifest_line(config_hash) << "\nr,beta,re\n";
  for (int i = 0; i < f.grid.nr; ++i)
    for (int j = 0; j < f.grid.nbeta; ++j)
      out << format_double(f.grid.radius(i)) << ',' << format_double(f.grid.beta(j)) << ','
          << format_double(f.at(i, j)) << '\n';
}

void write_complex_csv(const std::string& path, const ComplexField& f,
                       std::uint64_t config_hash) {
  std::ofstream out = open_out(path);
  out << manifest_line(config_hash) << "\nr,beta,re,im\n";
  for (int i = 0; i < f.grid.nr; ++i)
    for (int j = 0; j < f.grid.nbeta; ++j)
      out << format_double(f.grid.radius(i)) << ',' << format_double(f.grid.beta(j)) << ','
          << format_double(f.at(i, j).real()) << ',' << format_double(f.at(i, j).imag())
          << '\n';
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

ScalarField read_scalar_csv(const std::string& path, const PolarGrid& g) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open field CSV: " + path);
  ScalarField f(g);
  std::string line;
  int row = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // header row
      continue;
    }
    const auto cols = split_csv(line);
    if (cols.size() < 3) throw IoError(path + ": malformed row '" + line + "'");
    if (row >= g.size()) throw IoError(path + ": more rows than grid nodes");
    f.v[row++] = std::stod(cols[2]);
  }
  if (row != g.size()) throw IoError(path + ": row count does not match the grid");
  return f;
}

void write_modes_csv(const std::string& path, const ModeSequence& m,
                     std::uint64_t config_hash) {
  std::ofstream out = open_out(path);
  out << manifest_line(config_hash) << "\nmode,r,beta,re,im\n";
  for (int p = 0; p < m.count(); ++p) {
    const ComplexField& f = m.modes[p];
    for (int i = 0; i < f.grid.nr; ++i)
      for (int j = 0; j < f.grid.nbeta; ++j)
        out << p << ',' << format_double(f.grid.radius(i)) << ','
            << format_double(f.grid.beta(j)) << ',' << format_double(f.at(i, j).real())
            << ',' << format_double(f.at(i, j).imag()) << '\n';
  }
}

void write_angular_csv(const std::string& path, const AngularField& f,
                       std::uint64_t config_hash) {
  std::ofstream out = open_out(path);
  out << manifest_line(config_hash) << "\nr,beta,theta,value\n";
  for (int i = 0; i < f.grid.nr; ++i)
    for (int j = 0; j < f.grid.nbeta; ++j)
      for (int m = 0; m < f.dirs.ntheta; ++m)
        out << format_double(f.grid.radius(i)) << ',' << format_double(f.grid.beta(j))
            << ',' << format_double(f.dirs.theta(m)) << ',' << format_double(f.at(i, j, m))
            << '\n';
}

void write_boundary_csv(const std::string& path, const BoundaryData& g,
                        std::uint64_t config_hash) {
  std::ofstream out = open_out(path);
  out << manifest_line(config_hash) << "\nbeta,theta,value\n";
  for (int j = 0; j < g.bnd.nbeta; ++j)
    for (int m = 0; m < g.dirs.ntheta; ++m)
      out << format_double(g.bnd.beta(j)) << ',' << format_double(g.dirs.theta(m)) << ','
          << format_double(g.at(j, m)) << '\n';
}

BoundaryData read_boundary_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open boundary CSV: " + path);
  std::string line;
  bool header_seen = false;
  std::vector<double> betas, thetas, values;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    const auto cols = split_csv(line);
    if (cols.size() != 3) throw IoError(path + ": malformed row '" + line + "'");
    betas.push_back(std::stod(cols[0]));
    thetas.push_back(std::stod(cols[1]));
    values.push_back(std::stod(cols[2]));
  }
  if (values.empty()) throw IoError(path + ": no data rows");
  // infer grid sizes: rows are (j,m) lexicographic, theta cycles fastest
  int ntheta = 1;
  while (ntheta < static_cast<int>(values.size()) && thetas[ntheta] > thetas[ntheta - 1])
    ++ntheta;
  const int nbeta = static_cast<int>(values.size()) / ntheta;
  if (nbeta * ntheta != static_cast<int>(values.size()))
    throw IoError(path + ": row count is not nbeta * ntheta");
  BoundaryData g{BoundaryGrid(nbeta), DirectionGrid(ntheta)};
  for (size_t k = 0; k < values.size(); ++k) g.v[k] = values[k];
  return g;
}

void Report::add(const std::string& key, const std::string& value) {
  items.emplace_back(key, value);
}
void Report::add(const std::string& key, double value) {
  items.emplace_back(key, format_double(value));
}
void Report::add(const std::string& key, long value) {
  items.emplace_back(key, std::to_string(value));
}

void write_report(const std::string& path, const Report& rep, std::uint64_t config_hash) {
  std::ofstream out = open_out(path);
  out << manifest_line(config_hash) << '\n';
  for (const auto& [k, v] : rep.items) out << k << " = " << v << '\n';
}

}  // namespace rt
