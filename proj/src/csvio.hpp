// CSV serialization for fields, boundary data and mode stacks, plus the
// key = value manifest/report writers. Every output file starts with one
// manifest comment line carrying the artifact version and config hash.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aanalytic.hpp"
#include "grid.hpp"
#include "transport.hpp"

namespace rt {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string manifest_line(std::uint64_t config_hash);

// Field CSV: header r,beta,re[,im], rows in (i,j) lexicographic order.
void write_scalar_csv(const std::string& path, const ScalarField& f,
                      std::uint64_t config_hash);
void write_complex_csv(const std::string& path, const ComplexField& f,
                       std::uint64_t config_hash);
ScalarField read_scalar_csv(const std::string& path, const PolarGrid& g);

// Mode stacks: header mode,r,beta,re,im; the mode column is the stack position.
void write_modes_csv(const std::string& path, const ModeSequence& m,
                     std::uint64_t config_hash);

// AngularField CSV: header r,beta,theta,value.
void write_angular_csv(const std::string& path, const AngularField& f,
                       std::uint64_t config_hash);

// BoundaryData CSV: header beta,theta,value.
void write_boundary_csv(const std::string& path, const BoundaryData& g,
                        std::uint64_t config_hash);
BoundaryData read_boundary_csv(const std::string& path);

// Ordered key = value report; values already formatted.
struct Report {
  std::vector<std::pair<std::string, std::string>> items;

  void add(const std::string& key, const std::string& value);
  void add(const std::string& key, double value);
  void add(const std::string& key, long value);
};
void write_report(const std::string& path, const Report& rep, std::uint64_t config_hash);

std::string format_double(double v);
void ensure_dir(const std::string& path);

}  // namespace rt
