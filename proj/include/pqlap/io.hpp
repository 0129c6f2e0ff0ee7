#pragma once

#include <string>
#include <vector>

#include "pqlap/continuation.hpp"

namespace pqlap {

/// Flat key = value run configuration. Every key is typed and validated at
/// load; unknown keys are rejected so stale configs fail loudly.
struct RunConfig {
  double p = 3.0;
  double q = 2.0;
  double a = 0.0;
  double b = 1.0;
  int n_elements = 512;
  int quad_order = 8;
  double residual_tol = 1e-8;
  int max_iterations = 50000;
  unsigned seed = 42;
  double rho_max = 1e-1;
  double rho_min = 1e-6;
  int rho_points = 12;
  std::vector<int> modes{1};
  std::string output_dir = ".";

  static RunConfig from_string(const std::string& text);
  static RunConfig from_file(const std::string& path);

  PQParams params() const { return {p, q}; }
  MeshPtr make_mesh() const;
  SolverConfig solver() const;
  std::vector<double> rho_grid() const { return log_grid(rho_max, rho_min, rho_points); }
};

/// Shortest round-trippable decimal representation (printf %.17g).
std::string format_num(double v);

/// CSV document with a schema_version first row; all numeric cells are
/// serialized via format_num so byte-identical reruns are checkable.
class CsvDoc {
 public:
  CsvDoc(std::string schema_version, std::vector<std::string> columns);

  void add_row(const std::vector<double>& values);
  void add_text_row(const std::vector<std::string>& cells);
  const std::string& str() const { return body_; }
  size_t n_rows() const { return n_rows_; }

 private:
  std::string body_;
  size_t n_columns_;
  size_t n_rows_ = 0;
};

/// Write via a temp file in the same directory plus rename, so readers never
/// observe a half-written file.
void write_text_atomic(const std::string& path, const std::string& content);

std::string read_text(const std::string& path);

}  // namespace pqlap
