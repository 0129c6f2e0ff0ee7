#include "pqlap/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace pqlap {

namespace {

std::string trim(const std::string& s) {
  const size_t lo = s.find_first_not_of(" \t\r");
  if (lo == std::string::npos) return "";
  const size_t hi = s.find_last_not_of(" \t\r");
  return s.substr(lo, hi - lo + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
  }
}

int parse_int(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const int out = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
}

std::vector<int> parse_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(parse_int(key, item));
  }
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects a list");
  return out;
}

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "p") cfg.p = parse_double(key, val);
    else if (key == "q") cfg.q = parse_double(key, val);
    else if (key == "a") cfg.a = parse_double(key, val);
    else if (key == "b") cfg.b = parse_double(key, val);
    else if (key == "n_elements") cfg.n_elements = parse_int(key, val);
    else if (key == "quad_order") cfg.quad_order = parse_int(key, val);
    else if (key == "residual_tol") cfg.residual_tol = parse_double(key, val);
    else if (key == "max_iterations") cfg.max_iterations = parse_int(key, val);
    else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_int(key, val));
    else if (key == "rho_max") cfg.rho_max = parse_double(key, val);
    else if (key == "rho_min") cfg.rho_min = parse_double(key, val);
    else if (key == "rho_points") cfg.rho_points = parse_int(key, val);
    else if (key == "modes") cfg.modes = parse_int_list(key, val);
    else if (key == "output_dir") cfg.output_dir = val;
    else throw ConfigError("config: unknown key '" + key + "'");
  }

  if (!(cfg.p > 1.0)) throw ConfigError("config: p must be > 1");
  if (!(cfg.q > 1.0)) throw ConfigError("config: q must be > 1");
  if (cfg.p == cfg.q) throw ConfigError("config: p == q is not supported");
  if (!(cfg.b > cfg.a)) throw ConfigError("config: need b > a");
  if (cfg.n_elements < 2) throw ConfigError("config: n_elements must be >= 2");
  if (cfg.quad_order < 1) throw ConfigError("config: quad_order must be >= 1");
  if (!(cfg.residual_tol > 0.0)) throw ConfigError("config: residual_tol must be > 0");
  if (cfg.max_iterations < 1) throw ConfigError("config: max_iterations must be >= 1");
  if (!(cfg.rho_min > 0.0) || !(cfg.rho_max > cfg.rho_min))
    throw ConfigError("config: need rho_max > rho_min > 0");
  if (cfg.rho_points < 1) throw ConfigError("config: rho_points must be >= 1");
  for (int m : cfg.modes)
    if (m < 1) throw ConfigError("config: modes must be >= 1");
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

MeshPtr RunConfig::make_mesh() const { return Mesh1D::uniform(a, b, n_elements); }

SolverConfig RunConfig::solver() const {
  SolverConfig s;
  s.residual_tol = residual_tol;
  s.max_iterations = max_iterations;
  s.seed = seed;
  s.quad_order = quad_order;
  return s;
}

std::string format_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvDoc::CsvDoc(std::string schema_version, std::vector<std::string> columns)
    : n_columns_(columns.size()) {
  body_ = "schema_version," + schema_version + "\n";
  for (size_t i = 0; i < columns.size(); ++i) {
    if (i) body_ += ',';
    body_ += columns[i];
  }
  body_ += '\n';
}

void CsvDoc::add_row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw InvalidLength("CsvDoc: row width does not match header");
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) body_ += ',';
    body_ += format_num(values[i]);
  }
  body_ += '\n';
  ++n_rows_;
}

void CsvDoc::add_text_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_)
    throw InvalidLength("CsvDoc: row width does not match header");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += cells[i];
  }
  body_ += '\n';
  ++n_rows_;
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) throw ConfigError("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace pqlap
