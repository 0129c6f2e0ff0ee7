#include "pqlap/mesh.hpp"

#include <algorithm>
#include <numbers>

namespace pqlap {

Mesh1D::Mesh1D(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) throw InvalidLength("Mesh1D: need at least 2 elements");
  for (size_t i = 1; i < nodes_.size(); ++i) {
    if (!(nodes_[i] > nodes_[i - 1]))
      throw InvalidLength("Mesh1D: nodes must be strictly increasing");
  }
}

MeshPtr Mesh1D::uniform(double a, double b, int n_elements) {
  if (!(b > a)) throw InvalidLength("Mesh1D::uniform: need a < b");
  if (n_elements < 2) throw InvalidLength("Mesh1D::uniform: need n_elements >= 2");
  std::vector<double> nodes(static_cast<size_t>(n_elements) + 1);
  for (int i = 0; i <= n_elements; ++i)
    nodes[static_cast<size_t>(i)] = a + (b - a) * static_cast<double>(i) / n_elements;
  nodes.front() = a;
  nodes.back() = b;
  return std::shared_ptr<const Mesh1D>(new Mesh1D(std::move(nodes)));
}

MeshPtr Mesh1D::from_nodes(std::vector<double> nodes) {
  return std::shared_ptr<const Mesh1D>(new Mesh1D(std::move(nodes)));
}

NodalFunction::NodalFunction(MeshPtr mesh, std::vector<double> coeffs)
    : mesh_(std::move(mesh)), coeffs_(std::move(coeffs)) {
  if (static_cast<int>(coeffs_.size()) != mesh_->n_interior())
    throw InvalidLength("NodalFunction: coefficient count must equal interior node count");
}

double NodalFunction::max_abs() const {
  double m = 0.0;
  for (double c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

NodalFunction& NodalFunction::operator*=(double t) {
  for (double& c : coeffs_) c *= t;
  return *this;
}

NodalFunction& NodalFunction::operator+=(const NodalFunction& other) {
  assert(size() == other.size());
  for (int i = 0; i < size(); ++i) coeffs_[static_cast<size_t>(i)] += other[i];
  return *this;
}

DualVector& DualVector::operator+=(const DualVector& other) {
  assert(size() == other.size());
  for (int i = 0; i < size(); ++i) entries[static_cast<size_t>(i)] += other[i];
  return *this;
}

DualVector& DualVector::operator-=(const DualVector& other) {
  assert(size() == other.size());
  for (int i = 0; i < size(); ++i) entries[static_cast<size_t>(i)] -= other[i];
  return *this;
}

DualVector& DualVector::operator*=(double t) {
  for (double& e : entries) e *= t;
  return *this;
}

double pair(const DualVector& f, const NodalFunction& u) {
  return pair(f, u.coeffs());
}

double pair(const DualVector& f, const std::vector<double>& v) {
  assert(f.entries.size() == v.size());
  double s = 0.0;
  for (size_t i = 0; i < v.size(); ++i) s += f.entries[i] * v[i];
  return s;
}

Quadrature Quadrature::gauss_legendre(int n_points) {
  if (n_points < 1 || n_points > 64)
    throw InvalidLength("Quadrature: supported orders are 1..64");
  Quadrature q;
  q.order = n_points;
  q.points.resize(static_cast<size_t>(n_points));
  q.weights.resize(static_cast<size_t>(n_points));
  const int n = n_points;
  // Newton iteration on Legendre polynomials over [-1,1], then map to [0,1].
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    q.points[static_cast<size_t>(i)] = 0.5 * (1.0 - x);
    q.weights[static_cast<size_t>(i)] = 0.5 * w;
    q.points[static_cast<size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    q.weights[static_cast<size_t>(n - 1 - i)] = 0.5 * w;
  }
  return q;
}

const Quadrature& Quadrature::default_rule() {
  static const Quadrature rule = gauss_legendre(8);
  return rule;
}

}  // namespace pqlap
