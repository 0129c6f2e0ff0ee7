#pragma once

#include <cassert>
#include <cmath>
#include <memory>
#include <vector>

#include "pqlap/errors.hpp"

namespace pqlap {

/// A 1D interval mesh with strictly increasing nodes. Piecewise-linear
/// functions on it carry homogeneous Dirichlet values at both endpoints.
class Mesh1D {
 public:
  static std::shared_ptr<const Mesh1D> uniform(double a, double b, int n_elements);
  static std::shared_ptr<const Mesh1D> from_nodes(std::vector<double> nodes);

  double a() const { return nodes_.front(); }
  double b() const { return nodes_.back(); }
  double length() const { return b() - a(); }
  int n_elements() const { return static_cast<int>(nodes_.size()) - 1; }
  int n_interior() const { return n_elements() - 1; }
  double node(int i) const { return nodes_[static_cast<size_t>(i)]; }
  double h(int e) const { return nodes_[static_cast<size_t>(e) + 1] - nodes_[static_cast<size_t>(e)]; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  explicit Mesh1D(std::vector<double> nodes);
  std::vector<double> nodes_;
};

using MeshPtr = std::shared_ptr<const Mesh1D>;

/// Dirichlet P1 function: one coefficient per interior node, zero at a and b.
class NodalFunction {
 public:
  explicit NodalFunction(MeshPtr mesh)
      : mesh_(std::move(mesh)), coeffs_(static_cast<size_t>(mesh_->n_interior()), 0.0) {}
  NodalFunction(MeshPtr mesh, std::vector<double> coeffs);

  const MeshPtr& mesh() const { return mesh_; }
  int size() const { return static_cast<int>(coeffs_.size()); }
  double& operator[](int i) { return coeffs_[static_cast<size_t>(i)]; }
  double operator[](int i) const { return coeffs_[static_cast<size_t>(i)]; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::vector<double>& coeffs() { return coeffs_; }

  /// Value at mesh node i, 0 <= i <= n_elements (boundary nodes give 0).
  double value_at_node(int i) const {
    if (i <= 0 || i >= mesh_->n_elements()) return 0.0;
    return coeffs_[static_cast<size_t>(i) - 1];
  }
  /// Constant gradient on element e.
  double gradient(int e) const {
    return (value_at_node(e + 1) - value_at_node(e)) / mesh_->h(e);
  }

  double max_abs() const;

  NodalFunction& operator*=(double t);
  NodalFunction& operator+=(const NodalFunction& other);
  friend NodalFunction operator*(double t, NodalFunction u) {
    u *= t;
    return u;
  }

 private:
  MeshPtr mesh_;
  std::vector<double> coeffs_;
};

/// Linear functional on the Dirichlet P1 space; pairing with a NodalFunction
/// is the coefficient dot product.
struct DualVector {
  std::vector<double> entries;

  explicit DualVector(int n = 0) : entries(static_cast<size_t>(n), 0.0) {}
  int size() const { return static_cast<int>(entries.size()); }
  double& operator[](int i) { return entries[static_cast<size_t>(i)]; }
  double operator[](int i) const { return entries[static_cast<size_t>(i)]; }

  DualVector& operator+=(const DualVector& other);
  DualVector& operator-=(const DualVector& other);
  DualVector& operator*=(double t);
};

double pair(const DualVector& f, const NodalFunction& u);
double pair(const DualVector& f, const std::vector<double>& v);

/// Gauss-Legendre rule on the reference element [0,1]; weights sum to 1,
/// scaled by the element length at assembly time.
struct Quadrature {
  int order = 0;
  std::vector<double> points;   // in (0,1)
  std::vector<double> weights;  // sum to 1

  static Quadrature gauss_legendre(int n_points);
  static const Quadrature& default_rule();  // 8 points
};

}  // namespace pqlap
