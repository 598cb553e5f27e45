#pragma once

#include <Eigen/Dense>
#include <string>

#include "filmflow/errors.hpp"

namespace filmflow::fd {

/// Uniform tensor grid on the reference square D = [0,1]^2.
/// Node (i, j) sits at (i*d1, j*d2), flattened as j*n1 + i.
struct Grid2D {
  int n1 = 0, n2 = 0;
  double d1 = 0.0, d2 = 0.0;

  Grid2D() = default;
  Grid2D(int nn1, int nn2) : n1(nn1), n2(nn2) {
    if (n1 < 8 || n2 < 8)
      throw ConfigInvalid("grid: node counts must be >= 8, got " +
                          std::to_string(n1) + "x" + std::to_string(n2));
    d1 = 1.0 / (n1 - 1);
    d2 = 1.0 / (n2 - 1);
  }

  int size() const { return n1 * n2; }
  int idx(int i, int j) const { return j * n1 + i; }
  double x1(int i) const { return i * d1; }
  double x2(int j) const { return j * d2; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == n1 - 1 || j == n2 - 1;
  }
};

enum class Edge { Left, Right, Bottom, Top };

/// Scalar nodal field; the label tags the semantic unit (pressure,
/// velocity component, coefficient) for outputs and error messages.
struct Field2D {
  Eigen::ArrayXd v;
  std::string label;

  Field2D() = default;
  explicit Field2D(const Grid2D& g, std::string lbl = "")
      : v(Eigen::ArrayXd::Zero(g.size())), label(std::move(lbl)) {}
  Field2D(Eigen::ArrayXd values, std::string lbl = "")
      : v(std::move(values)), label(std::move(lbl)) {}

  double& operator()(const Grid2D& g, int i, int j) { return v[g.idx(i, j)]; }
  double operator()(const Grid2D& g, int i, int j) const {
    return v[g.idx(i, j)];
  }
};

/// Throws SolverDivergence if the field picked up NaN/Inf entries.
void require_finite(const Field2D& f, const std::string& where);
void require_finite(const Eigen::ArrayXd& v, const std::string& where);

}  // namespace filmflow::fd
