#include "filmflow/fd/ops.hpp"

#include <cmath>
#include <vector>

namespace filmflow::fd {

void require_finite(const Eigen::ArrayXd& v, const std::string& where) {
  if (!v.isFinite().all())
    throw SolverDivergence("non-finite values in " + where);
}

void require_finite(const Field2D& f, const std::string& where) {
  require_finite(f.v, where.empty() ? f.label : where);
}

namespace {

// One-dimensional first-derivative stencil along a line of n nodes with
// spacing d; emit(k, c) contributes c * f[line(k)].
template <class F>
void d1_stencil(int p, int n, double d, F&& emit) {
  if (p == 0) {
    emit(0, -1.5 / d);
    emit(1, 2.0 / d);
    emit(2, -0.5 / d);
  } else if (p == n - 1) {
    emit(n - 1, 1.5 / d);
    emit(n - 2, -2.0 / d);
    emit(n - 3, 0.5 / d);
  } else {
    emit(p + 1, 0.5 / d);
    emit(p - 1, -0.5 / d);
  }
}

template <class F>
void d2_stencil(int p, int n, double d, F&& emit) {
  const double d2 = d * d;
  if (p == 0) {
    emit(0, 2.0 / d2);
    emit(1, -5.0 / d2);
    emit(2, 4.0 / d2);
    emit(3, -1.0 / d2);
  } else if (p == n - 1) {
    emit(n - 1, 2.0 / d2);
    emit(n - 2, -5.0 / d2);
    emit(n - 3, 4.0 / d2);
    emit(n - 4, -1.0 / d2);
  } else {
    emit(p - 1, 1.0 / d2);
    emit(p, -2.0 / d2);
    emit(p + 1, 1.0 / d2);
  }
}

enum class Axis { X1, X2 };

template <class Stencil>
Array apply_1d(const Grid2D& g, const Array& f, Axis ax, Stencil&& stencil) {
  Array out = Array::Zero(g.size());
  if (ax == Axis::X1) {
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) {
        double acc = 0.0;
        stencil(i, g.n1, g.d1,
                [&](int k, double c) { acc += c * f[g.idx(k, j)]; });
        out[g.idx(i, j)] = acc;
      }
  } else {
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i) {
        double acc = 0.0;
        stencil(j, g.n2, g.d2,
                [&](int k, double c) { acc += c * f[g.idx(i, k)]; });
        out[g.idx(i, j)] = acc;
      }
  }
  return out;
}

template <class Stencil>
SpMat matrix_1d(const Grid2D& g, Axis ax, Stencil&& stencil) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(g.size()) * 4);
  if (ax == Axis::X1) {
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i)
        stencil(i, g.n1, g.d1, [&](int k, double c) {
          trip.emplace_back(g.idx(i, j), g.idx(k, j), c);
        });
  } else {
    for (int j = 0; j < g.n2; ++j)
      for (int i = 0; i < g.n1; ++i)
        stencil(j, g.n2, g.d2, [&](int k, double c) {
          trip.emplace_back(g.idx(i, j), g.idx(i, k), c);
        });
  }
  SpMat m(g.size(), g.size());
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

}  // namespace

Array dx(const Grid2D& g, const Array& f) {
  return apply_1d(g, f, Axis::X1,
                  [](int p, int n, double d, auto&& e) { d1_stencil(p, n, d, e); });
}
Array dy(const Grid2D& g, const Array& f) {
  return apply_1d(g, f, Axis::X2,
                  [](int p, int n, double d, auto&& e) { d1_stencil(p, n, d, e); });
}
Array dxx(const Grid2D& g, const Array& f) {
  return apply_1d(g, f, Axis::X1,
                  [](int p, int n, double d, auto&& e) { d2_stencil(p, n, d, e); });
}
Array dyy(const Grid2D& g, const Array& f) {
  return apply_1d(g, f, Axis::X2,
                  [](int p, int n, double d, auto&& e) { d2_stencil(p, n, d, e); });
}
Array dxy(const Grid2D& g, const Array& f) { return dx(g, dy(g, f)); }

SpMat dx_matrix(const Grid2D& g) {
  return matrix_1d(g, Axis::X1,
                   [](int p, int n, double d, auto&& e) { d1_stencil(p, n, d, e); });
}
SpMat dy_matrix(const Grid2D& g) {
  return matrix_1d(g, Axis::X2,
                   [](int p, int n, double d, auto&& e) { d1_stencil(p, n, d, e); });
}
SpMat dxx_matrix(const Grid2D& g) {
  return matrix_1d(g, Axis::X1,
                   [](int p, int n, double d, auto&& e) { d2_stencil(p, n, d, e); });
}
SpMat dyy_matrix(const Grid2D& g) {
  return matrix_1d(g, Axis::X2,
                   [](int p, int n, double d, auto&& e) { d2_stencil(p, n, d, e); });
}

std::pair<Array, Array> grad(const Grid2D& g, const Array& f) {
  return {dx(g, f), dy(g, f)};
}

Array div_weighted(const Grid2D& g, const Array& w11, const Array& w12,
                   const Array& w22, const Array& g1, const Array& g2) {
  for (int k = 0; k < g.size(); ++k) {
    const double det = w11[k] * w22[k] - w12[k] * w12[k];
    if (!(w11[k] > 0.0) || !(det > 0.0))
      throw NonSPDWeight("div_weighted: weight tensor not SPD at node " +
                         std::to_string(k));
  }
  const Array q1 = w11 * g1 + w12 * g2;
  const Array q2 = w12 * g1 + w22 * g2;
  return dx(g, q1) + dy(g, q2);
}

double integrate(const Grid2D& g, const Array& f) {
  double acc = 0.0;
  for (int j = 0; j < g.n2; ++j) {
    const double wj = (j == 0 || j == g.n2 - 1) ? 0.5 : 1.0;
    for (int i = 0; i < g.n1; ++i) {
      const double wi = (i == 0 || i == g.n1 - 1) ? 0.5 : 1.0;
      acc += wi * wj * f[g.idx(i, j)];
    }
  }
  return acc * g.d1 * g.d2;
}

Array lumped_mass(const Grid2D& g) {
  Array m = Array::Zero(g.size());
  const double cell = 0.25 * g.d1 * g.d2;
  for (int j = 0; j + 1 < g.n2; ++j)
    for (int i = 0; i + 1 < g.n1; ++i) {
      m[g.idx(i, j)] += cell;
      m[g.idx(i + 1, j)] += cell;
      m[g.idx(i, j + 1)] += cell;
      m[g.idx(i + 1, j + 1)] += cell;
    }
  return m;
}

SpMat weighted_stiffness(const Grid2D& g, const Array& w11c, const Array& w12c,
                         const Array& w22c) {
  const int nc1 = g.n1 - 1, nc2 = g.n2 - 1;
  if (w11c.size() != nc1 * nc2)
    throw ConfigInvalid("weighted_stiffness: cell arrays sized " +
                        std::to_string(w11c.size()) + ", expected " +
                        std::to_string(nc1 * nc2));

  // 2x2 Gauss points on the reference cell, exact for bilinear gradients.
  const double gp[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(nc1) * nc2 * 16);

  for (int cj = 0; cj < nc2; ++cj) {
    for (int ci = 0; ci < nc1; ++ci) {
      const int c = cj * nc1 + ci;
      const double a = w11c[c], b = w12c[c], d = w22c[c];
      if (!(a > 0.0) || !(a * d - b * b > 0.0))
        throw NonSPDWeight("weighted_stiffness: cell tensor not SPD at cell " +
                           std::to_string(c));

      double ke[4][4] = {};
      for (double u : gp) {
        for (double v : gp) {
          // grad of bilinear shapes in physical coordinates
          const double gx[4] = {-(1 - v) / g.d1, (1 - v) / g.d1, -v / g.d1,
                                v / g.d1};
          const double gy[4] = {-(1 - u) / g.d2, -u / g.d2, (1 - u) / g.d2,
                                u / g.d2};
          const double w = 0.25 * g.d1 * g.d2;  // gauss weight * jacobian
          for (int r = 0; r < 4; ++r) {
            const double fx = a * gx[r] + b * gy[r];
            const double fy = b * gx[r] + d * gy[r];
            for (int s = 0; s < 4; ++s)
              ke[r][s] += w * (fx * gx[s] + fy * gy[s]);
          }
        }
      }
      const int nodes[4] = {g.idx(ci, cj), g.idx(ci + 1, cj),
                            g.idx(ci, cj + 1), g.idx(ci + 1, cj + 1)};
      for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
          trip.emplace_back(nodes[r], nodes[s], ke[r][s]);
    }
  }
  SpMat K(g.size(), g.size());
  K.setFromTriplets(trip.begin(), trip.end());
  return K;
}

Array stiffness_residual(const SpMat& K, const Array& f) {
  return -(K * f.matrix()).array();
}

}  // namespace filmflow::fd
