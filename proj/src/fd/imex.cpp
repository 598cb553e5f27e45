#include "filmflow/fd/imex.hpp"

#include <cmath>

namespace filmflow::fd {

namespace {

// Second-order zero-normal-gradient extrapolation value.
double zg_value(const Array& f, int i1, int i2) {
  return (4.0 * f[i1] - f[i2]) / 3.0;
}

}  // namespace

void apply_boundary(const Grid2D& g, const BoundarySpec& bc, Array& f,
                    const Array& dirichlet_values) {
  auto set_node = [&](int i, int j, Edge e) {
    const int id = g.idx(i, j);
    if (bc.at(e) == BcKind::Dirichlet) {
      f[id] = dirichlet_values[id];
      return;
    }
    switch (e) {
      case Edge::Left: f[id] = zg_value(f, g.idx(1, j), g.idx(2, j)); break;
      case Edge::Right:
        f[id] = zg_value(f, g.idx(g.n1 - 2, j), g.idx(g.n1 - 3, j));
        break;
      case Edge::Bottom: f[id] = zg_value(f, g.idx(i, 1), g.idx(i, 2)); break;
      case Edge::Top:
        f[id] = zg_value(f, g.idx(i, g.n2 - 2), g.idx(i, g.n2 - 3));
        break;
    }
  };

  for (int j = 1; j < g.n2 - 1; ++j) {
    set_node(0, j, Edge::Left);
    set_node(g.n1 - 1, j, Edge::Right);
  }
  for (int i = 1; i < g.n1 - 1; ++i) {
    set_node(i, 0, Edge::Bottom);
    set_node(i, g.n2 - 1, Edge::Top);
  }
  // Corners: a Dirichlet edge wins; otherwise extrapolate along xi1.
  auto corner = [&](int i, int j, Edge ex, Edge ey) {
    if (bc.at(ex) == BcKind::Dirichlet || bc.at(ey) == BcKind::Dirichlet) {
      f[g.idx(i, j)] = dirichlet_values[g.idx(i, j)];
    } else {
      set_node(i, j, ex);
    }
  };
  corner(0, 0, Edge::Left, Edge::Bottom);
  corner(g.n1 - 1, 0, Edge::Right, Edge::Bottom);
  corner(0, g.n2 - 1, Edge::Left, Edge::Top);
  corner(g.n1 - 1, g.n2 - 1, Edge::Right, Edge::Top);
}

ImplicitDiffusion::ImplicitDiffusion(const Grid2D& g, const Array& j11,
                                     const Array& j12, const Array& j22,
                                     double nu, double dt,
                                     const BoundarySpec& bc)
    : grid_(g), bc_(bc) {
  const SpMat dxx_m = dxx_matrix(g);
  const SpMat dyy_m = dyy_matrix(g);
  const SpMat dxy_m = dx_matrix(g) * dy_matrix(g);

  SpMat lap = SpMat(j11.matrix().asDiagonal()) * dxx_m +
              SpMat((2.0 * j12).matrix().asDiagonal()) * dxy_m +
              SpMat(j22.matrix().asDiagonal()) * dyy_m;
  SpMat ident(g.size(), g.size());
  ident.setIdentity();
  SpMat full = ident - dt * nu * lap;

  // Replace boundary rows: Dirichlet -> identity, zero-gradient ->
  // one-sided normal derivative (normalized).
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(full.nonZeros()) + 3 * g.size());
  const auto bmask = boundary_mask(g);
  for (int c = 0; c < full.outerSize(); ++c)
    for (SpMat::InnerIterator it(full, c); it; ++it)
      if (!bmask[it.row()])
        trip.emplace_back(static_cast<int>(it.row()),
                          static_cast<int>(it.col()), it.value());

  auto zg_row = [&](int id, int i1, int i2) {
    trip.emplace_back(id, id, 1.0);
    trip.emplace_back(id, i1, -4.0 / 3.0);
    trip.emplace_back(id, i2, 1.0 / 3.0);
  };
  auto edge_row = [&](int i, int j, Edge e) {
    const int id = g.idx(i, j);
    if (bc.at(e) == BcKind::Dirichlet) {
      trip.emplace_back(id, id, 1.0);
      return;
    }
    switch (e) {
      case Edge::Left: zg_row(id, g.idx(1, j), g.idx(2, j)); break;
      case Edge::Right: zg_row(id, g.idx(g.n1 - 2, j), g.idx(g.n1 - 3, j)); break;
      case Edge::Bottom: zg_row(id, g.idx(i, 1), g.idx(i, 2)); break;
      case Edge::Top: zg_row(id, g.idx(i, g.n2 - 2), g.idx(i, g.n2 - 3)); break;
    }
  };
  for (int j = 1; j < g.n2 - 1; ++j) {
    edge_row(0, j, Edge::Left);
    edge_row(g.n1 - 1, j, Edge::Right);
  }
  for (int i = 1; i < g.n1 - 1; ++i) {
    edge_row(i, 0, Edge::Bottom);
    edge_row(i, g.n2 - 1, Edge::Top);
  }
  auto corner_row = [&](int i, int j, Edge ex, Edge ey) {
    const int id = g.idx(i, j);
    if (bc.at(ex) == BcKind::Dirichlet || bc.at(ey) == BcKind::Dirichlet) {
      trip.emplace_back(id, id, 1.0);
    } else {
      edge_row(i, j, ex);
    }
  };
  corner_row(0, 0, Edge::Left, Edge::Bottom);
  corner_row(g.n1 - 1, 0, Edge::Right, Edge::Bottom);
  corner_row(0, g.n2 - 1, Edge::Left, Edge::Top);
  corner_row(g.n1 - 1, g.n2 - 1, Edge::Right, Edge::Top);

  op_.resize(g.size(), g.size());
  op_.setFromTriplets(trip.begin(), trip.end());
  lu_ = std::make_unique<Eigen::SparseLU<SpMat>>();
  lu_->analyzePattern(op_);
  lu_->factorize(op_);
  if (lu_->info() != Eigen::Success)
    throw SolverDivergence("implicit diffusion operator factorization failed");
}

Array ImplicitDiffusion::solve(const Array& rhs,
                               const Array& dirichlet_values) const {
  Eigen::VectorXd b = rhs.matrix();
  auto fix = [&](int i, int j, Edge e) {
    const int id = grid_.idx(i, j);
    b[id] = bc_.at(e) == BcKind::Dirichlet ? dirichlet_values[id] : 0.0;
  };
  for (int j = 1; j < grid_.n2 - 1; ++j) {
    fix(0, j, Edge::Left);
    fix(grid_.n1 - 1, j, Edge::Right);
  }
  for (int i = 1; i < grid_.n1 - 1; ++i) {
    fix(i, 0, Edge::Bottom);
    fix(i, grid_.n2 - 1, Edge::Top);
  }
  auto fix_corner = [&](int i, int j, Edge ex, Edge ey) {
    const int id = grid_.idx(i, j);
    b[id] = (bc_.at(ex) == BcKind::Dirichlet || bc_.at(ey) == BcKind::Dirichlet)
                ? dirichlet_values[id]
                : 0.0;
  };
  fix_corner(0, 0, Edge::Left, Edge::Bottom);
  fix_corner(grid_.n1 - 1, 0, Edge::Right, Edge::Bottom);
  fix_corner(0, grid_.n2 - 1, Edge::Left, Edge::Top);
  fix_corner(grid_.n1 - 1, grid_.n2 - 1, Edge::Right, Edge::Top);

  Eigen::VectorXd x = lu_->solve(b);
  if (!x.allFinite())
    throw SolverDivergence("implicit diffusion solve produced non-finite values");
  return x.array();
}

void check_advective_cfl(const Grid2D& g, const Array& vrel1,
                         const Array& vrel2, double dt) {
  const double vmax = (vrel1.square() + vrel2.square()).sqrt().maxCoeff();
  if (vmax <= 0.0) return;
  const double dt_max = 0.5 * std::min(g.d1, g.d2) / vmax;
  if (dt > dt_max)
    throw CFLViolation("dt = " + std::to_string(dt) +
                       " exceeds advective limit " + std::to_string(dt_max));
}

std::vector<Array> time_step_imex(
    double t, double dt, const std::vector<Array>& fields,
    const TendencyFn& explicit_rhs,
    const std::vector<const ImplicitDiffusion*>& diffusion,
    const std::vector<const Array*>& dirichlet_values,
    const BoundaryFn& apply_bc) {
  const auto k1 = explicit_rhs(t, fields);
  std::vector<Array> stage(fields.size());
  for (size_t q = 0; q < fields.size(); ++q) stage[q] = fields[q] + dt * k1[q];
  if (apply_bc) apply_bc(stage);

  const auto k2 = explicit_rhs(t + dt, stage);
  std::vector<Array> out(fields.size());
  for (size_t q = 0; q < fields.size(); ++q)
    out[q] = fields[q] + 0.5 * dt * (k1[q] + k2[q]);

  for (size_t q = 0; q < fields.size(); ++q) {
    if (q < diffusion.size() && diffusion[q] != nullptr) {
      static const Array empty;
      const Array& dir =
          (q < dirichlet_values.size() && dirichlet_values[q] != nullptr)
              ? *dirichlet_values[q]
              : empty;
      out[q] = diffusion[q]->solve(out[q], dir.size() ? dir : out[q]);
    }
  }
  if (apply_bc) apply_bc(out);
  for (auto& f : out) require_finite(f, "imex step output");
  return out;
}

}  // namespace filmflow::fd
