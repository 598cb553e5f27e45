#include "filmflow/fd/linear_system.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <sstream>

namespace filmflow::fd {

std::vector<char> boundary_mask(const Grid2D& g) {
  std::vector<char> mask(g.size(), 0);
  for (int j = 0; j < g.n2; ++j)
    for (int i = 0; i < g.n1; ++i)
      if (g.on_boundary(i, j)) mask[g.idx(i, j)] = 1;
  return mask;
}

LinearSystem make_dirichlet_system(const SpMat& A, const Eigen::VectorXd& b,
                                   const std::vector<char>& mask,
                                   const Eigen::VectorXd& values,
                                   bool symmetrize) {
  const int n = static_cast<int>(A.rows());
  LinearSystem sys;
  sys.dirichlet = mask;
  sys.b = b;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(A.nonZeros()) + n);

  for (int c = 0; c < A.outerSize(); ++c) {
    for (SpMat::InnerIterator it(A, c); it; ++it) {
      const int r = static_cast<int>(it.row());
      if (mask[r]) continue;
      if (symmetrize && mask[it.col()]) {
        sys.b[r] -= it.value() * values[it.col()];
      } else {
        trip.emplace_back(r, static_cast<int>(it.col()), it.value());
      }
    }
  }
  for (int r = 0; r < n; ++r) {
    if (mask[r]) {
      trip.emplace_back(r, r, 1.0);
      sys.b[r] = values[r];
    }
  }
  sys.A.resize(n, n);
  sys.A.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

Eigen::VectorXd solve_sparse(const LinearSystem& sys) {
  const int n = static_cast<int>(sys.A.rows());
  Eigen::VectorXd x;

  if (n <= 200 * 200) {
    Eigen::SparseLU<SpMat> lu;
    lu.analyzePattern(sys.A);
    lu.factorize(sys.A);
    if (lu.info() != Eigen::Success)
      throw SolverDivergence("sparse LU factorization failed (singular?)");
    x = lu.solve(sys.b);
  } else if (sys.symmetric_hint) {
    Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper,
                             Eigen::DiagonalPreconditioner<double>>
        cg;
    cg.setMaxIterations(5 * n);
    cg.setTolerance(1e-13);
    cg.compute(sys.A);
    x = cg.solve(sys.b);
  } else {
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> bi;
    bi.setMaxIterations(5 * n);
    bi.setTolerance(1e-13);
    bi.compute(sys.A);
    x = bi.solve(sys.b);
  }

  const double bn = sys.b.lpNorm<Eigen::Infinity>();
  const double res = (sys.A * x - sys.b).lpNorm<Eigen::Infinity>();
  const double tol = bn > 0.0 ? 1e-10 * bn : 1e-12;
  if (!(res <= tol) || !x.allFinite()) {
    std::ostringstream msg;
    msg << "sparse solve did not reach tolerance: |Ax-b|_inf = " << res
        << ", |b|_inf = " << bn;
    throw SolverDivergence(msg.str());
  }
  return x;
}

}  // namespace filmflow::fd
