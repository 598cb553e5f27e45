#pragma once

#include <functional>

#include "filmflow/coeffs/table.hpp"
#include "filmflow/fd/linear_system.hpp"
#include "filmflow/geometry/chart.hpp"
#include "filmflow/geometry/gap.hpp"

namespace filmflow::lubrication {

using coeffs::Vec3;
using fd::Array;
using fd::Grid2D;

/// Slip-velocity boundary data: tangential surface velocities V (lower)
/// and W (upper) over D, plus the Dirichlet trace of the scaled pressure
/// p^{-2} on the lateral boundary.
struct LubricationBC {
  Array V1, V2;  // lower-surface tangential velocity components
  Array W1, W2;  // upper-surface tangential velocity components
  Array pressure_trace;  // used on boundary nodes only
};

/// Two discretizations of the same generalized Reynolds operator:
///  - SymmetricFem: bilinear-element assembly, exactly symmetric SPD
///    system (default; slider benchmark, compatibility checks).
///  - FluxChain: the operator composed from the shared central-difference
///    building blocks, matching the new-model vertical-closure assembly
///    operator by operator (used by the epsilon sweeps so the limit
///    comparison is free of discretization-difference contamination).
enum class ReynoldsScheme { SymmetricFem, FluxChain };

struct LubricationSolution {
  Grid2D grid;
  double t = 0.0;
  double mu = 1.0;
  Array pm2;            // p^{-2}
  Array dpm2_d1, dpm2_d2;
  Array u3;             // u_3^0 = dX/dt . a3
  LubricationBC bc;
  // Geometry fields kept for the velocity/pressure reconstruction.
  Array j11, j12, j22, h, dh1, dh2;
  Array sqrtA0;
  Array sumH0ll[3];  // sum_l H^0_{llk}, k = 1..3
  // |interior weak RHS - boundary flux| of the discrete solve
  // (symmetric scheme only; NaN otherwise).
  double compat_gap = 0.0;
};

/// Assemble the generalized Reynolds system for p^{-2}:
/// (1/sqrtA0) div((h^3/sqrtA0) M grad p) = RHS with the four RHS terms
/// (squeeze, normal motion, wedge slip, mean slip divergence).
/// `use_lubric_form` assembles the algebraically equal weight
/// h^3 sqrtA0 J^{0,0} instead of (h^3/sqrtA0) M (used by the
/// equivalence test).
fd::LinearSystem assemble_reynolds(const Grid2D& grid,
                                   const geometry::SurfaceChart& chart,
                                   const geometry::GapField& gap,
                                   const LubricationBC& bc, double mu,
                                   double t,
                                   ReynoldsScheme scheme = ReynoldsScheme::SymmetricFem,
                                   bool use_lubric_form = false);

/// Solve the Reynolds problem and keep what the velocity/pressure
/// reconstruction needs.
LubricationSolution solve_lubrication(const Grid2D& grid,
                                      const geometry::SurfaceChart& chart,
                                      const geometry::GapField& gap,
                                      const LubricationBC& bc, double mu,
                                      double t,
                                      ReynoldsScheme scheme = ReynoldsScheme::SymmetricFem);

/// Limit velocity profile at a node: u_i^0(xi3) (i = 1,2) and u_3^0.
struct VelocityProfile {
  double u1(double xi3) const {
    return quad1 * (xi3 * xi3 - xi3) + xi3 * (w1 - v1) + v1;
  }
  double u2(double xi3) const {
    return quad2 * (xi3 * xi3 - xi3) + xi3 * (w2 - v2) + v2;
  }
  double quad1 = 0, quad2 = 0, v1 = 0, v2 = 0, w1 = 0, w2 = 0, u3 = 0;
};

VelocityProfile velocity_profile(const LubricationSolution& sol, int i, int j);

/// Full-field reconstruction over the physical film: velocity components
/// in the surface basis and the pressure through second order in xi3,
/// p = pbar0 + xi3 pbar1 + xi3^2 pbar2 with pbar0 = p^{-2}/eps^2.
/// Fields are sampled bilinearly between nodes.
struct FilmSample {
  double u1, u2, u3;  // velocity components along a1, a2, a3
  double p;
};

class FullFieldReconstruction {
 public:
  FullFieldReconstruction(const LubricationSolution& sol, double eps);
  FilmSample operator()(double xi1, double xi2, double xi3) const;

  const Array& pbar1() const { return pbar1_; }
  const Array& pbar2() const { return pbar2_; }

 private:
  const LubricationSolution sol_;
  double eps_;
  Array pbar1_, pbar2_;
};

/// Discrete compatibility check: total weak RHS over interior nodes vs
/// the boundary-row flux functional of the solution; returns the
/// absolute gap (zero to solver precision for a consistent assembly).
double reynolds_compatibility_gap(const Grid2D& grid, const fd::SpMat& K_full,
                                  const Array& weak_rhs, const Array& solution);

}  // namespace filmflow::lubrication
