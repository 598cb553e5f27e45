#pragma once

#include <optional>

#include "filmflow/coeffs/table.hpp"
#include "filmflow/fd/imex.hpp"

namespace filmflow::shallow {

using coeffs::CoefficientTable;
using coeffs::Vec3;
using fd::Array;
using fd::Grid2D;

/// Traction-regime boundary data: prescribed normal tractions on the two
/// surfaces (leading order), friction coefficient, orientation sign and
/// the lateral treatment of the velocity field.
struct TractionBC {
  Array pi0;  // pi_0^0
  Array pi1;  // pi_1^0 (consistency diagnostic)
  std::optional<double> C1R;
  double s0 = -1.0;
  fd::BoundarySpec edges;
  Array Vdir1, Vdir2;  // Dirichlet inflow values where edges say so
};

struct ShallowWaterState {
  Array V1, V2;
  Array p0;
  double t = 0.0;
};

/// Which assembled form of the momentum equation to use. Both are the
/// same equation; Compact uses the Sbar/Fbar grouping, Expanded the
/// (P + chi), psi, kappa, F grouping. They agree to rounding and the
/// equivalence is a test invariant.
enum class SwForm { Compact, Expanded };

/// Body forcing form: Fbar (leading xi3 coefficient, default) or the
/// xi3-integrated F (exposed behind this flag).
enum class SwForcing { FbarLeading, FIntegral };

class ShallowWaterSolver {
 public:
  ShallowWaterSolver(geometry::ChartPtr chart, geometry::GapPtr gap,
                     const Grid2D& grid, TractionBC bc, double mu, double rho0,
                     SwForm form = SwForm::Compact,
                     SwForcing forcing = SwForcing::FbarLeading,
                     const coeffs::BodyForce* force = nullptr);

  ShallowWaterState initial_state(double v1, double v2, double t0 = 0.0) const;

  /// Full momentum tendency (the right side of the evolution equation
  /// solved for dV/dt), with or without the J^{0,0}-weighted second
  /// derivative block (the IMEX step integrates that block implicitly).
  std::pair<Array, Array> tendency(const ShallowWaterState& s, SwForm form,
                                   bool include_diffusion = true) const;

  /// One IMEX step (RK2 explicit + backward-Euler diffusion).
  /// Throws CFLViolation when dt exceeds the advective limit.
  ShallowWaterState step(const ShallowWaterState& s, double dt);

  /// pi_0 + (mu/sqrtA0) div(sqrtA0 (W - V)) + (mu/h) grad h . (W - V) - pi_1
  /// per node; W defaults to V (the limit regime).
  Array pi1_consistency(const ShallowWaterState& s, const Array* W1 = nullptr,
                        const Array* W2 = nullptr) const;

  const CoefficientTable& table(double t) const;
  const TractionBC& bc() const { return bc_; }
  double nu() const { return mu_ / rho0_; }

 private:
  void refresh_diffusion(double t, double dt);
  Array diagnostic_p0(double t) const;

  geometry::ChartPtr chart_;
  geometry::GapPtr gap_;
  Grid2D grid_;
  TractionBC bc_;
  double mu_, rho0_;
  SwForm form_;
  SwForcing forcing_;
  const coeffs::BodyForce* force_;
  bool static_geometry_;
  mutable CoefficientTable table_;
  mutable bool table_valid_ = false;
  std::unique_ptr<fd::ImplicitDiffusion> diffusion_;
  double diffusion_dt_ = -1.0, diffusion_t_ = -1.0;
};

}  // namespace filmflow::shallow
