#pragma once

#include <memory>
#include <vector>

#include "filmflow/coeffs/alpha_beta.hpp"
#include "filmflow/fd/grid.hpp"
#include "filmflow/geometry/chart.hpp"

namespace filmflow::coeffs {

/// Body force density in the surface basis, supplied as the
/// xi3-polynomial coefficients fbar_i^n(xi1, xi2, t) of its leading
/// epsilon order.
class BodyForce {
 public:
  virtual ~BodyForce() = default;
  virtual int max_order() const = 0;
  /// i = 1..3 (component along a_i), n = polynomial order in xi3.
  virtual double fbar(int i, int n, double xi1, double xi2,
                      double t) const = 0;

  /// f_i(xi3) = sum_n fbar_i^n xi3^n.
  double eval(int i, double xi3, double xi1, double xi2, double t) const;
};

/// Friction data entering the F families: the leading-order friction
/// forces on the two surfaces, the normal orientation sign and density.
struct FrictionSample {
  Vec3 f_R0 = Vec3::Zero();
  Vec3 f_R1 = Vec3::Zero();
  double s0 = -1.0;
  double rho0 = 1.0;
};

/// Quadratic friction law f1 = rho0 * C1R * |u| u on a surface, with u
/// the leading-order physical velocity there.
Vec3 quadratic_friction(double c1r, double rho0, const Vec3& u);

enum Families : unsigned {
  kBase = 1u,        // B, C, D, H, I, J, K
  kStructure = 2u,   // L0, P0, Q0, R0, S0
  kGap = 4u,         // F, L(h), S(h), Sbar, eta, iota, kappa, tau, phi, chi, psi
  kAllFamilies = 7u,
};

/// Indexing of the h-dependent L^{a,b} and S^{a,b} variants.
enum LhKind { L10, L01, L20, L11, L02, L30, L21, L12, L03, kLhCount };
enum ShKind { S10, S01, S20, S11, S02, S30, S21, S12, S03, kShCount };

/// Every coefficient family of the catalogue at one point. Tensor
/// indices are 1-based; accessors keep that convention and the arrays
/// are 0-based underneath. Families not requested stay zero; `built`
/// records what is valid.
struct PointCoefficients {
  FrameData fr;
  GapPoint gp;
  AlphaBetaSeries ab;
  unsigned built = 0;

  /// d/dt of the lower-surface normal velocity dX/dt.a3, filled by
  /// build_table via central time differencing (the chart interface has
  /// no second time derivative); zero when built point-wise.
  double wn_dt = 0.0;

  // --- families depending only on X (alpha3/beta3 slots carry h) ---
  double B_[4][3][2] = {};     // B^j_{lk}
  double C0_[3] = {};          // C^0_l
  double Cij_[4][4][3] = {};   // C^{i,j}_l
  double D_[2][3][2] = {};     // D^j_{ik}
  double H_[4][3][2][3] = {};  // H^j_{ilk}
  double I_ = 0.0;
  double J_[4][4][3][3] = {};  // J^{i,j}_{lm}
  double K_[4][4][3] = {};     // K^{j,i}_l

  // --- structure families ---
  double L0_[3][2][3] = {};  // L^0_{kli} (i = 3 is the normal variant)
  double P0_[2][3] = {};     // P^0_{ik}, k extended to 3
  double Q0_[3][3] = {};     // rows i=1,2 plus row 3 = Q^0_{3k}
  double R0_[2][2] = {};
  double S0_[3][3] = {};  // rows i=1,2 plus row 3 = S^0_{3k}

  // --- h-dependent families ---
  double F0_[2] = {};     // integral form (without friction unless given)
  double Fbar0_[2] = {};  // fbar^0 form
  double Lh_[kLhCount][3][2][3] = {};  // [kind][k][l][i]
  double Sbar_[2][3] = {};
  double Sh_[kShCount][3][3] = {};  // [kind][i][k], row i=3 where defined
  Vec3 eta = Vec3::Zero();
  double iota21_[2][2] = {};
  double iota3_[2][2] = {};
  double kappa0_[2] = {};
  double tau01_[2] = {}, tau12_[2] = {}, tau02_[2] = {};
  double tau23_[2] = {}, tau13_[2] = {}, tau03_[2] = {};
  double phi1 = 0, phi12 = 0, phi22 = 0, phi33 = 0, phi23 = 0, phi13 = 0;
  double chi0_[2][3] = {};
  double psi0_[2][2][2] = {};  // psi^0_{ijl}

  // --- 1-based accessors (tensor index order) ---
  double B(int j, int l, int k) const {
    return k == 3 ? 0.0 : B_[j][l - 1][k - 1];  // a_3 is orthogonal to a_1,a_2
  }
  double C0(int l) const { return C0_[l - 1]; }
  double Cij(int i, int j, int l) const { return Cij_[i][j][l - 1]; }
  double D(int j, int i, int k) const {
    return k == 3 ? 0.0 : D_[j][i - 1][k - 1];  // a_3 . da_3 = 0
  }
  double H(int j, int i, int l, int k) const {
    return H_[j][i - 1][l - 1][k - 1];
  }
  double I() const { return I_; }
  double J(int i, int j, int l, int m) const { return J_[i][j][l - 1][m - 1]; }
  double K(int j, int i, int l) const { return K_[j][i][l - 1]; }
  double L0(int k, int l, int i) const { return L0_[k - 1][l - 1][i - 1]; }
  double P0(int i, int k) const { return P0_[i - 1][k - 1]; }
  double Q0(int i, int k) const { return Q0_[i - 1][k - 1]; }
  double R0(int i, int k) const { return R0_[i - 1][k - 1]; }
  double S0(int i, int k) const { return S0_[i - 1][k - 1]; }
  double F0(int i) const { return F0_[i - 1]; }
  double Fbar0(int i) const { return Fbar0_[i - 1]; }
  double Lh(LhKind w, int k, int l, int i) const {
    return Lh_[w][k - 1][l - 1][i - 1];
  }
  double Sbar(int i, int k) const { return Sbar_[i - 1][k - 1]; }
  double Sh(ShKind w, int i, int k) const { return Sh_[w][i - 1][k - 1]; }
  double iota21(int l, int m) const { return iota21_[l - 1][m - 1]; }
  double iota3(int l, int m) const { return iota3_[l - 1][m - 1]; }
  double kappa0(int i) const { return kappa0_[i - 1]; }
  double tau(LhKind w, int l) const;
  double chi0(int i, int k) const { return chi0_[i - 1][k - 1]; }
  double psi0(int i, int j, int l) const {
    return psi0_[i - 1][j - 1][l - 1];
  }

  // Frame/series shorthands used across the solvers.
  const Vec3& a(int k) const { return fr.a[k - 1]; }
  const Vec3& da(int k, int l) const { return fr.da_dxi[k - 1][l - 1]; }
  const Vec3& d2a(int k, int l, int m) const {
    return fr.d2a[k - 1][l - 1][m - 1];
  }
  const Vec3& dat(int k) const { return fr.da_dt[k - 1]; }
  double al(int l, int n) const { return ab.al(l, n); }
  double be(int l, int n) const { return ab.be(l, n); }
  /// Normal velocity of the lower surface, dX/dt . a3 (= u3bar^0).
  double w_n() const { return fr.dX_dt.dot(fr.a[2]); }
};

/// Staged builders: base families, then the structure families, then
/// the gap-dependent families; the combined builder below is what the
/// table uses.
PointCoefficients base_coefficients(const FrameData& fr, const GapPoint& gp,
                                    const AlphaBetaSeries& ab);
void structure_coefficients(PointCoefficients& pc);
void gap_coefficients(PointCoefficients& pc, const BodyForce* force,
                      const FrictionSample* fric);

PointCoefficients build_point_coefficients(const FrameData& fr,
                                           const GapPoint& gp, int N,
                                           unsigned families,
                                           const BodyForce* force = nullptr,
                                           const FrictionSample* fric = nullptr);

/// The friction part of F^0_i / Fbar^0_i:
/// (s0/(rho0 h)) (f_R1 + f_R0) . (alpha_i^0 a1 + beta_i^0 a2).
double friction_forcing(const PointCoefficients& pc, int i, const Vec3& f_R0,
                        const Vec3& f_R1, double s0, double rho0);

/// Immutable per-(grid node, time) coefficient evaluation. Built once
/// per snapshot and shared by every solver term that needs it.
struct CoefficientTable {
  fd::Grid2D grid;
  double t = 0.0;
  int N = 3;
  unsigned families = kAllFamilies;
  std::vector<PointCoefficients> node;

  const PointCoefficients& at(int i, int j) const {
    return node[grid.idx(i, j)];
  }
};

/// Evaluate the table over a grid; `threads` > 1 splits the node loop
/// (identical results, the writes are disjoint).
CoefficientTable build_table(const geometry::SurfaceChart& chart,
                             const geometry::GapField& gap,
                             const fd::Grid2D& grid, double t, int N,
                             unsigned families = kAllFamilies,
                             const BodyForce* force = nullptr, int threads = 1);

}  // namespace filmflow::coeffs
