#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "filmflow/coeffs/jacobian_oracle.hpp"
#include "filmflow/coeffs/table.hpp"
#include "filmflow/errors.hpp"

using namespace filmflow;
using namespace filmflow::coeffs;
using geometry::ChartPtr;
using geometry::GapPtr;

namespace {

struct Sample {
  ChartPtr chart;
  GapPtr gap;
};

std::vector<Sample> curved_samples() {
  return {{geometry::make_cylinder(2.0), geometry::make_linear_gap(1.2, -0.3, 0.15)},
          {geometry::make_torus(2.0, 0.5), geometry::make_cosine_gap(1.1, 0.2, 1, 1)},
          {geometry::make_tilting_plane(0.5), geometry::make_wavy_wedge_gap(1.0, 0.3, 0.4, 2.0)}};
}

PointCoefficients point(const Sample& s, double x1, double x2, double t,
                        int N = 3, unsigned fam = kAllFamilies) {
  const auto fr = geometry::build_frame(*s.chart, x1, x2, t);
  const auto gp = sample_gap(*s.gap, x1, x2, t);
  return build_point_coefficients(fr, gp, N, fam);
}

}  // namespace

TEST_CASE("alpha/beta series: plane with constant gap is trivial") {
  const Sample s{geometry::make_plane(), geometry::make_constant_gap(1.0)};
  const auto fr = geometry::build_frame(*s.chart, 0.3, 0.4, 0.0);
  const auto gp = sample_gap(*s.gap, 0.3, 0.4, 0.0);
  const auto ab = alpha_beta_series(fr, gp, 3);
  CHECK(ab.al(1, 0) == doctest::Approx(1.0));
  CHECK(ab.be(2, 0) == doctest::Approx(1.0));
  CHECK(ab.al(2, 0) == 0.0);
  CHECK(ab.be(1, 0) == 0.0);
  CHECK(ab.al(3, 0) == 0.0);
  CHECK(ab.be(3, 0) == 0.0);
  for (int n = 1; n <= 3; ++n)
    for (int l = 1; l <= 3; ++l) {
      CHECK(ab.al(l, n) == 0.0);
      CHECK(ab.be(l, n) == 0.0);
    }
}

TEST_CASE("alpha/beta series: cylinder first-order values") {
  // R = 2: alpha1^0 = 1, beta2^0 = 1/4, A1 = 2,
  // beta2^1 = -(e + beta2^0 A1)/A0 = -(0 + 1/2)/4 = -1/8.
  const Sample s{geometry::make_cylinder(2.0), geometry::make_constant_gap(1.0)};
  const auto fr = geometry::build_frame(*s.chart, 0.2, 0.0, 0.0);
  const auto gp = sample_gap(*s.gap, 0.2, 0.0, 0.0);
  const auto ab = alpha_beta_series(fr, gp, 3);
  CHECK(ab.al(1, 0) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ab.be(2, 0) == doctest::Approx(0.25).epsilon(1e-13));
  CHECK(ab.be(2, 1) == doctest::Approx(-0.125).epsilon(1e-13));
  CHECK(ab.al(1, 1) == doctest::Approx(0.0).epsilon(1e-13));
}

TEST_CASE("alpha/beta recursion residuals vanish for n >= 2") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (const auto& s : curved_samples()) {
    for (int q = 0; q < 34; ++q) {
      const double x1 = u(rng), x2 = u(rng), t = u(rng);
      const auto fr = geometry::build_frame(*s.chart, x1, x2, t);
      const auto gp = sample_gap(*s.gap, x1, x2, t);
      const auto ab = alpha_beta_series(fr, gp, 4);
      for (int l = 1; l <= 3; ++l)
        for (int n = 2; n <= 4; ++n) {
          const double ra = fr.A0 * ab.al(l, n) + fr.A1 * ab.al(l, n - 1) +
                            fr.A2 * ab.al(l, n - 2);
          const double rb = fr.A0 * ab.be(l, n) + fr.A1 * ab.be(l, n - 1) +
                            fr.A2 * ab.be(l, n - 2);
          CHECK(std::abs(ra) < 1e-10);
          CHECK(std::abs(rb) < 1e-10);
        }
      // alpha2 = beta1 at every order; normal-slot closed form at all n.
      for (int n = 0; n <= 4; ++n) {
        CHECK(ab.al(2, n) == ab.be(1, n));
        CHECK(std::abs(ab.al(3, n) + ab.al(1, n) * gp.dh[0] +
                       ab.al(2, n) * gp.dh[1]) < 1e-10);
        CHECK(std::abs(ab.be(3, n) + ab.be(1, n) * gp.dh[0] +
                       ab.be(2, n) * gp.dh[1]) < 1e-10);
      }
    }
  }
}

TEST_CASE("series xi-derivatives match finite differences of the series") {
  const double d = 1e-6;
  for (const auto& s : curved_samples()) {
    for (double x1 : {0.3, 0.6}) {
      for (double x2 : {0.25, 0.75}) {
        const double t = 0.4;
        auto eval = [&](double a, double b) {
          const auto fr = geometry::build_frame(*s.chart, a, b, t);
          const auto gp = sample_gap(*s.gap, a, b, t);
          return alpha_beta_series(fr, gp, 3);
        };
        const auto c = eval(x1, x2);
        const auto px = eval(x1 + d, x2), mx = eval(x1 - d, x2);
        const auto py = eval(x1, x2 + d), my = eval(x1, x2 - d);
        for (int l = 1; l <= 3; ++l)
          for (int n = 0; n <= 3; ++n) {
            const double fd1 = (px.al(l, n) - mx.al(l, n)) / (2 * d);
            const double fd2 = (py.al(l, n) - my.al(l, n)) / (2 * d);
            CHECK(std::abs(c.dal(l, n, 1) - fd1) < 2e-5);
            CHECK(std::abs(c.dal(l, n, 2) - fd2) < 2e-5);
            const double gd1 = (px.be(l, n) - mx.be(l, n)) / (2 * d);
            const double gd2 = (py.be(l, n) - my.be(l, n)) / (2 * d);
            CHECK(std::abs(c.dbe(l, n, 1) - gd1) < 2e-5);
            CHECK(std::abs(c.dbe(l, n, 2) - gd2) < 2e-5);
          }
      }
    }
  }
}

TEST_CASE("series order guards") {
  const Sample s{geometry::make_plane(), geometry::make_constant_gap(1.0)};
  const auto fr = geometry::build_frame(*s.chart, 0.5, 0.5, 0.0);
  const auto gp = sample_gap(*s.gap, 0.5, 0.5, 0.0);
  CHECK_THROWS_AS(alpha_beta_series(fr, gp, 7), TruncationTooLow);
  CHECK_THROWS_AS(alpha_beta_series(fr, gp, -1), TruncationTooLow);
}

TEST_CASE("jacobian oracle: plane rows are exact basis rows") {
  auto chart = geometry::make_plane();
  auto gap = geometry::make_constant_gap(1.0);
  const double eps = 0.23;
  const auto rows = jacobian_inverse_oracle(*chart, *gap, eps, 0.3, 0.4, 0.7, 0.0);
  CHECK(rows.comp[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(rows.comp[0][1]) < 1e-12);
  CHECK(std::abs(rows.comp[0][2]) < 1e-12);
  CHECK(rows.comp[1][1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows.comp[2][2] == doctest::Approx(1.0 / eps).epsilon(1e-12));
}

TEST_CASE("jacobian oracle vs series on the cylinder") {
  auto chart = geometry::make_cylinder(2.0);
  auto gap = geometry::make_constant_gap(1.0);
  const double eps = 0.1, x1 = 0.4, x2 = 0.6, x3 = 0.5, t = 0.0;
  const auto fr = geometry::build_frame(*chart, x1, x2, t);
  const auto gp = sample_gap(*gap, x1, x2, t);
  const auto oracle = jacobian_inverse_oracle(*chart, *gap, eps, x1, x2, x3, t);

  auto maxdiff = [&](int N) {
    const auto ab = alpha_beta_series(fr, gp, N);
    const auto series = series_inverse_rows(fr, gp, ab, eps, x3);
    double m = 0.0;
    for (int l = 0; l < 3; ++l)
      for (int c = 0; c < 3; ++c)
        m = std::max(m, std::abs(series.comp[l][c] - oracle.comp[l][c]));
    return m;
  };
  CHECK(maxdiff(3) < 1e-4);
  CHECK(maxdiff(1) < 1e-2);
  CHECK(maxdiff(3) < maxdiff(1));
}

TEST_CASE("series error falls by ~2^{N+1} when eps is halved") {
  auto chart = geometry::make_torus(2.0, 0.5);
  auto gap = geometry::make_linear_gap(0.9, -0.2, 0.1);
  const int N = 3;
  const double e1 =
      series_vs_oracle_max_error(*chart, *gap, 0.2, 0.0, N, 5, 5, 3);
  const double e2 =
      series_vs_oracle_max_error(*chart, *gap, 0.1, 0.0, N, 5, 5, 3);
  const double e3 =
      series_vs_oracle_max_error(*chart, *gap, 0.05, 0.0, N, 5, 5, 3);
  CHECK(e1 / e2 >= std::pow(2.0, N + 1) * 0.8);
  CHECK(e2 / e3 >= std::pow(2.0, N + 1) * 0.8);
  const double slope = fit_loglog_slope({0.2, 0.1, 0.05}, {e1, e2, e3});
  CHECK(slope >= N + 0.8);
}

TEST_CASE("singular jacobian detected where the film map folds") {
  // Inward normal (negative angle scale): the film of physical thickness
  // eps*h equal to the cylinder radius collapses the xi3 = 1 sheet onto
  // the axis.
  auto chart = geometry::make_cylinder(0.5, -1.0);
  auto gap = geometry::make_constant_gap(1.0);
  CHECK_THROWS_AS(
      jacobian_inverse_oracle(*chart, *gap, 0.5, 0.5, 0.5, 1.0, 0.0),
      SingularJacobian);
}

TEST_CASE("base coefficients: tangential B^0 is the identity, J00 = M/A0") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (const auto& s : curved_samples()) {
    for (int q = 0; q < 34; ++q) {
      const auto pc = point(s, u(rng), u(rng), u(rng));
      for (int m = 1; m <= 2; ++m)
        for (int k = 1; k <= 2; ++k)
          CHECK(std::abs(pc.B(0, m, k) - (m == k ? 1.0 : 0.0)) < 1e-12);
      for (int l = 1; l <= 2; ++l)
        for (int m = 1; m <= 2; ++m)
          CHECK(std::abs(pc.J(0, 0, l, m) -
                         pc.fr.M(l - 1, m - 1) / pc.fr.A0) < 1e-12);
      // SPD 2x2 block
      CHECK(pc.J(0, 0, 1, 1) > 0.0);
      CHECK(pc.J(0, 0, 1, 1) * pc.J(0, 0, 2, 2) -
                pc.J(0, 0, 1, 2) * pc.J(0, 0, 2, 1) >
            0.0);
      CHECK(std::abs(pc.J(0, 0, 1, 2) - pc.J(0, 0, 2, 1)) < 1e-12);
    }
  }
}

TEST_CASE("base coefficients on the plane") {
  const Sample s{geometry::make_plane(), geometry::make_constant_gap(1.0)};
  const auto pc = point(s, 0.3, 0.8, 0.5);
  CHECK(pc.I() == 0.0);
  for (int j = 0; j <= 3; ++j)
    for (int i = 1; i <= 3; ++i)
      for (int l = 1; l <= 2; ++l)
        for (int k = 1; k <= 3; ++k) CHECK(pc.H(j, i, l, k) == 0.0);
  for (int l = 1; l <= 2; ++l) CHECK(pc.K(0, 0, l) == 0.0);
  CHECK(pc.J(0, 0, 1, 1) == doctest::Approx(1.0));
  CHECK(pc.J(0, 0, 2, 2) == doctest::Approx(1.0));
  CHECK(pc.J(0, 0, 1, 2) == doctest::Approx(0.0));
}

TEST_CASE("cylinder J00 block is diag(1, 1/4)") {
  const Sample s{geometry::make_cylinder(2.0), geometry::make_constant_gap(1.0)};
  const auto pc = point(s, 0.4, 0.7, 0.0);
  CHECK(pc.J(0, 0, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pc.J(0, 0, 2, 2) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::abs(pc.J(0, 0, 1, 2)) < 1e-12);
}

TEST_CASE("structure coefficients: static plane annihilates, translation C") {
  {
    const Sample s{geometry::make_plane(), geometry::make_constant_gap(1.0)};
    const auto pc = point(s, 0.3, 0.6, 0.2);
    for (int l = 1; l <= 3; ++l) CHECK(pc.C0(l) == 0.0);
    for (int i = 1; i <= 2; ++i)
      for (int k = 1; k <= 3; ++k) {
        CHECK(pc.Q0(i, k) == 0.0);
        CHECK(pc.S0(i, k) == 0.0);
        CHECK(pc.P0(i, k) == 0.0);
      }
    for (int i = 1; i <= 2; ++i)
      for (int k = 1; k <= 2; ++k) CHECK(pc.R0(i, k) == 0.0);
  }
  {
    const double v = 0.7;
    const Sample s{geometry::make_translating_plane(v, 1.0, 0.0),
                   geometry::make_constant_gap(1.0)};
    const auto pc = point(s, 0.3, 0.6, 0.2);
    CHECK(pc.C0(1) == doctest::Approx(v));
    CHECK(pc.C0(2) == doctest::Approx(0.0));
    for (int i = 1; i <= 2; ++i)
      for (int k = 1; k <= 3; ++k) CHECK(pc.Q0(i, k) == 0.0);
  }
}

TEST_CASE("S^0_{3k} cross-checked with FD second derivatives of a_k") {
  const Sample s{geometry::make_cylinder(2.0), geometry::make_constant_gap(1.0)};
  const double x1 = 0.3, x2 = 0.7, t = 0.0;
  const auto pc = point(s, x1, x2, t);

  // a_k evaluated exactly at shifted points; derivatives by central
  // differences (Richardson for the second), independent of the
  // analytic derivative chain inside build_frame.
  auto a_at = [&](int k, double o1, double o2) {
    return geometry::build_frame(*s.chart, x1 + o1, x2 + o2, t).a[k - 1];
  };
  auto da_fd = [&](int k, int l) {
    const double h = 1e-5;
    const double o1 = (l == 1) ? h : 0.0, o2 = (l == 2) ? h : 0.0;
    return geometry::Vec3((a_at(k, o1, o2) - a_at(k, -o1, -o2)) / (2.0 * h));
  };
  auto d2a_fd = [&](int k, int l, int m) {
    auto once = [&](double h) {
      const double p1 = (l == 1) ? h : 0.0, p2 = (l == 2) ? h : 0.0;
      const double q1 = (m == 1) ? h : 0.0, q2 = (m == 2) ? h : 0.0;
      return geometry::Vec3(
          (a_at(k, p1 + q1, p2 + q2) - a_at(k, p1 - q1, p2 - q2) -
           a_at(k, -p1 + q1, -p2 + q2) + a_at(k, -p1 - q1, -p2 - q2)) /
          (4.0 * h * h));
    };
    return geometry::Vec3((4.0 * once(5e-4) - once(1e-3)) / 3.0);
  };

  for (int k = 1; k <= 3; ++k) {
    double acc = 0.0;
    for (int l = 1; l <= 2; ++l) {
      for (int m = 1; m <= 2; ++m)
        acc += pc.a(3).dot(d2a_fd(k, l, m)) * pc.J(0, 0, l, m);
      acc += pc.a(3).dot(da_fd(k, l)) * pc.K(0, 0, l);
    }
    CHECK(std::abs(acc - pc.S0(3, k)) < 1e-8);
  }
}

TEST_CASE("gap coefficients: constant gap on static plane annihilates") {
  const Sample s{geometry::make_plane(), geometry::make_constant_gap(1.0)};
  const auto pc = point(s, 0.4, 0.3, 0.1);
  CHECK(pc.eta.norm() == 0.0);
  for (int i = 1; i <= 2; ++i) {
    CHECK(pc.kappa0(i) == 0.0);
    CHECK(pc.F0(i) == 0.0);
    CHECK(pc.Fbar0(i) == 0.0);
    for (int k = 1; k <= 3; ++k) CHECK(pc.chi0(i, k) == 0.0);
    for (int j = 1; j <= 2; ++j)
      for (int l = 1; l <= 2; ++l) CHECK(pc.psi0(i, j, l) == 0.0);
  }
  for (int l = 1; l <= 2; ++l) {
    CHECK(pc.tau(L01, l) == 0.0);
    CHECK(pc.tau(L11, l) == 0.0);
    CHECK(pc.tau(L02, l) == 0.0);
    CHECK(pc.tau(L21, l) == 0.0);
    CHECK(pc.tau(L12, l) == 0.0);
    CHECK(pc.tau(L03, l) == 0.0);
  }
  CHECK(pc.phi1 == 0.0);
  CHECK(pc.phi12 == 0.0);
  CHECK(pc.phi22 == 0.0);
  CHECK(pc.phi33 == 0.0);
  CHECK(pc.phi23 == 0.0);
  CHECK(pc.phi13 == 0.0);
  for (int l = 1; l <= 2; ++l)
    for (int m = 1; m <= 2; ++m) {
      CHECK(pc.iota21(l, m) == 0.0);
      CHECK(pc.iota3(l, m) == 0.0);
    }
}

TEST_CASE("psi closed form on the plane wedge gap") {
  // h = 1 + 0.5 xi1: psi^0_{111} = (alpha1^0 dh1 + dh1 J^{0,0}_{11})/h = 1/h.
  const Sample s{geometry::make_plane(), geometry::make_linear_gap(1.0, 0.5, 0.0)};
  const auto pc = point(s, 0.4, 0.3, 0.0);
  const double h = pc.gp.h;
  CHECK(pc.psi0(1, 1, 1) == doctest::Approx(1.0 / h).epsilon(1e-13));
  CHECK(pc.psi0(2, 2, 1) == doctest::Approx(0.5 / h).epsilon(1e-13));
  CHECK(pc.psi0(1, 2, 1) == doctest::Approx(0.0));
}

TEST_CASE("phi closed forms on the plane with a curved gap") {
  // On the plane: K^{0,0}_3 = -lapl h, J^{0,0}_{3m} = -dh_m,
  // J^{0,0}_{33} = |grad h|^2, so
  // phi1 = -lapl h / h + 2 |grad h|^2 / h^2 and
  // phi22 = 6 |grad h|^2 / h^2 - 2 lapl h / h.
  const Sample s{geometry::make_plane(), geometry::make_cosine_gap(1.3, 0.25, 1, 2)};
  const auto pc = point(s, 0.35, 0.6, 0.0);
  const auto& gp = pc.gp;
  const double lap = gp.d2h[0][0] + gp.d2h[1][1];
  const double grad2 = gp.dh[0] * gp.dh[0] + gp.dh[1] * gp.dh[1];
  const double h = gp.h;
  CHECK(pc.K(0, 0, 3) == doctest::Approx(-lap).epsilon(1e-12));
  CHECK(pc.J(0, 0, 3, 3) == doctest::Approx(grad2).epsilon(1e-12));
  CHECK(pc.phi1 ==
        doctest::Approx(-lap / h + 2.0 * grad2 / (h * h)).epsilon(1e-12));
  CHECK(pc.phi22 ==
        doctest::Approx(6.0 * grad2 / (h * h) - 2.0 * lap / h).epsilon(1e-12));
}

TEST_CASE("Sbar identity: Sbar^0 = P^0 + chi^0 on curved charts") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (const auto& s : curved_samples()) {
    for (int q = 0; q < 34; ++q) {
      const auto pc = point(s, u(rng), u(rng), u(rng));
      for (int i = 1; i <= 2; ++i)
        for (int k = 1; k <= 3; ++k)
          CHECK(std::abs(pc.Sbar(i, k) - (pc.P0(i, k) + pc.chi0(i, k))) <
                1e-10);
    }
  }
}

TEST_CASE("L^{a,0} ladders and the friction forcing helper") {
  const Sample s{geometry::make_torus(2.0, 0.5),
                 geometry::make_linear_gap(1.2, -0.2, 0.25)};
  const auto pc = point(s, 0.45, 0.55, 0.0);
  const double h = pc.gp.h;
  for (int k = 1; k <= 3; ++k)
    for (int l = 1; l <= 2; ++l)
      for (int i = 1; i <= 3; ++i) {
        const double del = (k == i) ? 1.0 : 0.0;
        CHECK(pc.Lh(L10, k, l, i) ==
              doctest::Approx(pc.L0(k, l, i) +
                              2.0 / h * pc.J(0, 0, 3, l) * del));
        CHECK(pc.Lh(L30, k, l, i) - pc.Lh(L20, k, l, i) ==
              doctest::Approx(pc.Lh(L20, k, l, i) - pc.Lh(L10, k, l, i)));
      }
  // Friction forcing: on any chart, the projection of f on the
  // contravariant rows; checked against a direct evaluation.
  const Vec3 f0(0.2, -0.1, 0.05), f1(-0.3, 0.4, 0.1);
  for (int i = 1; i <= 2; ++i) {
    const Vec3 row = pc.al(i, 0) * pc.a(1) + pc.be(i, 0) * pc.a(2);
    const double expect = -1.0 / (1.0 * h) * (f0 + f1).dot(row);
    CHECK(friction_forcing(pc, i, f0, f1, -1.0, 1.0) ==
          doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("gap family guards") {
  const Sample s{geometry::make_plane(), geometry::make_linear_gap(0.2, -0.5, 0.0)};
  // h crosses zero inside D: sampling near the right edge must throw.
  CHECK_THROWS_AS(point(s, 0.9, 0.5, 0.0), NonPositiveGap);

  // Gap families demand series order >= 3.
  const auto fr = geometry::build_frame(*geometry::make_plane(), 0.3, 0.3, 0.0);
  const auto gp = sample_gap(*geometry::make_constant_gap(1.0), 0.3, 0.3, 0.0);
  const auto ab = alpha_beta_series(fr, gp, 1);
  auto pc = base_coefficients(fr, gp, ab);
  structure_coefficients(pc);
  CHECK_THROWS_AS(gap_coefficients(pc, nullptr, nullptr), TruncationTooLow);
}

TEST_CASE("oracle acceptance property over all charts (N=3 slope >= 3.8)") {
  struct Case {
    ChartPtr chart;
    GapPtr gap;
  };
  const std::vector<Case> cases = {
      {geometry::make_plane(), geometry::make_linear_gap(0.9, -0.2, 0.1)},
      {geometry::make_cylinder(2.0), geometry::make_linear_gap(0.9, -0.2, 0.1)},
      {geometry::make_torus(2.0, 0.5), geometry::make_linear_gap(0.9, -0.2, 0.1)}};
  const std::vector<double> epss = {0.2, 0.1, 0.05};
  for (const auto& c : cases) {
    std::vector<double> errs;
    for (double e : epss)
      errs.push_back(
          series_vs_oracle_max_error(*c.chart, *c.gap, e, 0.0, 3, 5, 5, 3));
    if (*std::max_element(errs.begin(), errs.end()) < 1e-13) {
      // Exact series (plane): slope is vacuous.
      CHECK(true);
      continue;
    }
    CHECK(fit_loglog_slope(epss, errs) >= 3.8);
    // err <= C eps^{N+1} with C fitted once at the largest eps
    const double C = errs[0] / std::pow(epss[0], 4);
    for (size_t k = 1; k < epss.size(); ++k)
      CHECK(errs[k] <= 1.5 * C * std::pow(epss[k], 4));
  }
}

TEST_CASE("coefficient table build is thread-invariant") {
  auto chart = geometry::make_torus(2.0, 0.5);
  auto gap = geometry::make_linear_gap(1.1, -0.2, 0.1);
  const filmflow::fd::Grid2D g(17, 9);
  const auto t1 = build_table(*chart, *gap, g, 0.3, 3, kAllFamilies, nullptr, 1);
  const auto t2 = build_table(*chart, *gap, g, 0.3, 3, kAllFamilies, nullptr, 2);
  for (int q = 0; q < g.size(); ++q) {
    CHECK(t1.node[q].Sbar(1, 2) == t2.node[q].Sbar(1, 2));
    CHECK(t1.node[q].kappa0(2) == t2.node[q].kappa0(2));
    CHECK(t1.node[q].J(2, 1, 3, 2) == t2.node[q].J(2, 1, 3, 2));
  }
}

TEST_CASE("family dependencies are enforced") {
  const auto fr = geometry::build_frame(*geometry::make_cylinder(2.0), 0.3,
                                        0.4, 0.0);
  const auto gp = sample_gap(*geometry::make_constant_gap(1.0), 0.3, 0.4, 0.0);
  const auto ab = alpha_beta_series(fr, gp, 3);
  auto pc = base_coefficients(fr, gp, ab);
  CHECK_THROWS_AS(gap_coefficients(pc, nullptr, nullptr), MissingCoefficient);
}
