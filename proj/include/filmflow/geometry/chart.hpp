#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

namespace filmflow::geometry {

using Vec3 = Eigen::Vector3d;

/// Analytic description of the moving lower surface X(xi1, xi2, t).
///
/// Charts map the reference square D = [0,1]^2 into R^3 and expose
/// analytic derivatives up to third order in space and first order in
/// time (including mixed time-space derivatives). The frame builder
/// needs the third spatial derivatives to differentiate the curvature
/// coefficients; user charts that cannot supply them can be wrapped in
/// FdChartAdapter at a documented accuracy loss.
class SurfaceChart {
 public:
  virtual ~SurfaceChart() = default;

  virtual std::string name() const = 0;

  virtual Vec3 position(double xi1, double xi2, double t) const = 0;
  /// dX/dxi_i, i in {1,2}
  virtual Vec3 d1(int i, double xi1, double xi2, double t) const = 0;
  /// d2X/dxi_i dxi_j
  virtual Vec3 d2(int i, int j, double xi1, double xi2, double t) const = 0;
  /// d3X/dxi_i dxi_j dxi_k
  virtual Vec3 d3(int i, int j, int k, double xi1, double xi2,
                  double t) const = 0;
  /// dX/dt
  virtual Vec3 dt(double xi1, double xi2, double t) const = 0;
  /// d2X/dt dxi_i
  virtual Vec3 dt_d1(int i, double xi1, double xi2, double t) const = 0;
  /// d3X/dt dxi_i dxi_j
  virtual Vec3 dt_d2(int i, int j, double xi1, double xi2,
                     double t) const = 0;
};

using ChartPtr = std::shared_ptr<const SurfaceChart>;

/// X = (xi1, xi2, 0)
ChartPtr make_plane();

/// X = (xi1, xi2, c0 + c1 xi1 + c2 xi2)
ChartPtr make_inclined_plane(double c0, double c1, double c2);

/// X = (xi1 + v t d1, xi2 + v t d2, 0), |d| = 1
ChartPtr make_translating_plane(double v, double d1, double d2);

/// X = (xi1, xi2, gamma t xi1): plane whose normal tilts in time.
ChartPtr make_tilting_plane(double gamma);

/// X = (xi1, R sin(s xi2 + phi), R cos(s xi2 + phi))
ChartPtr make_cylinder(double radius, double angle_scale = 1.0,
                       double angle_offset = 0.0);

/// X = ((R + r cos v) cos u, (R + r cos v) sin u, r sin v),
/// u = u0 + su xi1, v = v0 + sv xi2.
ChartPtr make_torus(double major_radius, double minor_radius,
                    double su = 1.0, double sv = 1.0, double u0 = 0.25,
                    double v0 = 0.35);

/// Wraps a position-only evaluator; all derivatives by central finite
/// differences of the position (documented accuracy loss vs analytic
/// charts, roughly O(step^2) per derivative order).
class FdChartAdapter : public SurfaceChart {
 public:
  using PositionFn = std::function<Vec3(double, double, double)>;

  FdChartAdapter(PositionFn fn, std::string label, double step = 1e-4)
      : fn_(std::move(fn)), label_(std::move(label)), step_(step) {}

  std::string name() const override { return label_; }
  Vec3 position(double xi1, double xi2, double t) const override {
    return fn_(xi1, xi2, t);
  }
  Vec3 d1(int i, double xi1, double xi2, double t) const override;
  Vec3 d2(int i, int j, double xi1, double xi2, double t) const override;
  Vec3 d3(int i, int j, int k, double xi1, double xi2,
          double t) const override;
  Vec3 dt(double xi1, double xi2, double t) const override;
  Vec3 dt_d1(int i, double xi1, double xi2, double t) const override;
  Vec3 dt_d2(int i, int j, double xi1, double xi2, double t) const override;

 private:
  PositionFn fn_;
  std::string label_;
  double step_;
};

}  // namespace filmflow::geometry
