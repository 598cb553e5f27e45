#include "filmflow/geometry/chart.hpp"

#include <cmath>
#include <functional>

namespace filmflow::geometry {

namespace {

class PlaneChart final : public SurfaceChart {
 public:
  std::string name() const override { return "plane"; }
  Vec3 position(double xi1, double xi2, double) const override {
    return {xi1, xi2, 0.0};
  }
  Vec3 d1(int i, double, double, double) const override {
    return i == 1 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  }
  Vec3 d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 d3(int, int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt(double, double, double) const override { return Vec3::Zero(); }
  Vec3 dt_d1(int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt_d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }
};

class InclinedPlaneChart final : public SurfaceChart {
 public:
  InclinedPlaneChart(double c0, double c1, double c2)
      : c0_(c0), c1_(c1), c2_(c2) {}
  std::string name() const override { return "inclined_plane"; }
  Vec3 position(double xi1, double xi2, double) const override {
    return {xi1, xi2, c0_ + c1_ * xi1 + c2_ * xi2};
  }
  Vec3 d1(int i, double, double, double) const override {
    return i == 1 ? Vec3{1, 0, c1_} : Vec3{0, 1, c2_};
  }
  Vec3 d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 d3(int, int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt(double, double, double) const override { return Vec3::Zero(); }
  Vec3 dt_d1(int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt_d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }

 private:
  double c0_, c1_, c2_;
};

class TranslatingPlaneChart final : public SurfaceChart {
 public:
  TranslatingPlaneChart(double v, double d1, double d2)
      : v_(v), dir1_(d1), dir2_(d2) {}
  std::string name() const override { return "translating_plane"; }
  Vec3 position(double xi1, double xi2, double t) const override {
    return {xi1 + v_ * t * dir1_, xi2 + v_ * t * dir2_, 0.0};
  }
  Vec3 d1(int i, double, double, double) const override {
    return i == 1 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  }
  Vec3 d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 d3(int, int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt(double, double, double) const override {
    return {v_ * dir1_, v_ * dir2_, 0.0};
  }
  Vec3 dt_d1(int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt_d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }

 private:
  double v_, dir1_, dir2_;
};

class TiltingPlaneChart final : public SurfaceChart {
 public:
  explicit TiltingPlaneChart(double gamma) : gamma_(gamma) {}
  std::string name() const override { return "tilting_plane"; }
  Vec3 position(double xi1, double xi2, double t) const override {
    return {xi1, xi2, gamma_ * t * xi1};
  }
  Vec3 d1(int i, double, double, double t) const override {
    return i == 1 ? Vec3{1, 0, gamma_ * t} : Vec3{0, 1, 0};
  }
  Vec3 d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 d3(int, int, int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt(double xi1, double, double) const override {
    return {0, 0, gamma_ * xi1};
  }
  Vec3 dt_d1(int i, double, double, double) const override {
    return i == 1 ? Vec3{0, 0, gamma_} : Vec3{0, 0, 0};
  }
  Vec3 dt_d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }

 private:
  double gamma_;
};

class CylinderChart final : public SurfaceChart {
 public:
  CylinderChart(double radius, double scale, double offset)
      : r_(radius), s_(scale), o_(offset) {}
  std::string name() const override { return "cylinder"; }

  Vec3 position(double xi1, double xi2, double) const override {
    const double a = s_ * xi2 + o_;
    return {xi1, r_ * std::sin(a), r_ * std::cos(a)};
  }
  Vec3 d1(int i, double, double xi2, double) const override {
    if (i == 1) return {1, 0, 0};
    const double a = s_ * xi2 + o_;
    return {0, r_ * s_ * std::cos(a), -r_ * s_ * std::sin(a)};
  }
  Vec3 d2(int i, int j, double, double xi2, double) const override {
    if (i == 1 || j == 1) return Vec3::Zero();
    const double a = s_ * xi2 + o_;
    return {0, -r_ * s_ * s_ * std::sin(a), -r_ * s_ * s_ * std::cos(a)};
  }
  Vec3 d3(int i, int j, int k, double, double xi2, double) const override {
    if (i == 1 || j == 1 || k == 1) return Vec3::Zero();
    const double a = s_ * xi2 + o_;
    const double s3 = s_ * s_ * s_;
    return {0, -r_ * s3 * std::cos(a), r_ * s3 * std::sin(a)};
  }
  Vec3 dt(double, double, double) const override { return Vec3::Zero(); }
  Vec3 dt_d1(int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt_d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }

 private:
  double r_, s_, o_;
};

class TorusChart final : public SurfaceChart {
 public:
  TorusChart(double R, double r, double su, double sv, double u0, double v0)
      : R_(R), r_(r), su_(su), sv_(sv), u0_(u0), v0_(v0) {}
  std::string name() const override { return "torus"; }

  // Angle derivatives are taken w.r.t. (u, v); chain rule brings in the
  // constant scales su, sv per xi-derivative order.
  Vec3 position(double xi1, double xi2, double) const override {
    const double u = u0_ + su_ * xi1, v = v0_ + sv_ * xi2;
    const double w = R_ + r_ * std::cos(v);
    return {w * std::cos(u), w * std::sin(u), r_ * std::sin(v)};
  }
  Vec3 d1(int i, double xi1, double xi2, double) const override {
    const double u = u0_ + su_ * xi1, v = v0_ + sv_ * xi2;
    const double w = R_ + r_ * std::cos(v);
    if (i == 1)
      return su_ * Vec3{-w * std::sin(u), w * std::cos(u), 0.0};
    return sv_ * Vec3{-r_ * std::sin(v) * std::cos(u),
                      -r_ * std::sin(v) * std::sin(u), r_ * std::cos(v)};
  }
  Vec3 d2(int i, int j, double xi1, double xi2, double) const override {
    const double u = u0_ + su_ * xi1, v = v0_ + sv_ * xi2;
    const double w = R_ + r_ * std::cos(v);
    if (i == 1 && j == 1)
      return su_ * su_ * Vec3{-w * std::cos(u), -w * std::sin(u), 0.0};
    if (i == 2 && j == 2)
      return sv_ * sv_ * Vec3{-r_ * std::cos(v) * std::cos(u),
                              -r_ * std::cos(v) * std::sin(u),
                              -r_ * std::sin(v)};
    return su_ * sv_ * Vec3{r_ * std::sin(v) * std::sin(u),
                            -r_ * std::sin(v) * std::cos(u), 0.0};
  }
  Vec3 d3(int i, int j, int k, double xi1, double xi2, double) const override {
    const double u = u0_ + su_ * xi1, v = v0_ + sv_ * xi2;
    const double w = R_ + r_ * std::cos(v);
    const int nu = (i == 1) + (j == 1) + (k == 1);  // order in u
    switch (nu) {
      case 3:
        return su_ * su_ * su_ *
               Vec3{w * std::sin(u), -w * std::cos(u), 0.0};
      case 2:
        return su_ * su_ * sv_ *
               Vec3{r_ * std::sin(v) * std::cos(u),
                    r_ * std::sin(v) * std::sin(u), 0.0};
      case 1:
        return su_ * sv_ * sv_ *
               Vec3{r_ * std::cos(v) * std::sin(u),
                    -r_ * std::cos(v) * std::cos(u), 0.0};
      default:
        return sv_ * sv_ * sv_ *
               Vec3{r_ * std::sin(v) * std::cos(u),
                    r_ * std::sin(v) * std::sin(u), -r_ * std::cos(v)};
    }
  }
  Vec3 dt(double, double, double) const override { return Vec3::Zero(); }
  Vec3 dt_d1(int, double, double, double) const override {
    return Vec3::Zero();
  }
  Vec3 dt_d2(int, int, double, double, double) const override {
    return Vec3::Zero();
  }

 private:
  double R_, r_, su_, sv_, u0_, v0_;
};

}  // namespace

ChartPtr make_plane() { return std::make_shared<PlaneChart>(); }

ChartPtr make_inclined_plane(double c0, double c1, double c2) {
  return std::make_shared<InclinedPlaneChart>(c0, c1, c2);
}

ChartPtr make_translating_plane(double v, double d1, double d2) {
  return std::make_shared<TranslatingPlaneChart>(v, d1, d2);
}

ChartPtr make_tilting_plane(double gamma) {
  return std::make_shared<TiltingPlaneChart>(gamma);
}

ChartPtr make_cylinder(double radius, double angle_scale,
                       double angle_offset) {
  return std::make_shared<CylinderChart>(radius, angle_scale, angle_offset);
}

ChartPtr make_torus(double major_radius, double minor_radius, double su,
                    double sv, double u0, double v0) {
  return std::make_shared<TorusChart>(major_radius, minor_radius, su, sv, u0,
                                      v0);
}

// ---------------------------------------------------------------------------
// FdChartAdapter: nested central differences of the position evaluator.
// ---------------------------------------------------------------------------

namespace {
using Fn3 = std::function<Vec3(double, double, double)>;

Vec3 central_xi(const Fn3& f, int i, double x1, double x2, double t,
                double h) {
  if (i == 1) return (f(x1 + h, x2, t) - f(x1 - h, x2, t)) / (2.0 * h);
  return (f(x1, x2 + h, t) - f(x1, x2 - h, t)) / (2.0 * h);
}
}  // namespace

Vec3 FdChartAdapter::d1(int i, double xi1, double xi2, double t) const {
  return central_xi(fn_, i, xi1, xi2, t, step_);
}

Vec3 FdChartAdapter::d2(int i, int j, double xi1, double xi2,
                        double t) const {
  Fn3 g = [this, i](double a, double b, double c) {
    return central_xi(fn_, i, a, b, c, step_);
  };
  return central_xi(g, j, xi1, xi2, t, step_);
}

Vec3 FdChartAdapter::d3(int i, int j, int k, double xi1, double xi2,
                        double t) const {
  Fn3 g = [this, i, j](double a, double b, double c) {
    return d2(i, j, a, b, c);
  };
  return central_xi(g, k, xi1, xi2, t, step_);
}

Vec3 FdChartAdapter::dt(double xi1, double xi2, double t) const {
  return (fn_(xi1, xi2, t + step_) - fn_(xi1, xi2, t - step_)) / (2.0 * step_);
}

Vec3 FdChartAdapter::dt_d1(int i, double xi1, double xi2, double t) const {
  Fn3 g = [this](double a, double b, double c) { return dt(a, b, c); };
  return central_xi(g, i, xi1, xi2, t, step_);
}

Vec3 FdChartAdapter::dt_d2(int i, int j, double xi1, double xi2,
                           double t) const {
  Fn3 g = [this, i](double a, double b, double c) { return dt_d1(i, a, b, c); };
  return central_xi(g, j, xi1, xi2, t, step_);
}

}  // namespace filmflow::geometry
