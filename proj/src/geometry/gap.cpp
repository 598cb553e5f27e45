#include "filmflow/geometry/gap.hpp"

#include <algorithm>
#include <cmath>

namespace filmflow::geometry {

namespace {

class ConstantGap final : public GapField {
 public:
  explicit ConstantGap(double a) : a_(a) {}
  std::string name() const override { return "constant"; }
  double h(double, double, double) const override { return a_; }
  double dh_dxi(int, double, double, double) const override { return 0.0; }
  double d2h_dxi_dxj(int, int, double, double, double) const override {
    return 0.0;
  }
  double dh_dt(double, double, double) const override { return 0.0; }
  double d2h_dxi_dt(int, double, double, double) const override {
    return 0.0;
  }
  double h_min() const override { return a_; }

 private:
  double a_;
};

class LinearGap final : public GapField {
 public:
  LinearGap(double a, double b, double c) : a_(a), b_(b), c_(c) {}
  std::string name() const override { return "linear"; }
  double h(double xi1, double xi2, double) const override {
    return a_ + b_ * xi1 + c_ * xi2;
  }
  double dh_dxi(int i, double, double, double) const override {
    return i == 1 ? b_ : c_;
  }
  double d2h_dxi_dxj(int, int, double, double, double) const override {
    return 0.0;
  }
  double dh_dt(double, double, double) const override { return 0.0; }
  double d2h_dxi_dt(int, double, double, double) const override {
    return 0.0;
  }
  double h_min() const override {
    return a_ + std::min(0.0, b_) + std::min(0.0, c_);
  }

 private:
  double a_, b_, c_;
};

class CosineGap final : public GapField {
 public:
  CosineGap(double a, double b, int k1, int k2)
      : a_(a), b_(b), k1_(k1), k2_(k2) {}
  std::string name() const override { return "cosine"; }
  double h(double x1, double x2, double) const override {
    return a_ + b_ * std::cos(M_PI * k1_ * x1) * std::cos(M_PI * k2_ * x2);
  }
  double dh_dxi(int i, double x1, double x2, double) const override {
    if (i == 1)
      return -b_ * M_PI * k1_ * std::sin(M_PI * k1_ * x1) *
             std::cos(M_PI * k2_ * x2);
    return -b_ * M_PI * k2_ * std::cos(M_PI * k1_ * x1) *
           std::sin(M_PI * k2_ * x2);
  }
  double d2h_dxi_dxj(int i, int j, double x1, double x2,
                     double) const override {
    const double c1 = std::cos(M_PI * k1_ * x1), s1 = std::sin(M_PI * k1_ * x1);
    const double c2 = std::cos(M_PI * k2_ * x2), s2 = std::sin(M_PI * k2_ * x2);
    if (i == 1 && j == 1) return -b_ * M_PI * M_PI * k1_ * k1_ * c1 * c2;
    if (i == 2 && j == 2) return -b_ * M_PI * M_PI * k2_ * k2_ * c1 * c2;
    return b_ * M_PI * M_PI * k1_ * k2_ * s1 * s2;
  }
  double dh_dt(double, double, double) const override { return 0.0; }
  double d2h_dxi_dt(int, double, double, double) const override {
    return 0.0;
  }
  double h_min() const override { return a_ - std::abs(b_); }

 private:
  double a_, b_;
  int k1_, k2_;
};

class SqueezeGap final : public GapField {
 public:
  SqueezeGap(double a, double b, double omega) : a_(a), b_(b), w_(omega) {}
  std::string name() const override { return "squeeze"; }
  double h(double, double, double t) const override {
    return a_ * (1.0 + b_ * std::sin(w_ * t));
  }
  double dh_dxi(int, double, double, double) const override { return 0.0; }
  double d2h_dxi_dxj(int, int, double, double, double) const override {
    return 0.0;
  }
  double dh_dt(double, double, double t) const override {
    return a_ * b_ * w_ * std::cos(w_ * t);
  }
  double d2h_dxi_dt(int, double, double, double) const override {
    return 0.0;
  }
  double h_min() const override { return a_ * (1.0 - std::abs(b_)); }

 private:
  double a_, b_, w_;
};

class WavyWedgeGap final : public GapField {
 public:
  WavyWedgeGap(double a, double b, double c, double omega)
      : a_(a), b_(b), c_(c), w_(omega) {}
  std::string name() const override { return "wavy_wedge"; }
  double h(double x1, double, double t) const override {
    return a_ + b_ * x1 * (1.0 + c_ * std::sin(w_ * t));
  }
  double dh_dxi(int i, double, double, double t) const override {
    return i == 1 ? b_ * (1.0 + c_ * std::sin(w_ * t)) : 0.0;
  }
  double d2h_dxi_dxj(int, int, double, double, double) const override {
    return 0.0;
  }
  double dh_dt(double x1, double, double t) const override {
    return b_ * x1 * c_ * w_ * std::cos(w_ * t);
  }
  double d2h_dxi_dt(int i, double, double, double t) const override {
    return i == 1 ? b_ * c_ * w_ * std::cos(w_ * t) : 0.0;
  }
  double h_min() const override {
    return a_ - std::abs(b_) * (1.0 + std::abs(c_));
  }

 private:
  double a_, b_, c_, w_;
};

}  // namespace

GapPtr make_constant_gap(double a) { return std::make_shared<ConstantGap>(a); }

GapPtr make_linear_gap(double a, double b, double c) {
  return std::make_shared<LinearGap>(a, b, c);
}

GapPtr make_cosine_gap(double a, double b, int k1, int k2) {
  return std::make_shared<CosineGap>(a, b, k1, k2);
}

GapPtr make_squeeze_gap(double a, double b, double omega) {
  return std::make_shared<SqueezeGap>(a, b, omega);
}

GapPtr make_wavy_wedge_gap(double a, double b, double c, double omega) {
  return std::make_shared<WavyWedgeGap>(a, b, c, omega);
}

}  // namespace filmflow::geometry
