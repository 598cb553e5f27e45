#pragma once

#include <memory>
#include <string>

namespace filmflow::geometry {

/// Dimensionless gap h(xi1, xi2, t) between the two surfaces (the physical
/// gap is eps*h). Must satisfy h >= h0 > 0 everywhere.
///
/// Second spatial derivatives are part of the evaluator family: the
/// xi-derivatives of the alpha3/beta3 series coefficients (and through
/// them the K, tau and phi coefficient families) require d2h/dxi dxi.
class GapField {
 public:
  virtual ~GapField() = default;

  virtual std::string name() const = 0;

  virtual double h(double xi1, double xi2, double t) const = 0;
  virtual double dh_dxi(int i, double xi1, double xi2, double t) const = 0;
  virtual double d2h_dxi_dxj(int i, int j, double xi1, double xi2,
                             double t) const = 0;
  virtual double dh_dt(double xi1, double xi2, double t) const = 0;
  virtual double d2h_dxi_dt(int i, double xi1, double xi2,
                            double t) const = 0;

  /// Lower bound used for validity checks; laws must guarantee h >= this.
  virtual double h_min() const = 0;
};

using GapPtr = std::shared_ptr<const GapField>;

/// h = a
GapPtr make_constant_gap(double a);

/// h = a + b xi1 + c xi2
GapPtr make_linear_gap(double a, double b, double c = 0.0);

/// h = a + b cos(pi k1 xi1) cos(pi k2 xi2)
GapPtr make_cosine_gap(double a, double b, int k1, int k2);

/// h = a (1 + b sin(omega t)): uniform squeeze, |b| < 1
GapPtr make_squeeze_gap(double a, double b, double omega);

/// h = a + b xi1 (1 + c sin(omega t)): time-dependent wedge; exercises
/// the mixed d2h/dxi dt terms.
GapPtr make_wavy_wedge_gap(double a, double b, double c, double omega);

}  // namespace filmflow::geometry
