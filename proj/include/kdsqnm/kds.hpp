#pragma once

#include "kdsqnm/series.hpp"

namespace kdsqnm {

/// Frequency split omega = sigma + i nu used throughout: the anisotropic
/// scaling acts on sigma = Re(omega) and k only, with nu = Im(omega) fixed.
struct FrequencySplit {
  double sigma = 0.0;
  double nu = 0.0;

  Complex omega() const { return Complex{sigma, nu}; }
};

/// Black-hole parameter triple (M0, Lambda, a) in geometric units, with the
/// derived rotation parameter alpha = Lambda a^2 / 3.
///
/// Construction validates admissibility: M0 > 0, Lambda > 0, 9 Lambda M0^2 < 1,
/// the two horizons bracketing r = 3 M0 exist, and the trapped-point solve at
/// (sigma, k) = (1, 0) converges. Inadmissible triples throw std::invalid_argument.
class SpectralParams {
 public:
  SpectralParams(double M0, double Lambda, double a);

  double M0() const { return M0_; }
  double Lambda() const { return Lambda_; }
  double a() const { return a_; }
  double alpha() const { return alpha_; }

 private:
  double M0_;
  double Lambda_;
  double a_;
  double alpha_;
};

/// Horizon radii: Delta_r > 0 exactly on (r_minus, r_plus).
struct HorizonData {
  double r_minus = 0.0;
  double r_plus = 0.0;
};

/// The horizon quartic Delta_r = (r^2 + a^2)(1 - Lambda r^2 / 3) - 2 M0 r.
double delta_r(const SpectralParams& p, double r);

/// d(Delta_r)/dr.
double delta_r_prime(const SpectralParams& p, double r);

/// The two roots of Delta_r bracketing its positivity interval around 3 M0,
/// each refined to ~1e-12 relative accuracy.
HorizonData horizons(const SpectralParams& p);

/// Location r0 in (r_minus, r_plus) of the maximum of the leading radial
/// potential B0(r) = -(1+alpha)^2 ((r^2+a^2) sigma - a k)^2 / Delta_r,
/// found by Newton iteration on dB0/dr started at 3 M0. At a = 0 this is
/// exactly the photon-sphere radius 3 M0 for every sigma > 0.
/// r0 is invariant under (sigma, k) -> (s sigma, s k) for s > 0.
double find_r0(const SpectralParams& p, double sigma, double k);

/// Taylor data (A; B0, B1, B2) of a one-dimensional spectral problem
/// D_y A(y) D_y + B(y), with B split by powers of nu = Im(omega):
/// B = B0 + B1 + B2 where B_j is homogeneous of degree 2 - j under
/// (sigma, k) -> (s sigma, s k).
struct PotentialSeries {
  TruncatedSeries A;
  TruncatedSeries B0;
  TruncatedSeries B1;
  TruncatedSeries B2;
};

/// Radial Taylor data at y = r - r0: A = Delta_r and the split of
/// V_r = -Delta_r^{-1} (1+alpha)^2 ((r^2+a^2) omega - a k)^2.
/// B0 has real coefficients, B0'(0) ~ 0 (r0 is critical) and B0''(0) < 0.
/// Throws std::invalid_argument if r0 lies outside the horizon interval.
PotentialSeries radial_series(const SpectralParams& p, FrequencySplit split, double k,
                              double r0, int order);

/// Angular Taylor data in the rotated variable y', for the operator
/// D_{y'} A(y') D_{y'} + B(y') with A = (1 + i y'^2)(1 - i alpha y'^2) and
/// B = -i (1+alpha)^2 (a omega (1 + i y'^2) - k)^2 / A, split as above.
/// A(0) = 1 and B0(0) = -i (1+alpha)^2 (a sigma - k)^2.
PotentialSeries angular_series(const SpectralParams& p, FrequencySplit split, double k,
                               int order);

}  // namespace kdsqnm
