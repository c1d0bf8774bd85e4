#include "kdsqnm/kds.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kdsqnm/errors.hpp"

namespace kdsqnm {

namespace {

// Delta_r as a polynomial in r: a^2 - 2 M0 r + (1 - Lambda a^2/3) r^2 - (Lambda/3) r^4.
std::array<double, 5> delta_r_poly(double M0, double Lambda, double a) {
  return {a * a, -2.0 * M0, 1.0 - Lambda * a * a / 3.0, 0.0, -Lambda / 3.0};
}

double poly_eval(const std::array<double, 5>& c, double r) {
  double acc = c[4];
  for (int i = 3; i >= 0; --i) acc = acc * r + c[i];
  return acc;
}

std::array<double, 5> poly_derivative(const std::array<double, 5>& c) {
  return {c[1], 2.0 * c[2], 3.0 * c[3], 4.0 * c[4], 0.0};
}

// Taylor shift: coefficients of p(r0 + y) in y, padded with zeros up to `order`.
// Binomial expansion of the quartic; exact up to rounding.
TruncatedSeries poly_shift(const std::array<double, 5>& c, double r0, int order) {
  const double r2 = r0 * r0, r3 = r2 * r0, r4 = r2 * r2;
  std::array<double, 5> out;
  out[0] = c[0] + c[1] * r0 + c[2] * r2 + c[3] * r3 + c[4] * r4;
  out[1] = c[1] + 2.0 * c[2] * r0 + 3.0 * c[3] * r2 + 4.0 * c[4] * r3;
  out[2] = c[2] + 3.0 * c[3] * r0 + 6.0 * c[4] * r2;
  out[3] = c[3] + 4.0 * c[4] * r0;
  out[4] = c[4];
  TruncatedSeries s(order);
  for (int n = 0; n <= order && n < 5; ++n) s[n] = out[n];
  return s;
}

double root_bisect(const SpectralParams& p, double lo, double hi) {
  double flo = delta_r(p, lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = delta_r(p, mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-13 * (std::abs(lo) + std::abs(hi))) break;
  }
  // Newton polish
  double r = 0.5 * (lo + hi);
  for (int it = 0; it < 8; ++it) {
    const double d = delta_r_prime(p, r);
    if (d == 0.0) break;
    r -= delta_r(p, r) / d;
  }
  return r;
}

}  // namespace

double delta_r(const SpectralParams& p, double r) {
  return (r * r + p.a() * p.a()) * (1.0 - p.Lambda() * r * r / 3.0) - 2.0 * p.M0() * r;
}

double delta_r_prime(const SpectralParams& p, double r) {
  return 2.0 * r - 4.0 * p.Lambda() * r * r * r / 3.0 - 2.0 * p.Lambda() * p.a() * p.a() * r / 3.0 -
         2.0 * p.M0();
}

HorizonData horizons(const SpectralParams& p) {
  const double rc = 3.0 * p.M0();
  if (delta_r(p, rc) <= 0.0)
    throw std::invalid_argument("horizons: Delta_r not positive at r = 3 M0, no trapping region");
  // Delta_r(sqrt(3/Lambda)) = -2 M0 sqrt(3/Lambda) < 0 bounds the outer root.
  const double router = std::sqrt(3.0 / p.Lambda());
  // Scan down from 3 M0 for a sign change bounding the inner root.
  double rlow = rc;
  bool found = false;
  for (int i = 0; i < 60; ++i) {
    rlow *= 0.5;
    if (delta_r(p, rlow) < 0.0) {
      found = true;
      break;
    }
  }
  if (!found) throw std::invalid_argument("horizons: no inner root of Delta_r below 3 M0");
  HorizonData h;
  h.r_minus = root_bisect(p, rlow, rc);
  h.r_plus = root_bisect(p, rc, router);
  if (!(h.r_minus < h.r_plus) || delta_r(p, 0.5 * (h.r_minus + h.r_plus)) <= 0.0)
    throw std::invalid_argument("horizons: positivity interval not found");
  return h;
}

double find_r0(const SpectralParams& p, double sigma, double k) {
  if (!(sigma > 0.0)) throw std::invalid_argument("find_r0: sigma must be positive");
  const double a = p.a();
  const auto dr = delta_r_poly(p.M0(), p.Lambda(), a);
  const auto dr1 = poly_derivative(dr);
  const auto dr2 = poly_derivative(dr1);
  // Critical points of B0 = -(1+alpha)^2 W^2 / Delta_r solve
  //   H(r) = 2 W W' Delta_r - W^2 Delta_r' = 0, with W = sigma (r^2+a^2) - a k.
  const auto W = [&](double r) { return sigma * (r * r + a * a) - a * k; };
  const auto Wp = [&](double r) { return 2.0 * sigma * r; };
  double r = 3.0 * p.M0();
  bool converged = false;
  for (int it = 0; it < 80; ++it) {
    const double w = W(r), wp = Wp(r);
    const double d = poly_eval(dr, r), d1 = poly_eval(dr1, r), d2 = poly_eval(dr2, r);
    const double H = 2.0 * w * wp * d - w * w * d1;
    const double Hp = 2.0 * (wp * wp + 2.0 * sigma * w) * d - w * w * d2;
    if (Hp == 0.0) break;
    const double step = H / Hp;
    r -= step;
    if (std::abs(step) <= 1e-12 * std::abs(r)) {
      converged = true;
      break;
    }
  }
  if (!converged || !std::isfinite(r))
    throw NonConvergence("find_r0: Newton iteration for the trapped point did not converge");
  // Second derivative of B0 at a critical point has the sign of -H'(r0).
  {
    const double w = W(r), wp = Wp(r);
    const double d = poly_eval(dr, r), d2 = poly_eval(dr2, r);
    const double Hp = 2.0 * (wp * wp + 2.0 * sigma * w) * d - w * w * d2;
    if (!(Hp > 0.0))
      throw DegenerateProblem("find_r0: critical point is not a maximum of the radial potential");
    const double scale = sigma * (r * r + a * a) + std::abs(a * k);
    if (std::abs(w) <= 1e-12 * scale)
      throw DegenerateProblem("find_r0: (r^2+a^2) sigma - a k vanishes at the trapped point");
  }
  return r;
}

SpectralParams::SpectralParams(double M0, double Lambda, double a)
    : M0_(M0), Lambda_(Lambda), a_(a), alpha_(Lambda * a * a / 3.0) {
  if (!(M0 > 0.0)) throw std::invalid_argument("SpectralParams: M0 must be positive");
  if (!(Lambda > 0.0)) throw std::invalid_argument("SpectralParams: Lambda must be positive");
  if (!(9.0 * Lambda * M0 * M0 < 1.0))
    throw std::invalid_argument("SpectralParams: need 9 Lambda M0^2 < 1");
  // Operational admissibility gate for the rotation parameter.
  try {
    (void)horizons(*this);
    (void)find_r0(*this, 1.0, 0.0);
  } catch (const NumericError& e) {
    throw std::invalid_argument(std::string("SpectralParams: inadmissible rotation parameter: ") +
                                e.what());
  }
}

PotentialSeries radial_series(const SpectralParams& p, FrequencySplit split, double k, double r0,
                              int order) {
  const HorizonData h = horizons(p);
  if (!(r0 > h.r_minus && r0 < h.r_plus))
    throw std::invalid_argument("radial_series: r0 outside the horizon interval");
  const double a = p.a();
  const double c = (1.0 + p.alpha()) * (1.0 + p.alpha());
  const TruncatedSeries A = poly_shift(delta_r_poly(p.M0(), p.Lambda(), a), r0, order);
  const TruncatedSeries D = reciprocal(A);
  // W = sigma (r^2 + a^2) - a k and Q = r^2 + a^2, shifted to y = r - r0.
  const TruncatedSeries W =
      poly_shift({split.sigma * a * a - a * k, 0.0, split.sigma, 0.0, 0.0}, r0, order);
  const TruncatedSeries Q = poly_shift({a * a, 0.0, 1.0, 0.0, 0.0}, r0, order);
  // ((r^2+a^2) omega - a k)^2 = W^2 + 2 i nu W Q - nu^2 Q^2, termwise in nu.
  PotentialSeries out{A, TruncatedSeries(order), TruncatedSeries(order), TruncatedSeries(order)};
  out.B0 = Complex{-c, 0.0} * mul(mul(W, W), D);
  out.B1 = Complex{0.0, -2.0 * c * split.nu} * mul(mul(W, Q), D);
  out.B2 = Complex{c * split.nu * split.nu, 0.0} * mul(mul(Q, Q), D);
  return out;
}

PotentialSeries angular_series(const SpectralParams& p, FrequencySplit split, double k, int order) {
  const double a = p.a();
  const double alpha = p.alpha();
  const double c = (1.0 + alpha) * (1.0 + alpha);
  TruncatedSeries E(order);  // 1 + i y'^2
  E[0] = 1.0;
  if (order >= 2) E[2] = Complex{0.0, 1.0};
  TruncatedSeries F(order);  // 1 - i alpha y'^2
  F[0] = 1.0;
  if (order >= 2) F[2] = Complex{0.0, -alpha};
  const TruncatedSeries A = mul(E, F);
  const TruncatedSeries R = reciprocal(A);
  // a omega (1 + i y'^2) - k = G + i nu a E with G = a sigma E - k.
  TruncatedSeries G = Complex{a * split.sigma, 0.0} * E;
  G[0] -= k;
  PotentialSeries out{A, TruncatedSeries(order), TruncatedSeries(order), TruncatedSeries(order)};
  out.B0 = Complex{0.0, -c} * mul(mul(G, G), R);
  out.B1 = Complex{2.0 * split.nu * a * c, 0.0} * mul(mul(G, E), R);
  out.B2 = Complex{0.0, c * split.nu * split.nu * a * a} * mul(mul(E, E), R);
  return out;
}

}  // namespace kdsqnm
