#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace kdsqnm {

using Complex = std::complex<double>;

/// Truncated complex Taylor series c0 + c1 y + ... + cN y^N.
///
/// All arithmetic closes at the truncation order N: coefficients above N are
/// discarded, never fabricated. Values are immutable in spirit (every
/// operation returns a new series) and safe to share across threads.
class TruncatedSeries {
 public:
  /// Zero series of the given truncation order (order + 1 coefficients).
  explicit TruncatedSeries(int order);

  /// Series from an explicit coefficient list; order is the list size minus one.
  TruncatedSeries(std::initializer_list<Complex> coeffs);

  explicit TruncatedSeries(std::vector<Complex> coeffs);

  /// Constant series c at the given order.
  static TruncatedSeries constant(Complex c, int order);

  /// Truncation order N (inclusive); size() == N + 1.
  int order() const { return static_cast<int>(c_.size()) - 1; }

  Complex operator[](int n) const { return c_[static_cast<size_t>(n)]; }
  Complex& operator[](int n) { return c_[static_cast<size_t>(n)]; }

  const std::vector<Complex>& coeffs() const { return c_; }

 private:
  std::vector<Complex> c_;
};

/// Coefficientwise sum; both operands must have equal order.
TruncatedSeries add(const TruncatedSeries& s, const TruncatedSeries& t);
TruncatedSeries sub(const TruncatedSeries& s, const TruncatedSeries& t);

/// Cauchy product truncated at the common order.
TruncatedSeries mul(const TruncatedSeries& s, const TruncatedSeries& t);

/// Scalar multiple.
TruncatedSeries scale(Complex a, const TruncatedSeries& s);

/// Series r with s * r = 1 up to the truncation order. Requires c0 != 0.
TruncatedSeries reciprocal(const TruncatedSeries& s);

/// Principal-branch square root t with t * t = s up to the truncation order;
/// the constant term of the result has positive real part. The constant term
/// of s must not lie on the closed negative real axis.
TruncatedSeries sqrt(const TruncatedSeries& s);

/// Termwise derivative. The result keeps the vector length, with a zero top
/// coefficient: the informational order drops by one and consumers must track
/// effective accuracy themselves.
TruncatedSeries derivative(const TruncatedSeries& s);

/// Substitute y -> phase * y, i.e. c_n -> c_n * phase^n. Expects |phase| = 1.
TruncatedSeries rotate_variable(const TruncatedSeries& s, Complex phase);

/// Horner evaluation of the truncated polynomial at y.
Complex evaluate(const TruncatedSeries& s, Complex y);

inline TruncatedSeries operator+(const TruncatedSeries& s, const TruncatedSeries& t) { return add(s, t); }
inline TruncatedSeries operator-(const TruncatedSeries& s, const TruncatedSeries& t) { return sub(s, t); }
inline TruncatedSeries operator*(const TruncatedSeries& s, const TruncatedSeries& t) { return mul(s, t); }
inline TruncatedSeries operator*(Complex a, const TruncatedSeries& s) { return scale(a, s); }

}  // namespace kdsqnm
