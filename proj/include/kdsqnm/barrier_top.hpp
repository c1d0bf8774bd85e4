#pragma once

#include <vector>

#include "kdsqnm/series.hpp"

namespace kdsqnm {

/// Dense square matrix acting on Taylor-coefficient vectors a = (a_0 ... a_N).
/// Everything the engine builds is lower triangular; we keep dense storage
/// since N stays small (tens).
class CoeffMatrix {
 public:
  explicit CoeffMatrix(int n) : n_(n), a_(static_cast<size_t>(n) * n, Complex{0.0, 0.0}) {}

  int size() const { return n_; }
  Complex operator()(int i, int j) const { return a_[static_cast<size_t>(i) * n_ + j]; }
  Complex& operator()(int i, int j) { return a_[static_cast<size_t>(i) * n_ + j]; }

  std::vector<Complex> apply(const std::vector<Complex>& x) const;

  /// Largest entry modulus, used as the norm in residual thresholds.
  double max_abs() const;

 private:
  int n_;
  std::vector<Complex> a_;
};

/// One-dimensional spectral problem D_y A(y) D_y + B(y) near a nondegenerate
/// maximum of B0 at y = 0, with B = B0 + B1 + B2 ordered by homogeneity
/// degree 2 - j. The quantization index m selects the resonance branch and
/// J is the highest eigenvalue order computed (lambda_0 ... lambda_J).
///
/// Construction checks: A(0) != 0; B0'(0) below tolerance; Re B0''(0) < 0;
/// and the coefficient budget order >= m + 2 (J + 1) + 4, which keeps the
/// functional window of every transport step inside trustworthy data (each
/// application of the second-order transport operator consumes the two top
/// coefficients).
struct BarrierTopProblem {
  TruncatedSeries A;
  TruncatedSeries B0;
  TruncatedSeries B1;
  TruncatedSeries B2;
  int index_m = 0;
  int order_J = 0;

  BarrierTopProblem(TruncatedSeries A_, TruncatedSeries B0_, TruncatedSeries B1_,
                    TruncatedSeries B2_, int m, int J);

  int coeff_order() const { return A.order(); }

  /// Default coefficient budget for a given index and order.
  static int default_order(int m, int J) { return m + 2 * (J + 1) + 4; }
};

/// U0 with B0(y) = B0(0) - y^2 U0(y), obtained by dropping the first two
/// coefficients of B0 and shifting; the two top slots of the result carry no
/// information and are set to zero.
TruncatedSeries compute_u0(const BarrierTopProblem& p);

/// Coefficient-space matrix of the first transport operator
/// L0 = 2 i g y d/dy + i (y g)' with g = sqrt(U0 A): entries
/// (L0)_{n q} = i (2 q + p + 1) g_p, p = n - q >= 0; diagonal i (2n+1) g_0.
CoeffMatrix build_L0(const BarrierTopProblem& p, const TruncatedSeries& g);
CoeffMatrix build_L0(const BarrierTopProblem& p);

/// Coefficient-space matrix of L1 = d/dy A d/dy:
/// (L1)_{n q} = (n + 1) q A_{n+2-q}, vanishing for q > n + 2.
CoeffMatrix build_L1(const BarrierTopProblem& p);

/// Multiplication-operator matrix of a series: (Mb)_{n q} = b_{n - q}.
CoeffMatrix build_mult(const TruncatedSeries& b);

/// lambda_1 = B1(0) - i (2m + 1) sqrt(U0(0) A(0)); makes row m of
/// L0 - B1 + lambda_1 the unique vanishing diagonal entry.
Complex lambda1(const BarrierTopProblem& p);

/// Row functional f supported on entries 0..m with f_m = 1 that annihilates
/// the columns of the lower-triangular matrix M (which must have M_mm = 0 and
/// nonvanishing earlier diagonal entries). Computed by upward back-substitution.
std::vector<Complex> left_null_functional(const CoeffMatrix& M, int m);

/// Kernel element of M normalized to entry m equal to 1; entries below m
/// vanish, entries above follow by forward substitution.
std::vector<Complex> kernel_vector(const CoeffMatrix& M, int m);

/// Residual bookkeeping of the transport recursion.
struct ExpansionDiagnostics {
  /// Per step j = 1..J: relative residual of M a_j = RHS_j on the trusted
  /// coefficient window 0 .. N - 2 (j + 1).
  std::vector<double> transport_residual;
  /// Per step: modulus of the skipped row-m equation residual (consistency of
  /// the eigenvalue extraction).
  std::vector<double> row_consistency;
  /// Per step: |f(a_j)| gauge values (should vanish for j >= 1).
  std::vector<double> gauge;
  /// |f^T M| / max|M| over all columns.
  double left_null_residual = 0.0;
  /// f(a_0), the normalizer of the eigenvalue extraction (1 by construction).
  Complex f_a0{1.0, 0.0};
  /// The first eigenvalue term beyond order J (used to close the last solve).
  Complex lambda_next{0.0, 0.0};
};

/// Resonance expansion: eigenvalue terms lambda_0 ... lambda_J (lambda_j of
/// homogeneity degree 2 - j) and the Taylor coefficients of the eigenfunction
/// symbol orders a_0 ... a_J.
struct ResonanceExpansion {
  std::vector<Complex> lambdas;
  std::vector<std::vector<Complex>> eigen_coeffs;
  ExpansionDiagnostics diagnostics;
};

/// Run the transport recursion:
///   (L0 - B1 + lambda_1) a_j = -L1 a_{j-1} + sum_{0<l<=j} (B_{l+1} - lambda_{l+1}) a_{j-l},
/// extracting lambda_{j+1} from the solvability condition f(RHS) = 0 and
/// solving the singular triangular system under the gauge f(a_j) = 0.
ResonanceExpansion solve_expansion(const BarrierTopProblem& p);

}  // namespace kdsqnm
