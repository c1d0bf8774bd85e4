#include "kdsqnm/barrier_top.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "kdsqnm/errors.hpp"

namespace kdsqnm {

namespace {

constexpr double kCriticalTol = 1e-8;    // |B0'(0)| relative to the local scale
constexpr double kDegeneracyTol = 1e-10; // off-index diagonal entries vs |g0|

double vec_max_abs(const std::vector<Complex>& v, int upto = -1) {
  double m = 0.0;
  const int n = upto < 0 ? static_cast<int>(v.size()) : std::min<int>(upto + 1, v.size());
  for (int i = 0; i < n; ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

}  // namespace

std::vector<Complex> CoeffMatrix::apply(const std::vector<Complex>& x) const {
  std::vector<Complex> y(static_cast<size_t>(n_), Complex{0.0, 0.0});
  for (int i = 0; i < n_; ++i) {
    Complex acc{0.0, 0.0};
    for (int j = 0; j < n_; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

double CoeffMatrix::max_abs() const {
  double m = 0.0;
  for (const Complex& v : a_) m = std::max(m, std::abs(v));
  return m;
}

BarrierTopProblem::BarrierTopProblem(TruncatedSeries A_, TruncatedSeries B0_, TruncatedSeries B1_,
                                     TruncatedSeries B2_, int m, int J)
    : A(std::move(A_)), B0(std::move(B0_)), B1(std::move(B1_)), B2(std::move(B2_)),
      index_m(m), order_J(J) {
  const int N = A.order();
  if (B0.order() != N || B1.order() != N || B2.order() != N)
    throw std::invalid_argument("BarrierTopProblem: series orders disagree");
  if (m < 0 || J < 0) throw std::invalid_argument("BarrierTopProblem: negative index or order");
  if (N < default_order(m, J))
    throw std::invalid_argument("BarrierTopProblem: coefficient budget too small, need order >= " +
                                std::to_string(default_order(m, J)));
  if (A[0] == Complex{0.0, 0.0})
    throw std::invalid_argument("BarrierTopProblem: A(0) must be nonzero");
  const double scale = std::max(std::abs(B0[0]), std::abs(B0[2]));
  if (std::abs(B0[1]) > kCriticalTol * scale)
    throw DegenerateProblem("BarrierTopProblem: B0'(0) does not vanish, origin not critical");
  // B0''(0) = 2 c2; the barrier condition is Re B0''(0) < 0.
  if (!(B0[2].real() < 0.0))
    throw DegenerateProblem("BarrierTopProblem: B0''(0) does not have negative real part");
}

TruncatedSeries compute_u0(const BarrierTopProblem& p) {
  const int N = p.coeff_order();
  const double scale = std::max(std::abs(p.B0[0]), std::abs(p.B0[2]));
  if (std::abs(p.B0[1]) > kCriticalTol * scale)
    throw DegenerateProblem("compute_u0: B0'(0) above tolerance");
  TruncatedSeries u(N);
  for (int n = 0; n + 2 <= N; ++n) u[n] = -p.B0[n + 2];
  // top two slots carry no information; left at zero
  return u;
}

CoeffMatrix build_L0(const BarrierTopProblem& p, const TruncatedSeries& g) {
  const int N = p.coeff_order();
  CoeffMatrix L(N + 1);
  for (int n = 0; n <= N; ++n)
    for (int q = 0; q <= n; ++q)
      L(n, q) = Complex{0.0, static_cast<double>(2 * q + (n - q) + 1)} * g[n - q];
  return L;
}

CoeffMatrix build_L0(const BarrierTopProblem& p) {
  return build_L0(p, sqrt(mul(compute_u0(p), p.A)));
}

CoeffMatrix build_L1(const BarrierTopProblem& p) {
  const int N = p.coeff_order();
  CoeffMatrix L(N + 1);
  for (int n = 0; n <= N; ++n) {
    const int qlo = std::max(1, n + 2 - N);
    const int qhi = std::min(n + 2, N);
    for (int q = qlo; q <= qhi; ++q)
      L(n, q) = static_cast<double>((n + 1) * q) * p.A[n + 2 - q];
  }
  return L;
}

CoeffMatrix build_mult(const TruncatedSeries& b) {
  const int N = b.order();
  CoeffMatrix M(N + 1);
  for (int n = 0; n <= N; ++n)
    for (int q = 0; q <= n; ++q) M(n, q) = b[n - q];
  return M;
}

Complex lambda1(const BarrierTopProblem& p) {
  const TruncatedSeries g = sqrt(mul(compute_u0(p), p.A));
  const Complex g0 = g[0];
  const Complex l1 = p.B1[0] - Complex{0.0, static_cast<double>(2 * p.index_m + 1)} * g0;
  // Reject degenerate spectra: every other diagonal entry of L0 - B1 + lambda_1
  // must stay away from zero.
  for (int n = 0; n <= p.coeff_order(); ++n) {
    if (n == p.index_m) continue;
    const Complex diag = Complex{0.0, static_cast<double>(2 * n + 1)} * g0 - p.B1[0] + l1;
    if (std::abs(diag) < kDegeneracyTol * std::abs(g0))
      throw DegenerateProblem("lambda1: degenerate quantization index at n = " + std::to_string(n));
  }
  return l1;
}

std::vector<Complex> left_null_functional(const CoeffMatrix& M, int m) {
  std::vector<Complex> f(static_cast<size_t>(m) + 1, Complex{0.0, 0.0});
  f[m] = 1.0;
  for (int j = m - 1; j >= 0; --j) {
    Complex acc{0.0, 0.0};
    for (int i = j + 1; i <= m; ++i) acc += f[i] * M(i, j);
    if (M(j, j) == Complex{0.0, 0.0})
      throw DegenerateProblem("left_null_functional: vanishing diagonal above the index");
    f[j] = -acc / M(j, j);
  }
  return f;
}

std::vector<Complex> kernel_vector(const CoeffMatrix& M, int m) {
  const int n = M.size();
  std::vector<Complex> a(static_cast<size_t>(n), Complex{0.0, 0.0});
  a[m] = 1.0;
  for (int i = m + 1; i < n; ++i) {
    Complex acc{0.0, 0.0};
    for (int q = m; q < i; ++q) acc += M(i, q) * a[q];
    a[i] = -acc / M(i, i);
  }
  return a;
}

ResonanceExpansion solve_expansion(const BarrierTopProblem& p) {
  const int N = p.coeff_order();
  const int m = p.index_m;
  const int J = p.order_J;

  ResonanceExpansion out;
  out.lambdas.reserve(static_cast<size_t>(J) + 1);
  out.lambdas.push_back(p.B0[0]);  // lambda_0 = B0(0), exact

  const TruncatedSeries g = sqrt(mul(compute_u0(p), p.A));
  const Complex l1 = lambda1(p);
  if (J >= 1) out.lambdas.push_back(l1);

  CoeffMatrix M = build_L0(p, g);
  {
    const CoeffMatrix B1m = build_mult(p.B1);
    for (int i = 0; i <= N; ++i) {
      for (int j = 0; j <= i; ++j) M(i, j) -= B1m(i, j);
      M(i, i) += l1;
    }
  }
  const CoeffMatrix L1 = build_L1(p);
  const CoeffMatrix B2m = build_mult(p.B2);

  const std::vector<Complex> f = left_null_functional(M, m);
  std::vector<std::vector<Complex>>& avec = out.eigen_coeffs;
  avec.push_back(kernel_vector(M, m));

  const double Mnorm = M.max_abs();
  {
    double worst = 0.0;
    for (int j = 0; j <= N; ++j) {
      Complex acc{0.0, 0.0};
      for (int i = j; i <= m; ++i) acc += f[i] * M(i, j);
      worst = std::max(worst, std::abs(acc));
    }
    out.diagnostics.left_null_residual = worst / std::max(Mnorm, 1e-300);
  }
  Complex f_a0{0.0, 0.0};
  for (int i = 0; i <= m; ++i) f_a0 += f[i] * avec[0][i];
  out.diagnostics.f_a0 = f_a0;
  if (J == 0) return out;

  // Transport steps j = 1..J: extract lambda_{j+1}, then solve for a_j. The
  // step at j = J only feeds a_J; the reported expansion stops at lambda_J.
  std::vector<Complex> lam = out.lambdas;  // lam[j] valid for j <= current
  for (int j = 1; j <= J; ++j) {
    std::vector<Complex> rhs = L1.apply(avec[j - 1]);
    for (int i = 0; i <= N; ++i) rhs[i] = -rhs[i];
    {
      const std::vector<Complex> b2a = B2m.apply(avec[j - 1]);
      for (int i = 0; i <= N; ++i) rhs[i] += b2a[i];
    }
    for (int l = 1; l < j; ++l)
      for (int i = 0; i <= N; ++i) rhs[i] -= lam[l + 1] * avec[j - l][i];

    Complex f_rhs{0.0, 0.0};
    for (int i = 0; i <= m; ++i) f_rhs += f[i] * rhs[i];
    const Complex lam_next = f_rhs / f_a0;
    lam.push_back(lam_next);
    if (j < J) out.lambdas.push_back(lam_next);
    else out.diagnostics.lambda_next = lam_next;

    for (int i = 0; i <= N; ++i) rhs[i] -= lam_next * avec[0][i];

    // Singular triangular solve: rows above m by forward substitution, row m
    // replaced by the gauge f(a_j) = 0, rows below resumed.
    std::vector<Complex> aj(static_cast<size_t>(N) + 1, Complex{0.0, 0.0});
    for (int i = 0; i < m; ++i) {
      Complex acc{0.0, 0.0};
      for (int q = 0; q < i; ++q) acc += M(i, q) * aj[q];
      aj[i] = (rhs[i] - acc) / M(i, i);
    }
    {
      Complex acc{0.0, 0.0};
      for (int i = 0; i < m; ++i) acc += f[i] * aj[i];
      aj[m] = -acc;  // f_m = 1
    }
    for (int i = m + 1; i <= N; ++i) {
      Complex acc{0.0, 0.0};
      for (int q = 0; q <= i - 1; ++q) acc += M(i, q) * aj[q];
      aj[i] = (rhs[i] - acc) / M(i, i);
    }

    // Row-m consistency: the skipped equation should be satisfied already.
    {
      Complex acc{0.0, 0.0};
      for (int q = 0; q <= m; ++q) acc += M(m, q) * aj[q];
      out.diagnostics.row_consistency.push_back(std::abs(acc - rhs[m]));
    }
    // Residual on the trusted window 0 .. N - 2 (j + 1).
    {
      const int win = N - 2 * (j + 1);
      const std::vector<Complex> r = M.apply(aj);
      double worst = 0.0;
      for (int i = 0; i <= win && i <= N; ++i)
        if (i != m) worst = std::max(worst, std::abs(r[i] - rhs[i]));
      const double rhs_scale = vec_max_abs(rhs, win);
      out.diagnostics.transport_residual.push_back(worst / std::max(rhs_scale, 1e-300));
    }
    {
      Complex acc{0.0, 0.0};
      for (int i = 0; i <= m; ++i) acc += f[i] * aj[i];
      out.diagnostics.gauge.push_back(std::abs(acc));
    }
    avec.push_back(std::move(aj));
  }
  return out;
}

}  // namespace kdsqnm
