#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kdsqnm/barrier_top.hpp"
#include "kdsqnm/errors.hpp"
#include "kdsqnm/kds.hpp"

using namespace kdsqnm;

namespace {

const Complex I{0.0, 1.0};

// Exact harmonic barrier: A = 1, B0 = lambda0 - y^2, B1 = B2 = 0.
BarrierTopProblem harmonic_problem(Complex lambda0, int m, int J) {
  const int N = BarrierTopProblem::default_order(m, J);
  TruncatedSeries A = TruncatedSeries::constant(1.0, N);
  TruncatedSeries B0(N);
  B0[0] = lambda0;
  B0[2] = -1.0;
  return {A, B0, TruncatedSeries(N), TruncatedSeries(N), m, J};
}

BarrierTopProblem angular_problem(double a, double k, int m, int J, double sigma = 0.5,
                                  double nu = -0.1) {
  const SpectralParams p(1.0, 0.03, a);
  const int N = BarrierTopProblem::default_order(m, J);
  PotentialSeries s = angular_series(p, {sigma, nu}, k, N);
  return {s.A, s.B0, s.B1, s.B2, m, J};
}

std::vector<Complex> series_to_vec(const TruncatedSeries& s) {
  return s.coeffs();
}

double vec_dist(const std::vector<Complex>& x, const std::vector<Complex>& y, int upto) {
  double d = 0.0;
  for (int i = 0; i <= upto; ++i) d = std::max(d, std::abs(x[i] - y[i]));
  return d;
}

}  // namespace

TEST_CASE("problem construction enforces the barrier shape") {
  const int N = BarrierTopProblem::default_order(0, 2);
  TruncatedSeries A = TruncatedSeries::constant(1.0, N);
  TruncatedSeries good(N);
  good[0] = 1.0;
  good[2] = -1.0;
  CHECK_NOTHROW(BarrierTopProblem(A, good, TruncatedSeries(N), TruncatedSeries(N), 0, 2));

  TruncatedSeries tilted = good;
  tilted[1] = 0.5;  // B0'(0) != 0
  CHECK_THROWS_AS(BarrierTopProblem(A, tilted, TruncatedSeries(N), TruncatedSeries(N), 0, 2),
                  DegenerateProblem);

  TruncatedSeries well = good;
  well[2] = 1.0;  // wrong curvature sign
  CHECK_THROWS_AS(BarrierTopProblem(A, well, TruncatedSeries(N), TruncatedSeries(N), 0, 2),
                  DegenerateProblem);

  CHECK_THROWS_AS(BarrierTopProblem(TruncatedSeries(N), good, TruncatedSeries(N),
                                    TruncatedSeries(N), 0, 2),
                  std::invalid_argument);  // A(0) = 0

  const int small = BarrierTopProblem::default_order(0, 2) - 1;
  TruncatedSeries As = TruncatedSeries::constant(1.0, small);
  TruncatedSeries B0s(small);
  B0s[0] = 1.0;
  B0s[2] = -1.0;
  CHECK_THROWS_AS(BarrierTopProblem(As, B0s, TruncatedSeries(small), TruncatedSeries(small), 0, 2),
                  std::invalid_argument);  // budget too small
}

TEST_CASE("centrifugal-free angular data is rejected") {
  // k = 0 with rotation: B0''(0) is real positive after the complex rotation,
  // so the engine refuses the problem (handled upstream by the exact
  // spherical value).
  const SpectralParams p(1.0, 0.03, 0.1);
  PotentialSeries s = angular_series(p, {0.5, -0.1}, 0.0, 14);
  CHECK_THROWS_AS(BarrierTopProblem(s.A, s.B0, s.B1, s.B2, 0, 2), DegenerateProblem);
}

TEST_CASE("u0 extraction") {
  SUBCASE("angular data at a=0, k=2") {
    const BarrierTopProblem p = angular_problem(0.0, 2.0, 0, 3);
    const TruncatedSeries u = compute_u0(p);
    CHECK(std::abs(u[0] - Complex{4.0, 0.0}) <= 1e-14);
    CHECK(std::abs(u[2] - (-4.0 * I)) <= 1e-14);
    // U0(0) = -B0''(0)/2 by second differences of the series evaluation
    const double h = 1e-4;
    const Complex second =
        (evaluate(p.B0, h) - 2.0 * evaluate(p.B0, 0.0) + evaluate(p.B0, -h)) / (h * h);
    CHECK(std::abs(u[0] - (-0.5 * second)) <= 1e-6);
  }
  SUBCASE("exact harmonic barrier gives U0 = 1") {
    const BarrierTopProblem p = harmonic_problem(Complex{2.0, -1.0}, 1, 2);
    const TruncatedSeries u = compute_u0(p);
    CHECK(u[0] == Complex{1.0, 0.0});
    for (int n = 1; n <= u.order(); ++n) CHECK(u[n] == Complex{0.0, 0.0});
  }
}

TEST_CASE("first transport operator in coefficient space") {
  const BarrierTopProblem p = harmonic_problem(1.0, 0, 3);
  SUBCASE("unit g gives the oscillator diagonal") {
    const CoeffMatrix L = build_L0(p);  // g = sqrt(U0 A) = 1
    for (int n = 0; n < L.size(); ++n) {
      CHECK(std::abs(L(n, n) - I * static_cast<double>(2 * n + 1)) <= 1e-14);
      for (int q = n + 1; q < L.size(); ++q) CHECK(L(n, q) == Complex{0.0, 0.0});
    }
  }
  SUBCASE("diagonal law and action oracle for generic g") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const int N = p.coeff_order();
    TruncatedSeries g(N);
    for (int n = 0; n <= N; ++n) g[n] = Complex{u(rng), u(rng)};
    g[0] += Complex{2.0, 0.0};
    const CoeffMatrix L = build_L0(p, g);
    for (int n = 0; n <= N; ++n)
      CHECK(std::abs(L(n, n) - I * static_cast<double>(2 * n + 1) * g[0]) <= 1e-14 * std::abs(g[0]));

    // against the series computation 2 i g (y a') + i (y g)' a
    TruncatedSeries a(N);
    for (int n = 0; n <= N; ++n) a[n] = Complex{u(rng), u(rng)};
    TruncatedSeries y(N);
    y[1] = 1.0;
    const TruncatedSeries direct =
        add(scale(2.0 * I, mul(g, mul(y, derivative(a)))),
            scale(I, mul(derivative(mul(y, g)), a)));
    const std::vector<Complex> matvec = L.apply(series_to_vec(a));
    CHECK(vec_dist(matvec, series_to_vec(direct), N - 1) <= 1e-12);
  }
}

TEST_CASE("second transport operator in coefficient space") {
  std::mt19937 rng(1234);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int N = BarrierTopProblem::default_order(0, 2);
  SUBCASE("A = 1 is the plain second derivative") {
    const BarrierTopProblem p = harmonic_problem(1.0, 0, 2);
    const CoeffMatrix L = build_L1(p);
    std::vector<Complex> a(static_cast<size_t>(N) + 1);
    for (auto& v : a) v = Complex{u(rng), u(rng)};
    const std::vector<Complex> out = L.apply(a);
    for (int n = 0; n + 2 <= N; ++n)
      CHECK(std::abs(out[n] - static_cast<double>((n + 1) * (n + 2)) * a[n + 2]) <= 1e-13);
  }
  SUBCASE("band structure and action oracle for generic A") {
    TruncatedSeries A(N);
    for (int n = 0; n <= N; ++n) A[n] = Complex{u(rng), u(rng)};
    A[0] = Complex{1.5, 0.0};
    TruncatedSeries B0(N);
    B0[0] = 1.0;
    B0[2] = -1.0;
    const BarrierTopProblem p{A, B0, TruncatedSeries(N), TruncatedSeries(N), 0, 2};
    const CoeffMatrix L = build_L1(p);
    CHECK(L(0, 3) == Complex{0.0, 0.0});
    for (int n = 0; n <= N; ++n)
      for (int q = n + 3; q <= N; ++q) CHECK(L(n, q) == Complex{0.0, 0.0});

    TruncatedSeries a(N);
    a[3] = 1.0;  // y^3
    const TruncatedSeries direct = derivative(mul(A, derivative(a)));
    CHECK(vec_dist(L.apply(series_to_vec(a)), series_to_vec(direct), N - 2) <= 1e-13);
  }
}

TEST_CASE("first eigenvalue correction") {
  SUBCASE("harmonic problem: lambda1 = -i (2m+1)") {
    CHECK(std::abs(lambda1(harmonic_problem(1.0, 0, 2)) - (-I)) <= 1e-14);
    CHECK(std::abs(lambda1(harmonic_problem(1.0, 2, 2)) - (-5.0 * I)) <= 1e-14);
  }
  SUBCASE("angular data at a=0, k=2, index 1") {
    const BarrierTopProblem p = angular_problem(0.0, 2.0, 1, 3);
    CHECK(std::abs(lambda1(p) - (-6.0 * I)) <= 1e-13);  // maps to +6 = (2l'+1) k
  }
}

TEST_CASE("left null functional") {
  SUBCASE("index zero is trivial") {
    CoeffMatrix M(4);
    M(0, 0) = 0.0;
    M(1, 1) = 1.0;
    M(2, 2) = 2.0;
    M(3, 3) = 3.0;
    const auto f = left_null_functional(M, 0);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == Complex{1.0, 0.0});
  }
  SUBCASE("diagonal matrix gives a unit vector") {
    CoeffMatrix M(5);
    for (int i = 0; i < 5; ++i) M(i, i) = (i == 2) ? 0.0 : Complex{1.0 + i, -0.5};
    const auto f = left_null_functional(M, 2);
    CHECK(f[2] == Complex{1.0, 0.0});
    CHECK(std::abs(f[0]) == 0.0);
    CHECK(std::abs(f[1]) == 0.0);
  }
  SUBCASE("random lower-triangular matrices are annihilated") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 6, m = 3;
      CoeffMatrix M(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) M(i, j) = Complex{u(rng), u(rng)};
      for (int i = 0; i < n; ++i)
        if (i != m && std::abs(M(i, i)) < 0.3) M(i, i) += Complex{1.0, 1.0};
      M(m, m) = 0.0;
      const auto f = left_null_functional(M, m);
      double worst = 0.0;
      for (int j = 0; j < n; ++j) {
        Complex acc{0.0, 0.0};
        for (int i = j; i <= m; ++i) acc += f[i] * M(i, j);
        worst = std::max(worst, std::abs(acc));
      }
      CHECK(worst <= 1e-12 * M.max_abs());
    }
  }
  SUBCASE("vanishing diagonal above the index is rejected") {
    CoeffMatrix M(4);
    M(1, 1) = 0.0;
    M(3, 3) = 0.0;
    M(2, 1) = 1.0;
    CHECK_THROWS_AS(left_null_functional(M, 3), DegenerateProblem);
  }
}

TEST_CASE("kernel vector") {
  SUBCASE("diagonal matrix") {
    CoeffMatrix M(5);
    for (int i = 0; i < 5; ++i) M(i, i) = (i == 1) ? 0.0 : Complex{2.0 + i, 0.0};
    const auto a = kernel_vector(M, 1);
    for (int i = 0; i < 5; ++i) CHECK(a[i] == ((i == 1) ? Complex{1.0, 0.0} : Complex{0.0, 0.0}));
  }
  SUBCASE("defining residual on random matrices") {
    std::mt19937 rng(515151);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 7, m = 2;
      CoeffMatrix M(n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) M(i, j) = Complex{u(rng), u(rng)};
      for (int i = 0; i < n; ++i)
        if (i != m && std::abs(M(i, i)) < 0.3) M(i, i) += Complex{1.0, -1.0};
      M(m, m) = 0.0;
      const auto a = kernel_vector(M, m);
      const auto r = M.apply(a);
      double worst = 0.0;
      for (const Complex& v : r) worst = std::max(worst, std::abs(v));
      CHECK(worst <= 1e-12 * M.max_abs());
    }
  }
}

TEST_CASE("exact harmonic barrier terminates at order one") {
  for (int m : {0, 1, 3}) {
    const BarrierTopProblem p = harmonic_problem(Complex{2.5, -0.3}, m, 5);
    const ResonanceExpansion e = solve_expansion(p);
    REQUIRE(e.lambdas.size() == 6);
    CHECK(e.lambdas[0] == Complex{2.5, -0.3});
    CHECK(std::abs(e.lambdas[1] - (-I * static_cast<double>(2 * m + 1))) <= 1e-14);
    for (size_t j = 2; j < e.lambdas.size(); ++j) CHECK(std::abs(e.lambdas[j]) <= 1e-12);
  }
}

TEST_CASE("spherical eigenvalues come out of the rotated angular problem") {
  // at a=0, k=2, index l'=1: mapped terms i lambda' are 4, 6, 2, then zero
  const BarrierTopProblem p = angular_problem(0.0, 2.0, 1, 6);
  const ResonanceExpansion e = solve_expansion(p);
  CHECK(std::abs(I * e.lambdas[0] - Complex{4.0, 0.0}) <= 1e-12);
  CHECK(std::abs(I * e.lambdas[1] - Complex{6.0, 0.0}) <= 1e-12);
  CHECK(std::abs(I * e.lambdas[2] - Complex{2.0, 0.0}) <= 1e-10);
  for (size_t j = 3; j < e.lambdas.size(); ++j) CHECK(std::abs(e.lambdas[j]) <= 1e-10);
  // ground symbol: transport residuals vanish
  for (double r : e.diagnostics.transport_residual) CHECK(r <= 1e-12);
}

TEST_CASE("expansion bookkeeping invariants") {
  const SpectralParams p(1.0, 0.03, 0.09);
  const double sigma = 1.1, nu = -0.2, k = 3.0;
  const int m = 2, J = 4;
  const int N = BarrierTopProblem::default_order(m, J);
  const double r0 = find_r0(p, sigma, k);
  PotentialSeries s = radial_series(p, {sigma, nu}, k, r0, N);
  const BarrierTopProblem prob{s.A, s.B0, s.B1, s.B2, m, J};
  const ResonanceExpansion e = solve_expansion(prob);

  // lambda_0 = B0(0) bit for bit
  CHECK(e.lambdas[0] == s.B0[0]);

  // a_0 structure: zeros below the index, unit entry at it
  REQUIRE(e.eigen_coeffs.size() == static_cast<size_t>(J) + 1);
  for (int i = 0; i < m; ++i) CHECK(std::abs(e.eigen_coeffs[0][i]) == 0.0);
  CHECK(e.eigen_coeffs[0][m] == Complex{1.0, 0.0});
  CHECK(std::abs(e.diagnostics.f_a0 - Complex{1.0, 0.0}) <= 1e-14);

  // gauge and residual thresholds
  for (double gv : e.diagnostics.gauge) CHECK(gv <= 1e-12);
  for (double r : e.diagnostics.transport_residual) CHECK(r <= 1e-10);
  CHECK(e.diagnostics.left_null_residual <= 1e-12);

  // diagonal law of M = L0 - B1 + lambda1: entries 2 i (n - m) g0, unique zero at m
  const TruncatedSeries g = sqrt(mul(compute_u0(prob), prob.A));
  const CoeffMatrix L0 = build_L0(prob, g);
  const Complex l1 = lambda1(prob);
  int vanishing = 0;
  for (int n = 0; n <= N; ++n) {
    const Complex diag = L0(n, n) - s.B1[0] + l1;
    const Complex expected = 2.0 * I * static_cast<double>(n - m) * g[0];
    CHECK(std::abs(diag - expected) <= 1e-12 * std::abs(g[0]) * (2 * N + 1));
    if (std::abs(diag) <= 1e-10 * std::abs(g[0])) ++vanishing;
  }
  CHECK(vanishing == 1);

  // budget stability: same expansion with eight more coefficients
  PotentialSeries s2 = radial_series(p, {sigma, nu}, k, r0, N + 8);
  const ResonanceExpansion e2 =
      solve_expansion({s2.A, s2.B0, s2.B1, s2.B2, m, J});
  for (int j = 0; j <= J; ++j)
    CHECK(std::abs(e.lambdas[j] - e2.lambdas[j]) <= 1e-10 * std::abs(e2.lambdas[j]));

  // degree scaling under exact doubling of (sigma, k)
  const double r0s = find_r0(p, 2.0 * sigma, 2.0 * k);
  PotentialSeries ss = radial_series(p, {2.0 * sigma, nu}, 2.0 * k, r0s, N);
  const ResonanceExpansion es = solve_expansion({ss.A, ss.B0, ss.B1, ss.B2, m, J});
  for (int j = 0; j <= J; ++j) {
    const double sj = std::pow(2.0, 2 - j);
    CHECK(std::abs(es.lambdas[j] - sj * e.lambdas[j]) <= 1e-12 * std::abs(es.lambdas[j]));
  }
}
