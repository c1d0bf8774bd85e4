#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kdsqnm/errors.hpp"
#include "kdsqnm/series.hpp"

using namespace kdsqnm;

namespace {

const Complex I{0.0, 1.0};

TruncatedSeries random_series(std::mt19937& rng, int order, double floor0 = 0.0) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  TruncatedSeries s(order);
  for (int n = 0; n <= order; ++n) s[n] = Complex{u(rng), u(rng)};
  if (floor0 > 0.0 && std::abs(s[0]) < floor0) s[0] += Complex{floor0, floor0};
  return s;
}

double dist(const TruncatedSeries& s, const TruncatedSeries& t) {
  double d = 0.0;
  for (int n = 0; n <= s.order(); ++n) d = std::max(d, std::abs(s[n] - t[n]));
  return d;
}

}  // namespace

TEST_CASE("addition is coefficientwise and requires equal orders") {
  const TruncatedSeries s{1.0, 2.0};
  const TruncatedSeries t{3.0, 4.0};
  const TruncatedSeries r = add(s, t);
  CHECK(r[0] == Complex{4.0, 0.0});
  CHECK(r[1] == Complex{6.0, 0.0});

  CHECK(dist(add(s, TruncatedSeries(1)), s) == 0.0);  // s + 0 = s

  const TruncatedSeries u{I, 0.0};
  const TruncatedSeries v{0.0, I};
  const TruncatedSeries w = add(u, v);
  CHECK(w[0] == I);
  CHECK(w[1] == I);

  CHECK_THROWS_AS(add(s, TruncatedSeries(3)), std::invalid_argument);
}

TEST_CASE("multiplication truncates the Cauchy product") {
  const TruncatedSeries s{1.0, 1.0};
  const TruncatedSeries sq = mul(s, s);  // (1+y)^2 at N=1
  CHECK(sq[0] == Complex{1.0, 0.0});
  CHECK(sq[1] == Complex{2.0, 0.0});

  const TruncatedSeries one = TruncatedSeries::constant(1.0, 1);
  CHECK(dist(mul(s, one), s) == 0.0);

  const TruncatedSeries y{0.0, 1.0, 0.0};
  const TruncatedSeries y2 = mul(y, y);
  CHECK(y2[0] == Complex{0.0, 0.0});
  CHECK(y2[1] == Complex{0.0, 0.0});
  CHECK(y2[2] == Complex{1.0, 0.0});
}

TEST_CASE("reciprocal inverts at the truncation order") {
  const TruncatedSeries s{1.0, 1.0, 0.0};
  const TruncatedSeries r = reciprocal(s);  // geometric series
  CHECK(r[0] == Complex{1.0, 0.0});
  CHECK(r[1] == Complex{-1.0, 0.0});
  CHECK(r[2] == Complex{1.0, 0.0});

  const TruncatedSeries c = reciprocal(TruncatedSeries{2.0, 0.0});
  CHECK(c[0] == Complex{0.5, 0.0});
  CHECK(c[1] == Complex{0.0, 0.0});

  const TruncatedSeries ci = reciprocal(TruncatedSeries{1.0, I});
  CHECK(ci[0] == Complex{1.0, 0.0});
  CHECK(ci[1] == -I);

  CHECK_THROWS_AS(reciprocal(TruncatedSeries{0.0, 1.0}), std::domain_error);
}

TEST_CASE("sqrt takes the principal branch") {
  TruncatedSeries four(3);
  four[0] = 4.0;
  const TruncatedSeries two = sqrt(four);
  CHECK(two[0] == Complex{2.0, 0.0});
  CHECK(two[1] == Complex{0.0, 0.0});

  const TruncatedSeries s = sqrt(TruncatedSeries{1.0, 2.0});
  CHECK(s[0] == Complex{1.0, 0.0});
  CHECK(s[1] == Complex{1.0, 0.0});

  const TruncatedSeries si = sqrt(TruncatedSeries{I, 0.0});
  CHECK(std::abs(si[0] - std::polar(1.0, M_PI / 4)) < 1e-15);
  CHECK(si[0].real() > 0.0);

  CHECK_THROWS_AS(sqrt(TruncatedSeries{-1.0, 0.0}), BranchCutError);
  CHECK_THROWS_AS(sqrt(TruncatedSeries{0.0, 1.0}), BranchCutError);
}

TEST_CASE("derivative shifts down and zeroes the top slot") {
  const TruncatedSeries s{5.0, 3.0, 2.0};
  const TruncatedSeries d = derivative(s);
  CHECK(d[0] == Complex{3.0, 0.0});
  CHECK(d[1] == Complex{4.0, 0.0});
  CHECK(d[2] == Complex{0.0, 0.0});

  CHECK(dist(derivative(TruncatedSeries::constant(7.0, 2)), TruncatedSeries(2)) == 0.0);

  const TruncatedSeries y2{0.0, 0.0, 1.0};
  const TruncatedSeries dy2 = derivative(y2);
  CHECK(dy2[1] == Complex{2.0, 0.0});
  CHECK(dy2[2] == Complex{0.0, 0.0});
}

TEST_CASE("variable rotation multiplies by powers of the phase") {
  std::mt19937 rng(7);
  const TruncatedSeries s = random_series(rng, 5);
  CHECK(dist(rotate_variable(s, 1.0), s) == 0.0);

  const Complex phase = std::polar(1.0, -M_PI / 4);
  const TruncatedSeries r = rotate_variable(TruncatedSeries{1.0, 0.0, 1.0}, phase);
  CHECK(std::abs(r[2] - (-I)) < 1e-15);  // e^{-i pi/2} = -i

  const TruncatedSeries t = rotate_variable(TruncatedSeries{0.0, 1.0}, I);
  CHECK(t[1] == I);
}

TEST_CASE("evaluation is plain Horner") {
  CHECK(evaluate(TruncatedSeries{1.0, 2.0, 3.0}, 1.0) == Complex{6.0, 0.0});
  CHECK(evaluate(TruncatedSeries{4.0, 5.0}, 0.0) == Complex{4.0, 0.0});
  CHECK(evaluate(TruncatedSeries{0.0, 1.0}, I) == I);
}

TEST_CASE("algebraic properties on random series") {
  std::mt19937 rng(20260810);
  for (int trial = 0; trial < 25; ++trial) {
    const int N = 1 + static_cast<int>(rng() % 12);
    const TruncatedSeries s = random_series(rng, N, 0.3);
    const TruncatedSeries t = random_series(rng, N);
    const TruncatedSeries u = random_series(rng, N);

    double scale = 0.0;
    for (int n = 0; n <= N; ++n) scale = std::max(scale, std::abs(s[n]) + std::abs(t[n]));

    // commutativity and associativity at fixed N
    CHECK(dist(mul(s, t), mul(t, s)) <= 1e-14 * scale * scale);
    CHECK(dist(mul(mul(s, t), u), mul(s, mul(t, u))) <= 1e-13 * scale * scale * scale);

    // reciprocal(s) * s = 1
    const TruncatedSeries idr = mul(reciprocal(s), s);
    TruncatedSeries one = TruncatedSeries::constant(1.0, N);
    CHECK(dist(idr, one) <= 1e-13 * std::max(1.0, 1.0 / std::abs(s[0])) * scale);

    // sqrt(s)^2 = s (principal branch defined off the cut; shift if unlucky)
    TruncatedSeries sp = s;
    if (sp[0].imag() == 0.0 && sp[0].real() <= 0.0) sp[0] += Complex{1.0, 1.0};
    const TruncatedSeries rt = sqrt(sp);
    CHECK(dist(mul(rt, rt), sp) <= 1e-13 * scale);

    // Leibniz rule up to order N-1 (top slot excluded by convention)
    const TruncatedSeries lhs = derivative(mul(s, t));
    const TruncatedSeries rhs = add(mul(derivative(s), t), mul(s, derivative(t)));
    double d = 0.0;
    for (int n = 0; n < N; ++n) d = std::max(d, std::abs(lhs[n] - rhs[n]));
    CHECK(d <= 1e-13 * scale * scale * N);

    // rotation round trip
    const Complex phase = std::polar(1.0, 0.3 + 0.1 * trial);
    CHECK(dist(rotate_variable(rotate_variable(s, phase), std::conj(phase)), s) <= 1e-14 * scale);
  }
}
