#include "kdsqnm/series.hpp"

#include <cmath>
#include <stdexcept>

#include "kdsqnm/errors.hpp"

namespace kdsqnm {

namespace {

void require_same_order(const TruncatedSeries& s, const TruncatedSeries& t, const char* op) {
  if (s.order() != t.order())
    throw std::invalid_argument(std::string(op) + ": mismatched truncation orders " +
                                std::to_string(s.order()) + " vs " + std::to_string(t.order()));
}

}  // namespace

TruncatedSeries::TruncatedSeries(int order) {
  if (order < 0) throw std::invalid_argument("TruncatedSeries: negative order");
  c_.assign(static_cast<size_t>(order) + 1, Complex{0.0, 0.0});
}

TruncatedSeries::TruncatedSeries(std::initializer_list<Complex> coeffs) : c_(coeffs) {
  if (c_.empty()) throw std::invalid_argument("TruncatedSeries: empty coefficient list");
}

TruncatedSeries::TruncatedSeries(std::vector<Complex> coeffs) : c_(std::move(coeffs)) {
  if (c_.empty()) throw std::invalid_argument("TruncatedSeries: empty coefficient list");
}

TruncatedSeries TruncatedSeries::constant(Complex c, int order) {
  TruncatedSeries s(order);
  s[0] = c;
  return s;
}

TruncatedSeries add(const TruncatedSeries& s, const TruncatedSeries& t) {
  require_same_order(s, t, "add");
  TruncatedSeries r(s.order());
  for (int n = 0; n <= s.order(); ++n) r[n] = s[n] + t[n];
  return r;
}

TruncatedSeries sub(const TruncatedSeries& s, const TruncatedSeries& t) {
  require_same_order(s, t, "sub");
  TruncatedSeries r(s.order());
  for (int n = 0; n <= s.order(); ++n) r[n] = s[n] - t[n];
  return r;
}

TruncatedSeries mul(const TruncatedSeries& s, const TruncatedSeries& t) {
  require_same_order(s, t, "mul");
  const int N = s.order();
  TruncatedSeries r(N);
  for (int n = 0; n <= N; ++n) {
    Complex acc{0.0, 0.0};
    for (int p = 0; p <= n; ++p) acc += s[p] * t[n - p];
    r[n] = acc;
  }
  return r;
}

TruncatedSeries scale(Complex a, const TruncatedSeries& s) {
  TruncatedSeries r(s.order());
  for (int n = 0; n <= s.order(); ++n) r[n] = a * s[n];
  return r;
}

TruncatedSeries reciprocal(const TruncatedSeries& s) {
  if (s[0] == Complex{0.0, 0.0})
    throw std::domain_error("reciprocal: constant term is zero, series not invertible");
  const int N = s.order();
  TruncatedSeries r(N);
  r[0] = 1.0 / s[0];
  for (int n = 1; n <= N; ++n) {
    Complex acc{0.0, 0.0};
    for (int j = 1; j <= n; ++j) acc += s[j] * r[n - j];
    r[n] = -acc / s[0];
  }
  return r;
}

TruncatedSeries sqrt(const TruncatedSeries& s) {
  const Complex c0 = s[0];
  if (c0 == Complex{0.0, 0.0} || (c0.imag() == 0.0 && c0.real() < 0.0))
    throw BranchCutError("sqrt: constant term on the closed negative real axis");
  const int N = s.order();
  TruncatedSeries t(N);
  t[0] = std::sqrt(c0);  // principal branch, Re > 0 off the cut
  for (int n = 1; n <= N; ++n) {
    Complex acc{0.0, 0.0};
    for (int j = 1; j < n; ++j) acc += t[j] * t[n - j];
    t[n] = (s[n] - acc) / (2.0 * t[0]);
  }
  return t;
}

TruncatedSeries derivative(const TruncatedSeries& s) {
  const int N = s.order();
  TruncatedSeries r(N);
  for (int n = 0; n < N; ++n) r[n] = static_cast<double>(n + 1) * s[n + 1];
  r[N] = Complex{0.0, 0.0};  // top coefficient unknown after differentiation
  return r;
}

TruncatedSeries rotate_variable(const TruncatedSeries& s, Complex phase) {
  const int N = s.order();
  TruncatedSeries r(N);
  Complex p{1.0, 0.0};
  for (int n = 0; n <= N; ++n) {
    r[n] = s[n] * p;
    p *= phase;
  }
  return r;
}

Complex evaluate(const TruncatedSeries& s, Complex y) {
  Complex acc = s[s.order()];
  for (int n = s.order() - 1; n >= 0; --n) acc = acc * y + s[n];
  return acc;
}

}  // namespace kdsqnm
