#include "kdsqnm/quantization.hpp"

#include <cmath>
#include <stdexcept>

namespace kdsqnm {

QuantizationValue g_radial(const SpectralParams& p, int m, Complex omega, double k, int J) {
  if (!(omega.real() > 0.0)) throw std::invalid_argument("g_radial: Re omega must be positive");
  const FrequencySplit split{omega.real(), omega.imag()};
  const double r0 = find_r0(p, split.sigma, k);
  const int order = BarrierTopProblem::default_order(m, J);
  PotentialSeries s = radial_series(p, split, k, r0, order);
  BarrierTopProblem prob(std::move(s.A), std::move(s.B0), std::move(s.B1), std::move(s.B2), m, J);
  ResonanceExpansion exp = solve_expansion(prob);

  QuantizationValue out;
  out.side = SymbolSide::radial;
  out.diagnostics = std::move(exp.diagnostics);
  out.terms.reserve(exp.lambdas.size());
  for (const Complex& l : exp.lambdas) out.terms.push_back(-l);
  for (const Complex& t : out.terms) out.total += t;
  return out;
}

QuantizationValue g_angular(const SpectralParams& p, int l_prime, Complex omega, double k, int J) {
  if (l_prime < 0) throw std::invalid_argument("g_angular: l' must be nonnegative");
  QuantizationValue out;
  out.side = SymbolSide::angular;
  if (k == 0.0) {
    out.exact_spherical = true;
    out.terms.assign(static_cast<size_t>(J) + 1, Complex{0.0, 0.0});
    const Complex ll1{static_cast<double>(l_prime) * (l_prime + 1), 0.0};
    out.terms[std::min(J, 2)] = ll1;  // the degree-0 slot when present
    out.total = ll1;
    return out;
  }
  const FrequencySplit split{omega.real(), omega.imag()};
  const int order = BarrierTopProblem::default_order(l_prime, J);
  PotentialSeries s = angular_series(p, split, k, order);
  BarrierTopProblem prob(std::move(s.A), std::move(s.B0), std::move(s.B1), std::move(s.B2),
                         l_prime, J);
  ResonanceExpansion exp = solve_expansion(prob);

  out.diagnostics = std::move(exp.diagnostics);
  out.terms.reserve(exp.lambdas.size());
  for (const Complex& l : exp.lambdas) out.terms.push_back(Complex{0.0, 1.0} * l);
  for (const Complex& t : out.terms) out.total += t;
  return out;
}

Complex guarded_angular_total(const QuantizationValue& v, bool* tail_dropped) {
  Complex head{0.0, 0.0};
  const size_t nhead = std::min<size_t>(3, v.terms.size());
  for (size_t j = 0; j < nhead; ++j) head += v.terms[j];
  bool clean = true;
  for (size_t j = 4; j < v.terms.size(); ++j)
    if (std::abs(v.terms[j]) > std::abs(v.terms[j - 1])) clean = false;
  if (v.terms.size() > 3 && std::abs(v.terms[3]) > std::abs(v.terms[2])) clean = false;
  if (tail_dropped) *tail_dropped = !clean && v.terms.size() > 3;
  if (!clean) return head;
  Complex tail{0.0, 0.0};
  for (size_t j = 3; j < v.terms.size(); ++j) tail += v.terms[j];
  return head + tail;
}

}  // namespace kdsqnm
