#include "kdsqnm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "kdsqnm/errors.hpp"

namespace kdsqnm {

namespace {

constexpr int kIndexGuard = 12;  // largest accepted overtone index m

void validate(const QnmQuery& q) {
  if (q.m < 0 || q.m > kIndexGuard)
    throw std::invalid_argument("QnmQuery: overtone index m out of range 0.." +
                                std::to_string(kIndexGuard));
  if (q.l < 0) throw std::invalid_argument("QnmQuery: l must be nonnegative");
  if (std::abs(q.k) > q.l) throw std::invalid_argument("QnmQuery: need |k| <= l");
  if (q.order_J < 1) throw std::invalid_argument("QnmQuery: order must be at least 1");
}

struct Matching {
  const QnmQuery& q;
  int l_prime;
  mutable bool tail_dropped = false;

  Complex operator()(Complex omega) const {
    const QuantizationValue gr = g_radial(q.params, q.m, omega, q.k, q.order_J);
    const QuantizationValue ga = g_angular(q.params, l_prime, omega, q.k, q.order_J);
    bool dropped = false;
    const Complex total_theta = guarded_angular_total(ga, &dropped);
    if (dropped) tail_dropped = true;
    return gr.total - total_theta;
  }
};

}  // namespace

Complex schwarzschild_seed(const SpectralParams& p, int m, int l) {
  const double pref =
      std::sqrt(1.0 - 9.0 * p.Lambda() * p.M0() * p.M0()) / (3.0 * std::sqrt(3.0) * p.M0());
  return pref * Complex{l + 0.5, -(m + 0.5)};
}

QnmResult solve(const QnmQuery& q, std::optional<Complex> seed) {
  validate(q);
  const Matching h{q, q.l - std::abs(q.k)};

  QnmResult res;
  res.m = q.m;
  res.l = q.l;
  res.k = q.k;
  res.a = q.params.a();
  res.order_J = q.order_J;
  res.seed = seed.value_or(schwarzschild_seed(q.params, q.m, q.l));

  Complex w = res.seed;
  bool converged = false;
  int it = 0;
  std::string failure;
  try {
    Complex hv = h(w);
    for (it = 0; it < q.newton.max_iter; ++it) {
      const double tol = q.newton.tol_factor * (1.0 + std::norm(w));
      if (std::abs(hv) <= tol) {
        converged = true;
        break;
      }
      const double d = q.newton.fd_step * (1.0 + std::abs(w));
      const Complex hxp = h(w + d), hxm = h(w - d);
      const Complex hyp = h(w + Complex{0.0, d}), hym = h(w - Complex{0.0, d});
      // Jacobian of (Re h, Im h) over (sigma, nu) by central differences.
      const double j11 = (hxp - hxm).real() / (2.0 * d), j12 = (hyp - hym).real() / (2.0 * d);
      const double j21 = (hxp - hxm).imag() / (2.0 * d), j22 = (hyp - hym).imag() / (2.0 * d);
      const double det = j11 * j22 - j12 * j21;
      const double jnorm = std::max({std::abs(j11), std::abs(j12), std::abs(j21), std::abs(j22)});
      if (!(std::abs(det) > 1e-14 * jnorm * jnorm)) {
        failure = "singular_jacobian";
        break;
      }
      const Complex step{(j22 * hv.real() - j12 * hv.imag()) / det,
                         (j11 * hv.imag() - j21 * hv.real()) / det};
      double damp = 1.0;
      Complex wn = w - step;
      Complex hn = h(wn);
      for (int half = 0; half < q.newton.max_halvings && std::abs(hn) > std::abs(hv); ++half) {
        damp *= 0.5;
        wn = w - damp * step;
        hn = h(wn);
      }
      w = wn;
      hv = hn;
      if (!(w.real() > 0.0)) {
        failure = "left_half_plane";
        break;
      }
    }
  } catch (const NumericError& e) {
    failure = e.what();
  } catch (const std::domain_error& e) {
    failure = e.what();
  }

  res.iterations = it;
  res.omega = w;
  res.residual = std::numeric_limits<double>::quiet_NaN();
  try {
    res.residual = std::abs(h(w));  // re-evaluated post hoc, not trusted from the iterator
  } catch (const std::exception&) {
  }
  converged = converged && res.residual <= q.newton.tol_factor * (1.0 + std::norm(w));
  res.converged = converged;
  if (!converged) {
    res.flags.push_back("not_converged");
    if (!failure.empty()) res.flags.push_back(failure);
  }
  if (res.omega.imag() >= 0.0) res.flags.push_back("anomalous_im");
  if (q.params.a() != 0.0 && q.k < 0) res.flags.push_back("kneg_convention");
  if (q.params.a() != 0.0 && q.k == 0) res.flags.push_back("k0_spherical");
  if (h.tail_dropped) res.flags.push_back("angular_tail_dropped");

  if (q.record_history) {
    std::optional<Complex> warm;
    for (int J = 1; J <= q.order_J; ++J) {
      QnmQuery qj = q;
      qj.record_history = false;
      qj.order_J = J;
      const QnmResult rj = solve(qj, warm);
      warm = rj.omega;
      res.per_order.emplace_back(J, rj.omega);
    }
  }
  return res;
}

ContinuationBranch continuation_sweep(const QnmQuery& q, const std::vector<double>& a_values) {
  if (a_values.empty())
    throw std::invalid_argument("continuation_sweep: empty list of rotation values");
  ContinuationBranch branch;
  std::optional<Complex> seed;
  for (double a : a_values) {
    QnmQuery qa = q;
    try {
      qa.params = SpectralParams(q.params.M0(), q.params.Lambda(), a);
    } catch (const std::invalid_argument&) {
      branch.truncated = true;
      branch.failed_at = a;
      break;
    }
    QnmResult r = solve(qa, seed);
    if (!r.converged) {
      branch.truncated = true;
      branch.failed_at = a;
      branch.points.push_back(std::move(r));
      break;
    }
    seed = r.omega;
    branch.points.push_back(std::move(r));
  }
  return branch;
}

std::vector<std::pair<int, QnmResult>> order_convergence(const QnmQuery& q, int J_max) {
  std::vector<std::pair<int, QnmResult>> rows;
  std::optional<Complex> seed;
  for (int J = 1; J <= J_max; ++J) {
    QnmQuery qj = q;
    qj.order_J = J;
    QnmResult r = solve(qj, seed);
    seed = r.omega;
    rows.emplace_back(J, std::move(r));
  }
  return rows;
}

}  // namespace kdsqnm
