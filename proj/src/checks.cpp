#include "kdsqnm/checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "kdsqnm/quantization.hpp"
#include "kdsqnm/solver.hpp"

namespace kdsqnm::checks {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

struct Tally {
  bool ok = true;
  std::ostringstream msg;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (msg.tellp() > 0) msg << "; ";
      msg << what;
    }
  }
};

const double kM0 = 1.0;
const double kLambda = 0.03;

}  // namespace

CheckResult angular_exactness() {
  const auto t0 = Clock::now();
  Tally t;
  const SpectralParams p(kM0, kLambda, 0.0);
  const Complex omega{0.5, -0.1};
  double worst_total = 0.0, worst_tail = 0.0;
  for (int lp = 0; lp <= 4; ++lp) {
    for (int kabs = 1; kabs <= 10; ++kabs) {
      for (int sign : {+1, -1}) {
        const double k = sign * kabs;
        const int l = lp + kabs;
        const QuantizationValue v = g_angular(p, lp, omega, k, 6);
        const double target = static_cast<double>(l) * (l + 1);
        const double tol = 1e-9 * l * l;
        const double err = std::abs(v.total - target);
        worst_total = std::max(worst_total, err / (l * l));
        t.expect(err <= tol, "total off at l'=" + std::to_string(lp) +
                                 " k=" + std::to_string(sign * kabs) + " err=" + fmt(err));
        for (size_t j = 3; j < v.terms.size(); ++j) {
          const double hi = std::abs(v.terms[j]);
          worst_tail = std::max(worst_tail, hi / (l * l));
          t.expect(hi <= tol, "term j=" + std::to_string(j) + " nonzero at l'=" +
                                  std::to_string(lp) + " k=" + std::to_string(sign * kabs));
        }
      }
    }
  }
  const double sec = elapsed(t0);
  t.expect(sec < 5.0, "runtime " + fmt(sec) + "s over budget 5s");
  std::string detail = "worst |total - l(l+1)|/l^2 = " + fmt(worst_total) +
                       ", worst tail term/l^2 = " + fmt(worst_tail);
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"angular exactness at a=0", t.ok, detail, sec};
}

CheckResult radial_closed_forms() {
  const auto t0 = Clock::now();
  Tally t;
  const SpectralParams p(kM0, kLambda, 0.0);
  const double denom = 1.0 - 9.0 * kLambda * kM0 * kM0;
  double worst_rel = 0.0;
  for (double sigma : {0.5, 1.0, 2.0, 5.0}) {
    const QuantizationValue v = g_radial(p, 0, Complex{sigma, -0.1}, 0.0, 1);
    const double exact = 27.0 * kM0 * kM0 * sigma * sigma / denom;
    const double rel = std::abs(v.terms[0] - exact) / exact;
    worst_rel = std::max(worst_rel, rel);
    t.expect(rel <= 1e-10, "leading term off at sigma=" + fmt(sigma) + " rel=" + fmt(rel));
  }
  // |(lambda0 + lambda1) - [i(m+1/2) + 3 sqrt(3) M0 omega / sqrt(1-9 Lambda M0^2)]^2|
  // must stay bounded (no growth) along the real axis.
  const double beta = 3.0 * std::sqrt(3.0) * kM0 / std::sqrt(denom);
  const double nu = -0.1;
  double worst_growth = 0.0;
  for (int m = 0; m <= 2; ++m) {
    double first = -1.0;
    for (double sigma : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const Complex omega{sigma, nu};
      const QuantizationValue v = g_radial(p, m, omega, 0.0, 1);
      const Complex bracket = Complex{0.0, m + 0.5} + beta * omega;
      const double resid = std::abs(v.terms[0] + v.terms[1] - bracket * bracket);
      if (first < 0.0) first = resid;
      worst_growth = std::max(worst_growth, resid - first);
      t.expect(resid <= first + 1e-6,
               "square residual grew at m=" + std::to_string(m) + " sigma=" + fmt(sigma));
    }
  }
  const double sec = elapsed(t0);
  t.expect(sec < 5.0, "runtime over budget 5s");
  std::string detail =
      "worst leading rel = " + fmt(worst_rel) + ", worst residual growth = " + fmt(worst_growth);
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"radial closed forms at a=0", t.ok, detail, sec};
}

CheckResult schwarzschild_lattice() {
  const auto t0 = Clock::now();
  Tally t;
  const SpectralParams p(kM0, kLambda, 0.0);
  const int ls[] = {4, 6, 8, 12};
  double err[2][4];
  for (int m = 0; m <= 1; ++m) {
    for (int i = 0; i < 4; ++i) {
      QnmQuery q{p, m, ls[i], 0, 4, {}, false};
      const QnmResult r = solve(q);
      t.expect(r.converged, "solve failed at m=" + std::to_string(m) + " l=" + std::to_string(ls[i]));
      const Complex formula = 0.164434 * Complex{ls[i] + 0.5, -(m + 0.5)};
      err[m][i] = std::abs(r.omega - formula);
    }
  }
  const double C = 4.0 * std::max(err[0][0], err[1][0]);  // single constant, fit at l = 4
  std::ostringstream d;
  d << "C=" << fmt(C);
  for (int m = 0; m <= 1; ++m) {
    for (int i = 1; i < 4; ++i) {
      t.expect(err[m][i] <= C / ls[i], "bound C/l violated at m=" + std::to_string(m) +
                                           " l=" + std::to_string(ls[i]) + ": e=" + fmt(err[m][i]) +
                                           " vs " + fmt(C / ls[i]));
      t.expect(err[m][i] < err[m][i - 1], "error not decreasing at m=" + std::to_string(m) +
                                              " l=" + std::to_string(ls[i]));
    }
    d << " e(m=" << m << ")=[" << fmt(err[m][0]) << "," << fmt(err[m][1]) << "," << fmt(err[m][2])
      << "," << fmt(err[m][3]) << "]";
  }
  const double sec = elapsed(t0);
  t.expect(sec < 30.0, "runtime over budget 30s");
  std::string detail = d.str();
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"nonrotating mode lattice", t.ok, detail, sec};
}

CheckResult zeeman_splitting() {
  const auto t0 = Clock::now();
  Tally t;
  double worst = 0.0;
  for (double a : {0.01, 0.02}) {
    const SpectralParams p(kM0, kLambda, a);
    const double predicted = (2.0 + 9.0 * kLambda * kM0 * kM0) * a / (27.0 * kM0 * kM0);
    for (int l : {4, 6}) {
      QnmQuery qh{p, 0, l, l, 4, {}, false};
      QnmQuery ql{p, 0, l, l - 1, 4, {}, false};
      const QnmResult rh = solve(qh);
      const QnmResult rl = solve(ql);
      t.expect(rh.converged && rl.converged, "solve failed at a=" + fmt(a) + " l=" + std::to_string(l));
      const double fd = rh.omega.real() - rl.omega.real();
      const double rel = std::abs(fd - predicted) / predicted;
      worst = std::max(worst, rel);
      t.expect(rel <= 0.30, "splitting off at a=" + fmt(a) + " l=" + std::to_string(l) +
                                " rel=" + fmt(rel));
    }
  }
  const double sec = elapsed(t0);
  t.expect(sec < 60.0, "runtime over budget 60s");
  std::string detail = "worst relative deviation = " + fmt(worst) + " (allowed 0.30)";
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"Zeeman splitting derivative", t.ok, detail, sec};
}

CheckResult homogeneity() {
  const auto t0 = Clock::now();
  Tally t;
  std::mt19937 rng(20260810u);
  std::uniform_real_distribution<double> ua(0.0, 0.15), usig(0.4, 3.0), unu(-0.8, 0.2);
  std::uniform_int_distribution<int> uk(1, 6), um(0, 3), usign(0, 1);
  const double s = 2.0;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double a = ua(rng);
    const SpectralParams p(kM0, kLambda, a);
    const double sigma = usig(rng), nu = unu(rng);
    const double k = uk(rng) * (usign(rng) ? 1.0 : -1.0);
    const int m = um(rng), lp = um(rng);
    const Complex w{sigma, nu}, ws{s * sigma, nu};
    const QuantizationValue r1 = g_radial(p, m, w, k, 4), r2 = g_radial(p, m, ws, s * k, 4);
    const QuantizationValue a1 = g_angular(p, lp, w, k, 4), a2 = g_angular(p, lp, ws, s * k, 4);
    for (int j = 0; j <= 4; ++j) {
      const double sj = std::pow(s, 2 - j);
      const double rr = std::abs(r2.terms[j] - sj * r1.terms[j]) /
                        std::max(std::abs(r2.terms[j]), 1e-30);
      const double ra = std::abs(a2.terms[j] - sj * a1.terms[j]) /
                        std::max(std::abs(a2.terms[j]), 1e-30);
      worst = std::max(worst, std::max(rr, ra));
      t.expect(rr <= 1e-10 && ra <= 1e-10,
               "scaling broken at trial " + std::to_string(trial) + " j=" + std::to_string(j));
    }
  }
  const double sec = elapsed(t0);
  t.expect(sec < 5.0, "runtime over budget 5s");
  std::string detail = "worst relative scaling error = " + fmt(worst);
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"term homogeneity under doubling", t.ok, detail, sec};
}

CheckResult order_slopes() {
  const auto t0 = Clock::now();
  Tally t;
  const SpectralParams p(kM0, kLambda, 0.1);
  std::vector<double> logl;
  std::vector<double> logd[3];
  for (int l = 2; l <= 10; ++l) {
    QnmQuery q{p, 0, l, l, 4, {}, false};
    const auto rows = order_convergence(q, 4);
    for (const auto& [J, r] : rows)
      t.expect(r.converged, "order solve failed at l=" + std::to_string(l) + " J=" + std::to_string(J));
    logl.push_back(std::log(static_cast<double>(l)));
    for (int J = 1; J <= 3; ++J)
      logd[J - 1].push_back(
          std::log(std::abs(rows[J].second.omega - rows[J - 1].second.omega)));
  }
  std::ostringstream d;
  for (int J = 1; J <= 3; ++J) {
    // least-squares slope of log d vs log l
    const size_t n = logl.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
      sx += logl[i];
      sy += logd[J - 1][i];
      sxx += logl[i] * logl[i];
      sxy += logl[i] * logd[J - 1][i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    d << "slope(J=" << J << ")=" << fmt(slope) << " ";
    t.expect(slope <= -1.0, "slope at J=" + std::to_string(J) + " is " + fmt(slope) + " > -1");
  }
  const double sec = elapsed(t0);
  t.expect(sec < 120.0, "runtime over budget 2min");
  std::string detail = d.str();
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"order-convergence slopes", t.ok, detail, sec};
}

CheckResult engine_residuals() {
  const auto t0 = Clock::now();
  Tally t;
  std::mt19937 rng(777001u);
  std::uniform_real_distribution<double> ua(0.0, 0.15), usig(0.4, 3.0), unu(-0.8, 0.2);
  std::uniform_int_distribution<int> uk(1, 6), um(0, 3), uj(2, 5), usign(0, 1);
  double worst_transport = 0.0, worst_null = 0.0, worst_gauge = 0.0, worst_refine = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a = ua(rng);
    const SpectralParams p(kM0, kLambda, a);
    const double sigma = usig(rng), nu = unu(rng);
    const double k = uk(rng) * (usign(rng) ? 1.0 : -1.0);
    const int m = um(rng), J = uj(rng);
    const bool radial = (trial % 2 == 0);
    const FrequencySplit split{sigma, nu};

    const auto assemble = [&](int order) {
      if (radial) return radial_series(p, split, k, find_r0(p, sigma, k), order);
      return angular_series(p, split, k, order);
    };
    const int order = BarrierTopProblem::default_order(m, J);
    PotentialSeries s1 = assemble(order);
    BarrierTopProblem prob1(s1.A, s1.B0, s1.B1, s1.B2, m, J);
    const ResonanceExpansion e1 = solve_expansion(prob1);
    for (double r : e1.diagnostics.transport_residual) {
      worst_transport = std::max(worst_transport, r);
      t.expect(r <= 1e-10, "transport residual " + fmt(r) + " at trial " + std::to_string(trial));
    }
    worst_null = std::max(worst_null, e1.diagnostics.left_null_residual);
    t.expect(e1.diagnostics.left_null_residual <= 1e-12,
             "left-null residual " + fmt(e1.diagnostics.left_null_residual) + " at trial " +
                 std::to_string(trial));
    for (double gv : e1.diagnostics.gauge) {
      worst_gauge = std::max(worst_gauge, gv);
      t.expect(gv <= 1e-12, "gauge " + fmt(gv) + " at trial " + std::to_string(trial));
    }
    PotentialSeries s2 = assemble(order + 8);
    BarrierTopProblem prob2(s2.A, s2.B0, s2.B1, s2.B2, m, J);
    const ResonanceExpansion e2 = solve_expansion(prob2);
    for (int j = 0; j <= J; ++j) {
      const double rel = std::abs(e1.lambdas[j] - e2.lambdas[j]) /
                         std::max(std::abs(e2.lambdas[j]), 1e-30);
      worst_refine = std::max(worst_refine, rel);
      t.expect(rel <= 1e-10, "budget instability " + fmt(rel) + " at trial " +
                                 std::to_string(trial) + " j=" + std::to_string(j));
    }
  }
  const double sec = elapsed(t0);
  t.expect(sec < 60.0, "runtime over budget 60s");
  std::string detail = "worst transport=" + fmt(worst_transport) + " null=" + fmt(worst_null) +
                       " gauge=" + fmt(worst_gauge) + " refine=" + fmt(worst_refine);
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"engine residual suite", t.ok, detail, sec};
}

CheckResult branch_fan() {
  const auto t0 = Clock::now();
  Tally t;
  const std::vector<double> grid{0.0, 0.05, 0.10, 0.15, 0.20, 0.25};
  std::ostringstream d;
  for (int l : {4, 6}) {
    std::vector<std::vector<Complex>> fan;  // fan[k + l][ia]
    for (int k = -l; k <= l; ++k) {
      const SpectralParams p0(kM0, kLambda, 0.0);
      QnmQuery q{p0, 0, l, k, 4, {}, false};
      const ContinuationBranch b = continuation_sweep(q, grid);
      t.expect(!b.truncated, "branch truncated at l=" + std::to_string(l) +
                                 " k=" + std::to_string(k) + " a=" + fmt(b.failed_at));
      std::vector<Complex> ws;
      for (const QnmResult& r : b.points) ws.push_back(r.omega);
      fan.push_back(std::move(ws));
    }
    double coincide = 0.0;
    for (const auto& ws : fan)
      if (!ws.empty()) coincide = std::max(coincide, std::abs(ws[0] - fan[0][0]));
    t.expect(coincide <= 1e-8, "branches do not coincide at a=0 for l=" + std::to_string(l) +
                                   " (spread " + fmt(coincide) + ")");
    int ordered_rows = 0;
    for (size_t ia = 1; ia < grid.size(); ++ia) {
      bool mono = true;
      for (int i = 0; i + 1 < static_cast<int>(fan.size()); ++i) {
        if (ia >= fan[i].size() || ia >= fan[i + 1].size()) { mono = false; break; }
        if (!(fan[i][ia].real() < fan[i + 1][ia].real())) mono = false;
      }
      if (mono) ++ordered_rows;
      t.expect(mono, "branches not strictly ordered at l=" + std::to_string(l) +
                         " a=" + fmt(grid[ia]));
    }
    d << "l=" << l << ": coincide=" << fmt(coincide) << ", ordered rows " << ordered_rows << "/5; ";
  }
  const double sec = elapsed(t0);
  t.expect(sec < 300.0, "runtime over budget 5min");
  std::string detail = d.str();
  if (!t.ok) detail += " [" + t.msg.str() + "]";
  return {"rotation-sweep branch fan", t.ok, detail, sec};
}

std::vector<CheckResult> run_all() {
  return {angular_exactness(), radial_closed_forms(), schwarzschild_lattice(), zeeman_splitting(),
          homogeneity(),       order_slopes(),        engine_residuals(),      branch_fan()};
}

std::vector<CheckResult> run_quick() {
  return {angular_exactness(), radial_closed_forms(), homogeneity(), engine_residuals()};
}

}  // namespace kdsqnm::checks
