#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kdsqnm/quantization.hpp"

namespace kdsqnm {

/// Damped-Newton settings for the matching equation.
struct NewtonSettings {
  int max_iter = 40;
  /// Absolute tolerance on |G^r - G^theta| is tol_factor * (1 + |omega|^2).
  double tol_factor = 1e-9;
  /// Finite-difference step is fd_step * (1 + |omega|).
  double fd_step = 1e-6;
  /// Step halvings allowed per iteration when the residual grows.
  int max_halvings = 8;
};

/// One mode request: solve G^r(m, omega, k) = G^theta(l - |k|, omega, k).
struct QnmQuery {
  SpectralParams params;
  int m = 0;
  int l = 0;
  int k = 0;
  int order_J = 4;
  NewtonSettings newton;
  /// Record omega at every order 1..order_J (for convergence studies).
  bool record_history = false;
};

/// A solved (or failed) mode.
struct QnmResult {
  int m = 0, l = 0, k = 0;
  double a = 0.0;
  int order_J = 0;
  Complex omega{0.0, 0.0};
  /// |G^r - G^theta| re-evaluated at the returned omega (not trusted from the iterator).
  double residual = 0.0;
  int iterations = 0;
  Complex seed{0.0, 0.0};
  bool converged = false;
  /// Per-order omegas (order, omega) when history recording is on.
  std::vector<std::pair<int, Complex>> per_order;
  /// Status tokens: "anomalous_im" (Im omega >= 0), "kneg_convention"
  /// (k < 0 with a != 0: reflection convention untested), "k0_spherical"
  /// (k = 0 with a != 0: angular side frozen at the spherical eigenvalue),
  /// "angular_tail_dropped" (superasymptotic guard fired), "not_converged".
  std::vector<std::string> flags;
};

/// Nonrotating seed: sqrt(1 - 9 Lambda M0^2) / (3 sqrt(3) M0) * ((l + 1/2) - i (m + 1/2)).
Complex schwarzschild_seed(const SpectralParams& p, int m, int l);

/// Solve the matching equation by damped Newton in (Re omega, Im omega),
/// seeded by schwarzschild_seed unless an explicit seed is given.
QnmResult solve(const QnmQuery& q, std::optional<Complex> seed = std::nullopt);

/// One continuation branch in the rotation parameter.
struct ContinuationBranch {
  std::vector<QnmResult> points;
  bool truncated = false;   // a later a-value failed to converge
  double failed_at = 0.0;   // first failing a when truncated
};

/// Solve along an increasing list of a values, seeding each solve with the
/// previous converged omega. Non-convergence truncates the branch.
ContinuationBranch continuation_sweep(const QnmQuery& q, const std::vector<double>& a_values);

/// Solve at orders 1..J_max (warm-started) and return (J, result) rows.
std::vector<std::pair<int, QnmResult>> order_convergence(const QnmQuery& q, int J_max);

}  // namespace kdsqnm
