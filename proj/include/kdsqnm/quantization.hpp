#pragma once

#include <vector>

#include "kdsqnm/barrier_top.hpp"
#include "kdsqnm/kds.hpp"

namespace kdsqnm {

enum class SymbolSide { radial, angular };

/// Finite-order quantization symbol value: total = sum of the terms
/// lambda_0 ... lambda_J, terms ordered by homogeneity degree 2 - j.
struct QuantizationValue {
  Complex total{0.0, 0.0};
  std::vector<Complex> terms;
  SymbolSide side = SymbolSide::radial;
  ExpansionDiagnostics diagnostics;
  /// Set when the angular value was taken at the exact spherical eigenvalue
  /// (k = 0, where the centrifugal well degenerates and the expansion has no
  /// barrier to attach to).
  bool exact_spherical = false;
};

/// Radial quantization symbol at index m: runs the barrier-top engine on the
/// radial Taylor data at the trapped point r0(Re omega, k). The separation
/// constant enters the radial problem with the opposite sign to the angular
/// one, so the returned terms are the negatives of the engine eigenvalue terms
/// (making the leading term 27 M0^2 sigma^2 / (1 - 9 Lambda M0^2) > 0 at a = 0).
/// Requires Re omega > 0.
QuantizationValue g_radial(const SpectralParams& p, int m, Complex omega, double k, int J);

/// Angular quantization symbol at bottom index l' = l - |k|: runs the engine on
/// the complex-rotated angular data and maps each eigenvalue term back through
/// the rotation (lambda = i lambda'; the sign is fixed by the a = 0 limit,
/// where the total must be the spherical eigenvalue +l(l+1)).
///
/// For k = 0 the angular potential has no centrifugal structure and the
/// rotated problem violates the barrier curvature condition; the value is then
/// taken exactly at the spherical eigenvalue l'(l'+1) (exact for a = 0, an
/// O(a^2 omega^2) approximation otherwise) with exact_spherical set.
QuantizationValue g_angular(const SpectralParams& p, int l_prime, Complex omega, double k, int J);

/// Sum of angular terms with a superasymptotic guard: the correction tail
/// (terms with j >= 3, which vanish identically at a = 0) is included only
/// when it decreases monotonically in modulus; a growing tail signals
/// evaluation outside the expansion's domain and is dropped entirely.
/// Returns the guarded total and sets tail_dropped accordingly.
Complex guarded_angular_total(const QuantizationValue& v, bool* tail_dropped = nullptr);

}  // namespace kdsqnm
