#pragma once

namespace adaef {

/// Inverse of the standard normal CDF, evaluated with Wichura's AS 241
/// (PPND16) rational approximation. Absolute error is below 1e-15 on
/// (1e-300, 1 - 1e-16); callers here only need 1e-9 on (1e-6, 1 - 1e-6).
/// Throws std::domain_error for p outside (0, 1).
double inverse_normal_cdf(double p);

}  // namespace adaef
