#pragma once

#include <functional>

namespace adet {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

/// Absolute error target for every probability integral in the library.
inline constexpr double kQuadratureAbsTolerance = 1e-9;

/// Adaptive Gauss-Kronrod integration of a smooth integrand over a finite
/// interval. Throws AccuracyError (carrying the estimate) when the error
/// estimate exceeds `abs_tolerance`.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tolerance = kQuadratureAbsTolerance);

}  // namespace adet
