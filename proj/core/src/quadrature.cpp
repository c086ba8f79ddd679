#include "adet/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "adet/error.hpp"

namespace adet {

namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;

// Initial panels, so narrow peaks are not missed by the first Kronrod sample.
constexpr int kPanels = 8;
constexpr int kMaxPanels = 2000;
// Refinement stops once the summed error is this far below the caller's bound.
constexpr double kTargetFraction = 1e-4;
constexpr double kRelativeTarget = 1e-13;
// Panels narrower than this relative to the whole interval are not split.
constexpr double kMinWidthFraction = 1e-12;

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel evaluate(const std::function<double(double)>& f, double lo, double hi) {
  double err = 0.0;
  // Depth 0: a single Kronrod/Gauss pair, error = |K - G|.
  const double v = Rule::integrate(f, lo, hi, 0, 0.0, &err);
  return {lo, hi, v, err};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double abs_tolerance) {
  QuadratureResult out;
  if (!(b > a)) return out;
  std::priority_queue<Panel> heap;
  const double width = (b - a) / kPanels;
  for (int k = 0; k < kPanels; ++k) {
    const double lo = a + k * width;
    const double hi = k + 1 == kPanels ? b : lo + width;
    const Panel p = evaluate(f, lo, hi);
    out.value += p.value;
    out.error += p.error;
    heap.push(p);
  }
  const double min_width = (b - a) * kMinWidthFraction;
  int panels = kPanels;
  while (panels < kMaxPanels && std::isfinite(out.value)) {
    const double target = std::max(abs_tolerance * kTargetFraction, kRelativeTarget * std::abs(out.value));
    if (out.error <= target) break;
    const Panel worst = heap.top();
    if (worst.hi - worst.lo < min_width) break;
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Panel left = evaluate(f, worst.lo, mid);
    const Panel right = evaluate(f, mid, worst.hi);
    out.value += left.value + right.value - worst.value;
    out.error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Recompute the sums to drop accumulated cancellation from the updates.
  out.value = 0.0;
  out.error = 0.0;
  while (!heap.empty()) {
    out.value += heap.top().value;
    out.error += heap.top().error;
    heap.pop();
  }
  if (!std::isfinite(out.value) || out.error > abs_tolerance)
    throw AccuracyError("quadrature error estimate " + std::to_string(out.error) +
                            " exceeds tolerance " + std::to_string(abs_tolerance),
                        out.value, out.error);
  return out;
}

}  // namespace adet
