#include "qfid/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qfid {

namespace {

constexpr int kMinDepth = 6;
constexpr double kNoise = 64.0 * std::numeric_limits<double>::epsilon();

struct Simpson {
  const Integrand& f;
  int max_depth;

  double refine(double a, double fa, double m, double fm, double b, double fb, double whole,
                double tol, int depth) const {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // A non-finite delta would fail every test below and refine to max_depth
    // along every branch; hand it back so the caller sees it at once.
    if (!std::isfinite(delta)) return left + right + delta;
    const bool converged = std::abs(delta) <= 15.0 * tol;
    const bool at_noise = std::abs(delta) <= kNoise * (std::abs(left) + std::abs(right));
    if (depth >= max_depth || (depth >= kMinDepth && (converged || at_noise))) {
      return left + right + delta / 15.0;
    }
    return refine(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth + 1) +
           refine(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

double adaptive_simpson(const Integrand& f, double a, double b, double tolerance, int max_depth) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Simpson{f, max_depth}.refine(a, fa, m, fm, b, fb, whole, tolerance, 0);
}

double integrate_endpoint_singular(const Integrand& f, double a, double b, double tolerance,
                                   int max_depth) {
  const double width = b - a;
  if (width == 0.0) return 0.0;
  const Integrand mapped = [&](double u) {
    const double jac = 6.0 * width * u * (1.0 - u);
    if (jac == 0.0) return 0.0;
    const double x = a + width * u * u * (3.0 - 2.0 * u);
    if (x <= a || x >= b) return 0.0;
    const double value = f(x) * jac;
    // Next to a singular endpoint the integrand can overflow to inf where the
    // Jacobian has not yet rounded to 0; the mapped limit there is 0.
    if (!std::isfinite(value) && (u < 1e-3 || u > 1.0 - 1e-3)) return 0.0;
    return value;
  };
  return adaptive_simpson(mapped, 0.0, 1.0, tolerance, max_depth);
}

double integrate_piecewise(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, double tolerance) {
  std::vector<double> nodes{a};
  for (double p : breakpoints) {
    if (p > a && p < b) nodes.push_back(p);
  }
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  const double piece_tol = tolerance / static_cast<double>(nodes.size() - 1);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    total += integrate_endpoint_singular(f, nodes[i], nodes[i + 1], piece_tol);
  }
  return total;
}

}  // namespace qfid
