#include "wsm/scalar_opt.hpp"

#include <algorithm>
#include <cmath>

#include "wsm/errors.hpp"

namespace wsm {

namespace {
constexpr double kInvGolden = 0.6180339887498949;  // 1/phi
}

ScalarMax golden_section_max(const std::function<double(double)>& f, double lo,
                             double hi, double x_tol, int max_iter) {
  double a = lo, b = hi;
  if (b < a) std::swap(a, b);
  double c = b - kInvGolden * (b - a);
  double d = a + kInvGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvGolden * (b - a);
      fd = f(d);
    }
  }
  double x = 0.5 * (a + b);
  return {x, f(x)};
}

ScalarMax grid_golden_max(const std::function<double(double)>& f, double lo,
                          double hi, int grid_points, double x_tol) {
  if (!(hi > lo)) return {lo, f(lo)};
  if (grid_points < 3) grid_points = 3;
  const double h = (hi - lo) / (grid_points - 1);
  int best_i = 0;
  double best_v = f(lo);
  for (int i = 1; i < grid_points; ++i) {
    const double x = (i == grid_points - 1) ? hi : lo + i * h;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_i = i;
    }
  }
  const double a = lo + std::max(0, best_i - 1) * h;
  const double b = std::min(hi, lo + (best_i + 1) * h);
  ScalarMax refined = golden_section_max(f, a, b, x_tol);
  if (refined.value >= best_v) return refined;
  double x = (best_i == grid_points - 1) ? hi : lo + best_i * h;
  return {x, best_v};
}

double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol, int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0))
    throw no_sign_change_error("bisect_root: no sign change on bracket", flo,
                               fhi);
  double a = lo, b = hi;
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      a = mid;
      flo = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace wsm
