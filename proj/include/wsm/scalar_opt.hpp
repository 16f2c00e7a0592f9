#ifndef WSM_SCALAR_OPT_HPP
#define WSM_SCALAR_OPT_HPP

#include <functional>

namespace wsm {

struct ScalarMax {
  double x = 0.0;
  double value = 0.0;
};

// Golden-section maximization on [lo, hi].  Assumes unimodality inside the
// bracket; with a non-unimodal objective it still returns a local maximum.
ScalarMax golden_section_max(const std::function<double(double)>& f, double lo,
                             double hi, double x_tol = 1e-12,
                             int max_iter = 200);

// Dense grid scan over [lo, hi] followed by golden-section refinement on the
// cell bracketing the best grid point.  Robust to non-concave objectives and
// maxima at the interval ends.
ScalarMax grid_golden_max(const std::function<double(double)>& f, double lo,
                          double hi, int grid_points = 2001,
                          double x_tol = 1e-12);

// Bisection root of f on [lo, hi].  Throws no_sign_change_error (with both
// endpoint residuals) when f(lo) and f(hi) have the same strict sign.
double bisect_root(const std::function<double(double)>& f, double lo,
                   double hi, double tol = 1e-12, int max_iter = 200);

}  // namespace wsm

#endif
