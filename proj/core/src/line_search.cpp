#include "kronsbl/line_search.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kronsbl/types.hpp"

namespace kronsbl {

double line_search_1d(const std::function<double(double)>& f, double lo, double hi,
                      double incumbent, int coarse_samples, double abs_tol) {
  if (lo > hi || incumbent < lo || incumbent > hi) {
    throw ConfigError("line_search_1d: incumbent must lie in [lo, hi]");
  }
  double best_x = incumbent;
  double best_f = f(incumbent);
  if (lo == hi) return best_x;

  auto consider = [&](double x) {
    const double fx = f(x);
    if (fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    return fx;
  };

  const int k = std::max(coarse_samples, 2);
  const double step = (hi - lo) / static_cast<double>(k - 1);
  int best_sample = 0;
  double best_sample_f = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = (i == k - 1) ? hi : lo + step * i;
    const double fx = consider(x);
    if (i == 0 || fx < best_sample_f) {
      best_sample_f = fx;
      best_sample = i;
    }
  }

  double a = std::max(lo, lo + step * (best_sample - 1));
  double b = std::min(hi, lo + step * (best_sample + 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = consider(c);
  double fd = consider(d);
  const double tol = std::max(abs_tol, 0.0);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      if (c == d) break;
      fc = consider(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      if (c == d) break;
      fd = consider(d);
    }
  }
  return best_x;
}

}  // namespace kronsbl
