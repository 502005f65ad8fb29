// Inner kernel loops. This translation unit is compiled with fast-math and
// OpenMP SIMD so the exp calls vectorize; inputs here are always finite.

#include "l2d/kde.hpp"

#include <cmath>

namespace l2d::detail {

double gauss_kernel_sum(const double* xs, std::size_t n, double q, double inv_h)
{
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t j = 0; j < n; ++j) {
    const double z = (q - xs[j]) * inv_h;
    s += std::exp(-0.5 * z * z);
  }
  return s;
}

double gauss_kernel_sum_2d(const double* xs, const double* ys, std::size_t n, double qx,
                           double qy, double inv_hx, double inv_hy)
{
  double s = 0.0;
#pragma omp simd reduction(+ : s)
  for (std::size_t j = 0; j < n; ++j) {
    const double zx = (qx - xs[j]) * inv_hx;
    const double zy = (qy - ys[j]) * inv_hy;
    s += std::exp(-0.5 * (zx * zx + zy * zy));
  }
  return s;
}

} // namespace l2d::detail
