// NEON kernels (aarch64). float64x2_t carries two lanes, so two vector
// accumulators stand in for the reference's four scalar lanes: accumulator 0
// holds lanes {0,1}, accumulator 1 holds lanes {2,3}. Operation order matches
// scalar.cpp exactly, so results are bit-identical.

#if defined(__aarch64__)

#include "probact/kernels.hpp"

#include <arm_neon.h>

#include <cmath>

namespace probact::kern {
namespace {

inline double combine(float64x2_t acc01, float64x2_t acc23,
                      std::span<const double> tail_a,
                      std::span<const double> tail_b, bool dot_tail) {
  double lane[4] = {vgetq_lane_f64(acc01, 0), vgetq_lane_f64(acc01, 1),
                    vgetq_lane_f64(acc23, 0), vgetq_lane_f64(acc23, 1)};
  for (std::size_t k = 0; k < tail_a.size(); ++k)
    lane[k] += dot_tail ? tail_a[k] * tail_b[k] : tail_a[k];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_neon(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t body = n & ~std::size_t{3};
  float64x2_t a01 = vdupq_n_f64(0.0), a23 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 4) {
    a01 = vaddq_f64(a01, vld1q_f64(x.data() + i));
    a23 = vaddq_f64(a23, vld1q_f64(x.data() + i + 2));
  }
  return combine(a01, a23, x.subspan(body), {}, false);
}

double dot_neon(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t body = n & ~std::size_t{3};
  float64x2_t a01 = vdupq_n_f64(0.0), a23 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 4) {
    a01 = vaddq_f64(a01, vmulq_f64(vld1q_f64(a.data() + i),
                                   vld1q_f64(b.data() + i)));
    a23 = vaddq_f64(a23, vmulq_f64(vld1q_f64(a.data() + i + 2),
                                   vld1q_f64(b.data() + i + 2)));
  }
  return combine(a01, a23, a.subspan(body), b.subspan(body), true);
}

double max_abs_diff_neon(std::span<const double> a,
                         std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t body = n & ~std::size_t{3};
  float64x2_t m01 = vdupq_n_f64(0.0), m23 = vdupq_n_f64(0.0);
  for (std::size_t i = 0; i < body; i += 4) {
    m01 = vmaxq_f64(m01, vabsq_f64(vsubq_f64(vld1q_f64(a.data() + i),
                                             vld1q_f64(b.data() + i))));
    m23 = vmaxq_f64(m23, vabsq_f64(vsubq_f64(vld1q_f64(a.data() + i + 2),
                                             vld1q_f64(b.data() + i + 2))));
  }
  double lane[4] = {vgetq_lane_f64(m01, 0), vgetq_lane_f64(m01, 1),
                    vgetq_lane_f64(m23, 0), vgetq_lane_f64(m23, 1)};
  for (std::size_t k = 0, i = body; i < n; ++i, ++k)
    lane[k] = std::fmax(lane[k], std::fabs(a[i] - b[i]));
  return std::fmax(std::fmax(lane[0], lane[1]), std::fmax(lane[2], lane[3]));
}

void scale_neon(std::span<double> x, double s) {
  const std::size_t n = x.size();
  const std::size_t body = n & ~std::size_t{1};
  const float64x2_t vs = vdupq_n_f64(s);
  for (std::size_t i = 0; i < body; i += 2)
    vst1q_f64(x.data() + i, vmulq_f64(vld1q_f64(x.data() + i), vs));
  for (std::size_t i = body; i < n; ++i) x[i] *= s;
}

void add_neon(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{1};
  for (std::size_t i = 0; i < body; i += 2)
    vst1q_f64(dst.data() + i, vaddq_f64(vld1q_f64(dst.data() + i),
                                        vld1q_f64(src.data() + i)));
  for (std::size_t i = body; i < n; ++i) dst[i] += src[i];
}

void mul_neon(std::span<double> dst, std::span<const double> a,
              std::span<const double> b) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{1};
  for (std::size_t i = 0; i < body; i += 2)
    vst1q_f64(dst.data() + i,
              vmulq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i)));
  for (std::size_t i = body; i < n; ++i) dst[i] = a[i] * b[i];
}

void mul_scalar_neon(std::span<double> dst, std::span<const double> src,
                     double s) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{1};
  const float64x2_t vs = vdupq_n_f64(s);
  for (std::size_t i = 0; i < body; i += 2)
    vst1q_f64(dst.data() + i, vmulq_f64(vld1q_f64(src.data() + i), vs));
  for (std::size_t i = body; i < n; ++i) dst[i] = src[i] * s;
}

void axpy_neon(std::span<double> dst, std::span<const double> src, double s) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{1};
  const float64x2_t vs = vdupq_n_f64(s);
  for (std::size_t i = 0; i < body; i += 2) {
    const float64x2_t p = vmulq_f64(vld1q_f64(src.data() + i), vs);
    vst1q_f64(dst.data() + i, vaddq_f64(vld1q_f64(dst.data() + i), p));
  }
  for (std::size_t i = body; i < n; ++i) dst[i] += src[i] * s;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{
      "neon",          sum_neon,    dot_neon,    max_abs_diff_neon,
      scale_neon,      add_neon,    mul_neon,
      mul_scalar_neon, axpy_neon,
  };
  return table;
}

}  // namespace probact::kern

#endif  // __aarch64__
