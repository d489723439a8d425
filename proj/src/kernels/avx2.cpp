// AVX2 kernels. Lane k of each vector accumulator holds exactly the scalar
// reference's partial lane k, tails spill into the same lanes, and the final
// combine is (l0+l1)+(l2+l3) — bit-identical to scalar.cpp by construction.
// No FMA: the reference rounds the product before the add.

#if defined(__x86_64__) || defined(_M_X64)

#include "probact/kernels.hpp"

#include <immintrin.h>

#include <cmath>

namespace probact::kern {
namespace {

inline double combine(__m256d acc, std::span<const double> tail_a,
                      std::span<const double> tail_b, bool dot_tail) {
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t k = 0; k < tail_a.size(); ++k)
    lane[k] += dot_tail ? tail_a[k] * tail_b[k] : tail_a[k];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double sum_avx2(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t body = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4)
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(x.data() + i));
  return combine(acc, x.subspan(body), {}, false);
}

double dot_avx2(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t body = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                    _mm256_loadu_pd(b.data() + i));
    acc = _mm256_add_pd(acc, p);
  }
  return combine(acc, a.subspan(body), b.subspan(body), true);
}

double max_abs_diff_avx2(std::span<const double> a,
                         std::span<const double> b) {
  const std::size_t n = a.size();
  const std::size_t body = n & ~std::size_t{3};
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i),
                                    _mm256_loadu_pd(b.data() + i));
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  alignas(32) double lane[4];
  _mm256_store_pd(lane, acc);
  for (std::size_t k = 0, i = body; i < n; ++i, ++k)
    lane[k] = std::fmax(lane[k], std::fabs(a[i] - b[i]));
  return std::fmax(std::fmax(lane[0], lane[1]), std::fmax(lane[2], lane[3]));
}

void scale_avx2(std::span<double> x, double s) {
  const std::size_t n = x.size();
  const std::size_t body = n & ~std::size_t{3};
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t i = 0; i < body; i += 4)
    _mm256_storeu_pd(x.data() + i,
                     _mm256_mul_pd(_mm256_loadu_pd(x.data() + i), vs));
  for (std::size_t i = body; i < n; ++i) x[i] *= s;
}

void add_avx2(std::span<double> dst, std::span<const double> src) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4)
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_add_pd(_mm256_loadu_pd(dst.data() + i),
                                   _mm256_loadu_pd(src.data() + i)));
  for (std::size_t i = body; i < n; ++i) dst[i] += src[i];
}

void mul_avx2(std::span<double> dst, std::span<const double> a,
              std::span<const double> b) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{3};
  for (std::size_t i = 0; i < body; i += 4)
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_mul_pd(_mm256_loadu_pd(a.data() + i),
                                   _mm256_loadu_pd(b.data() + i)));
  for (std::size_t i = body; i < n; ++i) dst[i] = a[i] * b[i];
}

void mul_scalar_avx2(std::span<double> dst, std::span<const double> src,
                     double s) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{3};
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t i = 0; i < body; i += 4)
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_mul_pd(_mm256_loadu_pd(src.data() + i), vs));
  for (std::size_t i = body; i < n; ++i) dst[i] = src[i] * s;
}

void axpy_avx2(std::span<double> dst, std::span<const double> src, double s) {
  const std::size_t n = dst.size();
  const std::size_t body = n & ~std::size_t{3};
  const __m256d vs = _mm256_set1_pd(s);
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(src.data() + i), vs);
    _mm256_storeu_pd(dst.data() + i,
                     _mm256_add_pd(_mm256_loadu_pd(dst.data() + i), p));
  }
  for (std::size_t i = body; i < n; ++i) dst[i] += src[i] * s;
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{
      "avx2",          sum_avx2,    dot_avx2,    max_abs_diff_avx2,
      scale_avx2,      add_avx2,    mul_avx2,
      mul_scalar_avx2, axpy_avx2,
  };
  return table;
}

bool avx2_supported() { return __builtin_cpu_supports("avx2") != 0; }

}  // namespace probact::kern

#endif  // x86_64
