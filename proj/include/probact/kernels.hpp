#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

// Dense double-precision primitives behind the factor-table math.
//
// Every variant computes bit-identical results to the scalar reference:
// reductions use a fixed 4-lane partial-accumulator scheme and the kernel
// translation units are built with FP contraction off, so runtime dispatch
// never changes a single output bit. Serialized results are byte-exact
// golden files, which makes this a hard requirement, not a nicety.

namespace probact::kern {

struct KernelTable {
  std::string_view name;

  // sum of x
  double (*sum)(std::span<const double> x);
  // dot product of a and b (equal lengths)
  double (*dot)(std::span<const double> a, std::span<const double> b);
  // max_i |a[i] - b[i]| (equal lengths; 0 for empty)
  double (*max_abs_diff)(std::span<const double> a, std::span<const double> b);
  // x[i] *= s
  void (*scale)(std::span<double> x, double s);
  // dst[i] += src[i]
  void (*add)(std::span<double> dst, std::span<const double> src);
  // dst[i] = a[i] * b[i]
  void (*mul)(std::span<double> dst, std::span<const double> a,
              std::span<const double> b);
  // dst[i] = src[i] * s
  void (*mul_scalar)(std::span<double> dst, std::span<const double> src,
                     double s);
  // dst[i] += src[i] * s
  void (*axpy)(std::span<double> dst, std::span<const double> src, double s);
};

const KernelTable& scalar_table();

#if defined(__x86_64__) || defined(_M_X64)
#define PROBACT_HAVE_AVX2_KERNELS 1
const KernelTable& avx2_table();
bool avx2_supported();
#endif

#if defined(__aarch64__)
#define PROBACT_HAVE_NEON_KERNELS 1
const KernelTable& neon_table();
#endif

// All tables compiled into this binary, scalar first.
std::vector<const KernelTable*> available_tables();

// Table selected once per process: best supported variant, or the one named
// by PROBACT_KERNELS (scalar|avx2|neon). An unusable request falls back to
// scalar.
const KernelTable& active();

inline double sum(std::span<const double> x) { return active().sum(x); }
inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a, b);
}
inline double max_abs_diff(std::span<const double> a,
                           std::span<const double> b) {
  return active().max_abs_diff(a, b);
}
inline void scale(std::span<double> x, double s) { active().scale(x, s); }
inline void add(std::span<double> dst, std::span<const double> src) {
  active().add(dst, src);
}
inline void mul(std::span<double> dst, std::span<const double> a,
                std::span<const double> b) {
  active().mul(dst, a, b);
}
inline void mul_scalar(std::span<double> dst, std::span<const double> src,
                       double s) {
  active().mul_scalar(dst, src, s);
}
inline void axpy(std::span<double> dst, std::span<const double> src,
                 double s) {
  active().axpy(dst, src, s);
}

}  // namespace probact::kern
