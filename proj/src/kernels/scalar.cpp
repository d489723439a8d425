// Scalar reference kernels. These define the arithmetic contract: reductions
// accumulate into four partial lanes (lane k takes elements with index = k
// mod 4) and combine as (l0+l1)+(l2+l3). SIMD variants reproduce the exact
// same operation order, so results match bit-for-bit. Built with
// -ffp-contract=off; do not hand-fuse multiply-adds here.

#include "probact/kernels.hpp"

#include <cmath>

namespace probact::kern {
namespace {

double sum_scalar(std::span<const double> x) {
  const std::size_t n = x.size();
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += x[i];
    lane[1] += x[i + 1];
    lane[2] += x[i + 2];
    lane[3] += x[i + 3];
  }
  for (std::size_t k = 0; i < n; ++i, ++k) lane[k] += x[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double dot_scalar(std::span<const double> a, std::span<const double> b) {
  const std::size_t n = a.size();
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] += a[i] * b[i];
    lane[1] += a[i + 1] * b[i + 1];
    lane[2] += a[i + 2] * b[i + 2];
    lane[3] += a[i + 3] * b[i + 3];
  }
  for (std::size_t k = 0; i < n; ++i, ++k) lane[k] += a[i] * b[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

double max_abs_diff_scalar(std::span<const double> a,
                           std::span<const double> b) {
  const std::size_t n = a.size();
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    lane[0] = std::fmax(lane[0], std::fabs(a[i] - b[i]));
    lane[1] = std::fmax(lane[1], std::fabs(a[i + 1] - b[i + 1]));
    lane[2] = std::fmax(lane[2], std::fabs(a[i + 2] - b[i + 2]));
    lane[3] = std::fmax(lane[3], std::fabs(a[i + 3] - b[i + 3]));
  }
  for (std::size_t k = 0; i < n; ++i, ++k)
    lane[k] = std::fmax(lane[k], std::fabs(a[i] - b[i]));
  return std::fmax(std::fmax(lane[0], lane[1]), std::fmax(lane[2], lane[3]));
}

void scale_scalar(std::span<double> x, double s) {
  for (double& v : x) v *= s;
}

void add_scalar(std::span<double> dst, std::span<const double> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

void mul_scalar_kernel(std::span<double> dst, std::span<const double> a,
                       std::span<const double> b) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a[i] * b[i];
}

void mul_by_scalar(std::span<double> dst, std::span<const double> src,
                   double s) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] * s;
}

void axpy_scalar(std::span<double> dst, std::span<const double> src,
                 double s) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i] * s;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",        sum_scalar,    dot_scalar,    max_abs_diff_scalar,
      scale_scalar,    add_scalar,    mul_scalar_kernel,
      mul_by_scalar,   axpy_scalar,
  };
  return table;
}

}  // namespace probact::kern
