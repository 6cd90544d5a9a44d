#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

namespace carl {

/// Execution policy for node loops. The serial path is the reference used in tests.
enum class Exec { serial, parallel };

void set_thread_count(int threads);

namespace kernels {

inline constexpr std::size_t kBlock = 4096;

struct MinLoc {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = 0;
};

inline void merge_min(MinLoc& acc, const MinLoc& x) {
  if (x.value < acc.value || (x.value == acc.value && x.index < acc.index)) acc = x;
}

/// Minimum of f(i) over [0, n) with ties broken by the lowest index.
/// The result does not depend on the thread count.
template <class F>
MinLoc min_scan(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  MinLoc best;
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) merge_min(best, MinLoc{f(i), i});
    return best;
  }
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<MinLoc> part(nb);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    MinLoc m;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) merge_min(m, MinLoc{f(i), i});
    part[b] = m;
  }
  for (const auto& m : part) merge_min(best, m);
  return best;
}

/// Sum of f(i) over [0, n). The parallel path sums fixed blocks and then the block
/// totals in order, so it is bitwise reproducible for any thread count.
template <class F>
double sum(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  if (exec == Exec::serial) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += f(i);
    return s;
  }
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    double s = 0.0;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) s += f(i);
    part[b] = s;
  }
  double s = 0.0;
  for (double p : part) s += p;
  return s;
}

/// out[i] = f(i) for every i; iterations write disjoint entries.
template <class F>
void for_each(std::size_t n, F&& f, Exec exec = Exec::parallel) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) f(static_cast<std::size_t>(i));
}

}  // namespace kernels
}  // namespace carl
