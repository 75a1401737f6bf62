#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace optstop {

// Sample moments of a vector-valued per-path statistic. Batch means (16 fixed
// batches split by path index) back the standard errors of nonlinear
// post-processing such as Richardson extrapolation.
struct PathStats {
  std::uint64_t n = 0;
  std::vector<double> mean;                     // size k
  std::vector<double> cov;                      // k x k, row major, sample covariance
  std::vector<std::vector<double>> batch_mean;  // n_batches x k

  double se(std::size_t i) const;
  double covariance(std::size_t i, std::size_t j) const { return cov[i * mean.size() + j]; }
  // Standard error of sum_i w_i * stat_i via the covariance matrix.
  double se_of_combination(std::span<const double> w) const;
};

inline constexpr int kStatBatches = 16;

// Evaluates `per_path(path_index, out)` for path_index in [0, n) and reduces
// the results in a fixed block order, so the outcome is byte-identical for any
// worker count. `threads == 0` means hardware concurrency.
PathStats run_paths(std::uint64_t n, std::size_t k, unsigned threads,
                    const std::function<void(std::uint64_t, std::span<double>)>& per_path);

// Resolves threads=0 to the hardware count.
unsigned resolve_threads(unsigned threads);

}  // namespace optstop
