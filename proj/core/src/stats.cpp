#include "optstop/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace optstop {

double PathStats::se(std::size_t i) const {
  if (n < 2) return 0.0;
  const double v = covariance(i, i);
  return v > 0.0 ? std::sqrt(v / static_cast<double>(n)) : 0.0;
}

double PathStats::se_of_combination(std::span<const double> w) const {
  const std::size_t k = mean.size();
  double v = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) v += w[i] * w[j] * covariance(i, j);
  if (n < 2 || v <= 0.0) return 0.0;
  return std::sqrt(v / static_cast<double>(n));
}

unsigned resolve_threads(unsigned threads) {
  if (threads != 0) return threads;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

namespace {

struct BlockSums {
  std::vector<double> sum;    // k
  std::vector<double> cross;  // k x k
};

constexpr std::uint64_t kBlockSize = 8192;

}  // namespace

PathStats run_paths(std::uint64_t n, std::size_t k, unsigned threads,
                    const std::function<void(std::uint64_t, std::span<double>)>& per_path) {
  if (n == 0) throw std::invalid_argument("run_paths: n must be >= 1");
  const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
  std::vector<BlockSums> blocks(n_blocks);

  auto run_block = [&](std::uint64_t blk) {
    BlockSums& bs = blocks[blk];
    bs.sum.assign(k, 0.0);
    bs.cross.assign(k * k, 0.0);
    std::vector<double> stat(k);
    const std::uint64_t lo = blk * kBlockSize;
    const std::uint64_t hi = std::min(n, lo + kBlockSize);
    for (std::uint64_t p = lo; p < hi; ++p) {
      per_path(p, stat);
      for (std::size_t i = 0; i < k; ++i) {
        bs.sum[i] += stat[i];
        for (std::size_t j = i; j < k; ++j) bs.cross[i * k + j] += stat[i] * stat[j];
      }
    }
  };

  const unsigned nw = std::min<std::uint64_t>(resolve_threads(threads), n_blocks);
  if (nw <= 1) {
    for (std::uint64_t blk = 0; blk < n_blocks; ++blk) run_block(blk);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (unsigned w = 0; w < nw; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t blk = next.fetch_add(1);
          if (blk >= n_blocks) return;
          run_block(blk);
        }
      });
    for (auto& t : pool) t.join();
  }

  // Fixed-order reduction: ascending block index, then batch membership by
  // block so the batch means are independent of the worker count too.
  PathStats out;
  out.n = n;
  out.mean.assign(k, 0.0);
  out.cov.assign(k * k, 0.0);
  std::vector<double> total_sum(k, 0.0), total_cross(k * k, 0.0);
  out.batch_mean.assign(kStatBatches, std::vector<double>(k, 0.0));
  std::vector<std::uint64_t> batch_n(kStatBatches, 0);

  for (std::uint64_t blk = 0; blk < n_blocks; ++blk) {
    const int batch = static_cast<int>(blk % kStatBatches);
    const std::uint64_t lo = blk * kBlockSize;
    const std::uint64_t cnt = std::min(n, lo + kBlockSize) - lo;
    batch_n[batch] += cnt;
    for (std::size_t i = 0; i < k; ++i) {
      total_sum[i] += blocks[blk].sum[i];
      out.batch_mean[batch][i] += blocks[blk].sum[i];
      for (std::size_t j = i; j < k; ++j) total_cross[i * k + j] += blocks[blk].cross[i * k + j];
    }
  }

  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < k; ++i) out.mean[i] = total_sum[i] / dn;
  if (n >= 2) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i; j < k; ++j) {
        const double c = (total_cross[i * k + j] - dn * out.mean[i] * out.mean[j]) / (dn - 1.0);
        out.cov[i * k + j] = c;
        out.cov[j * k + i] = c;
      }
  }
  int kept = 0;
  for (int b = 0; b < kStatBatches; ++b) {
    if (batch_n[b] == 0) continue;
    for (std::size_t i = 0; i < k; ++i)
      out.batch_mean[kept][i] = out.batch_mean[b][i] / static_cast<double>(batch_n[b]);
    ++kept;
  }
  out.batch_mean.resize(kept);
  return out;
}

}  // namespace optstop
