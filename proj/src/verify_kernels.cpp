#include <algorithm>
#include <atomic>
#include <limits>

#include <omp.h>

#include "qpack/verify.hpp"

namespace qpack::kernels {

namespace {

constexpr std::int32_t kNoOwner = std::numeric_limits<std::int32_t>::max();

std::array<std::uint64_t, 4> triple_ranks(const Block& b) noexcept {
  const auto& p = b.points();
  return {rank_triple_unchecked(p[0], p[1], p[2]), rank_triple_unchecked(p[0], p[1], p[3]),
          rank_triple_unchecked(p[0], p[2], p[3]), rank_triple_unchecked(p[1], p[2], p[3])};
}

Triple nth_triple(const Block& b, int k) { return block_triples(b)[static_cast<std::size_t>(k)]; }

void atomic_min(std::atomic<std::int32_t>& slot, std::int32_t value) noexcept {
  std::int32_t cur = slot.load(std::memory_order_relaxed);
  while (value < cur && !slot.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
  }
}

}  // namespace

std::vector<Conflict> find_conflicts_serial(std::uint32_t n, std::span<const Block> blocks) {
  TripleIndex index(n);
  std::vector<Conflict> out;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    auto ranks = triple_ranks(blocks[i]);
    for (int k = 0; k < 4; ++k) {
      std::int32_t prev = index.claim(ranks[k], static_cast<std::int32_t>(i));
      if (prev != TripleIndex::kUncovered) {
        out.push_back({nth_triple(blocks[i], k), static_cast<std::size_t>(prev), i});
      }
    }
  }
  return out;
}

std::vector<Conflict> find_conflicts_parallel(std::uint32_t n, std::span<const Block> blocks) {
  const std::size_t total = triple_count(n);
  const auto count = static_cast<std::int64_t>(blocks.size());
  std::vector<std::atomic<std::int32_t>> owner(total);

#pragma omp parallel for schedule(static)
  for (std::int64_t r = 0; r < static_cast<std::int64_t>(total); ++r) {
    owner[static_cast<std::size_t>(r)].store(kNoOwner, std::memory_order_relaxed);
  }

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    for (auto r : triple_ranks(blocks[static_cast<std::size_t>(i)])) {
      atomic_min(owner[r], static_cast<std::int32_t>(i));
    }
  }

  // (block, slot) keys make the merged order match the serial scan.
  std::vector<std::pair<std::size_t, int>> hits;
#pragma omp parallel
  {
    std::vector<std::pair<std::size_t, int>> local;
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      auto ranks = triple_ranks(blocks[static_cast<std::size_t>(i)]);
      for (int k = 0; k < 4; ++k) {
        if (owner[ranks[k]].load(std::memory_order_relaxed) != i) {
          local.emplace_back(static_cast<std::size_t>(i), k);
        }
      }
    }
#pragma omp critical
    hits.insert(hits.end(), local.begin(), local.end());
  }
  std::sort(hits.begin(), hits.end());

  std::vector<Conflict> out;
  out.reserve(hits.size());
  for (auto [i, k] : hits) {
    auto r = triple_ranks(blocks[i])[static_cast<std::size_t>(k)];
    out.push_back({nth_triple(blocks[i], k),
                   static_cast<std::size_t>(owner[r].load(std::memory_order_relaxed)), i});
  }
  return out;
}

std::vector<std::uint8_t> coverage_serial(std::uint32_t n, std::span<const Block> blocks) {
  std::vector<std::uint8_t> covered(triple_count(n), 0);
  for (const auto& b : blocks) {
    for (auto r : triple_ranks(b)) covered[r] = 1;
  }
  return covered;
}

std::vector<std::uint8_t> coverage_parallel(std::uint32_t n, std::span<const Block> blocks) {
  std::vector<std::uint8_t> covered(triple_count(n), 0);
  const auto count = static_cast<std::int64_t>(blocks.size());
  // Concurrent stores all write the same value 1.
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    for (auto r : triple_ranks(blocks[static_cast<std::size_t>(i)])) {
      std::atomic_ref<std::uint8_t>(covered[r]).store(1, std::memory_order_relaxed);
    }
  }
  return covered;
}

std::vector<Triple> uncovered_serial(std::uint32_t n, std::span<const std::uint8_t> covered) {
  std::vector<Triple> out;
  std::uint64_t r = 0;
  for (Point c = 2; c < n; ++c) {
    for (Point b = 1; b < c; ++b) {
      for (Point a = 0; a < b; ++a, ++r) {
        if (!covered[r]) out.emplace_back(a, b, c);
      }
    }
  }
  return out;
}

std::vector<Triple> uncovered_parallel(std::uint32_t n, std::span<const std::uint8_t> covered) {
  if (n < 3) return {};
  // One bucket per largest point c; concatenating buckets keeps rank order.
  std::vector<std::vector<Triple>> buckets(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t ci = 2; ci < static_cast<std::int64_t>(n); ++ci) {
    const auto c = static_cast<Point>(ci);
    std::uint64_t r = binomial(c, 3);
    auto& bucket = buckets[c];
    for (Point b = 1; b < c; ++b) {
      for (Point a = 0; a < b; ++a, ++r) {
        if (!covered[r]) bucket.emplace_back(a, b, c);
      }
    }
  }
  std::vector<Triple> out;
  for (auto& bucket : buckets) out.insert(out.end(), bucket.begin(), bucket.end());
  return out;
}

}  // namespace qpack::kernels
