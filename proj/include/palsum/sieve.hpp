#pragma once

// Bit-array sieve for (P+P) ∩ [X].
//
// The outer loop runs over palindromes p < X, the inner loop over palindromes
// q <= p with p + q inside the current window. The outer loop is cut into
// contiguous ranges of roughly equal pair count; each worker marks a private
// shard and the shards are OR-merged before counting. When one window over
// [0, X) does not fit the memory budget, [0, X) is processed in windows and
// every window re-scans the pairs landing in it.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "palsum/digits.hpp"
#include "palsum/error.hpp"

namespace palsum {

class BitArray {
 public:
  BitArray() = default;
  explicit BitArray(std::uint64_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::uint64_t size() const noexcept { return bits_; }
  std::uint64_t bytes() const noexcept { return words_.size() * sizeof(std::uint64_t); }

  void set(std::uint64_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  bool test(std::uint64_t i) const noexcept { return words_[i >> 6] >> (i & 63) & 1; }
  void clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

  std::uint64_t* data() noexcept { return words_.data(); }

  BitArray& operator|=(const BitArray& other) noexcept {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    return *this;
  }

  std::uint64_t count() const noexcept { return count_below(bits_); }

  // Set bits with index < end.
  std::uint64_t count_below(std::uint64_t end) const noexcept {
    end = std::min(end, bits_);
    std::uint64_t total = 0;
    const std::uint64_t full = end >> 6;
    for (std::uint64_t w = 0; w < full; ++w) total += static_cast<std::uint64_t>(std::popcount(words_[w]));
    if (const auto rem = end & 63) {
      total += static_cast<std::uint64_t>(std::popcount(words_[full] & ((std::uint64_t{1} << rem) - 1)));
    }
    return total;
  }

 private:
  std::uint64_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

inline constexpr std::uint64_t default_memory_budget = std::uint64_t{2} << 30;

// PALSUM_MEMORY_BUDGET (bytes) overrides the 2 GiB default.
inline std::uint64_t memory_budget_from_env() {
  if (const char* env = std::getenv("PALSUM_MEMORY_BUDGET")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return default_memory_budget;
}

struct SieveOptions {
  unsigned workers = 1;
  std::uint64_t memory_budget = default_memory_budget;
  // 0 picks the largest window the budget allows.
  std::uint64_t window_bits = 0;
};

struct SievePlan {
  std::uint64_t limit = 0;
  std::size_t palindromes = 0;
  std::uint64_t window_bits = 0;
  std::uint64_t windows = 0;
  unsigned workers = 1;
  std::uint64_t bytes = 0;  // palindrome list plus all shards
};

enum class CountMethod { oracle, sieve };

struct SumsetCount {
  Base g = 2;
  std::uint64_t limit = 0;
  std::uint64_t count = 0;
  CountMethod method = CountMethod::sieve;
};

namespace detail {

inline constexpr std::uint64_t min_window_bits = std::uint64_t{1} << 16;

inline SievePlan plan_sieve(std::uint64_t limit, std::size_t palindromes, const SieveOptions& opts) {
  SievePlan plan;
  plan.limit = limit;
  plan.palindromes = palindromes;
  plan.workers = std::max(1u, opts.workers);
  const std::uint64_t list_bytes = palindromes * sizeof(std::uint64_t);
  const auto shard_bytes = [](std::uint64_t bits) { return (bits + 63) / 64 * 8; };
  if (limit == 0) {
    plan.bytes = list_bytes;
    return plan;
  }
  std::uint64_t window = opts.window_bits;
  if (window == 0) {
    if (opts.memory_budget > list_bytes) {
      const std::uint64_t per_shard = (opts.memory_budget - list_bytes) / plan.workers;
      window = per_shard / 8 * 64;
    }
    window = std::min(window, (limit + 63) / 64 * 64);
    if (window < std::min(limit, min_window_bits)) window = 0;
  }
  window = std::min(window, limit);
  plan.window_bits = window;
  plan.bytes = list_bytes + plan.workers * shard_bytes(window);
  if (window == 0 || plan.bytes > opts.memory_budget) {
    throw Error(Errc::memory_budget_exceeded,
                "sieve below " + std::to_string(limit) + " needs at least " +
                    std::to_string(list_bytes + plan.workers * shard_bytes(std::min(limit, min_window_bits))) +
                    " bytes, budget is " + std::to_string(opts.memory_budget));
  }
  plan.windows = (limit + window - 1) / window;
  return plan;
}

// Index range [first, last) of q in the sorted list with lo <= p + q < hi and q <= p.
struct InnerRange {
  std::size_t first;
  std::size_t last;
};

inline InnerRange inner_range(const std::vector<std::uint64_t>& pals, std::size_t i, std::uint64_t lo,
                              std::uint64_t hi) {
  const std::uint64_t p = pals[i];
  const auto begin = pals.begin();
  const auto end = begin + static_cast<std::ptrdiff_t>(i + 1);
  if (p >= hi) return {0, 0};
  const std::uint64_t q_lo = lo > p ? lo - p : 0;
  const std::uint64_t q_hi = hi - p;  // exclusive
  const auto first = std::lower_bound(begin, end, q_lo);
  const auto last = std::lower_bound(first, end, q_hi);
  return {static_cast<std::size_t>(first - begin), static_cast<std::size_t>(last - begin)};
}

inline void mark_range(const std::vector<std::uint64_t>& pals, std::size_t i_begin, std::size_t i_end,
                       std::uint64_t lo, std::uint64_t hi, BitArray& shard) {
  std::uint64_t* words = shard.data();
  for (std::size_t i = i_begin; i < i_end; ++i) {
    const auto [first, last] = inner_range(pals, i, lo, hi);
    const std::uint64_t offset = pals[i] - lo;
    for (std::size_t j = first; j < last; ++j) {
      const std::uint64_t s = offset + pals[j];
      words[s >> 6] |= std::uint64_t{1} << (s & 63);
    }
  }
}

// Splits the outer index range into `parts` contiguous pieces of similar pair count.
inline std::vector<std::size_t> balance(const std::vector<std::uint64_t>& pals, std::uint64_t lo, std::uint64_t hi,
                                        unsigned parts) {
  std::vector<std::uint64_t> prefix(pals.size() + 1, 0);
  for (std::size_t i = 0; i < pals.size(); ++i) {
    const auto r = inner_range(pals, i, lo, hi);
    prefix[i + 1] = prefix[i] + (r.last - r.first) + 1;
  }
  std::vector<std::size_t> cuts{0};
  for (unsigned k = 1; k < parts; ++k) {
    const std::uint64_t target = prefix.back() * k / parts;
    const auto it = std::lower_bound(prefix.begin(), prefix.end(), target);
    cuts.push_back(std::max(cuts.back(), static_cast<std::size_t>(it - prefix.begin())));
  }
  cuts.push_back(pals.size());
  return cuts;
}

}  // namespace detail

inline SievePlan plan_sieve(std::uint64_t limit, Base g, const SieveOptions& opts = {}) {
  require_base(g);
  return detail::plan_sieve(limit, palindromes_below(limit, g).size(), opts);
}

// Calls on_window(lo, bits) for consecutive windows covering [0, limit);
// bit i of `bits` stands for lo + i.
template <class OnWindow>
SievePlan sieve_windows(std::uint64_t limit, Base g, const SieveOptions& opts, OnWindow&& on_window) {
  require_base(g);
  const std::vector<std::uint64_t> pals = palindromes_below(limit, g);
  const SievePlan plan = detail::plan_sieve(limit, pals.size(), opts);
  if (plan.windows == 0) return plan;

  std::vector<BitArray> shards;
  for (unsigned w = 0; w < plan.workers; ++w) shards.emplace_back(plan.window_bits);

  for (std::uint64_t lo = 0; lo < limit; lo += plan.window_bits) {
    const std::uint64_t hi = std::min(limit, lo + plan.window_bits);
    if (plan.workers == 1) {
      shards[0].clear();
      detail::mark_range(pals, 0, pals.size(), lo, hi, shards[0]);
    } else {
      const auto cuts = detail::balance(pals, lo, hi, plan.workers);
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < plan.workers; ++w) {
        threads.emplace_back([&, w] {
          shards[w].clear();
          detail::mark_range(pals, cuts[w], cuts[w + 1], lo, hi, shards[w]);
        });
      }
      threads.clear();
      for (unsigned w = 1; w < plan.workers; ++w) shards[0] |= shards[w];
    }
    on_window(lo, hi, shards[0]);
  }
  return plan;
}

inline SumsetCount sieve_sumset(std::uint64_t limit, Base g, const SieveOptions& opts = {}) {
  std::uint64_t count = 0;
  sieve_windows(limit, g, opts, [&](std::uint64_t lo, std::uint64_t hi, const BitArray& bits) {
    count += bits.count_below(hi - lo);
  });
  return {g, limit, count, CountMethod::sieve};
}

// |(P+P) ∩ [c]| for every cutpoint c <= limit, from a single sieve below limit.
inline std::vector<std::uint64_t> sieve_prefix_counts(std::uint64_t limit, Base g,
                                                      const std::vector<std::uint64_t>& cutpoints,
                                                      const SieveOptions& opts = {}) {
  for (auto c : cutpoints) {
    if (c > limit) throw Error(Errc::config_invalid, "cutpoint " + std::to_string(c) + " beyond sieve limit");
  }
  std::vector<std::uint64_t> counts(cutpoints.size(), 0);
  sieve_windows(limit, g, opts, [&](std::uint64_t lo, std::uint64_t hi, const BitArray& bits) {
    for (std::size_t k = 0; k < cutpoints.size(); ++k) {
      if (cutpoints[k] > lo) counts[k] += bits.count_below(std::min(cutpoints[k], hi) - lo);
    }
  });
  return counts;
}

// Whole membership table of (P+P) ∩ [limit]; needs a single window.
inline BitArray sieve_sumset_bits(std::uint64_t limit, Base g, const SieveOptions& opts = {}) {
  BitArray out(limit);
  SieveOptions single = opts;
  single.window_bits = std::max<std::uint64_t>(limit, 1);
  sieve_windows(limit, g, single, [&](std::uint64_t, std::uint64_t, const BitArray& bits) { out = bits; });
  return out;
}

}  // namespace palsum
