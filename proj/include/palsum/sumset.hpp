#pragma once

// Exact sumset quantities: the reference oracle for |(P+P) ∩ [X]|, pairwise
// sumsets |P_n + P_m|, representation counts, the per-(n, d) bound audit,
// density measurements and the three-palindrome search.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "palsum/digits.hpp"
#include "palsum/error.hpp"
#include "palsum/sieve.hpp"

namespace palsum {

inline constexpr std::uint64_t oracle_scale_limit = 10'000'000;
inline constexpr std::uint64_t pairwise_pair_limit = 100'000'000;

// Reference count. Finds palindromes by testing every integer below the limit
// with the digit-vector predicate and marks all pair sums in a plain table.
inline SumsetCount brute_force_sumset_count(std::uint64_t limit, Base g) {
  require_base(g);
  if (limit > oracle_scale_limit) {
    throw Error(Errc::scale_exceeded, "oracle supports X <= " + std::to_string(oracle_scale_limit));
  }
  std::vector<std::uint64_t> pals;
  for (std::uint64_t v = 1; v < limit; ++v) {
    if (is_palindrome(to_digits(v, g))) pals.push_back(v);
  }
  std::vector<bool> hit(limit, false);
  for (std::size_t i = 0; i < pals.size(); ++i) {
    for (std::size_t j = i; j < pals.size(); ++j) {
      const std::uint64_t s = pals[i] + pals[j];
      if (s >= limit) break;
      hit[s] = true;
    }
  }
  return {g, limit, static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), true)), CountMethod::oracle};
}

// All of P_n as integers, increasing.
inline std::vector<std::uint64_t> palindromes_of_length(std::size_t n, Base g) {
  const std::uint64_t count = pal_count(n, g);
  if (!checked_pow(g, n)) throw Error(Errc::overflow, "P_" + std::to_string(n) + " exceeds 64-bit values");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  for (std::uint64_t r = 0; r < count; ++r) out.push_back(from_digits(pal_unrank(n, g, r)));
  return out;
}

// |P_n + P_m| by enumeration and deduplication.
inline std::uint64_t pairwise_sumset_size(std::size_t n, std::size_t m, Base g) {
  const uint128 pairs = static_cast<uint128>(pal_count(n, g)) * pal_count(m, g);
  if (pairs > pairwise_pair_limit) {
    throw Error(Errc::scale_exceeded, "|P_n|*|P_m| exceeds " + std::to_string(pairwise_pair_limit));
  }
  const auto pn = palindromes_of_length(n, g);
  const auto pm = palindromes_of_length(m, g);
  const std::uint64_t lo = pn.front() + pm.front();
  const std::uint64_t span = pn.back() + pm.back() - lo + 1;
  if (span <= (std::uint64_t{1} << 31)) {
    BitArray seen(span);
    for (auto p : pn) {
      for (auto q : pm) seen.set(p + q - lo);
    }
    return seen.count();
  }
  std::vector<std::uint64_t> sums;
  sums.reserve(static_cast<std::size_t>(pairs));
  for (auto p : pn) {
    for (auto q : pm) sums.push_back(p + q);
  }
  std::sort(sums.begin(), sums.end());
  return static_cast<std::uint64_t>(std::unique(sums.begin(), sums.end()) - sums.begin());
}

// Unordered pairs {p, q} of palindromes with p + q = s.
inline std::uint64_t rep_count(std::uint64_t s, Base g) {
  require_base(g);
  if (s < 2) return 0;
  std::uint64_t count = 0;
  PalindromeStream stream(s / 2 + 1, g);
  for (auto p : stream) {
    if (is_palindrome_value(s - p, g)) ++count;
  }
  return count;
}

namespace detail {

// Depth-first search over the free half of q. After k levels the low k
// digits of q are fixed, hence the low k digits of p = s - q, hence (by
// symmetry) the top k digits of both. Branches whose known digits cannot
// reach s are cut; each leaf tests s - q for membership in P_n.
class ConstrainedRepCounter {
 public:
  ConstrainedRepCounter(std::uint64_t s, Base g, std::size_t n, std::size_t m)
      : s_(s), g_(g), n_(n), m_(m), q_(m, 0), pow_(std::max(n, m) + 1, 1) {
    for (std::size_t i = 1; i < pow_.size(); ++i) pow_[i] = pow_[i - 1] * g;
  }

  std::uint64_t run() {
    descend(0);
    return count_;
  }

 private:
  // Value of the digits of an L-digit palindrome known after k levels.
  uint128 known_value(std::size_t L, std::size_t k, const std::vector<Digit>& low) const {
    uint128 v = 0;
    for (std::size_t i = 0; i < k && i < L; ++i) {
      v += low[i] * pow_[i];
      if (L - 1 - i >= k) v += low[i] * pow_[L - 1 - i];
    }
    return v;
  }

  uint128 unknown_max(std::size_t L, std::size_t k) const {
    if (L <= 2 * k) return 0;
    return (pow_[L - 2 * k] - 1) * pow_[k];
  }

  bool feasible(std::size_t k) {
    // Low k digits of p follow from those of q.
    uint128 q_low = 0;
    for (std::size_t i = 0; i < k; ++i) q_low += q_[i] * pow_[i];
    uint128 p_low = (static_cast<uint128>(s_) % pow_[k] + pow_[k] - q_low) % pow_[k];
    std::vector<Digit>& p = p_digits_;
    p.assign(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
      p[i] = static_cast<Digit>(p_low % g_);
      p_low /= g_;
    }
    if (k > 0 && p[0] == 0) return false;
    const uint128 known = known_value(n_, k, p) + known_value(m_, k, q_);
    return known <= s_ && s_ <= known + unknown_max(n_, k) + unknown_max(m_, k);
  }

  void descend(std::size_t k) {
    const std::size_t half = (m_ + 1) / 2;
    if (k == half) {
      std::uint64_t q = 0;
      for (std::size_t i = m_; i-- > 0;) q = q * g_ + (i < half ? q_[i] : q_[m_ - 1 - i]);
      if (q > s_) return;
      const std::uint64_t p = s_ - q;
      if (p >= pow_[n_ - 1] && p < pow_[n_] && is_palindrome_value(p, g_)) ++count_;
      return;
    }
    for (Digit digit = (k == 0 ? 1 : 0); digit < g_; ++digit) {
      q_[k] = digit;
      if (feasible(k + 1)) descend(k + 1);
    }
    q_[k] = 0;
  }

  std::uint64_t s_;
  Base g_;
  std::size_t n_;
  std::size_t m_;
  std::vector<Digit> q_;  // low digits of q, index = position
  std::vector<Digit> p_digits_;
  std::vector<uint128> pow_;
  std::uint64_t count_ = 0;
};

// Column-pair recursion over p + q = s with p of length n >= m = length of q
// and d = n - m. Step k fixes p_k and (while k is in the free half of q) q_k,
// then checks column k from below and column n-1-k from above. The state is
// the carry into column k, the carry out of column n-1-k, and the last d free
// digits of q, since column n-1-k reads q_{k-d}. Cost is about
// (n/2) * 4 g^(d+2), independent of how many representations there are.
class CarryRepCounter {
 public:
  CarryRepCounter(std::uint64_t s, Base g, std::size_t n, std::size_t m)
      : g_(g), n_(n), m_(m), d_(n - m), half_q_((m + 1) / 2), s_digits_(n + 1, 0) {
    window_ = 1;
    for (std::size_t i = 0; i < d_; ++i) window_ *= g;
    top_ = window_ / g;
    std::uint64_t v = s;
    for (std::size_t i = 0; i <= n && v > 0; ++i) {
      s_digits_[i] = static_cast<Digit>(v % g);
      v /= g;
    }
    overflow_ = v > 0 || s_digits_[n] > 1;
  }

  static long double cost(Base g, std::size_t n, std::size_t m) {
    return static_cast<long double>(n / 2 + 1) * 4.0L * std::pow(static_cast<long double>(g), n - m + 2.0L);
  }

  std::uint64_t run() {
    if (overflow_) return 0;
    std::vector<std::uint64_t> cur(4 * window_, 0), next(4 * window_, 0);
    cur[index(0, s_digits_[n_], 0)] = 1;
    const std::size_t K = n_ / 2;
    for (std::size_t k = 0; k < K; ++k) {
      std::fill(next.begin(), next.end(), 0);
      for (std::size_t st = 0; st < cur.size(); ++st) {
        if (cur[st] == 0) continue;
        const unsigned cl = static_cast<unsigned>(st / (2 * window_));
        const unsigned ch = static_cast<unsigned>(st / window_ % 2);
        const std::uint64_t mem = st % window_;
        const auto [q_lo, q_hi] = fresh_range(k);
        for (Digit qk = q_lo; qk < q_hi; ++qk) {
          const Digit low_q = q_at(k, k, mem, qk);
          const Digit high_q = q_at(k, n_ - 1 - k, mem, qk);
          const std::uint64_t shifted = d_ == 0 ? 0 : mem / g_ + qk * top_;
          for (Digit pk = (k == 0 ? 1 : 0); pk < g_; ++pk) {
            const unsigned low = pk + low_q + cl;
            if (low % g_ != s_digits_[k]) continue;
            const long long x = static_cast<long long>(s_digits_[n_ - 1 - k]) +
                                static_cast<long long>(g_) * ch - pk - high_q;
            if (x != 0 && x != 1) continue;
            next[index(low / g_, static_cast<unsigned>(x), shifted)] += cur[st];
          }
        }
      }
      std::swap(cur, next);
    }

    std::uint64_t total = 0;
    for (std::size_t st = 0; st < cur.size(); ++st) {
      if (cur[st] == 0) continue;
      const unsigned cl = static_cast<unsigned>(st / (2 * window_));
      const unsigned ch = static_cast<unsigned>(st / window_ % 2);
      const std::uint64_t mem = st % window_;
      if (n_ % 2 == 0) {
        if (cl == ch) total += cur[st];
        continue;
      }
      // Odd n: column K is its own mirror.
      const auto [q_lo, q_hi] = fresh_range(K);
      for (Digit qk = q_lo; qk < q_hi; ++qk) {
        const Digit mid_q = q_at(K, K, mem, qk);
        for (Digit pk = (K == 0 ? 1 : 0); pk < g_; ++pk) {
          if (pk + mid_q + cl == s_digits_[K] + g_ * ch) total += cur[st];
        }
      }
    }
    return total;
  }

 private:
  std::size_t index(unsigned cl, unsigned ch, std::uint64_t mem) const { return (cl * 2 + ch) * window_ + mem; }

  // Values taken by the new free digit q_k, or a single placeholder 0 once
  // the free half of q is exhausted.
  std::pair<Digit, Digit> fresh_range(std::size_t k) const {
    if (k >= half_q_) return {0, 1};
    return {k == 0 ? 1u : 0u, g_};
  }

  // Digit of q in column c during step k; mem holds q_{k-d}, ..., q_{k-1}.
  Digit q_at(std::size_t k, std::size_t c, std::uint64_t mem, Digit qk) const {
    if (c >= m_) return 0;
    const std::size_t j = std::min(c, m_ - 1 - c);
    if (j == k) return qk;
    std::uint64_t w = mem;
    for (std::size_t i = j + d_ - k; i > 0; --i) w /= g_;
    return static_cast<Digit>(w % g_);
  }

  Base g_;
  std::size_t n_;
  std::size_t m_;
  std::size_t d_;
  std::size_t half_q_;
  std::vector<Digit> s_digits_;
  std::uint64_t window_ = 1;
  std::uint64_t top_ = 1;
  bool overflow_ = false;
};

}  // namespace detail

// Ordered pairs (p, q) in P_n x P_m with p + q = s.
inline std::uint64_t rep_count(std::uint64_t s, Base g, std::size_t n, std::size_t m) {
  require_base(g);
  if (n < 1 || m < 1) throw Error(Errc::invalid_length, "palindrome lengths must be at least 1");
  for (auto len : {n, m}) {
    const auto low = checked_pow(g, len - 1);
    if (!low || *low > s) return 0;
  }
  // The count is symmetric in (n, m); both counters want q to be the shorter.
  if (n < m) std::swap(n, m);
  const long double search = std::pow(static_cast<long double>(g), (m + 1) / 2);
  if (detail::CarryRepCounter::cost(g, n, m) <= search) return detail::CarryRepCounter(s, g, n, m).run();
  return detail::ConstrainedRepCounter(s, g, n, m).run();
}

struct BoundAuditRow {
  std::size_t n = 0;
  std::size_t d = 0;
  Base g = 2;
  std::uint64_t exact = 0;
  std::uint64_t trivial = 0;
  long double paper_bound = 0;
  bool holds = false;
};

// 2 exp(-n / (30 (d+2) g^{2d+4})) |P_n| |P_{n-d}|.
inline long double combined_bound(std::size_t n, std::size_t d, Base g, std::uint64_t trivial) {
  const long double scale = 30.0L * static_cast<long double>(d + 2) *
                            std::pow(static_cast<long double>(g), static_cast<long double>(2 * d + 4));
  return 2.0L * std::exp(-static_cast<long double>(n) / scale) * static_cast<long double>(trivial);
}

inline BoundAuditRow bound_audit(std::size_t n, std::size_t d, Base g) {
  if (d >= n) throw Error(Errc::invalid_length, "gap d must be below n");
  BoundAuditRow row;
  row.n = n;
  row.d = d;
  row.g = g;
  row.exact = pairwise_sumset_size(n, n - d, g);
  row.trivial = pal_count(n, g) * pal_count(n - d, g);
  row.paper_bound = combined_bound(n, d, g, row.trivial);
  row.holds = row.exact <= row.trivial && static_cast<long double>(row.exact) <= row.paper_bound;
  return row;
}

// Every (n, d) with n <= n_max whose pair count fits the enumeration limit.
inline std::vector<BoundAuditRow> bound_audit_table(Base g, std::size_t n_max,
                                                    std::uint64_t pair_limit = pairwise_pair_limit) {
  require_base(g);
  std::vector<BoundAuditRow> rows;
  for (std::size_t n = 1; n <= n_max; ++n) {
    for (std::size_t d = 0; d < n; ++d) {
      const auto pn = static_cast<uint128>(pal_count(n, g));
      if (pn * pal_count(n - d, g) > std::min(pair_limit, pairwise_pair_limit)) continue;
      rows.push_back(bound_audit(n, d, g));
    }
  }
  return rows;
}

inline long double default_gamma(Base g) { return 1.0L / (4.0L * std::log(static_cast<long double>(g))); }

// 16 g^{k+1 - gamma ln(k) / 2}, the majorant of the small-m part of the sum.
inline long double small_m_tail_bound(std::size_t k, Base g, long double gamma) {
  require_base(g);
  if (k < 2) throw Error(Errc::config_invalid, "k must be at least 2");
  const long double exponent =
      static_cast<long double>(k + 1) - gamma * std::log(static_cast<long double>(k)) / 2.0L;
  return 16.0L * std::exp(exponent * std::log(static_cast<long double>(g)));
}

inline long double small_m_tail_bound(std::size_t k, Base g) { return small_m_tail_bound(k, g, default_gamma(g)); }

using PalindromeTriple = std::array<std::uint64_t, 3>;

// Three-palindrome search over [3, limit) with precomputed tables.
class ThreePalindromeSearcher {
 public:
  ThreePalindromeSearcher(std::uint64_t limit, Base g, const SieveOptions& opts = {})
      : g_(g), limit_(limit), pals_(palindromes_below(limit, g)), is_pal_(limit, false),
        two_sum_(sieve_sumset_bits(limit, g, opts)) {
    for (auto p : pals_) is_pal_[p] = true;
  }

  // Largest p1 <= s-2 first, then the smallest p2 with s-p1-p2 a palindrome.
  std::optional<PalindromeTriple> witness(std::uint64_t s) const {
    if (s < 3 || s >= limit_) return std::nullopt;
    auto it = std::upper_bound(pals_.begin(), pals_.end(), s - 2);
    while (it != pals_.begin()) {
      const std::uint64_t p1 = *--it;
      const std::uint64_t rest = s - p1;
      if (!two_sum_.test(rest)) continue;
      for (auto p2 : pals_) {
        if (p2 > rest / 2) break;
        if (is_pal_[rest - p2]) return PalindromeTriple{p1, p2, rest - p2};
      }
    }
    return std::nullopt;
  }

  std::uint64_t limit() const noexcept { return limit_; }
  Base base() const noexcept { return g_; }

 private:
  Base g_;
  std::uint64_t limit_;
  std::vector<std::uint64_t> pals_;
  std::vector<bool> is_pal_;
  BitArray two_sum_;
};

// Stand-alone search for a single s, same order as the searcher.
inline std::optional<PalindromeTriple> three_palindrome_witness(std::uint64_t s, Base g) {
  require_base(g);
  if (s < 3) return std::nullopt;
  const auto pals = palindromes_below(s - 1, g);
  for (auto it = pals.rbegin(); it != pals.rend(); ++it) {
    const std::uint64_t rest = s - *it;
    for (auto p2 : pals) {
      if (p2 > rest / 2) break;
      if (is_palindrome_value(rest - p2, g)) return PalindromeTriple{*it, p2, rest - p2};
    }
  }
  return std::nullopt;
}

struct CoverageReport {
  Base g = 2;
  std::uint64_t limit = 0;
  std::uint64_t checked = 0;
  std::vector<std::uint64_t> exceptions;
};

inline CoverageReport three_palindrome_coverage(std::uint64_t limit, Base g, const SieveOptions& opts = {}) {
  if (limit > oracle_scale_limit) {
    throw Error(Errc::scale_exceeded, "three-palindrome coverage supports limits <= " +
                                          std::to_string(oracle_scale_limit));
  }
  CoverageReport report{g, limit, 0, {}};
  if (limit <= 3) return report;
  const ThreePalindromeSearcher searcher(limit, g, opts);
  for (std::uint64_t s = 3; s < limit; ++s) {
    ++report.checked;
    if (!searcher.witness(s)) report.exceptions.push_back(s);
  }
  return report;
}

struct DensityRecord {
  Base g = 2;
  std::size_t k = 0;
  std::uint64_t limit = 0;  // X = g^k
  std::uint64_t count = 0;
  double ratio = 0;
  double lower_comparator = 0;  // exp(-c1 sqrt(ln X))
  double upper_comparator = 0;  // (ln X)^-c
};

struct DensityOptions {
  double c1 = 1.0;
  double c = 0.1;
  SieveOptions sieve;
};

// One sieve below g^k_max; each row is a prefix count of the same table.
inline std::vector<DensityRecord> density_table(Base g, std::size_t k_min, std::size_t k_max,
                                                const DensityOptions& opts = {}) {
  require_base(g);
  if (k_min < 1 || k_min > k_max) throw Error(Errc::config_invalid, "need 1 <= k_min <= k_max");
  const auto top = checked_pow(g, k_max);
  if (!top) throw Error(Errc::overflow, "g^k_max exceeds 64 bits");
  std::vector<std::uint64_t> cuts;
  for (std::size_t k = k_min; k <= k_max; ++k) cuts.push_back(*checked_pow(g, k));
  const auto counts = sieve_prefix_counts(*top, g, cuts, opts.sieve);
  std::vector<DensityRecord> rows;
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    const double log_x = std::log(static_cast<double>(cuts[i]));
    rows.push_back({g, k_min + i, cuts[i], counts[i], static_cast<double>(counts[i]) / static_cast<double>(cuts[i]),
                    std::exp(-opts.c1 * std::sqrt(log_x)), std::pow(log_x, -opts.c)});
  }
  return rows;
}

struct ExponentFit {
  double c = 0;
  double intercept = 0;
  double residual = 0;  // root mean square
  std::size_t points = 0;
};

// Least squares of ln(ratio) = intercept - c ln(ln X).
inline ExponentFit fit_exponent(const std::vector<DensityRecord>& records) {
  if (records.size() < 3) throw Error(Errc::insufficient_data, "need at least 3 density records");
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    const double log_x = std::log(static_cast<double>(r.limit));
    if (r.ratio <= 0 || log_x <= 1.0) {
      throw Error(Errc::insufficient_data, "record k=" + std::to_string(r.k) + " has no usable log-log point");
    }
    xs.push_back(std::log(log_x));
    ys.push_back(std::log(r.ratio));
  }
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (sxx == 0) throw Error(Errc::insufficient_data, "all records share the same X");
  const double slope = sxy / sxx;
  ExponentFit fit{-slope, my - slope * mx, 0, xs.size()};
  double sse = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (fit.intercept + slope * xs[i]);
    sse += e * e;
  }
  fit.residual = std::sqrt(sse / n);
  return fit;
}

}  // namespace palsum
