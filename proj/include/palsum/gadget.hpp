#pragma once

// Digit-block swap gadget.
//
// For a gap d the four blocks have length d+2 (shown most significant first):
//   a  = 1 0...0 1      b  = 0 0...0 0
//   a' = 0 l...l 0      b' = 0...0 1 1      with l = g-1
// They satisfy a + b = a' + b' and g^d r(a) + r(b) = g^d r(a') + r(b'), where
// r reverses at fixed length d+2. Writing a' over an a-block of p (and its
// mirror) while writing b' over the b-block of q at the same positions keeps
// both numbers palindromic and leaves p + q unchanged: the low-side change
// cancels by the first identity, the mirrored side by the second, because the
// mirror offsets of p (length n) and q (length n-d) differ by exactly g^d.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "palsum/digits.hpp"
#include "palsum/error.hpp"

namespace palsum {

struct SwapGadget {
  Base g = 2;
  std::size_t d = 0;
  Block a;
  Block b;
  Block a_prime;
  Block b_prime;

  std::size_t block_length() const noexcept { return d + 2; }
};

inline SwapGadget make_gadget(Base g, std::size_t d) {
  require_base(g);
  const std::size_t len = d + 2;
  std::vector<Digit> a(len, 0), b(len, 0), a_prime(len, g - 1), b_prime(len, 0);
  a.front() = 1;
  a.back() = 1;
  a_prime.front() = 0;
  a_prime.back() = 0;
  b_prime[0] = 1;
  b_prime[1] = 1;
  return {g, d, Block(g, std::move(a)), Block(g, std::move(b)), Block(g, std::move(a_prime)),
          Block(g, std::move(b_prime))};
}

// Both identities, in exact digit-vector arithmetic.
inline bool verify_gadget(const SwapGadget& sg) {
  const std::size_t len = sg.block_length();
  for (const Block* blk : {&sg.a, &sg.b, &sg.a_prime, &sg.b_prime}) {
    if (blk->size() != len || blk->base() != sg.g) return false;
  }
  const bool direct = add(sg.a, sg.b) == add(sg.a_prime, sg.b_prime);
  const bool mirrored = add(shifted(reverse(sg.a), sg.d), reverse(sg.b)) ==
                        add(shifted(reverse(sg.a_prime), sg.d), reverse(sg.b_prime));
  return direct && mirrored;
}

// t = floor(n / (3(d+2))).
constexpr std::size_t block_capacity(std::size_t n, std::size_t d) noexcept { return n / (3 * (d + 2)); }

// Offset of the low digit of site j.
constexpr std::size_t site_start(std::size_t j, std::size_t d) noexcept { return (d + 2) * j; }

// True when all t sites lie below the middle of both p (n digits) and q (n-d
// digits), away from position 0. Sites are then disjoint from each other,
// from their mirrors (including an odd-length middle digit) and from the
// leading digit.
constexpr bool valid_config(std::size_t n, std::size_t d, Base g) noexcept {
  if (g < 2 || n < 1 || d >= n) return false;
  const std::size_t t = block_capacity(n, d);
  if (t < 1) return false;
  const std::size_t highest = site_start(t, d) + d + 1;
  return highest < n / 2 && highest < (n - d) / 2 && site_start(1, d) >= 1;
}

struct SiteReport {
  std::size_t t = 0;
  std::vector<std::size_t> sites;

  std::size_t S() const noexcept { return sites.size(); }
};

struct SwapPlan {
  DigitVector p;
  DigitVector q;
  SwapGadget gadget;
  std::vector<std::size_t> sites;
};

namespace detail {

inline bool block_at(const DigitVector& v, std::size_t start, const Block& blk) {
  for (std::size_t k = 0; k < blk.size(); ++k) {
    if (v[start + k] != blk[k]) return false;
  }
  return true;
}

// Writes blk at start and its mirror image at the symmetric positions.
inline void write_block(DigitVector& v, std::size_t start, const Block& blk) {
  const std::size_t L = v.size();
  for (std::size_t k = 0; k < blk.size(); ++k) {
    v.set(start + k, blk[k]);
    v.set(L - 1 - (start + k), blk[k]);
  }
}

// Returns n after checking the pair against the gadget.
inline std::size_t check_pair(const DigitVector& p, const DigitVector& q, const SwapGadget& sg) {
  if (p.base() != sg.g || q.base() != sg.g) throw Error(Errc::invalid_base, "pair and gadget bases differ");
  const std::size_t n = p.size();
  if (q.size() + sg.d != n) {
    throw Error(Errc::length_mismatch, "q has " + std::to_string(q.size()) + " digits, expected n-d = " +
                                           std::to_string(n >= sg.d ? n - sg.d : 0));
  }
  if (!valid_config(n, sg.d, sg.g)) {
    throw Error(Errc::config_invalid, "(n=" + std::to_string(n) + ", d=" + std::to_string(sg.d) +
                                          ", g=" + std::to_string(sg.g) + ") admits no disjoint sites");
  }
  if (!is_palindrome(p)) throw Error(Errc::not_palindrome, "p = " + p.to_string());
  if (!is_palindrome(q)) throw Error(Errc::not_palindrome, "q = " + q.to_string());
  return n;
}

inline SwapPlan substitute(const SwapPlan& plan, const Block& from_p, const Block& from_q, const Block& to_p,
                           const Block& to_q) {
  const std::size_t n = check_pair(plan.p, plan.q, plan.gadget);
  const std::size_t t = block_capacity(n, plan.gadget.d);
  SwapPlan out = plan;
  for (std::size_t i = 0; i < plan.sites.size(); ++i) {
    const std::size_t j = plan.sites[i];
    if (j < 1 || j > t || (i > 0 && plan.sites[i - 1] >= j)) {
      throw Error(Errc::site_not_matching, "site " + std::to_string(j) + " is out of order or outside [1, " +
                                               std::to_string(t) + "]");
    }
    const std::size_t start = site_start(j, plan.gadget.d);
    if (!block_at(plan.p, start, from_p) || !block_at(plan.q, start, from_q)) {
      throw Error(Errc::site_not_matching, "blocks at site " + std::to_string(j) + " do not match the gadget");
    }
    write_block(out.p, start, to_p);
    write_block(out.q, start, to_q);
  }
  return out;
}

}  // namespace detail

inline SiteReport match_sites(const DigitVector& p, const DigitVector& q, const SwapGadget& sg) {
  const std::size_t n = detail::check_pair(p, q, sg);
  SiteReport report;
  report.t = block_capacity(n, sg.d);
  for (std::size_t j = 1; j <= report.t; ++j) {
    const std::size_t start = site_start(j, sg.d);
    if (detail::block_at(p, start, sg.a) && detail::block_at(q, start, sg.b)) report.sites.push_back(j);
  }
  return report;
}

// Replaces (a, b) by (a', b') at every site of the plan. The returned pair has
// the same lengths, stays palindromic and has the same sum.
inline std::pair<DigitVector, DigitVector> apply_swap(const SwapPlan& plan) {
  const auto& sg = plan.gadget;
  auto out = detail::substitute(plan, sg.a, sg.b, sg.a_prime, sg.b_prime);
  return {std::move(out.p), std::move(out.q)};
}

// Inverse of apply_swap: plan.p, plan.q carry (a', b') at the listed sites.
inline std::pair<DigitVector, DigitVector> revert_swap(const SwapPlan& plan) {
  const auto& sg = plan.gadget;
  auto out = detail::substitute(plan, sg.a_prime, sg.b_prime, sg.a, sg.b);
  return {std::move(out.p), std::move(out.q)};
}

inline constexpr std::uint64_t default_swap_limit = std::uint64_t{1} << 20;

// One pair per subset of the matching sites, in subset-mask order (the
// unswapped pair first).
inline std::vector<std::pair<DigitVector, DigitVector>> enumerate_swaps(const DigitVector& p, const DigitVector& q,
                                                                        const SwapGadget& sg,
                                                                        std::uint64_t limit = default_swap_limit) {
  const SiteReport report = match_sites(p, q, sg);
  const std::size_t S = report.S();
  if (S >= 63 || (std::uint64_t{1} << S) > limit) {
    throw Error(Errc::capacity_exceeded, "2^" + std::to_string(S) + " representations exceed the limit of " +
                                             std::to_string(limit));
  }
  std::vector<std::pair<DigitVector, DigitVector>> out;
  out.reserve(std::size_t{1} << S);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << S); ++mask) {
    SwapPlan plan{p, q, sg, {}};
    for (std::size_t i = 0; i < S; ++i) {
      if (mask >> i & 1) plan.sites.push_back(report.sites[i]);
    }
    out.push_back(apply_swap(plan));
  }
  return out;
}

}  // namespace palsum
