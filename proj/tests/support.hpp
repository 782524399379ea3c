#pragma once

// Generators and slow reference routines shared by the unit and acceptance
// suites. Nothing here calls the code paths it is used to check.

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "palsum/digits.hpp"
#include "palsum/gadget.hpp"

namespace palsum::testing {

struct Config {
  std::size_t n;
  std::size_t d;
  Base g;
};

// Uniform over (g, d) then over the valid n in [1, n_max].
inline Config random_valid_config(std::mt19937_64& rng, std::size_t n_max, std::size_t d_max,
                                  std::span<const Base> bases) {
  for (;;) {
    const Base g = bases[rng() % bases.size()];
    const std::size_t d = rng() % (d_max + 1);
    const std::size_t n = 1 + rng() % n_max;
    if (valid_config(n, d, g)) return {n, d, g};
  }
}

// Copies the digits of `blk` onto positions [start, start+len) and onto
// their mirrors.
inline DigitVector plant(DigitVector v, std::size_t start, const Block& blk) {
  std::vector<Digit> d(v.digits().begin(), v.digits().end());
  for (std::size_t k = 0; k < blk.size(); ++k) {
    d[start + k] = blk[k];
    d[d.size() - 1 - (start + k)] = blk[k];
  }
  return DigitVector(v.base(), std::move(d));
}

// Random pair with (a, b) planted at each site of `sites`.
inline std::pair<DigitVector, DigitVector> planted_pair(std::mt19937_64& rng, const Config& c,
                                                        const std::vector<std::size_t>& sites) {
  const SwapGadget sg = make_gadget(c.g, c.d);
  DigitVector p = sample_palindrome(c.n, c.g, rng);
  DigitVector q = sample_palindrome(c.n - c.d, c.g, rng);
  for (auto j : sites) {
    p = plant(p, (c.d + 2) * j, sg.a);
    q = plant(q, (c.d + 2) * j, sg.b);
  }
  return {p, q};
}

// Ordered pairs (p, q) in P_n x P_m with p + q = s, by scanning all of P_n.
inline std::uint64_t scan_rep_count(std::uint64_t s, Base g, std::size_t n, std::size_t m) {
  const std::uint64_t lo_m = *checked_pow(g, m - 1);
  const auto hi_m = checked_pow(g, m);
  std::uint64_t count = 0;
  for (std::uint64_t r = 0; r < pal_count(n, g); ++r) {
    const std::uint64_t p = from_digits(pal_unrank(n, g, r));
    if (p >= s) break;
    const std::uint64_t q = s - p;
    if (q < lo_m || (hi_m && q >= *hi_m)) continue;
    const auto qd = to_digits(q, g);
    if (is_palindrome(qd)) ++count;
  }
  return count;
}

}  // namespace palsum::testing
