#pragma once

// Base-g digit vectors and the palindrome sets P_n.
//
// Digits are stored little-endian: index i carries weight g^i. A string of
// length L mirrors position i onto L-1-i. The canonical form of a number has
// a nonzero most significant digit; zero is the empty vector.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "palsum/error.hpp"

namespace palsum {

using Digit = std::uint32_t;
using Base = std::uint32_t;
using uint128 = unsigned __int128;

inline void require_base(Base g) {
  if (g < 2) throw Error(Errc::invalid_base, "base must be at least 2, got " + std::to_string(g));
}

// g^e, or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> checked_pow(Base g, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (r > UINT64_MAX / g) return std::nullopt;
    r *= g;
  }
  return r;
}

class DigitVector {
 public:
  DigitVector() = default;

  DigitVector(Base g, std::vector<Digit> digits) : base_(g), digits_(std::move(digits)) {
    require_base(g);
    for (std::size_t i = 0; i < digits_.size(); ++i) {
      if (digits_[i] >= g) {
        throw Error(Errc::digit_out_of_range, "digit " + std::to_string(digits_[i]) + " at index " +
                                                  std::to_string(i) + " is not below base " + std::to_string(g));
      }
    }
  }

  // Builds from a most-significant-first list, e.g. {1,0,1} is "101".
  static DigitVector from_msb(Base g, std::vector<Digit> msb_first) {
    std::reverse(msb_first.begin(), msb_first.end());
    return DigitVector(g, std::move(msb_first));
  }

  Base base() const noexcept { return base_; }
  std::size_t size() const noexcept { return digits_.size(); }
  bool empty() const noexcept { return digits_.empty(); }
  Digit operator[](std::size_t i) const { return digits_[i]; }
  std::span<const Digit> digits() const noexcept { return digits_; }

  Digit mirror_of(std::size_t i) const { return digits_[digits_.size() - 1 - i]; }

  bool is_canonical() const noexcept { return digits_.empty() || digits_.back() != 0; }

  // Overwrites position i; the caller keeps digits below the base.
  void set(std::size_t i, Digit d) { digits_.at(i) = d; }

  // Most significant digit first. Bases above 36 use dot-separated decimals.
  std::string to_string() const {
    if (digits_.empty()) return "0";
    std::string out;
    for (auto it = digits_.rbegin(); it != digits_.rend(); ++it) {
      if (base_ <= 36) {
        out.push_back(static_cast<char>(*it < 10 ? '0' + *it : 'a' + (*it - 10)));
      } else {
        if (!out.empty()) out.push_back('.');
        out += std::to_string(*it);
      }
    }
    return out;
  }

  friend bool operator==(const DigitVector&, const DigitVector&) = default;
  friend auto operator<=>(const DigitVector& l, const DigitVector& r) {
    if (auto c = l.base_ <=> r.base_; c != 0) return c;
    return l.digits_ <=> r.digits_;
  }

 private:
  Base base_ = 2;
  std::vector<Digit> digits_;
};

// Fixed-length window; leading zeros are significant.
using Block = DigitVector;

inline DigitVector to_digits(std::uint64_t value, Base g) {
  require_base(g);
  std::vector<Digit> digits;
  while (value != 0) {
    digits.push_back(static_cast<Digit>(value % g));
    value /= g;
  }
  return DigitVector(g, std::move(digits));
}

// Value of v, ignoring leading zeros. Throws Overflow past 64 bits.
inline std::uint64_t from_digits(const DigitVector& v) {
  std::uint64_t value = 0;
  const auto d = v.digits();
  for (auto it = d.rbegin(); it != d.rend(); ++it) {
    const uint128 next = static_cast<uint128>(value) * v.base() + *it;
    if (next > UINT64_MAX) throw Error(Errc::overflow, "value of " + v.to_string() + " exceeds 64 bits");
    value = static_cast<std::uint64_t>(next);
  }
  return value;
}

inline DigitVector reverse(const DigitVector& v) {
  std::vector<Digit> d(v.digits().begin(), v.digits().end());
  std::reverse(d.begin(), d.end());
  return DigitVector(v.base(), std::move(d));
}

inline DigitVector trim_leading_zeros(const DigitVector& v) {
  auto d = v.digits();
  std::size_t len = d.size();
  while (len > 0 && d[len - 1] == 0) --len;
  return DigitVector(v.base(), std::vector<Digit>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(len)));
}

// Zero is not a palindrome: P holds positive integers only.
inline bool is_palindrome(const DigitVector& v) {
  if (v.empty()) return false;
  if (!v.is_canonical()) throw Error(Errc::not_canonical, "leading digit of " + v.to_string() + " is zero");
  const auto d = v.digits();
  return std::equal(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2), d.rbegin());
}

// Integer form of the predicate, for the hot loops of the sumset module.
inline bool is_palindrome_value(std::uint64_t value, Base g) {
  if (value == 0) return false;
  uint128 reversed = 0;
  for (std::uint64_t x = value; x != 0; x /= g) reversed = reversed * g + x % g;
  return reversed == value;
}

inline std::size_t digit_length(std::uint64_t value, Base g) {
  std::size_t n = 0;
  for (; value != 0; value /= g) ++n;
  return n;
}

// Exact sum of two digit vectors of the same base, canonical.
inline DigitVector add(const DigitVector& x, const DigitVector& y) {
  if (x.base() != y.base()) throw Error(Errc::invalid_base, "cannot add digit vectors of different bases");
  const Base g = x.base();
  const std::size_t len = std::max(x.size(), y.size());
  std::vector<Digit> out(len + 1, 0);
  Digit carry = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t s = std::uint64_t{i < x.size() ? x[i] : 0} + (i < y.size() ? y[i] : 0) + carry;
    out[i] = static_cast<Digit>(s % g);
    carry = static_cast<Digit>(s / g);
  }
  out[len] = carry;
  return trim_leading_zeros(DigitVector(g, std::move(out)));
}

// v * g^k.
inline DigitVector shifted(const DigitVector& v, std::size_t k) {
  std::vector<Digit> d(k, 0);
  d.insert(d.end(), v.digits().begin(), v.digits().end());
  return DigitVector(v.base(), std::move(d));
}

// |P_n| = (g-1) g^{ceil(n/2)-1}.
inline std::uint64_t pal_count(std::size_t n, Base g) {
  require_base(g);
  if (n < 1) throw Error(Errc::invalid_length, "palindrome length must be at least 1");
  const auto p = checked_pow(g, (n + 1) / 2 - 1);
  if (!p || *p > UINT64_MAX / (g - 1)) throw Error(Errc::overflow, "|P_n| exceeds 64 bits");
  return (g - 1) * *p;
}

struct PalindromeHandle {
  std::size_t n = 0;
  Base g = 2;
  std::uint64_t rank = 0;

  friend bool operator==(const PalindromeHandle&, const PalindromeHandle&) = default;
};

namespace detail {

// Completes a palindrome of length n from its top half, given
// most-significant-first in `half` (ceil(n/2) digits).
inline DigitVector mirror_half(Base g, std::size_t n, std::span<const Digit> half) {
  std::vector<Digit> d(n);
  for (std::size_t i = 0; i < half.size(); ++i) {
    d[n - 1 - i] = half[i];
    d[i] = half[i];
  }
  return DigitVector(g, std::move(d));
}

}  // namespace detail

// r-th element of P_n in increasing order. The top half, read as a number,
// runs through [g^{h-1}, g^h) in the same order as the palindromes.
inline DigitVector pal_unrank(std::size_t n, Base g, std::uint64_t rank) {
  if (rank >= pal_count(n, g)) {
    throw Error(Errc::rank_out_of_range, "rank " + std::to_string(rank) + " outside P_" + std::to_string(n));
  }
  const std::size_t half = (n + 1) / 2;
  std::vector<Digit> top(half);
  std::uint64_t r = rank;
  for (std::size_t i = half; i-- > 1;) {
    top[i] = static_cast<Digit>(r % g);
    r /= g;
  }
  top[0] = static_cast<Digit>(1 + r);
  return detail::mirror_half(g, n, top);
}

inline PalindromeHandle pal_rank(const DigitVector& v) {
  if (!is_palindrome(v)) throw Error(Errc::not_palindrome, v.to_string() + " is not a palindrome");
  const std::size_t n = v.size();
  const std::size_t half = (n + 1) / 2;
  std::uint64_t rank = v[n - 1] - 1;
  for (std::size_t i = 1; i < half; ++i) rank = rank * v.base() + v[n - 1 - i];
  return {n, v.base(), rank};
}

// Uniform draw from P_n: leading digit from [1, g), the rest of the free half
// i.i.d. from [0, g).
template <class Urbg>
DigitVector sample_palindrome(std::size_t n, Base g, Urbg& rng) {
  require_base(g);
  if (n < 1) throw Error(Errc::invalid_length, "palindrome length must be at least 1");
  const std::size_t half = (n + 1) / 2;
  std::vector<Digit> top(half);
  std::uniform_int_distribution<Digit> lead(1, g - 1);
  std::uniform_int_distribution<Digit> free_digit(0, g - 1);
  top[0] = lead(rng);
  for (std::size_t i = 1; i < half; ++i) top[i] = free_digit(rng);
  return detail::mirror_half(g, n, top);
}

// Increasing stream of every palindrome in [1, limit).
class PalindromeStream {
 public:
  PalindromeStream(std::uint64_t limit, Base g) : limit_(limit), g_(g) {
    require_base(g);
    start_length(1);
  }

  std::optional<std::uint64_t> next() {
    while (!done_) {
      if (top_ == top_end_) {
        if (!start_length(length_ + 1)) break;
        continue;
      }
      const uint128 value = static_cast<uint128>(top_) * low_scale_ + reversed_low(top_ / middle_div_);
      ++top_;
      if (value >= limit_) break;
      return static_cast<std::uint64_t>(value);
    }
    done_ = true;
    return std::nullopt;
  }

  class iterator {
   public:
    using value_type = std::uint64_t;
    using difference_type = std::ptrdiff_t;

    iterator() = default;
    explicit iterator(PalindromeStream* s) : stream_(s) { ++*this; }

    std::uint64_t operator*() const { return current_; }
    iterator& operator++() {
      auto v = stream_->next();
      if (v) current_ = *v;
      else stream_ = nullptr;
      return *this;
    }
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return stream_ == nullptr; }

   private:
    PalindromeStream* stream_ = nullptr;
    std::uint64_t current_ = 0;
  };

  iterator begin() { return iterator(this); }
  std::default_sentinel_t end() { return {}; }

 private:
  bool start_length(std::size_t n) {
    const std::size_t half = (n + 1) / 2;
    const auto lo = checked_pow(g_, half - 1);
    const auto scale = checked_pow(g_, n / 2);
    if (!lo || !scale || limit_ == 0) {
      done_ = true;
      return false;
    }
    const auto hi = checked_pow(g_, half);
    length_ = n;
    top_ = *lo;
    top_end_ = hi ? *hi : UINT64_MAX;
    low_scale_ = *scale;
    middle_div_ = (n % 2 == 1) ? g_ : 1;
    return true;
  }

  uint128 reversed_low(std::uint64_t x) const {
    uint128 r = 0;
    for (; x != 0; x /= g_) r = r * g_ + x % g_;
    return r;
  }

  std::uint64_t limit_;
  Base g_;
  std::size_t length_ = 0;
  std::uint64_t top_ = 0;
  std::uint64_t top_end_ = 0;
  std::uint64_t low_scale_ = 1;
  std::uint64_t middle_div_ = 1;
  bool done_ = false;
};

inline std::vector<std::uint64_t> palindromes_below(std::uint64_t limit, Base g) {
  std::vector<std::uint64_t> out;
  PalindromeStream stream(limit, g);
  for (auto v : stream) out.push_back(v);
  return out;
}

}  // namespace palsum
