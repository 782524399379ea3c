#pragma once

// Exact and Monte Carlo checks on the site count S(p, q) of a uniformly drawn
// pair (p, q) in P_n x P_{n-d}. With all sites inside the free halves, S is a
// sum of t independent indicators of probability g^{-2(d+2)}.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "palsum/digits.hpp"
#include "palsum/error.hpp"
#include "palsum/gadget.hpp"

namespace palsum {

struct Prop1Config {
  std::size_t n = 0;
  std::size_t d = 0;
  Base g = 2;
  std::size_t t = 0;
  long double p_hit = 0;
  long double mu = 0;
  // Largest integer s with s <= mu / 2.
  std::size_t threshold = 0;
  long double chernoff = 0;
};

inline Prop1Config make_prop1_config(std::size_t n, std::size_t d, Base g) {
  if (!valid_config(n, d, g)) {
    throw Error(Errc::config_invalid, "(n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                                          ", g=" + std::to_string(g) + ") has no valid sites");
  }
  Prop1Config cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.g = g;
  cfg.t = block_capacity(n, d);
  cfg.p_hit = std::pow(static_cast<long double>(g), -2.0L * static_cast<long double>(d + 2));
  cfg.mu = static_cast<long double>(cfg.t) * cfg.p_hit;
  // floor(t / (2 g^{2d+4})) in integers; a denominator beyond 64 bits exceeds any t.
  const auto denom = checked_pow(g, 2 * d + 4);
  cfg.threshold = (denom && *denom <= UINT64_MAX / 2) ? cfg.t / (2 * *denom) : 0;
  cfg.chernoff = std::exp(-cfg.mu / 8.0L);
  return cfg;
}

inline long double binomial_pmf(std::size_t t, long double p, std::size_t s) {
  if (p <= 0) return s == 0 ? 1.0L : 0.0L;
  if (p >= 1) return s == t ? 1.0L : 0.0L;
  if (s > t) return 0.0L;
  long double choose = 1;
  for (std::size_t i = 0; i < s; ++i) choose = choose * static_cast<long double>(t - i) / static_cast<long double>(i + 1);
  return choose * std::pow(p, static_cast<long double>(s)) *
         std::exp(static_cast<long double>(t - s) * std::log1p(-p));
}

// Pr[Binomial(t, p) <= threshold].
inline long double exact_binomial_tail(std::size_t t, long double p, std::size_t threshold) {
  long double tail = 0;
  for (std::size_t s = 0; s <= std::min(t, threshold); ++s) tail += binomial_pmf(t, p, s);
  return std::min(tail, 1.0L);
}

inline long double exact_tail(const Prop1Config& cfg) { return exact_binomial_tail(cfg.t, cfg.p_hit, cfg.threshold); }

struct SiteHistogram {
  std::vector<std::uint64_t> counts;  // counts[s] = trials with S = s, s in [0, t]
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  double mean() const {
    double total = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) total += static_cast<double>(s * counts[s]);
    return trials ? total / static_cast<double>(trials) : 0.0;
  }

  friend bool operator==(const SiteHistogram&, const SiteHistogram&) = default;
};

inline constexpr std::uint64_t trials_per_stream = 4096;

// Generator for the c-th block of trials; independent of the worker count.
inline std::mt19937_64 trial_stream(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

// Draws (p, q) uniformly and records S(p, q). The trials are cut into fixed
// blocks with their own generator so the histogram is the same for any
// number of workers.
inline SiteHistogram simulate_S(const Prop1Config& cfg, std::uint64_t trials, std::uint64_t seed,
                                unsigned workers = 1) {
  if (!valid_config(cfg.n, cfg.d, cfg.g)) throw Error(Errc::config_invalid, "invalid Prop1Config");
  if (trials < 1) throw Error(Errc::config_invalid, "trials must be at least 1");
  const SwapGadget sg = make_gadget(cfg.g, cfg.d);
  const std::uint64_t chunks = (trials + trials_per_stream - 1) / trials_per_stream;
  workers = static_cast<unsigned>(std::clamp<std::uint64_t>(workers, 1, chunks));

  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(cfg.t + 1, 0));
  auto run = [&](unsigned w) {
    for (std::uint64_t c = w; c < chunks; c += workers) {
      auto rng = trial_stream(seed, c);
      const std::uint64_t end = std::min(trials, (c + 1) * trials_per_stream);
      for (std::uint64_t i = c * trials_per_stream; i < end; ++i) {
        const auto p = sample_palindrome(cfg.n, cfg.g, rng);
        const auto q = sample_palindrome(cfg.n - cfg.d, cfg.g, rng);
        ++partial[w][match_sites(p, q, sg).S()];
      }
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  SiteHistogram hist{std::vector<std::uint64_t>(cfg.t + 1, 0), trials, seed};
  for (const auto& part : partial) {
    for (std::size_t s = 0; s <= cfg.t; ++s) hist.counts[s] += part[s];
  }
  return hist;
}

struct ChiSquareResult {
  double statistic = 0;
  std::size_t dof = 0;
  double p_value = 1;
  std::size_t bins = 0;
};

// Goodness of fit of a histogram against Binomial(t, p). Neighbouring values
// are pooled from s = 0 upward until each bin expects at least min_expected
// trials; the remainder joins the last bin.
inline ChiSquareResult chi_square_binomial(const SiteHistogram& hist, std::size_t t, long double p,
                                           double min_expected = 5.0) {
  std::vector<double> expected, observed;
  double e_acc = 0, o_acc = 0;
  const double n = static_cast<double>(hist.trials);
  for (std::size_t s = 0; s <= t; ++s) {
    e_acc += n * static_cast<double>(binomial_pmf(t, p, s));
    o_acc += static_cast<double>(s < hist.counts.size() ? hist.counts[s] : 0);
    if (e_acc >= min_expected) {
      expected.push_back(e_acc);
      observed.push_back(o_acc);
      e_acc = o_acc = 0;
    }
  }
  if (!expected.empty()) {
    expected.back() += e_acc;
    observed.back() += o_acc;
  } else {
    expected.push_back(e_acc);
    observed.push_back(o_acc);
  }
  ChiSquareResult res;
  res.bins = expected.size();
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = observed[i] - expected[i];
    res.statistic += diff * diff / expected[i];
  }
  if (res.bins < 2) return res;
  res.dof = res.bins - 1;
  const boost::math::chi_squared dist(static_cast<double>(res.dof));
  res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
  return res;
}

struct Prop1Report {
  Prop1Config cfg;
  long double exact_tail = 0;
  long double chernoff_bound = 0;
  double empirical_tail = 0;
  double standard_error = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool chernoff_holds = false;
  bool empirical_agrees = false;
  bool pass = false;
};

// Passes when the exact tail is below exp(-mu/8) and the simulated tail lies
// within three binomial standard errors of it.
inline Prop1Report prop1_check(const Prop1Config& cfg, std::uint64_t trials, std::uint64_t seed,
                               unsigned workers = 1) {
  const SiteHistogram hist = simulate_S(cfg, trials, seed, workers);
  Prop1Report r;
  r.cfg = cfg;
  r.exact_tail = exact_tail(cfg);
  r.chernoff_bound = cfg.chernoff;
  std::uint64_t low = 0;
  for (std::size_t s = 0; s <= std::min(cfg.threshold, cfg.t); ++s) low += hist.counts[s];
  r.empirical_tail = static_cast<double>(low) / static_cast<double>(trials);
  const double e = static_cast<double>(r.exact_tail);
  r.standard_error = std::sqrt(e * (1.0 - e) / static_cast<double>(trials));
  r.trials = trials;
  r.seed = seed;
  r.chernoff_holds = r.exact_tail <= r.chernoff_bound;
  r.empirical_agrees = std::abs(r.empirical_tail - e) <= 3.0 * r.standard_error;
  r.pass = r.chernoff_holds && r.empirical_agrees;
  return r;
}

}  // namespace palsum
