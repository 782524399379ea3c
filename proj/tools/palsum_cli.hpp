#pragma once

// Command-line front end. Exit codes: 0 success, 2 usage or configuration
// error, 3 verification or statistical failure, 4 resource budget.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "palsum/palsum.hpp"

namespace palsum::cli {

enum ExitCode : int { ok = 0, usage = 2, verification = 3, resource = 4 };

enum class Format { plain, csv, json };

struct RunConfig {
  Base g = 10;
  Format format = Format::plain;
  std::string output;
  std::uint64_t seed = 1;
  std::uint64_t memory_budget = default_memory_budget;
  unsigned workers = 1;
  bool digits = false;

  SieveOptions sieve() const { return {workers, memory_budget, 0}; }
};

inline int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::memory_budget_exceeded:
    case Errc::scale_exceeded:
    case Errc::capacity_exceeded:
      return resource;
    default:
      return usage;
  }
}

class App {
 public:
  App(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(int argc, const char* const* argv) {
    CLI::App app{"Base-g palindrome sums: enumeration, swap gadget, sumset sieve and tail checks", "palsum"};
    app.require_subcommand(1);
    cfg_.memory_budget = memory_budget_from_env();

    auto* gen = add_command(app, "gen", "list palindromes of one length or below a bound");
    gen->add_option("--length,-n", length_, "digit length n")->check(CLI::PositiveNumber);
    gen->add_option("--upto,-X", upto_, "exclusive upper bound X");

    auto* count = add_command(app, "count", "count (P+P) below X with the bit-array sieve");
    count->add_option("--upto,-X", upto_, "exclusive upper bound X")->required();
    count->add_flag("--verify", verify_, "cross-check against the reference oracle (X <= 10^6)");

    auto* density = add_command(app, "density", "density table |(P+P) ∩ [g^k]| / g^k");
    add_density_options(density);
    density->add_flag("--fit", fit_, "also report the fitted exponent on standard error");

    auto* fit = add_command(app, "fit", "fit ratio ~ (log X)^-c to a density table");
    add_density_options(fit);
    fit->add_flag("--self-test", self_test_, "recover synthetic exponents instead of measuring");

    auto* swap = add_command(app, "swap-demo", "sample a palindrome pair and apply the swap gadget");
    swap->add_option("--gap,-d", gap_, "length gap d = n - m")->required();
    swap->add_option("--length,-n", length_, "length n of p")->required();
    swap->add_option("--p", p_value_, "use this palindrome for p instead of sampling");
    swap->add_option("--q", q_value_, "use this palindrome for q instead of sampling");
    swap->add_flag("--all-subsets", all_subsets_, "print all 2^S representations (S <= 10)");

    auto* prop1 = add_command(app, "prop1", "exact and simulated tail of S(p, q)");
    prop1->add_option("--gap,-d", gap_, "length gap d")->required();
    prop1->add_option("--length,-n", length_, "length n of p")->required();
    prop1->add_option("--trials", trials_, "Monte Carlo trials")->check(CLI::PositiveNumber);

    auto* three = add_command(app, "three-pal", "search three-palindrome witnesses for every s in [3, X)");
    three->add_option("--upto,-X", upto_, "exclusive upper bound X (<= 10^7)")->required();

    auto* audit = add_command(app, "bound-audit", "exact |P_n + P_{n-d}| against the trivial and combined bounds");
    audit->add_option("--nmax", n_max_, "largest n")->required();
    audit->add_option("--pair-limit", pair_limit_, "skip rows with more pairs than this");

    auto* gverify = add_command(app, "gadget-verify", "check the gadget identities on a grid of (g, d)");
    gverify->add_option("--gmax", g_max_, "largest base (from --base)");
    gverify->add_option("--dmax", d_max_, "largest gap (from 0)");

    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      out_ << app.help();
      return ok;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << '\n';
      return usage;
    }

    std::ofstream file;
    if (!cfg_.output.empty()) {
      file.open(cfg_.output);
      if (!file) {
        err_ << "error: cannot open " << cfg_.output << '\n';
        return usage;
      }
    }
    std::ostream& os = cfg_.output.empty() ? out_ : file;

    try {
      if (*gen) return cmd_gen(os);
      if (*count) return cmd_count(os);
      if (*density) return cmd_density(os);
      if (*fit) return cmd_fit(os);
      if (*swap) return cmd_swap_demo(os);
      if (*prop1) return cmd_prop1(os);
      if (*three) return cmd_three_pal(os);
      if (*audit) return cmd_bound_audit(os);
      if (*gverify) return cmd_gadget_verify(os);
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return exit_code_for(e);
    }
    return usage;
  }

 private:
  CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--base,-g", cfg_.g, "base g >= 2")->check(CLI::Range(2u, 1u << 16));
    const std::map<std::string, Format> formats{{"plain", Format::plain}, {"csv", Format::csv}, {"json", Format::json}};
    sub->add_option("--format", cfg_.format, "plain, csv or json")->transform(CLI::CheckedTransformer(formats));
    sub->add_option("--output,-o", cfg_.output, "write to a file instead of standard output");
    sub->add_option("--seed", cfg_.seed, "64-bit seed");
    sub->add_option("--memory-budget", cfg_.memory_budget, "bytes (default PALSUM_MEMORY_BUDGET or 2 GiB)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--workers,-j", cfg_.workers, "worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_flag("--digits", cfg_.digits, "also print base-g digit strings");
    return sub;
  }

  void add_density_options(CLI::App* sub) {
    sub->add_option("--kmin", k_min_, "smallest k")->required();
    sub->add_option("--kmax", k_max_, "largest k")->required();
    sub->add_option("--c1", c1_, "constant of the lower comparator exp(-c1 sqrt(log X))");
    sub->add_option("--c", c_, "exponent of the upper comparator (log X)^-c");
  }

  std::string number(std::uint64_t v) const {
    std::string s = std::to_string(v);
    if (cfg_.digits) s += " [" + to_digits(v, cfg_.g).to_string() + "]_" + std::to_string(cfg_.g);
    return s;
  }

  std::string number(const DigitVector& v) const {
    std::string s;
    try {
      s = std::to_string(from_digits(v));
    } catch (const Error&) {
      s = "(" + std::to_string(v.size()) + "-digit)";
    }
    if (cfg_.digits || s.front() == '(') s += " [" + v.to_string() + "]_" + std::to_string(v.base());
    return s;
  }

  int cmd_gen(std::ostream& os) {
    if (length_ == 0 && upto_ == 0) {
      err_ << "error: gen needs --length or --upto\n";
      return usage;
    }
    std::vector<std::uint64_t> values;
    if (length_ != 0) {
      values = palindromes_of_length(length_, cfg_.g);
    } else {
      values = palindromes_below(upto_, cfg_.g);
    }
    if (cfg_.format == Format::json) {
      nlohmann::ordered_json j{{"g", cfg_.g}, {"palindromes", values}, {"count", values.size()}};
      if (cfg_.digits) {
        auto strs = nlohmann::json::array();
        for (auto v : values) strs.push_back(to_digits(v, cfg_.g).to_string());
        j["digits"] = strs;
      }
      os << j.dump() << '\n';
    } else if (cfg_.format == Format::csv) {
      os << (cfg_.digits ? "value,digits\n" : "value\n");
      for (auto v : values) {
        os << v;
        if (cfg_.digits) os << ',' << to_digits(v, cfg_.g).to_string();
        os << '\n';
      }
    } else {
      for (auto v : values) os << number(v) << '\n';
      os << "count " << values.size() << '\n';
    }
    return ok;
  }

  int cmd_count(std::ostream& os) {
    const SumsetCount sieve = sieve_sumset(upto_, cfg_.g, cfg_.sieve());
    std::optional<SumsetCount> oracle;
    if (verify_) {
      if (upto_ > 1'000'000) {
        err_ << "error: --verify supports X <= 10^6\n";
        return usage;
      }
      oracle = brute_force_sumset_count(upto_, cfg_.g);
    }
    const bool agree = !oracle || oracle->count == sieve.count;
    if (cfg_.format == Format::json) {
      nlohmann::ordered_json j{{"g", cfg_.g}, {"X", upto_}, {"count", sieve.count}, {"method", "sieve"}};
      if (oracle) {
        j["oracle_count"] = oracle->count;
        j["verified"] = agree;
      }
      os << j.dump() << '\n';
    } else if (cfg_.format == Format::csv) {
      os << "g,X,count,method\n" << cfg_.g << ',' << upto_ << ',' << sieve.count << ",sieve\n";
      if (oracle) os << cfg_.g << ',' << upto_ << ',' << oracle->count << ",oracle\n";
    } else {
      os << "g " << cfg_.g << "\nX " << upto_ << "\ncount " << sieve.count << '\n';
      if (oracle) os << (agree ? "verified" : "MISMATCH") << " oracle " << oracle->count << '\n';
    }
    return agree ? ok : verification;
  }

  std::vector<DensityRecord> density_rows() {
    if (k_min_ > k_max_) throw Error(Errc::config_invalid, "empty range: kmin > kmax");
    DensityOptions opts;
    opts.c1 = c1_;
    opts.c = c_;
    opts.sieve = cfg_.sieve();
    return density_table(cfg_.g, k_min_, k_max_, opts);
  }

  void print_fit(std::ostream& os, const ExponentFit& fit) {
    if (cfg_.format == Format::json) {
      os << nlohmann::ordered_json{{"c_hat", fit.c},
                                   {"intercept", fit.intercept},
                                   {"residual", fit.residual},
                                   {"points", fit.points},
                                   {"reference_c", {0.1, 0.25}}}
                .dump()
         << '\n';
    } else {
      os << "c_hat " << format_real(fit.c) << "\nintercept " << format_real(fit.intercept) << "\nresidual "
         << format_real(fit.residual) << "\npoints " << fit.points << "\nreference_c 0.1 0.25\n";
    }
  }

  int cmd_density(std::ostream& os) {
    const auto rows = density_rows();
    if (cfg_.format == Format::json) {
      os << density_json(rows).dump() << '\n';
    } else {
      write_density_csv(os, rows);
    }
    if (fit_) print_fit(err_, fit_exponent(rows));
    return ok;
  }

  int cmd_fit(std::ostream& os) {
    if (!self_test_) {
      print_fit(os, fit_exponent(density_rows()));
      return ok;
    }
    bool all = true;
    for (double c : {0.0, 0.1, 0.25, 0.5}) {
      std::vector<DensityRecord> synthetic;
      for (std::size_t k = 8; k <= 30; ++k) {
        const std::uint64_t x = std::uint64_t{1} << k;
        synthetic.push_back({2, k, x, 0, std::pow(std::log(static_cast<double>(x)), -c), 0, 0});
      }
      const auto fit = fit_exponent(synthetic);
      const bool good = std::abs(fit.c - c) <= 1e-6;
      all = all && good;
      os << "synthetic c " << c << " recovered " << format_real(fit.c) << (good ? " ok" : " FAIL") << '\n';
    }
    return all ? ok : verification;
  }

  int cmd_swap_demo(std::ostream& os) {
    const std::size_t n = length_;
    const std::size_t d = gap_;
    if (!valid_config(n, d, cfg_.g)) {
      err_ << "error: (n=" << n << ", d=" << d << ", g=" << cfg_.g << ") has no valid sites\n";
      return usage;
    }
    std::mt19937_64 rng(cfg_.seed);
    const DigitVector p = p_value_ ? to_digits(*p_value_, cfg_.g) : sample_palindrome(n, cfg_.g, rng);
    const DigitVector q = q_value_ ? to_digits(*q_value_, cfg_.g) : sample_palindrome(n - d, cfg_.g, rng);
    const SwapGadget sg = make_gadget(cfg_.g, d);
    os << "gadget g=" << cfg_.g << " d=" << d << ": a=" << sg.a.to_string() << " b=" << sg.b.to_string()
       << " a'=" << sg.a_prime.to_string() << " b'=" << sg.b_prime.to_string()
       << (verify_gadget(sg) ? " (identities hold)" : " (IDENTITIES FAIL)") << '\n';
    os << "p = " << p.to_string() << "\nq = " << q.to_string() << '\n';
    const SiteReport report = match_sites(p, q, sg);
    os << "t = " << report.t << "\nS = " << report.S() << '\n';
    const DigitVector sum = add(p, q);
    if (report.S() == 0) {
      os << "no sites\n";
      return verify_gadget(sg) ? ok : verification;
    }
    os << "sites =";
    for (auto j : report.sites) os << ' ' << j;
    os << '\n';

    bool good = verify_gadget(sg);
    const auto [p2, q2] = apply_swap({p, q, sg, report.sites});
    const DigitVector sum2 = add(p2, q2);
    good = good && sum == sum2 && is_palindrome(p2) && is_palindrome(q2) && p2.size() == p.size() &&
           q2.size() == q.size();
    os << "J = all sites\np' = " << p2.to_string() << "\nq' = " << q2.to_string() << '\n';
    os << "p + q   = " << number(sum) << "\np' + q' = " << number(sum2) << '\n';

    if (all_subsets_) {
      if (report.S() > 10) {
        os << "2^" << report.S() << " representations: too many to print (limit 2^10)\n";
      } else {
        const auto reps = enumerate_swaps(p, q, sg);
        os << "representations " << reps.size() << '\n';
        for (const auto& [a, b] : reps) {
          good = good && add(a, b) == sum;
          os << a.to_string() << " + " << b.to_string() << '\n';
        }
      }
    }
    os << (good ? "verified" : "VERIFICATION FAILED") << '\n';
    return good ? ok : verification;
  }

  int cmd_prop1(std::ostream& os) {
    if (!valid_config(length_, gap_, cfg_.g)) {
      err_ << "error: (n=" << length_ << ", d=" << gap_ << ", g=" << cfg_.g << ") has no valid sites\n";
      return usage;
    }
    const auto report = prop1_check(make_prop1_config(length_, gap_, cfg_.g), trials_, cfg_.seed, cfg_.workers);
    os << prop1_json(report).dump() << '\n';
    return report.pass ? ok : verification;
  }

  int cmd_three_pal(std::ostream& os) {
    const auto report = three_palindrome_coverage(upto_, cfg_.g, cfg_.sieve());
    if (cfg_.format == Format::json) {
      os << nlohmann::ordered_json{{"g", report.g},
                                   {"X", report.limit},
                                   {"checked", report.checked},
                                   {"exceptions", report.exceptions}}
                .dump()
         << '\n';
      return ok;
    }
    os << "g " << report.g << "\nX " << report.limit << "\nchecked " << report.checked << "\nexceptions "
       << report.exceptions.size() << '\n';
    for (auto s : report.exceptions) os << "exception " << number(s) << '\n';
    if (cfg_.digits || report.limit <= 1000) {
      ThreePalindromeSearcher searcher(report.limit, report.g, cfg_.sieve());
      for (std::uint64_t s = 3; s < std::min<std::uint64_t>(report.limit, 16); ++s) {
        if (auto w = searcher.witness(s)) os << "witness " << s << " = " << (*w)[0] << " + " << (*w)[1] << " + " << (*w)[2] << '\n';
      }
    }
    return ok;
  }

  int cmd_bound_audit(std::ostream& os) {
    const auto rows = bound_audit_table(cfg_.g, n_max_, pair_limit_);
    if (cfg_.format == Format::json) {
      os << bound_audit_json(rows).dump() << '\n';
    } else {
      write_bound_audit_csv(os, rows);
    }
    for (const auto& r : rows) {
      if (!r.holds) return verification;
    }
    return ok;
  }

  int cmd_gadget_verify(std::ostream& os) {
    const Base g_max = g_max_ ? g_max_ : cfg_.g;
    bool all = true;
    if (cfg_.format == Format::csv) os << "g,d,a,b,a_prime,b_prime,holds\n";
    for (Base g = cfg_.g; g <= g_max; ++g) {
      for (std::size_t d = 0; d <= d_max_; ++d) {
        const auto sg = make_gadget(g, d);
        const bool holds = verify_gadget(sg);
        all = all && holds;
        const char sep = cfg_.format == Format::csv ? ',' : ' ';
        os << g << sep << d << sep << sg.a.to_string() << sep << sg.b.to_string() << sep << sg.a_prime.to_string()
           << sep << sg.b_prime.to_string() << sep << (holds ? "true" : "false") << '\n';
      }
    }
    return all ? ok : verification;
  }

  std::ostream& out_;
  std::ostream& err_;
  RunConfig cfg_;
  std::size_t length_ = 0;
  std::size_t gap_ = 0;
  std::uint64_t upto_ = 0;
  bool verify_ = false;
  bool fit_ = false;
  bool self_test_ = false;
  bool all_subsets_ = false;
  std::size_t k_min_ = 0;
  std::size_t k_max_ = 0;
  double c1_ = 1.0;
  double c_ = 0.1;
  std::optional<std::uint64_t> p_value_;
  std::optional<std::uint64_t> q_value_;
  std::uint64_t trials_ = 100'000;
  std::size_t n_max_ = 0;
  std::uint64_t pair_limit_ = pairwise_pair_limit;
  Base g_max_ = 0;
  std::size_t d_max_ = 0;
};

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return App(out, err).run(argc, argv);
}

}  // namespace palsum::cli
