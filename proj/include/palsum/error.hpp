#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace palsum {

enum class Errc {
  invalid_base,
  digit_out_of_range,
  not_canonical,
  invalid_length,
  rank_out_of_range,
  not_palindrome,
  overflow,
  config_invalid,
  length_mismatch,
  site_not_matching,
  capacity_exceeded,
  scale_exceeded,
  memory_budget_exceeded,
  insufficient_data,
};

constexpr std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_base: return "InvalidBase";
    case Errc::digit_out_of_range: return "DigitOutOfRange";
    case Errc::not_canonical: return "NotCanonical";
    case Errc::invalid_length: return "InvalidLength";
    case Errc::rank_out_of_range: return "RankOutOfRange";
    case Errc::not_palindrome: return "NotPalindrome";
    case Errc::overflow: return "Overflow";
    case Errc::config_invalid: return "ConfigInvalid";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::site_not_matching: return "SiteNotMatching";
    case Errc::capacity_exceeded: return "CapacityExceeded";
    case Errc::scale_exceeded: return "ScaleExceeded";
    case Errc::memory_budget_exceeded: return "MemoryBudgetExceeded";
    case Errc::insufficient_data: return "InsufficientData";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace palsum
