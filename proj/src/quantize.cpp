#include "pimi/quantize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "pimi/core.hpp"

namespace pimi {

FixedPointFormat::FixedPointFormat(int total_bits, int int_bits)
    : total_bits_(total_bits), int_bits_(int_bits) {
  if (int_bits < 1 || int_bits > total_bits || total_bits > 64) {
    throw_invalid("fixed-point format requires 1 <= int_bits <= total_bits <= 64");
  }
  step_ = std::ldexp(1.0, -(total_bits - int_bits));
  min_ = -std::ldexp(1.0, int_bits - 1);
  max_ = std::ldexp(1.0, int_bits - 1) - step_;
}

FixedPointFormat FixedPointFormat::parse(std::string_view name) {
  auto fail = [&]() -> FixedPointFormat {
    throw_invalid("bad fixed-point format '" + std::string(name) + "', expected e.g. q16.4");
  };
  if (name.size() < 4 || (name[0] != 'q' && name[0] != 'Q')) return fail();
  const auto dot = name.find('.');
  if (dot == std::string_view::npos) return fail();
  int total = 0;
  int integer = 0;
  const auto a = name.substr(1, dot - 1);
  const auto b = name.substr(dot + 1);
  if (std::from_chars(a.data(), a.data() + a.size(), total).ec != std::errc{} ||
      std::from_chars(b.data(), b.data() + b.size(), integer).ec != std::errc{}) {
    return fail();
  }
  return FixedPointFormat(total, integer);
}

std::string FixedPointFormat::name() const {
  return "q" + std::to_string(total_bits_) + "." + std::to_string(int_bits_);
}

double quantize(double x, const FixedPointFormat& fmt) noexcept {
  if (std::isnan(x)) return 0.0;
  if (x >= fmt.max_value()) return fmt.max_value();
  if (x <= fmt.min_value()) return fmt.min_value();
  return std::ldexp(std::trunc(std::ldexp(x, fmt.frac_bits())), -fmt.frac_bits());
}

TanhLut::TanhLut(int levels) {
  if (levels < 2) throw_invalid("tanh LUT needs at least 2 levels");
  output_levels_.resize(static_cast<std::size_t>(levels));
  breakpoints_.resize(static_cast<std::size_t>(levels) + 1);
  for (int k = 0; k < levels; ++k) {
    output_levels_[k] = static_cast<double>(2 * k - (levels - 1)) / (levels - 1);
  }
  for (int k = 0; k <= levels; ++k) {
    breakpoints_[k] = static_cast<double>(2 * k - levels) / levels;
  }
  output_levels_.front() = -1.0;
  output_levels_.back() = 1.0;
  breakpoints_.front() = -1.0;
  breakpoints_.back() = 1.0;
}

double TanhLut::operator()(double x) const noexcept {
  if (x < -1.0) return -1.0;
  if (x > 1.0) return 1.0;
  // First bin k with x in [b_k, b_{k+1}); x == 1 lands in the last bin.
  const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
  auto k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  k = std::min(k, output_levels_.size() - 1);
  return output_levels_[k];
}

double lut_tanh(double x, const TanhLut& lut) noexcept { return lut(x); }

}  // namespace pimi
