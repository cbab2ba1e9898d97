#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pimi {

// Signed fixed-point format with truncation toward zero and saturation,
// i.e. ap_fixed<total_bits, int_bits, AP_TRN_ZERO, AP_SAT>. Values are kept as
// doubles that lie exactly on the format's grid.
class FixedPointFormat {
 public:
  FixedPointFormat(int total_bits, int int_bits);

  // Parses "q4.2" / "q16.4" (total.int).
  static FixedPointFormat parse(std::string_view name);

  int total_bits() const noexcept { return total_bits_; }
  int int_bits() const noexcept { return int_bits_; }
  int frac_bits() const noexcept { return total_bits_ - int_bits_; }
  double step() const noexcept { return step_; }
  double min_value() const noexcept { return min_; }
  double max_value() const noexcept { return max_; }
  std::string name() const;

  friend bool operator==(const FixedPointFormat&, const FixedPointFormat&) = default;

 private:
  int total_bits_;
  int int_bits_;
  double step_;
  double min_;
  double max_;
};

// Truncate toward zero onto the grid, then saturate. NaN maps to 0.
double quantize(double x, const FixedPointFormat& fmt) noexcept;

// Piecewise-constant tanh: L output levels evenly spaced over [-1, 1] and
// L + 1 breakpoints over the same range, half-open bins with the last bin
// closed at +1, saturating outside [-1, 1].
class TanhLut {
 public:
  explicit TanhLut(int levels);

  int levels() const noexcept { return static_cast<int>(output_levels_.size()); }
  const std::vector<double>& output_levels() const noexcept { return output_levels_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }

  double operator()(double x) const noexcept;

 private:
  std::vector<double> output_levels_;
  std::vector<double> breakpoints_;
};

double lut_tanh(double x, const TanhLut& lut) noexcept;

}  // namespace pimi
