#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pimi {

// Exit-code aligned error categories used by the CLI.
enum class ErrorKind : int {
  InvalidArgument = 2,
  Numeric = 3,
  Unsolved = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void throw_invalid(const std::string& what);

// Dense Ising problem H(s) = -sum_{i<j} J_ij s_i s_j - sum_i h_i s_i.
//
// J is stored row-major with both triangles populated. `coupling_scale` is
// solver-side normalization metadata (2/sqrt(N) for Max-Cut, 1/sqrt(N) for
// SK-1); it multiplies the accumulated interaction term inside the dynamics
// and never touches J or the energy.
class IsingInstance {
 public:
  IsingInstance() = default;
  IsingInstance(std::size_t n, std::vector<double> j, std::vector<double> h,
                std::string label = {}, double coupling_scale = 1.0);

  // Zero couplings and biases.
  static IsingInstance zeros(std::size_t n, std::string label = {});

  std::size_t size() const noexcept { return n_; }
  double j(std::size_t row, std::size_t col) const noexcept { return j_[row * n_ + col]; }
  std::span<const double> j_row(std::size_t row) const noexcept {
    return {j_.data() + row * n_, n_};
  }
  std::span<const double> j_data() const noexcept { return j_; }
  std::span<const double> h() const noexcept { return h_; }
  const std::string& label() const noexcept { return label_; }
  double coupling_scale() const noexcept { return coupling_scale_; }

  // Sets J_ij and J_ji together; diagonal writes are rejected.
  void set_coupling(std::size_t a, std::size_t b, double value);
  void set_bias(std::size_t i, double value);
  void set_label(std::string label) { label_ = std::move(label); }
  void set_coupling_scale(double scale);

  // Throws if the symmetric/zero-diagonal invariants are violated.
  void validate() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> j_;
  std::vector<double> h_;
  std::string label_;
  double coupling_scale_ = 1.0;
};

// Spins stored as +/-1 doubles so they feed the field kernels directly.
class SpinState {
 public:
  SpinState() = default;
  explicit SpinState(std::vector<double> spins);
  static SpinState uniform(std::size_t n, double value = 1.0);
  static SpinState from_string(const std::string& pm);  // "+-+" form
  static SpinState random(std::size_t n, std::uint64_t seed);

  std::size_t size() const noexcept { return s_.size(); }
  double operator[](std::size_t i) const noexcept { return s_[i]; }
  void set(std::size_t i, double value);
  void flip(std::size_t i) noexcept { s_[i] = -s_[i]; }
  std::span<const double> values() const noexcept { return s_; }
  SpinState negated() const;
  std::string to_string() const;

  friend bool operator==(const SpinState&, const SpinState&) = default;

 private:
  std::vector<double> s_;
};

struct TrialRecord {
  double best_energy = 0.0;
  std::size_t best_step = 0;
  std::size_t t_steps = 0;
  // energy_trajectory[t] is the energy of the state produced by step t.
  std::optional<std::vector<double>> energy_trajectory;
  // Full state after every step (index 0 = initial state), when requested.
  std::optional<std::vector<SpinState>> state_trajectory;
  SpinState final_spins;
  std::uint64_t seed = 0;
  // Strictly decreasing best-so-far energies as (step, energy); always kept
  // since it is tiny and sufficient for success-probability curves.
  std::vector<std::pair<std::size_t, double>> improvements;

  // min over steps <= budget-1 of the trajectory, from `improvements`.
  double best_within(std::size_t budget) const;

  friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

double energy(const IsingInstance& inst, const SpinState& s);
std::vector<double> local_fields(const IsingInstance& inst, const SpinState& s);

// Number of cut edges for an un-normalized J = -A Max-Cut mapping.
long long cut_value(const IsingInstance& inst, const SpinState& s, long long edge_count);

}  // namespace pimi
