#include "pimi/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pimi/kernels.hpp"
#include "pimi/rng.hpp"

namespace pimi {

void throw_invalid(const std::string& what) { throw Error(ErrorKind::InvalidArgument, what); }

IsingInstance::IsingInstance(std::size_t n, std::vector<double> j, std::vector<double> h,
                             std::string label, double coupling_scale)
    : n_(n), j_(std::move(j)), h_(std::move(h)), label_(std::move(label)) {
  if (n_ < 1) throw_invalid("instance must have at least one spin");
  if (j_.size() != n_ * n_) throw_invalid("coupling matrix must be N x N");
  if (h_.size() != n_) throw_invalid("bias vector must have length N");
  set_coupling_scale(coupling_scale);
  validate();
}

IsingInstance IsingInstance::zeros(std::size_t n, std::string label) {
  return IsingInstance(n, std::vector<double>(n * n, 0.0), std::vector<double>(n, 0.0),
                       std::move(label));
}

void IsingInstance::set_coupling(std::size_t a, std::size_t b, double value) {
  if (a >= n_ || b >= n_) throw_invalid("coupling index out of range");
  if (a == b) throw_invalid("diagonal couplings must stay zero");
  j_[a * n_ + b] = value;
  j_[b * n_ + a] = value;
}

void IsingInstance::set_bias(std::size_t i, double value) {
  if (i >= n_) throw_invalid("bias index out of range");
  h_[i] = value;
}

void IsingInstance::set_coupling_scale(double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw_invalid("coupling scale must be positive");
  coupling_scale_ = scale;
}

void IsingInstance::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    if (j_[i * n_ + i] != 0.0) throw_invalid("coupling matrix diagonal must be zero");
    for (std::size_t k = i + 1; k < n_; ++k) {
      if (j_[i * n_ + k] != j_[k * n_ + i]) throw_invalid("coupling matrix must be symmetric");
    }
  }
}

SpinState::SpinState(std::vector<double> spins) : s_(std::move(spins)) {
  for (double v : s_) {
    if (v != 1.0 && v != -1.0) throw_invalid("spin values must be exactly -1 or +1");
  }
}

SpinState SpinState::uniform(std::size_t n, double value) {
  return SpinState(std::vector<double>(n, value));
}

SpinState SpinState::from_string(const std::string& pm) {
  std::vector<double> v;
  v.reserve(pm.size());
  for (char c : pm) {
    if (c == '+') {
      v.push_back(1.0);
    } else if (c == '-') {
      v.push_back(-1.0);
    } else {
      throw_invalid("spin string may only contain '+' and '-'");
    }
  }
  return SpinState(std::move(v));
}

SpinState SpinState::random(std::size_t n, std::uint64_t seed) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = (bits_at(seed, i) >> 63) ? -1.0 : 1.0;
  return SpinState(std::move(v));
}

void SpinState::set(std::size_t i, double value) {
  if (value != 1.0 && value != -1.0) throw_invalid("spin values must be exactly -1 or +1");
  s_.at(i) = value;
}

SpinState SpinState::negated() const {
  SpinState out = *this;
  for (auto& v : out.s_) v = -v;
  return out;
}

std::string SpinState::to_string() const {
  std::string out(s_.size(), '+');
  for (std::size_t i = 0; i < s_.size(); ++i) {
    if (s_[i] < 0) out[i] = '-';
  }
  return out;
}

double TrialRecord::best_within(std::size_t budget) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& [step, e] : improvements) {
    if (step >= budget) break;
    best = e;
  }
  return best;
}

namespace {

void check_dims(const IsingInstance& inst, const SpinState& s) {
  if (inst.size() != s.size()) {
    throw_invalid("spin state length " + std::to_string(s.size()) +
                  " does not match instance size " + std::to_string(inst.size()));
  }
}

}  // namespace

double energy(const IsingInstance& inst, const SpinState& s) {
  check_dims(inst, s);
  const std::size_t n = inst.size();
  double pair = 0.0;
  double bias = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = inst.j_row(i);
    double acc = 0.0;
    for (std::size_t k = i + 1; k < n; ++k) acc += row[k] * s[k];
    pair += s[i] * acc;
    bias += inst.h()[i] * s[i];
  }
  return -pair - bias;
}

std::vector<double> local_fields(const IsingInstance& inst, const SpinState& s) {
  check_dims(inst, s);
  std::vector<double> out(inst.size());
  kernels::coupling_mvm(inst.j_data(), inst.size(), s.values(), out);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += inst.h()[i];
  return out;
}

long long cut_value(const IsingInstance& inst, const SpinState& s, long long edge_count) {
  const double twice_cut = static_cast<double>(edge_count) - energy(inst, s);
  const double cut = twice_cut / 2.0;
  if (cut != std::floor(cut) || cut < 0) {
    throw_invalid("cut value is not a non-negative integer; instance is not a J = -A mapping");
  }
  return static_cast<long long>(cut);
}

}  // namespace pimi
