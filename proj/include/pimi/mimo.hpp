#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pimi/core.hpp"
#include "pimi/quantize.hpp"
#include "pimi/schedule.hpp"
#include "pimi/solvers.hpp"

namespace pimi {

using cplx = std::complex<double>;

// Square M-QAM on odd-integer coordinates {+-1, +-3, ...} (no energy
// normalization). A symbol label packs the Gray-coded I-axis index in the high
// bits and the Gray-coded Q-axis index in the low bits.
class Constellation {
 public:
  explicit Constellation(int order);  // 4, 16 or 64

  int order() const noexcept { return order_; }
  int bits_per_symbol() const noexcept { return 2 * bits_per_axis_; }
  int bits_per_axis() const noexcept { return bits_per_axis_; }
  int levels_per_axis() const noexcept { return levels_; }

  // Coordinate of axis index k: 2k - (m - 1).
  double axis_value(int k) const noexcept { return 2.0 * k - (levels_ - 1); }
  // Nearest axis index; exact midpoints go to the smaller coordinate.
  int axis_index(double x) const noexcept;
  double slice_axis(double x) const noexcept { return axis_value(axis_index(x)); }
  cplx slice(cplx z) const noexcept { return {slice_axis(z.real()), slice_axis(z.imag())}; }

  cplx point(std::uint32_t label) const;
  std::uint32_t label(cplx point) const;  // of the sliced point

  // Bits of a label, most significant first.
  void label_bits(std::uint32_t label, std::vector<std::uint8_t>& out) const;
  std::uint32_t bits_label(const std::uint8_t* bits) const;

 private:
  int order_;
  int bits_per_axis_;
  int levels_;
};

std::uint32_t gray_encode(std::uint32_t k) noexcept;
std::uint32_t gray_decode(std::uint32_t g) noexcept;

// ebn0_db = +infinity disables the noise.
inline constexpr double kNoiselessEbN0 = std::numeric_limits<double>::infinity();

double db_to_linear(double db) noexcept;

struct MimoScenario {
  std::size_t nt = 0;
  std::size_t nr = 0;
  int qam_order = 4;
  double ebn0_db = 0.0;
  Eigen::MatrixXcd h;        // nr x nt
  Eigen::VectorXcd x_true;   // nt
  std::vector<std::uint8_t> bits_true;  // nt * log2 M
  double sigma2 = 0.0;       // noise variance per complex entry
  Eigen::VectorXcd noise;    // nr
  Eigen::VectorXcd y;        // h * x_true + noise
};

// Rayleigh channel, uniform Gray-coded symbols, AWGN with
// sigma^2 = E_y / (log2 M * Eb/N0), E_y the mean noiseless received power per
// antenna. Channel and symbols depend only on the seed, not on ebn0_db.
MimoScenario gen_scenario(std::size_t nt, std::size_t nr, int qam_order, double ebn0_db,
                          std::uint64_t seed);

struct RealModel {
  Eigen::MatrixXd h;  // [[Re, -Im], [Im, Re]]
  Eigen::VectorXd y;  // [Re; Im]
  Eigen::VectorXd x;
};

RealModel to_real(const MimoScenario& sc);
Eigen::MatrixXd stack_real(const Eigen::MatrixXcd& m);
Eigen::VectorXd stack_real(const Eigen::VectorXcd& v);
Eigen::MatrixXcd unstack_real(const Eigen::MatrixXd& m);
Eigen::VectorXcd unstack_real(const Eigen::VectorXd& v);

// Real-stacked MMSE filter (H^T H + I / (b Eb/N0))^-1 H^T; the pseudo-inverse
// when Eb/N0 is infinite.
Eigen::MatrixXd mmse_filter(const Eigen::MatrixXd& h_real, double ebn0_db, int bits_per_symbol);

struct MmseEstimate {
  Eigen::VectorXd z;        // unsliced real estimate
  Eigen::VectorXd sliced;   // per-coordinate hard decision
  Eigen::VectorXcd symbols; // sliced, complex
};

MmseEstimate mmse_detect(const MimoScenario& sc);

enum class CorrectionSet { Step2, Step4 };  // {-2,0,2} and {-4,-2,0,2,4}

std::string_view to_string(CorrectionSet set);  // "pm2" | "pm4"
CorrectionSet parse_correction_set(std::string_view name);
CorrectionSet default_correction_set(int qam_order);
int correction_multiplicity(CorrectionSet set);  // spins per real dimension

// [I, I] for {-2,0,2}; [2I, I, I] for {-4,...,4}. 2nt rows.
Eigen::MatrixXd transform_matrix(CorrectionSet set, std::size_t nt);

// Ising image of min ||y - H(x_m + T s)||^2 in the quadratic-form convention
// E(s) = -h^T s - s^T J s.
struct DiMimoProblem {
  Eigen::MatrixXd j;
  Eigen::VectorXd h;
  Eigen::MatrixXd t;
  Eigen::VectorXd x_m;
  Eigen::VectorXd residual;
  CorrectionSet set = CorrectionSet::Step2;

  std::size_t spins() const noexcept { return static_cast<std::size_t>(h.size()); }
  double energy(const Eigen::VectorXd& s) const;
  double energy(const SpinState& s) const;
  Eigen::VectorXd reconstruct(const SpinState& s) const;  // x_m + T s
  // Same minimization in the core convention (J_core = 2J, h_core = h).
  IsingInstance to_ising() const;
};

DiMimoProblem build_dimimo(const RealModel& model, const Eigen::VectorXd& x_m,
                           CorrectionSet set);

Eigen::VectorXd spins_vector(const SpinState& s);

// Hard decision and Gray demapping of a real-stacked estimate.
std::vector<std::uint8_t> demap_bits(const Eigen::VectorXd& x_real, const Constellation& c);

struct IsingDetectorConfig {
  SolverKind kind = SolverKind::Pimi;
  Schedule schedule;
  std::size_t trials = 32;
  Precision precision;
  bool unsliced_xm = false;
  std::optional<CorrectionSet> correction;  // default per constellation
};

struct Detection {
  std::vector<std::uint8_t> bits;
  Eigen::VectorXd x_hat;     // real stacked, before slicing
  double best_energy = 0.0;  // quadratic-form energy of the chosen state
  std::size_t best_trial = 0;
};

// Runs cfg.trials independent trials and keeps the final state with the lowest
// quadratic-form energy (lowest trial index on ties).
Detection detect(const MimoScenario& sc, const IsingDetectorConfig& cfg, std::uint64_t seed);
Detection detect_mmse(const MimoScenario& sc);

enum class DetectorKind { Mmse, ConvSequential, ConvParallel, Pimi };
std::string_view to_string(DetectorKind kind);  // "mmse" | "conv-seq" | "conv-par" | "pimi"
DetectorKind parse_detector_kind(std::string_view name);

struct BerConfig {
  std::size_t nt = 4;
  std::size_t nr = 4;
  int qam_order = 4;
  std::size_t scenarios = 1000;
  std::uint64_t seed = 0;
  DetectorKind detector = DetectorKind::Mmse;
  std::size_t trials = 32;
  std::size_t steps = 32;
  // Schedule override; when unset the shipped mimo defaults are used.
  std::optional<ScheduleParams> params;
  Precision precision;
  bool unsliced_xm = false;
  std::size_t workers = 1;
};

struct BerPoint {
  double ebn0_db = 0.0;
  double ber = 0.0;
  std::size_t scenario_count = 0;
  std::size_t bit_errors = 0;
};

// Fraction of wrong bits over cfg.scenarios scenarios. Scenario k uses seed
// derive_seed(cfg.seed, k) at every Eb/N0.
BerPoint ber(const BerConfig& cfg, double ebn0_db);

// Schedule a detector uses for a K-spin problem.
Schedule mimo_schedule(DetectorKind kind, std::size_t spins, std::size_t steps,
                       const std::optional<ScheduleParams>& params = std::nullopt);

// Fraction of differing bits.
double bit_error_fraction(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b);

}  // namespace pimi
