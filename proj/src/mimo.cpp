#include "pimi/mimo.hpp"

#include <cmath>
#include <string>

#include "pimi/batch.hpp"
#include "pimi/rng.hpp"

namespace pimi {

std::uint32_t gray_encode(std::uint32_t k) noexcept { return k ^ (k >> 1); }

std::uint32_t gray_decode(std::uint32_t g) noexcept {
  std::uint32_t k = g;
  for (std::uint32_t shift = 1; shift < 32; shift <<= 1) k ^= k >> shift;
  return k;
}

Constellation::Constellation(int order) : order_(order) {
  switch (order) {
    case 4: bits_per_axis_ = 1; break;
    case 16: bits_per_axis_ = 2; break;
    case 64: bits_per_axis_ = 3; break;
    default: throw_invalid("QAM order must be 4, 16 or 64 (got " + std::to_string(order) + ")");
  }
  levels_ = 1 << bits_per_axis_;
}

int Constellation::axis_index(double x) const noexcept {
  // Position on the index scale; midpoints (u = k + 0.5) round down.
  const double u = (x + (levels_ - 1)) / 2.0;
  double k = std::ceil(u - 0.5);
  if (!(k >= 0.0)) k = 0.0;  // also catches NaN
  if (k > levels_ - 1) k = levels_ - 1;
  return static_cast<int>(k);
}

cplx Constellation::point(std::uint32_t label) const {
  if (label >= static_cast<std::uint32_t>(order_)) throw_invalid("symbol label out of range");
  const std::uint32_t mask = (1U << bits_per_axis_) - 1;
  const auto ki = static_cast<int>(gray_decode(label >> bits_per_axis_));
  const auto kq = static_cast<int>(gray_decode(label & mask));
  return {axis_value(ki), axis_value(kq)};
}

std::uint32_t Constellation::label(cplx p) const {
  const auto gi = gray_encode(static_cast<std::uint32_t>(axis_index(p.real())));
  const auto gq = gray_encode(static_cast<std::uint32_t>(axis_index(p.imag())));
  return (gi << bits_per_axis_) | gq;
}

void Constellation::label_bits(std::uint32_t label, std::vector<std::uint8_t>& out) const {
  for (int b = bits_per_symbol() - 1; b >= 0; --b) out.push_back((label >> b) & 1U);
}

std::uint32_t Constellation::bits_label(const std::uint8_t* bits) const {
  std::uint32_t label = 0;
  for (int b = 0; b < bits_per_symbol(); ++b) label = (label << 1) | (bits[b] & 1U);
  return label;
}

double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

MimoScenario gen_scenario(std::size_t nt, std::size_t nr, int qam_order, double ebn0_db,
                          std::uint64_t seed) {
  if (nt < 1 || nr < 1) throw_invalid("antenna counts must be at least 1");
  if (std::isnan(ebn0_db) || ebn0_db == -std::numeric_limits<double>::infinity()) {
    throw_invalid("Eb/N0 must be a number or +inf");
  }
  const Constellation c(qam_order);
  MimoScenario sc;
  sc.nt = nt;
  sc.nr = nr;
  sc.qam_order = qam_order;
  sc.ebn0_db = ebn0_db;

  CounterRng rng(stream_seed(seed, Stream::Scenario));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  sc.h.resize(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(nt));
  for (Eigen::Index r = 0; r < sc.h.rows(); ++r) {
    for (Eigen::Index k = 0; k < sc.h.cols(); ++k) {
      const double re = rng.normal();
      const double im = rng.normal();
      sc.h(r, k) = cplx(re, im) * inv_sqrt2;
    }
  }
  sc.x_true.resize(static_cast<Eigen::Index>(nt));
  for (std::size_t k = 0; k < nt; ++k) {
    const auto label = static_cast<std::uint32_t>(rng.below(static_cast<std::uint64_t>(qam_order)));
    sc.x_true(static_cast<Eigen::Index>(k)) = c.point(label);
    c.label_bits(label, sc.bits_true);
  }

  const Eigen::VectorXcd clean = sc.h * sc.x_true;
  sc.noise = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(nr));
  if (std::isfinite(ebn0_db)) {
    const double e_y = clean.squaredNorm() / static_cast<double>(nr);
    sc.sigma2 = e_y / (c.bits_per_symbol() * db_to_linear(ebn0_db));
    const double amp = std::sqrt(sc.sigma2 / 2.0);
    for (Eigen::Index r = 0; r < sc.noise.size(); ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      sc.noise(r) = cplx(amp * re, amp * im);
    }
  }
  sc.y = clean + sc.noise;
  return sc;
}

Eigen::MatrixXd stack_real(const Eigen::MatrixXcd& m) {
  const auto r = m.rows();
  const auto c = m.cols();
  Eigen::MatrixXd out(2 * r, 2 * c);
  out.topLeftCorner(r, c) = m.real();
  out.topRightCorner(r, c) = -m.imag();
  out.bottomLeftCorner(r, c) = m.imag();
  out.bottomRightCorner(r, c) = m.real();
  return out;
}

Eigen::VectorXd stack_real(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  out.head(v.size()) = v.real();
  out.tail(v.size()) = v.imag();
  return out;
}

Eigen::MatrixXcd unstack_real(const Eigen::MatrixXd& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) throw_invalid("real-stacked matrix has odd size");
  const auto r = m.rows() / 2;
  const auto c = m.cols() / 2;
  Eigen::MatrixXcd out(r, c);
  out.real() = m.topLeftCorner(r, c);
  out.imag() = m.bottomLeftCorner(r, c);
  return out;
}

Eigen::VectorXcd unstack_real(const Eigen::VectorXd& v) {
  if (v.size() % 2 != 0) throw_invalid("real-stacked vector has odd length");
  const auto n = v.size() / 2;
  Eigen::VectorXcd out(n);
  out.real() = v.head(n);
  out.imag() = v.tail(n);
  return out;
}

RealModel to_real(const MimoScenario& sc) {
  return {stack_real(sc.h), stack_real(sc.y), stack_real(sc.x_true)};
}

Eigen::MatrixXd mmse_filter(const Eigen::MatrixXd& h_real, double ebn0_db, int bits_per_symbol) {
  if (!std::isfinite(ebn0_db)) {
    return h_real.completeOrthogonalDecomposition().pseudoInverse();
  }
  const double reg = 1.0 / (bits_per_symbol * db_to_linear(ebn0_db));
  Eigen::MatrixXd gram = h_real.transpose() * h_real;
  gram.diagonal().array() += reg;
  return gram.llt().solve(h_real.transpose());
}

MmseEstimate mmse_detect(const MimoScenario& sc) {
  const Constellation c(sc.qam_order);
  const RealModel rm = to_real(sc);
  MmseEstimate est;
  est.z = mmse_filter(rm.h, sc.ebn0_db, c.bits_per_symbol()) * rm.y;
  est.sliced = est.z.unaryExpr([&](double v) { return c.slice_axis(v); });
  est.symbols = unstack_real(est.sliced);
  return est;
}

std::string_view to_string(CorrectionSet set) {
  return set == CorrectionSet::Step2 ? "pm2" : "pm4";
}

CorrectionSet parse_correction_set(std::string_view name) {
  if (name == "pm2") return CorrectionSet::Step2;
  if (name == "pm4") return CorrectionSet::Step4;
  throw_invalid("unknown correction set '" + std::string(name) + "' (expected pm2 or pm4)");
}

CorrectionSet default_correction_set(int qam_order) {
  Constellation c(qam_order);  // validates
  return qam_order == 64 ? CorrectionSet::Step4 : CorrectionSet::Step2;
}

int correction_multiplicity(CorrectionSet set) { return set == CorrectionSet::Step2 ? 2 : 3; }

Eigen::MatrixXd transform_matrix(CorrectionSet set, std::size_t nt) {
  const auto d = static_cast<Eigen::Index>(2 * nt);
  const int blocks = correction_multiplicity(set);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(d, blocks * d);
  for (int b = 0; b < blocks; ++b) {
    const double w = (set == CorrectionSet::Step4 && b == 0) ? 2.0 : 1.0;
    t.block(0, b * d, d, d).diagonal().setConstant(w);
  }
  return t;
}

Eigen::VectorXd spins_vector(const SpinState& s) {
  const auto v = s.values();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double DiMimoProblem::energy(const Eigen::VectorXd& s) const {
  return -h.dot(s) - s.dot(j * s);
}

double DiMimoProblem::energy(const SpinState& s) const { return energy(spins_vector(s)); }

Eigen::VectorXd DiMimoProblem::reconstruct(const SpinState& s) const {
  return x_m + t * spins_vector(s);
}

IsingInstance DiMimoProblem::to_ising() const {
  const std::size_t k = spins();
  std::vector<double> jc(k * k);
  std::vector<double> hc(k);
  for (std::size_t a = 0; a < k; ++a) {
    hc[a] = h(static_cast<Eigen::Index>(a));
    for (std::size_t b = 0; b < k; ++b) {
      jc[a * k + b] = 2.0 * j(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
    }
  }
  return IsingInstance(k, std::move(jc), std::move(hc), "di-mimo");
}

DiMimoProblem build_dimimo(const RealModel& model, const Eigen::VectorXd& x_m,
                           CorrectionSet set) {
  if (model.h.cols() != x_m.size()) throw_invalid("x_m length does not match the channel");
  DiMimoProblem p;
  p.set = set;
  p.x_m = x_m;
  p.t = transform_matrix(set, static_cast<std::size_t>(model.h.cols() / 2));
  p.residual = model.y - model.h * x_m;
  const Eigen::MatrixXd ht = model.h * p.t;
  p.j = -(ht.transpose() * ht);
  // Exact symmetry, so the core instance validation holds bit-for-bit.
  p.j = 0.5 * (p.j + p.j.transpose()).eval();
  p.j.diagonal().setZero();
  p.h = 2.0 * ht.transpose() * p.residual;
  return p;
}

std::vector<std::uint8_t> demap_bits(const Eigen::VectorXd& x_real, const Constellation& c) {
  const Eigen::VectorXcd sym = unstack_real(x_real);
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(sym.size() * c.bits_per_symbol()));
  for (Eigen::Index k = 0; k < sym.size(); ++k) c.label_bits(c.label(sym(k)), bits);
  return bits;
}

Detection detect(const MimoScenario& sc, const IsingDetectorConfig& cfg, std::uint64_t seed) {
  if (cfg.trials < 1) throw_invalid("detector needs at least one trial");
  const Constellation c(sc.qam_order);
  const RealModel rm = to_real(sc);
  const MmseEstimate mmse = mmse_detect(sc);
  const CorrectionSet set = cfg.correction.value_or(default_correction_set(sc.qam_order));
  const DiMimoProblem prob = build_dimimo(rm, cfg.unsliced_xm ? mmse.z : mmse.sliced, set);
  const IsingInstance inst = prob.to_ising();

  TrialOptions opts;
  opts.precision = cfg.precision;
  const std::uint64_t base = stream_seed(seed, Stream::Detector);
  Detection best;
  SpinState best_state;
  for (std::size_t k = 0; k < cfg.trials; ++k) {
    const std::uint64_t ts = derive_seed(base, k);
    const TrialRecord rec = run_trial(inst, cfg.kind, cfg.schedule,
                                      trial_initial_state(inst.size(), ts),
                                      trial_noise(cfg.kind, ts), opts);
    const double e = prob.energy(rec.final_spins);
    if (k == 0 || e < best.best_energy) {
      best.best_energy = e;
      best.best_trial = k;
      best_state = rec.final_spins;
    }
  }
  best.x_hat = prob.reconstruct(best_state);
  best.bits = demap_bits(best.x_hat, c);
  return best;
}

Detection detect_mmse(const MimoScenario& sc) {
  const Constellation c(sc.qam_order);
  Detection d;
  d.x_hat = mmse_detect(sc).z;
  d.bits = demap_bits(d.x_hat, c);
  return d;
}

std::string_view to_string(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::Mmse: return "mmse";
    case DetectorKind::ConvSequential: return "conv-seq";
    case DetectorKind::ConvParallel: return "conv-par";
    case DetectorKind::Pimi: return "pimi";
  }
  return "mmse";
}

DetectorKind parse_detector_kind(std::string_view name) {
  for (auto k : {DetectorKind::Mmse, DetectorKind::ConvSequential, DetectorKind::ConvParallel,
                 DetectorKind::Pimi}) {
    if (to_string(k) == name) return k;
  }
  throw_invalid("unknown detector '" + std::string(name) + "'");
}

namespace {

SolverKind solver_of(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::ConvSequential: return SolverKind::ConvSequential;
    case DetectorKind::ConvParallel: return SolverKind::ConvParallel;
    case DetectorKind::Pimi: return SolverKind::Pimi;
    case DetectorKind::Mmse: break;
  }
  throw_invalid("the MMSE detector has no Ising solver");
}

}  // namespace

Schedule mimo_schedule(DetectorKind kind, std::size_t spins, std::size_t steps,
                       const std::optional<ScheduleParams>& params) {
  const ScheduleKind sk = kind == DetectorKind::Pimi ? ScheduleKind::PimiMimo : ScheduleKind::ConvMimo;
  const ScheduleParams p =
      params.value_or(ScheduleDefaults::builtin().lookup(ProblemFamily::Mimo, sk, spins));
  return make_schedule(sk, p, steps);
}

double bit_error_fraction(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
  if (a.size() != b.size() || a.empty()) throw_invalid("bit vectors differ in length or are empty");
  std::size_t diff = 0;
  for (std::size_t k = 0; k < a.size(); ++k) diff += (a[k] != b[k]) ? 1 : 0;
  return static_cast<double>(diff) / static_cast<double>(a.size());
}

BerPoint ber(const BerConfig& cfg, double ebn0_db) {
  if (cfg.scenarios < 1) throw_invalid("BER needs at least one scenario");
  const Constellation c(cfg.qam_order);
  std::optional<IsingDetectorConfig> ising;
  if (cfg.detector != DetectorKind::Mmse) {
    IsingDetectorConfig d;
    d.kind = solver_of(cfg.detector);
    const std::size_t spins =
        2 * cfg.nt * static_cast<std::size_t>(correction_multiplicity(default_correction_set(cfg.qam_order)));
    d.schedule = mimo_schedule(cfg.detector, spins, cfg.steps, cfg.params);
    d.trials = cfg.trials;
    d.precision = cfg.precision;
    d.unsliced_xm = cfg.unsliced_xm;
    ising = std::move(d);
  }

  std::vector<std::size_t> errors(cfg.scenarios, 0);
  run_indexed(cfg.scenarios, cfg.workers, [&](std::size_t k) {
    const std::uint64_t seed = derive_seed(cfg.seed, k);
    const MimoScenario sc = gen_scenario(cfg.nt, cfg.nr, cfg.qam_order, ebn0_db, seed);
    const Detection d = ising ? detect(sc, *ising, seed) : detect_mmse(sc);
    std::size_t e = 0;
    for (std::size_t b = 0; b < d.bits.size(); ++b) e += (d.bits[b] != sc.bits_true[b]) ? 1 : 0;
    errors[k] = e;
  });

  BerPoint pt;
  pt.ebn0_db = ebn0_db;
  pt.scenario_count = cfg.scenarios;
  for (std::size_t e : errors) pt.bit_errors += e;
  const double bits_per_scenario = static_cast<double>(cfg.nt) * c.bits_per_symbol();
  pt.ber = static_cast<double>(pt.bit_errors) / (bits_per_scenario * static_cast<double>(cfg.scenarios));
  return pt;
}

}  // namespace pimi
