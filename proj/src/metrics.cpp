#include "pimi/metrics.hpp"

#include <charconv>
#include <cmath>

namespace pimi {

double success_probability(const std::vector<TrialRecord>& records,
                           const SuccessCriterion& criterion, std::size_t budget) {
  if (records.empty()) throw_invalid("success probability of an empty record list");
  std::size_t hits = 0;
  for (const auto& rec : records) {
    const double best = budget == 0 ? rec.best_energy : rec.best_within(budget);
    if (criterion.reached(best)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

std::optional<double> n_trials_required(double p_bar, double epsilon, bool integer_trials) {
  if (!(p_bar >= 0.0 && p_bar <= 1.0)) throw_invalid("success probability outside [0, 1]");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw_invalid("epsilon must lie in (0, 1)");
  if (p_bar == 0.0) return std::nullopt;
  if (p_bar == 1.0) return 1.0;
  const double ratio = std::log(epsilon) / std::log1p(-p_bar);
  if (!integer_trials) return ratio;
  // log(0.001)/log(0.001) can land a few ulps above 1.
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return std::max(1.0, nearest);
  return std::max(1.0, std::ceil(ratio));
}

std::string_view to_string(CostModel model) {
  switch (model) {
    case CostModel::Seq: return "seq";
    case CostModel::Par: return "par";
    case CostModel::Pimi: return "pimi";
  }
  return "pimi";
}

CostModel parse_cost_model(std::string_view name) {
  for (auto m : {CostModel::Seq, CostModel::Par, CostModel::Pimi}) {
    if (to_string(m) == name) return m;
  }
  throw_invalid("unknown cost model '" + std::string(name) + "'");
}

double clock_cycles_per_sweep(CostModel model, std::size_t n) {
  if (n < 2) throw_invalid("cost models need N >= 2");
  const double nn = static_cast<double>(n);
  const double lg = std::log2(nn);
  switch (model) {
    case CostModel::Seq: return nn * lg + 8.0 * nn + 4.67;
    case CostModel::Par: return 1.1 * lg + 7.0;
    case CostModel::Pimi: return 1.1 * lg + 8.6;
  }
  return 0.0;
}

double clock_cycles_per_step(CostModel model, std::size_t n) {
  const double sweep = clock_cycles_per_sweep(model, n);
  return model == CostModel::Seq ? sweep / static_cast<double>(n) : sweep;
}

std::optional<double> ccts(double p_bar, std::size_t t_steps, CostModel model, std::size_t n,
                           double epsilon, bool integer_trials) {
  const auto trials = n_trials_required(p_bar, epsilon, integer_trials);
  if (!trials) return std::nullopt;
  return *trials * static_cast<double>(t_steps) * clock_cycles_per_step(model, n);
}

const LandscapePoint& CctsLandscape::best() const {
  if (!optimum) throw Error(ErrorKind::Unsolved, "CCTS landscape has no finite point");
  return grid.at(*optimum);
}

std::vector<std::size_t> parse_grid(std::string_view text) {
  std::size_t parts[3] = {0, 0, 0};
  std::size_t count = 0;
  std::size_t pos = 0;
  while (count < 3) {
    const auto colon = text.find(':', pos);
    const auto piece = text.substr(pos, colon == std::string_view::npos ? text.npos : colon - pos);
    auto [ptr, ec] = std::from_chars(piece.data(), piece.data() + piece.size(), parts[count]);
    if (ec != std::errc{} || ptr != piece.data() + piece.size() || piece.empty()) {
      throw_invalid("grid must look like start:stop:step, got '" + std::string(text) + "'");
    }
    ++count;
    if (colon == std::string_view::npos) break;
    pos = colon + 1;
  }
  if (count != 3 || parts[0] == 0 || parts[2] == 0 || parts[1] < parts[0]) {
    throw_invalid("grid must look like start:stop:step with 0 < start <= stop, step > 0");
  }
  std::vector<std::size_t> grid;
  for (std::size_t t = parts[0]; t <= parts[1]; t += parts[2]) grid.push_back(t);
  return grid;
}

std::vector<std::size_t> default_grid(std::size_t t_max, std::size_t step) {
  if (step == 0) throw_invalid("grid step must be positive");
  std::vector<std::size_t> grid;
  for (std::size_t t = step; t <= t_max; t += step) grid.push_back(t);
  return grid;
}

LogStats log10_stats(const std::vector<double>& values) {
  LogStats st;
  double sum = 0.0;
  for (double v : values) {
    if (v > 0.0) {
      sum += std::log10(v);
      ++st.count;
    }
  }
  if (st.count == 0) return st;
  st.mean = sum / static_cast<double>(st.count);
  if (st.count < 2) return st;
  double ss = 0.0;
  for (double v : values) {
    if (v > 0.0) ss += (std::log10(v) - st.mean) * (std::log10(v) - st.mean);
  }
  st.std = std::sqrt(ss / static_cast<double>(st.count - 1));
  return st;
}

std::vector<LandscapePoint> success_curve(const std::vector<std::vector<TrialRecord>>& records,
                                          const std::vector<SuccessCriterion>& criteria,
                                          const std::vector<std::size_t>& grid) {
  if (records.empty()) throw_invalid("success curve needs at least one instance");
  if (records.size() != criteria.size()) {
    throw_invalid("success curve needs one criterion per instance");
  }
  std::vector<LandscapePoint> out;
  out.reserve(grid.size());
  std::vector<double> per_instance(records.size());
  for (std::size_t t : grid) {
    double sum = 0.0;
    for (std::size_t i = 0; i < records.size(); ++i) {
      per_instance[i] = success_probability(records[i], criteria[i], t);
      sum += per_instance[i];
    }
    LandscapePoint pt;
    pt.t_steps = t;
    pt.p_mean = sum / static_cast<double>(records.size());
    pt.p_logstd = log10_stats(per_instance).std;
    out.push_back(pt);
  }
  return out;
}

CctsLandscape optimize_step_budget(std::vector<LandscapePoint> points, CostModel model,
                                   std::size_t n, double epsilon, bool integer_trials) {
  if (points.size() < 2) throw_invalid("step-budget optimization needs at least two grid points");
  CctsLandscape land;
  land.n = n;
  land.model = model;
  for (std::size_t k = 0; k < points.size(); ++k) {
    auto& pt = points[k];
    pt.n_trials = n_trials_required(pt.p_mean, epsilon, integer_trials);
    pt.ccts = ccts(pt.p_mean, pt.t_steps, model, n, epsilon, integer_trials);
    if (!pt.ccts) continue;
    if (!land.optimum) {
      land.optimum = k;
      continue;
    }
    const auto& cur = points[*land.optimum];
    if (*pt.ccts < *cur.ccts || (*pt.ccts == *cur.ccts && pt.t_steps < cur.t_steps)) {
      land.optimum = k;
    }
  }
  land.grid = std::move(points);
  return land;
}

double speedup(double ccts_conv, double ccts_pimi) {
  if (!std::isfinite(ccts_conv) || !std::isfinite(ccts_pimi) || ccts_pimi <= 0.0) {
    throw_invalid("speedup needs finite positive CCTS values");
  }
  return ccts_conv / ccts_pimi;
}

double wall_clock(double ccts_value, double f_clk_hz) {
  if (!(f_clk_hz > 0.0)) throw_invalid("clock frequency must be positive");
  return ccts_value / f_clk_hz;
}

std::vector<std::optional<double>> neighbor_triggered_flip_rate(
    const std::vector<std::vector<SpinState>>& trajectories, const IsingInstance& inst) {
  if (trajectories.empty()) throw_invalid("flip rate needs at least one trajectory");
  const std::size_t n = inst.size();
  const std::size_t len = trajectories.front().size();
  if (len < 2) throw_invalid("flip rate needs trajectories of at least two states");
  for (const auto& tr : trajectories) {
    if (tr.size() != len) throw_invalid("flip-rate trajectories differ in length");
    for (const auto& s : tr) {
      if (s.size() != n) throw_invalid("trajectory state size does not match the instance");
    }
  }

  std::vector<std::vector<std::size_t>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != i && inst.j(i, k) != 0.0) neighbours[i].push_back(k);
    }
  }

  std::vector<std::optional<double>> rate(len - 1);
  std::vector<char> flipped(n);
  for (std::size_t t = 0; t + 1 < len; ++t) {
    std::size_t events = 0;
    std::size_t co_flips = 0;
    for (const auto& tr : trajectories) {
      for (std::size_t i = 0; i < n; ++i) flipped[i] = tr[t][i] != tr[t + 1][i];
      for (std::size_t i = 0; i < n; ++i) {
        bool any = false;
        for (std::size_t k : neighbours[i]) {
          if (flipped[k]) {
            any = true;
            break;
          }
        }
        if (!any) continue;
        ++events;
        if (flipped[i]) ++co_flips;
      }
    }
    if (events > 0) rate[t] = static_cast<double>(co_flips) / static_cast<double>(events);
  }
  return rate;
}

std::optional<double> mean_defined(const std::vector<std::optional<double>>& values) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& v : values) {
    if (v) {
      sum += *v;
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace pimi
