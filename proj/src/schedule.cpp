#include "pimi/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pimi/core.hpp"

namespace pimi {

std::string_view to_string(ScheduleKind kind) {
  switch (kind) {
    case ScheduleKind::PimiBench: return "pimi-bench";
    case ScheduleKind::ConvBench: return "conv-bench";
    case ScheduleKind::PimiMimo: return "pimi-mimo";
    case ScheduleKind::ConvMimo: return "conv-mimo";
    case ScheduleKind::Custom: return "custom";
  }
  return "custom";
}

ScheduleKind parse_schedule_kind(std::string_view name) {
  for (auto k : {ScheduleKind::PimiBench, ScheduleKind::ConvBench, ScheduleKind::PimiMimo,
                 ScheduleKind::ConvMimo, ScheduleKind::Custom}) {
    if (to_string(k) == name) return k;
  }
  throw_invalid("unknown schedule kind '" + std::string(name) + "'");
}

std::string_view to_string(ProblemFamily family) {
  switch (family) {
    case ProblemFamily::MaxCut: return "maxcut";
    case ProblemFamily::Sk: return "sk1";
    case ProblemFamily::Mimo: return "mimo";
  }
  return "maxcut";
}

ProblemFamily parse_problem_family(std::string_view name) {
  for (auto f : {ProblemFamily::MaxCut, ProblemFamily::Sk, ProblemFamily::Mimo}) {
    if (to_string(f) == name) return f;
  }
  throw_invalid("unknown problem family '" + std::string(name) + "'");
}

Schedule Schedule::with_xi(double xi) const {
  if (!(xi >= 0.0)) throw_invalid("xi must be non-negative");
  Schedule out = *this;
  out.xi_ = xi;
  return out;
}

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw_invalid(std::string("schedule: ") + what);
}

}  // namespace

Schedule make_schedule(ScheduleKind kind, const ScheduleParams& p, std::size_t t_steps) {
  require(t_steps >= 1, "t_steps must be at least 1");
  Schedule s;
  s.kind_ = kind;
  s.beta_.resize(t_steps);
  s.eta_.resize(t_steps);
  switch (kind) {
    case ScheduleKind::PimiBench:
      require(p.beta_scale > 0.0, "beta_scale must be positive");
      require(p.delta_beta >= 0.0, "delta_beta must be non-negative");
      require(std::isfinite(p.beta_init), "beta_init must be finite");
      require(p.xi >= 0.0, "xi must be non-negative");
      s.xi_ = p.xi;
      for (std::size_t t = 0; t < t_steps; ++t) {
        s.beta_[t] = p.beta_scale * std::tanh(p.beta_init + p.delta_beta * static_cast<double>(t));
        // beta may start negative for beta_init < 0; the noise amplitude uses |beta|.
        s.eta_[t] = std::sqrt(std::abs(s.beta_[t]) / 5.0);
      }
      break;
    case ScheduleKind::ConvBench:
      require(p.beta_scale > 0.0, "beta_scale must be positive");
      require(p.eta_scale >= 0.0 && p.eta_floor >= 0.0, "eta_scale and eta_floor must be >= 0");
      s.xi_ = 0.0;
      for (std::size_t t = 0; t < t_steps; ++t) {
        s.beta_[t] = p.beta_scale;
        s.eta_[t] = std::max(p.eta_scale / std::sqrt(static_cast<double>(t) + 1.0), p.eta_floor);
      }
      break;
    case ScheduleKind::PimiMimo:
      require(p.gamma_init > 0.0 && p.gamma_final > 0.0, "gamma_init and gamma_final must be > 0");
      s.xi_ = 2.0;
      for (std::size_t t = 0; t < t_steps; ++t) {
        const double frac =
            t_steps > 1 ? static_cast<double>(t) / static_cast<double>(t_steps - 1) : 0.0;
        const double gamma = p.gamma_init + (p.gamma_final - p.gamma_init) * frac;
        s.beta_[t] = 1.0;
        s.eta_[t] = std::sqrt(1.0 / (5.0 * gamma));
      }
      break;
    case ScheduleKind::ConvMimo:
      s.xi_ = 0.0;
      for (std::size_t t = 0; t < t_steps; ++t) {
        s.beta_[t] = 1.0;
        s.eta_[t] = 1.0 / std::sqrt((static_cast<double>(t) + 1.0) / 5.0);
      }
      break;
    case ScheduleKind::Custom:
      require(p.beta_table.size() >= t_steps && p.eta_table.size() >= t_steps,
              "custom tables shorter than t_steps");
      require(p.xi >= 0.0, "xi must be non-negative");
      s.xi_ = p.xi;
      for (std::size_t t = 0; t < t_steps; ++t) {
        require(p.eta_table[t] >= 0.0, "eta must be non-negative");
        s.beta_[t] = p.beta_table[t];
        s.eta_[t] = p.eta_table[t];
      }
      break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Shipped defaults

std::string_view builtin_defaults_text() {
  return R"(# Schedule defaults for the PIMI lab solvers.
# key: <family>.<kind>[@<n_max>].<field> = value
# Values come from a coarse grid search at N = 20 (Max-Cut, SK-1) and on 4x4
# 4-QAM / 16-QAM detection; none of them are published figures.
schema = 1
version = pimi-lab-defaults-1

maxcut.pimi-bench.beta_scale = 4.0
maxcut.pimi-bench.beta_init = 0.1
maxcut.pimi-bench.delta_beta = 0.002
maxcut.pimi-bench.xi = 0.7
maxcut.conv-bench.beta_scale = 0.2
maxcut.conv-bench.eta_scale = 2.0
maxcut.conv-bench.eta_floor = 0.2

sk1.pimi-bench.beta_scale = 4.0
sk1.pimi-bench.beta_init = 0.1
sk1.pimi-bench.delta_beta = 0.005
sk1.pimi-bench.xi = 0.5
sk1.conv-bench.beta_scale = 0.2
sk1.conv-bench.eta_scale = 2.0
sk1.conv-bench.eta_floor = 0.2

mimo.pimi-mimo.gamma_init = 0.05
mimo.pimi-mimo.gamma_final = 2.0
mimo.pimi-mimo.xi = 2.0
)";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || used == 0) throw_invalid("bad numeric value for '" + key + "'");
  return v;
}

}  // namespace

ScheduleDefaults ScheduleDefaults::parse(std::string_view text) {
  ScheduleDefaults out;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  bool saw_schema = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw_invalid("params line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    if (key == "schema") {
      if (value != "1") throw_invalid("unsupported params schema " + value);
      saw_schema = true;
      continue;
    }
    if (key == "version") {
      out.version_ = value;
      continue;
    }
    // Split an optional @bucket out of the kind segment.
    std::string plain = key;
    std::size_t bucket = 0;
    const auto at = key.find('@');
    if (at != std::string::npos) {
      const auto dot = key.find('.', at);
      if (dot == std::string::npos) throw_invalid("params key '" + key + "' has no field");
      bucket = static_cast<std::size_t>(parse_double(key.substr(at + 1, dot - at - 1), key));
      if (bucket == 0) throw_invalid("params bucket must be positive in '" + key + "'");
      plain = key.substr(0, at) + key.substr(dot);
    }
    out.values_[plain][bucket] = parse_double(value, key);
  }
  if (!saw_schema) throw_invalid("params file lacks a schema line");
  return out;
}

ScheduleDefaults ScheduleDefaults::load(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw_invalid("cannot open params file " + path.string());
  std::stringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

const ScheduleDefaults& ScheduleDefaults::builtin() {
  static const ScheduleDefaults d = parse(builtin_defaults_text());
  return d;
}

ScheduleParams ScheduleDefaults::lookup(ProblemFamily family, ScheduleKind kind,
                                        std::size_t n) const {
  const std::string prefix = std::string(to_string(family)) + "." + std::string(to_string(kind)) + ".";
  auto get = [&](const char* field, double fallback) {
    const auto it = values_.find(prefix + field);
    if (it == values_.end()) return fallback;
    const auto& by_bucket = it->second;
    for (const auto& [n_max, v] : by_bucket) {
      if (n_max != 0 && n <= n_max) return v;
    }
    if (auto plain = by_bucket.find(0); plain != by_bucket.end()) return plain->second;
    return by_bucket.rbegin()->second;
  };
  ScheduleParams p;
  p.beta_scale = get("beta_scale", 0.0);
  p.beta_init = get("beta_init", 0.0);
  p.delta_beta = get("delta_beta", 0.0);
  p.eta_scale = get("eta_scale", 0.0);
  p.eta_floor = get("eta_floor", 0.0);
  p.gamma_init = get("gamma_init", 0.0);
  p.gamma_final = get("gamma_final", 0.0);
  p.xi = get("xi", 0.0);
  return p;
}

std::string ScheduleDefaults::serialize() const {
  std::ostringstream out;
  out << "schema = 1\nversion = " << version_ << "\n";
  out.precision(17);
  for (const auto& [key, by_bucket] : values_) {
    for (const auto& [bucket, v] : by_bucket) {
      if (bucket == 0) {
        out << key << " = " << v << "\n";
      } else {
        const auto dot = key.rfind('.');
        out << key.substr(0, dot) << "@" << bucket << key.substr(dot) << " = " << v << "\n";
      }
    }
  }
  return out.str();
}

ScheduleSpec parse_schedule_spec(std::string_view text) {
  ScheduleSpec spec;
  bool saw_kind = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  auto table = [](const std::string& value, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), key));
    return out;
  };
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::string content = trim(line);
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      throw_invalid("schedule line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(content).substr(0, eq));
    const std::string value = trim(std::string_view(content).substr(eq + 1));
    auto& p = spec.params;
    if (key == "kind") {
      spec.kind = parse_schedule_kind(value);
      saw_kind = true;
    } else if (key == "beta_scale") p.beta_scale = parse_double(value, key);
    else if (key == "beta_init") p.beta_init = parse_double(value, key);
    else if (key == "delta_beta") p.delta_beta = parse_double(value, key);
    else if (key == "eta_scale") p.eta_scale = parse_double(value, key);
    else if (key == "eta_floor") p.eta_floor = parse_double(value, key);
    else if (key == "gamma_init") p.gamma_init = parse_double(value, key);
    else if (key == "gamma_final") p.gamma_final = parse_double(value, key);
    else if (key == "xi") p.xi = parse_double(value, key);
    else if (key == "beta_table") p.beta_table = table(value, key);
    else if (key == "eta_table") p.eta_table = table(value, key);
    else throw_invalid("unknown schedule key '" + key + "'");
  }
  if (!saw_kind) throw_invalid("schedule file lacks 'kind'");
  return spec;
}

}  // namespace pimi
