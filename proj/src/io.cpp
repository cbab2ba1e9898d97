#include "pimi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pimi {

using nlohmann::json;

namespace {

[[noreturn]] void bad_file(const std::string& what) { throw_invalid(what); }

json spins_json(const SpinState& s) { return s.to_string(); }

SpinState spins_from(const json& j) { return SpinState::from_string(j.get<std::string>()); }

json number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

std::string instance_json(const IsingInstance& inst, std::optional<long long> edges) {
  const std::size_t n = inst.size();
  json j;
  j["n"] = n;
  json rows = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = inst.j_row(i);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  j["j"] = std::move(rows);
  const auto h = inst.h();
  j["h"] = std::vector<double>(h.begin(), h.end());
  j["label"] = inst.label();
  j["scale"] = inst.coupling_scale();
  if (edges) j["edges"] = *edges;
  return j.dump() + "\n";
}

void write_instance(const fs::path& path, const IsingInstance& inst,
                    std::optional<long long> edges) {
  write_text(path, instance_json(inst, edges));
}

InstanceFile parse_instance(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    const auto n = j.at("n").get<std::size_t>();
    const auto& rows = j.at("j");
    if (!rows.is_array() || rows.size() != n) bad_file("instance 'j' must have n rows");
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != n) bad_file("instance 'j' rows must have n entries");
      for (const auto& v : row) flat.push_back(v.get<double>());
    }
    auto h = j.at("h").get<std::vector<double>>();
    const std::string label = j.value("label", std::string{});
    const double scale = j.value("scale", 1.0);
    InstanceFile f{IsingInstance(n, std::move(flat), std::move(h), label, scale), std::nullopt};
    if (j.contains("edges")) f.edges = j.at("edges").get<long long>();
    return f;
  } catch (const json::exception& e) {
    bad_file(std::string("malformed instance file: ") + e.what());
  }
}

InstanceFile read_instance(const fs::path& path) {
  try {
    return parse_instance(read_text(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::vector<fs::path> list_instances(const fs::path& dir_or_file) {
  if (fs::is_regular_file(dir_or_file)) return {dir_or_file};
  if (!fs::is_directory(dir_or_file)) bad_file("no such instance file or directory: " + dir_or_file.string());
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir_or_file)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });
  return out;
}

std::string record_json(const RecordLine& line) {
  const TrialRecord& r = line.record;
  json j;
  j["instance"] = line.instance;
  j["trial"] = line.trial;
  j["kind"] = line.kind;
  j["seed"] = r.seed;
  j["t_steps"] = r.t_steps;
  j["best_energy"] = r.best_energy;
  j["best_step"] = r.best_step;
  json imp = json::array();
  for (const auto& [step, e] : r.improvements) imp.push_back(json::array({step, e}));
  j["improvements"] = std::move(imp);
  j["final"] = spins_json(r.final_spins);
  if (r.energy_trajectory) j["energy"] = *r.energy_trajectory;
  if (r.state_trajectory) {
    json states = json::array();
    for (const auto& s : *r.state_trajectory) states.push_back(spins_json(s));
    j["states"] = std::move(states);
  }
  return j.dump();
}

RecordLine parse_record(const std::string& text) {
  try {
    const json j = json::parse(text);
    RecordLine line;
    line.instance = j.at("instance").get<std::string>();
    line.trial = j.at("trial").get<std::size_t>();
    line.kind = j.value("kind", std::string{});
    TrialRecord& r = line.record;
    r.seed = j.at("seed").get<std::uint64_t>();
    r.t_steps = j.at("t_steps").get<std::size_t>();
    r.best_energy = j.at("best_energy").get<double>();
    r.best_step = j.at("best_step").get<std::size_t>();
    for (const auto& p : j.at("improvements")) {
      r.improvements.emplace_back(p.at(0).get<std::size_t>(), p.at(1).get<double>());
    }
    r.final_spins = spins_from(j.at("final"));
    if (j.contains("energy")) r.energy_trajectory = j.at("energy").get<std::vector<double>>();
    if (j.contains("states")) {
      std::vector<SpinState> states;
      for (const auto& s : j.at("states")) states.push_back(spins_from(s));
      r.state_trajectory = std::move(states);
    }
    return line;
  } catch (const json::exception& e) {
    bad_file(std::string("malformed record line: ") + e.what());
  }
}

void write_records(std::ostream& out, const std::vector<RecordLine>& lines) {
  for (const auto& line : lines) out << record_json(line) << '\n';
}

std::vector<RecordLine> read_records(const fs::path& path) {
  std::ifstream in(path);
  if (!in) bad_file("cannot open records file " + path.string());
  std::vector<RecordLine> out;
  std::string text;
  std::size_t lineno = 0;
  while (std::getline(in, text)) {
    ++lineno;
    if (text.empty()) continue;
    try {
      out.push_back(parse_record(text));
    } catch (const Error& e) {
      throw Error(e.kind(), path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::pair<std::string, std::vector<TrialRecord>>> group_records(
    std::vector<RecordLine> lines) {
  std::vector<std::pair<std::string, std::vector<RecordLine>>> groups;
  std::map<std::string, std::size_t> index;
  for (auto& line : lines) {
    auto [it, fresh] = index.emplace(line.instance, groups.size());
    if (fresh) groups.emplace_back(line.instance, std::vector<RecordLine>{});
    groups[it->second].second.push_back(std::move(line));
  }
  std::vector<std::pair<std::string, std::vector<TrialRecord>>> out;
  for (auto& [name, group] : groups) {
    std::stable_sort(group.begin(), group.end(),
                     [](const RecordLine& a, const RecordLine& b) { return a.trial < b.trial; });
    std::vector<TrialRecord> recs;
    recs.reserve(group.size());
    for (auto& l : group) recs.push_back(std::move(l.record));
    out.emplace_back(name, std::move(recs));
  }
  return out;
}

GroundTruth ground_from(const OracleResult& r) {
  return {r.best_energy, std::string(to_string(r.method)), r.effort.describe()};
}

std::string ground_json(const GroundMap& ground) {
  json j = json::object();
  for (const auto& [name, g] : ground) {
    j[name] = {{"energy", number_or_null(g.energy)}, {"method", g.method}, {"effort", g.effort}};
  }
  return j.dump(2) + "\n";
}

void write_ground(const fs::path& path, const GroundMap& ground) {
  write_text(path, ground_json(ground));
}

GroundMap read_ground(const fs::path& path) {
  try {
    const json j = json::parse(read_text(path));
    GroundMap out;
    for (const auto& [name, v] : j.items()) {
      out[name] = {v.at("energy").get<double>(), v.value("method", std::string{}),
                   v.value("effort", std::string{})};
    }
    return out;
  } catch (const json::exception& e) {
    bad_file(path.string() + ": malformed ground-truth file: " + e.what());
  }
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) return "null";
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("null");
}

std::string CsvTable::str() const {
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) out << (k ? "," : "") << cells[k];
    out << '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) bad_file("cannot write " + path.string());
  out << text;
  if (!out) bad_file("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad_file("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const fs::path& path) {
  std::istringstream in(read_text(path));
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (first) {
      t.header = std::move(cells);
      first = false;
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

}  // namespace pimi
