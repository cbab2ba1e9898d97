#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pimi/core.hpp"
#include "pimi/oracle.hpp"

namespace pimi {

namespace fs = std::filesystem;

// Instance file: {"n", "j": [[...]], "h": [...], "label"} plus the optional
// "scale" (solver-side coupling normalization) and "edges" (Max-Cut edge count).
struct InstanceFile {
  IsingInstance inst;
  std::optional<long long> edges;
};

std::string instance_json(const IsingInstance& inst, std::optional<long long> edges = {});
void write_instance(const fs::path& path, const IsingInstance& inst,
                    std::optional<long long> edges = {});
InstanceFile parse_instance(const std::string& text);
InstanceFile read_instance(const fs::path& path);

// Instance files of a directory (*.json, sorted by name), or the file itself.
std::vector<fs::path> list_instances(const fs::path& dir_or_file);

// One JSON line per trial.
struct RecordLine {
  std::string instance;  // instance file name
  std::size_t trial = 0;
  std::string kind;
  TrialRecord record;
};

std::string record_json(const RecordLine& line);
RecordLine parse_record(const std::string& text);
void write_records(std::ostream& out, const std::vector<RecordLine>& lines);
std::vector<RecordLine> read_records(const fs::path& path);

// Groups lines by instance name (in first-appearance order), trials sorted.
std::vector<std::pair<std::string, std::vector<TrialRecord>>> group_records(
    std::vector<RecordLine> lines);

// gs.json: {"<instance file>": {"energy", "method", "effort"}}.
struct GroundTruth {
  double energy = 0.0;
  std::string method;
  std::string effort;
};
using GroundMap = std::map<std::string, GroundTruth>;

GroundTruth ground_from(const OracleResult& r);
std::string ground_json(const GroundMap& ground);
void write_ground(const fs::path& path, const GroundMap& ground);
GroundMap read_ground(const fs::path& path);

// Shortest round-tripping decimal for finite values; "null" otherwise.
std::string format_number(double v);
std::string format_optional(const std::optional<double>& v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string str() const;
};
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);
CsvTable read_csv(const fs::path& path);

}  // namespace pimi
