#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opcalc/io.hpp"

namespace opcalc {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One invocation. Subcommand flags live in `options` (flag name without dashes →
// value, "1" for switches).
struct JobSpec {
  std::string command;
  std::string ring = "z";
  std::optional<int> r_max;
  std::optional<int> d_min, d_max;
  std::uint64_t seed = 20261016;
  std::string input, output;
  std::map<std::string, std::string> options;

  bool has(const std::string& key) const { return options.count(key) != 0; }
  std::string option(const std::string& key, const std::string& fallback = "") const;
  int int_option(const std::string& key, int fallback) const;
  // Everything except the output path, in a fixed key order.
  Json to_json() const;
  // 16 hex digits of FNV-1a over the canonical JSON of to_json().
  std::string hash() const;
};

struct GoldenKey {
  std::string object, ring;
  int arity = 0, degree = 0;
  std::string str() const;  // "Surj/z/r=4/d=0"
  friend auto operator<=>(const GoldenKey&, const GoldenKey&) = default;
};

struct GoldenEntry {
  std::string homology;  // HomologyGroup::str(), e.g. "1" or "0+Z/2"
  std::string job;       // hash of the producing JobSpec
  std::string note;
  friend bool operator==(const GoldenEntry&, const GoldenEntry&) = default;
};

class GoldenTable {
 public:
  void add(const GoldenKey& k, GoldenEntry e) { entries_[k] = std::move(e); }
  const std::map<GoldenKey, GoldenEntry>& entries() const { return entries_; }
  Json to_json() const;
  static GoldenTable from_json(const Json& j);

 private:
  std::map<GoldenKey, GoldenEntry> entries_;
};

// Exact comparison of the homology descriptors; provenance is not compared.
struct GoldenDiff {
  std::vector<std::string> missing;     // in golden only
  std::vector<std::string> unexpected;  // in current only
  std::vector<std::string> mismatched;  // "key: golden X, current Y"
  bool empty() const { return missing.empty() && unexpected.empty() && mismatched.empty(); }
  std::vector<std::string> lines() const;
};
GoldenDiff diff_golden(const GoldenTable& current, const GoldenTable& golden);

struct JobResult {
  Json payload;
  bool ok = true;                 // every check in the job passed
  std::vector<std::string> lines;  // human-readable summary for stderr
};

// Deterministic for a fixed JobSpec. Throws UsageError for bad flags and
// FormatError for unreadable input.
JobResult run(const JobSpec& job);

}  // namespace opcalc
