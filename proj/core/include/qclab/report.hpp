#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace qclab {

inline constexpr int kSchemaMajor = 1;
inline constexpr int kSchemaMinor = 0;
std::string software_version();

/// Key-value run configuration. Files hold "key = value" lines with '#'
/// comments; command-line "key=value" pairs override file entries.
class RunConfig {
 public:
  std::string command;
  int schema_version = kSchemaMajor;
  std::uint64_t seed = 1;
  std::string out_dir;
  bool serial = false;

  static RunConfig from_file(const std::string& path);
  static RunConfig from_text(const std::string& text, const std::string& origin = "<config>");
  void set(const std::string& key, const std::string& value);
  /// Parses "key=value"; throws ConfigError otherwise.
  void apply_override(const std::string& assignment);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  double get_double(const std::string& key, double fallback, double lo, double hi);
  int get_int(const std::string& key, int fallback, int lo, int hi);
  std::string get_string(const std::string& key, const std::string& fallback);
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback, double lo, double hi);
  /// Throws ConfigError naming the first key no getter asked for.
  void reject_unknown() const;
  /// All entries, including defaults filled in by getters.
  nlohmann::json echo() const;

 private:
  std::map<std::string, std::string> values_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> used_;
};

struct ReportEnvelope {
  int schema_major = kSchemaMajor;
  int schema_minor = kSchemaMinor;
  std::string software_version;
  std::string command;
  std::uint64_t seed = 0;
  nlohmann::json config;
  nlohmann::json payload;
  bool pass = false;
  double wall_clock_seconds = 0.0;
};

nlohmann::json to_json(const ReportEnvelope& env);
/// Accepts any minor version of the supported major version.
ReportEnvelope envelope_from_json(const nlohmann::json& j);
/// Canonical text of the payload, the part that must reproduce exactly.
std::string payload_text(const ReportEnvelope& env);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);
  CsvTable& row(const std::vector<std::string>& cells);
  std::string text() const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Shortest round-trip text of a double ("nan", "inf" for non-finite values).
std::string fmt(double v);
std::string fmt(std::int64_t v);

struct PlotSeries {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool dashed = false;
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_x = false;
  bool log_y = false;
  int width = 640;
  int height = 420;
  /// Keep the aspect ratio of the data (curve plots).
  bool equal_aspect = false;
};

std::string svg_plot(const std::vector<PlotSeries>& series, const PlotOptions& options);

}  // namespace qclab
