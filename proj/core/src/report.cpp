#include "qclab/report.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "qclab/errors.hpp"

namespace qclab {

std::string software_version() { return "qclab 1.0.0"; }

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
  return true;
}

double parse_double(const std::string& key, const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v))
    throw ConfigError(key + ": expected a finite number, got '" + text + "'");
  return v;
}

[[noreturn]] void out_of_range(const std::string& key, double v, double lo, double hi) {
  std::ostringstream msg;
  msg << key << ": " << v << " outside [" << lo << ", " << hi << "]";
  throw ConfigError(msg.str());
}

}  // namespace

RunConfig RunConfig::from_text(const std::string& text, const std::string& origin) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) throw ConfigError(origin + ":" + std::to_string(lineno) + ": bad key '" + key + "'");
    if (cfg.values_.count(key))
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
    cfg.set(key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str(), path);
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (!valid_key(key)) throw ConfigError("bad key '" + key + "'");
  if (value.empty()) throw ConfigError(key + ": empty value");
  if (key == "schema_version") {
    const double v = parse_double(key, value);
    if (v != std::floor(v)) throw ConfigError("schema_version: expected an integer");
    if (static_cast<int>(v) != kSchemaMajor)
      throw ConfigError("schema_version: unsupported version " + value + " (this build reads " +
                        std::to_string(kSchemaMajor) + ")");
    schema_version = static_cast<int>(v);
    return;
  }
  if (key == "seed") {
    std::uint64_t s = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
    if (ec != std::errc() || ptr != value.data() + value.size())
      throw ConfigError("seed: expected a non-negative integer, got '" + value + "'");
    seed = s;
    return;
  }
  if (key == "out") {
    out_dir = value;
    return;
  }
  values_[key] = value;
}

void RunConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

double RunConfig::get_double(const std::string& key, double fallback, double lo, double hi) {
  used_.insert(key);
  double v = fallback;
  if (auto it = values_.find(key); it != values_.end()) v = parse_double(key, it->second);
  if (!(v >= lo && v <= hi)) out_of_range(key, v, lo, hi);
  resolved_[key] = fmt(v);
  return v;
}

int RunConfig::get_int(const std::string& key, int fallback, int lo, int hi) {
  used_.insert(key);
  int v = fallback;
  if (auto it = values_.find(key); it != values_.end()) {
    const std::string& text = it->second;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size())
      throw ConfigError(key + ": expected an integer, got '" + text + "'");
  }
  if (v < lo || v > hi) out_of_range(key, v, lo, hi);
  resolved_[key] = std::to_string(v);
  return v;
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) {
  used_.insert(key);
  auto it = values_.find(key);
  const std::string v = it == values_.end() ? fallback : it->second;
  resolved_[key] = v;
  return v;
}

std::vector<double> RunConfig::get_doubles(const std::string& key, const std::vector<double>& fallback, double lo,
                                           double hi) {
  used_.insert(key);
  std::vector<double> out = fallback;
  if (auto it = values_.find(key); it != values_.end()) {
    out.clear();
    std::istringstream in(it->second);
    std::string item;
    while (std::getline(in, item, ',')) out.push_back(parse_double(key, trim(item)));
    if (out.empty()) throw ConfigError(key + ": empty list");
  }
  std::string text;
  for (double v : out) {
    if (!(v >= lo && v <= hi)) out_of_range(key, v, lo, hi);
    if (!text.empty()) text += ',';
    text += fmt(v);
  }
  resolved_[key] = text;
  return out;
}

void RunConfig::reject_unknown() const {
  for (const auto& [key, value] : values_)
    if (!used_.count(key)) throw ConfigError(key + ": unknown key for command '" + command + "'");
}

nlohmann::json RunConfig::echo() const {
  nlohmann::json j = nlohmann::json::object();
  j["command"] = command;
  j["schema_version"] = schema_version;
  j["seed"] = seed;
  j["serial"] = serial;
  for (const auto& [key, value] : resolved_) j["values"][key] = value;
  return j;
}

nlohmann::json to_json(const ReportEnvelope& env) {
  nlohmann::json j;
  j["schema_version"] = std::to_string(env.schema_major) + "." + std::to_string(env.schema_minor);
  j["software_version"] = env.software_version;
  j["command"] = env.command;
  j["seed"] = env.seed;
  j["config"] = env.config;
  j["payload"] = env.payload;
  j["pass"] = env.pass;
  j["wall_clock_seconds"] = env.wall_clock_seconds;
  return j;
}

ReportEnvelope envelope_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version") || !j["schema_version"].is_string())
    throw ConfigError("report: missing schema_version");
  const std::string version = j["schema_version"].get<std::string>();
  const auto dot = version.find('.');
  ReportEnvelope env;
  try {
    env.schema_major = std::stoi(version.substr(0, dot));
    env.schema_minor = dot == std::string::npos ? 0 : std::stoi(version.substr(dot + 1));
  } catch (const std::exception&) {
    throw ConfigError("report: malformed schema_version '" + version + "'");
  }
  if (env.schema_major != kSchemaMajor)
    throw ConfigError("report: schema major version " + std::to_string(env.schema_major) + " is not readable");
  try {
    env.software_version = j.at("software_version").get<std::string>();
    env.command = j.at("command").get<std::string>();
    env.seed = j.at("seed").get<std::uint64_t>();
    env.config = j.at("config");
    env.payload = j.at("payload");
    env.pass = j.at("pass").get<bool>();
    env.wall_clock_seconds = j.value("wall_clock_seconds", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  return env;
}

std::string payload_text(const ReportEnvelope& env) { return env.payload.dump(); }

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size()) throw DomainError("csv row width does not match the header");
  rows_.push_back(cells);
  return *this;
}

std::string CsvTable::text() const {
  auto line = [](const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c) out += ',';
      if (cells[c].find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : cells[c]) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        out += '"';
      } else {
        out += cells[c];
      }
    }
    return out + '\n';
  };
  std::string out = line(header_);
  for (const auto& r : rows_) out += line(r);
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string fmt(std::int64_t v) { return std::to_string(v); }

}  // namespace qclab
