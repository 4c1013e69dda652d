#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "curvlab/aniso.hpp"
#include "curvlab/hypersurface.hpp"
#include "curvlab/weingarten.hpp"

namespace curvlab::report {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key-value view of a sectioned config file ("section.key" -> raw text).
struct RunConfig {
  std::map<std::string, std::string> values;
  std::string source_path;

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::string require_string(const std::string& key) const;
  double get_real(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

struct Report {
  nlohmann::json body;
  int exit_code = 0;
  std::string csv;       // sweep table, empty when the command emits none
  std::string csv_name;  // file name for the CSV
};

// configured ambient + surface + grid
hypersurface::SurfaceGeometry build_geometry(const RunConfig& cfg);
// the same surface family with the perturbation amplitude replaced by t
weingarten::SurfaceFamily build_family(const RunConfig& cfg);
aniso::AnisoPtr build_anisotropy(const RunConfig& cfg);

std::vector<hypersurface::MonomialTerm> parse_polynomial(const std::string& text, int dim);

Report cmd_verify(const RunConfig& cfg);
Report cmd_sweep(const RunConfig& cfg);
Report cmd_aniso(const RunConfig& cfg);

// FNV-1a over the canonical dump with the timestamp field removed
std::uint64_t content_hash(const nlohmann::json& body);

// stamps version / timestamp / hash and writes report.json (+ CSV) under dir
void write_report(Report& rep, const std::string& dir);

std::string format_csv_value(double v);  // 17 significant digits, '.' decimal

}  // namespace curvlab::report
