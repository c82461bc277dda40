#pragma once

#include "moments.hpp"
#include "types.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace lgop {

inline constexpr char kArtifactVersion[] = "0.1.0";
inline constexpr int kSchemaVersion = 1;

struct EvolveConfig
{
  double t0_min = 0.1;
  double t0_max = 1.0;
  int steps = 10;
};

struct RunConfig
{
  MomentData moments;
  std::vector<int> degrees{20};
  std::optional<double> N; // fixed N instead of n / t0
  double radial_scale = 1;
  double angular_scale = 1;
  Precision precision = Precision::Auto;
  std::uint64_t seed = 1;
  int boundary_points = 512;
  int profile_points = 512;
  int raster = 160;
  int trajectory_resolution = 256;
  int validate_trials = 20;
  bool svg = false;
  EvolveConfig evolve;
  std::string hash; // FNV-1a of the canonical document
};

// numbers may be JSON numbers or decimal strings; complex values as [re, im], {"re","im"} or a real
double parse_real(nlohmann::json const &j);
Cx parse_complex(nlohmann::json const &j);

RunConfig parse_config(nlohmann::json const &doc);
RunConfig load_config(std::string const &path);

std::string fnv1a_hex(std::string const &bytes);
std::string fmt(double x); // %.17g

class CsvWriter
{
public:
  CsvWriter(std::string const &path, std::vector<std::string> const &header, std::string const &config_hash);
  ~CsvWriter();
  CsvWriter(CsvWriter const &) = delete;
  CsvWriter &operator=(CsvWriter const &) = delete;

  void row(std::vector<double> const &values);
  void row(std::vector<std::string> const &cells);

private:
  std::FILE *f_ = nullptr;
  std::size_t cols_;
};

nlohmann::json stamp(nlohmann::json doc, std::string const &config_hash);
void write_json(std::string const &path, nlohmann::json const &doc, std::string const &config_hash);
nlohmann::json complex_json(Cx z);

struct SvgLayer
{
  std::vector<Cx> points;
  std::string stroke;
  bool closed = false;
  bool markers = false;
};

// heatmap (row-major values over the box) with polyline overlays
void write_svg(std::string const &path, Cx lo, Cx hi, int nx, int ny, std::vector<double> const &values,
               std::vector<SvgLayer> const &layers, std::string const &config_hash);

} // namespace lgop
