#include "lgop/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace lgop {

using nlohmann::json;

double parse_real(json const &j)
{
  if (j.is_number()) { return j.get<double>(); }
  if (j.is_string()) {
    std::string const s = j.get<std::string>();
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    double x;
    in >> x;
    if (in.fail() || !in.eof()) { throw Error(ErrorCode::InvalidInput, "not a decimal number: '" + s + "'"); }
    return x;
  }
  throw Error(ErrorCode::InvalidInput, "expected a number, got " + j.dump());
}

Cx parse_complex(json const &j)
{
  if (j.is_array()) {
    if (j.size() != 2) { throw Error(ErrorCode::InvalidInput, "complex needs [re, im]"); }
    return {parse_real(j[0]), parse_real(j[1])};
  }
  if (j.is_object()) { return {parse_real(j.at("re")), j.contains("im") ? parse_real(j.at("im")) : 0.0}; }
  return {parse_real(j), 0.0};
}

std::string fnv1a_hex(std::string const &bytes)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string fmt(double x)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

int parse_int(json const &j, char const *what)
{
  double const x = parse_real(j);
  if (x != std::floor(x) || std::abs(x) > 1e9) { throw Error(ErrorCode::InvalidInput, std::string(what) + " must be an integer"); }
  return int(x);
}

void require(bool ok, std::string const &msg)
{
  if (!ok) { throw Error(ErrorCode::InvalidInput, msg); }
}

} // namespace

RunConfig parse_config(json const &doc)
{
  require(doc.is_object(), "config must be a JSON object");
  RunConfig c;
  auto const &m = doc.at("moments");
  c.moments.t0 = parse_real(m.at("t0"));
  require(c.moments.t0 > 0, "t0 must be positive");
  if (m.contains("geometric")) {
    auto const &g = m.at("geometric");
    Geometric geo;
    geo.beta = parse_real(g.at("beta"));
    geo.a = parse_complex(g.at("a"));
    require(geo.beta >= 0, "beta must be non-negative");
    require(std::abs(geo.a) > 0, "a must be nonzero");
    c.moments.kind = geo;
  } else if (m.contains("explicit")) {
    Explicit e;
    for (auto const &t : m.at("explicit")) { e.t.push_back(parse_complex(t)); }
    e.truncated = m.value("truncated", false);
    c.moments.kind = e;
  } else {
    throw Error(ErrorCode::InvalidInput, "moments needs 'geometric' or 'explicit'");
  }
  if (doc.contains("degrees")) {
    c.degrees.clear();
    for (auto const &d : doc.at("degrees")) { c.degrees.push_back(parse_int(d, "degree")); }
  }
  require(!c.degrees.empty(), "degrees must be nonempty");
  for (int d : c.degrees) { require(d >= 0 && d <= 400, "degree out of range [0, 400]"); }
  if (doc.contains("N") && !doc.at("N").is_null()) {
    c.N = parse_real(doc.at("N"));
    require(*c.N > 0, "N must be positive");
  }
  if (doc.contains("grid")) {
    auto const &g = doc.at("grid");
    if (g.contains("radial_scale")) { c.radial_scale = parse_real(g.at("radial_scale")); }
    if (g.contains("angular_scale")) { c.angular_scale = parse_real(g.at("angular_scale")); }
    require(c.radial_scale > 0 && c.angular_scale > 0, "grid scales must be positive");
  }
  if (doc.contains("precision")) {
    std::string const p = doc.at("precision").get<std::string>();
    if (p == "double") {
      c.precision = Precision::Double;
    } else if (p == "extended") {
      c.precision = Precision::Extended;
    } else if (p == "auto") {
      c.precision = Precision::Auto;
    } else {
      throw Error(ErrorCode::InvalidInput, "precision must be double, extended or auto");
    }
  }
  if (doc.contains("seed")) { c.seed = std::uint64_t(parse_int(doc.at("seed"), "seed")); }
  if (doc.contains("boundary_points")) { c.boundary_points = parse_int(doc.at("boundary_points"), "boundary_points"); }
  if (doc.contains("profile_points")) { c.profile_points = parse_int(doc.at("profile_points"), "profile_points"); }
  if (doc.contains("raster")) { c.raster = parse_int(doc.at("raster"), "raster"); }
  if (doc.contains("trajectory_resolution")) {
    c.trajectory_resolution = parse_int(doc.at("trajectory_resolution"), "trajectory_resolution");
  }
  if (doc.contains("validate_trials")) { c.validate_trials = parse_int(doc.at("validate_trials"), "validate_trials"); }
  c.svg = doc.value("svg", false);
  require(c.boundary_points >= 16, "boundary_points must be >= 16");
  require(c.profile_points >= 128, "profile_points must be >= 128");
  require(c.raster >= 8, "raster must be >= 8");
  require(c.trajectory_resolution >= 16, "trajectory_resolution must be >= 16");
  if (doc.contains("evolve")) {
    auto const &e = doc.at("evolve");
    c.evolve.t0_min = parse_real(e.at("t0_min"));
    c.evolve.t0_max = parse_real(e.at("t0_max"));
    c.evolve.steps = parse_int(e.at("steps"), "steps");
    require(c.evolve.t0_min > 0 && c.evolve.t0_max > c.evolve.t0_min, "evolve needs 0 < t0_min < t0_max");
    require(c.evolve.steps >= 2, "evolve steps must be >= 2");
  }
  c.hash = fnv1a_hex(doc.dump());
  return c;
}

RunConfig load_config(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw Error(ErrorCode::InvalidInput, "cannot open config " + path); }
  json doc;
  try {
    doc = json::parse(in);
  } catch (json::exception const &e) {
    throw Error(ErrorCode::InvalidInput, std::string("config parse error: ") + e.what());
  }
  try {
    return parse_config(doc);
  } catch (json::exception const &e) {
    throw Error(ErrorCode::InvalidInput, std::string("config field error: ") + e.what());
  }
}

CsvWriter::CsvWriter(std::string const &path, std::vector<std::string> const &header, std::string const &config_hash)
  : cols_(header.size())
{
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) { throw Error(ErrorCode::InvalidInput, "cannot write " + path); }
  std::fprintf(f_, "# config_hash=%s artifact_version=%s\n", config_hash.c_str(), kArtifactVersion);
  for (std::size_t i = 0; i < header.size(); ++i) { std::fprintf(f_, "%s%s", i ? "," : "", header[i].c_str()); }
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter()
{
  if (f_) { std::fclose(f_); }
}

void CsvWriter::row(std::vector<double> const &values)
{
  std::vector<std::string> cells;
  for (double x : values) { cells.push_back(fmt(x)); }
  row(cells);
}

void CsvWriter::row(std::vector<std::string> const &cells)
{
  if (cells.size() != cols_) { throw Error(ErrorCode::InvalidInput, "csv row width mismatch"); }
  for (std::size_t i = 0; i < cells.size(); ++i) { std::fprintf(f_, "%s%s", i ? "," : "", cells[i].c_str()); }
  std::fputc('\n', f_);
}

json stamp(json doc, std::string const &config_hash)
{
  doc["schema_version"] = kSchemaVersion;
  doc["artifact_version"] = kArtifactVersion;
  doc["config_hash"] = config_hash;
  return doc;
}

void write_json(std::string const &path, json const &doc, std::string const &config_hash)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw Error(ErrorCode::InvalidInput, "cannot write " + path); }
  out << stamp(doc, config_hash).dump(2) << '\n';
}

json complex_json(Cx z) { return json::array({z.real(), z.imag()}); }

void write_svg(std::string const &path, Cx lo, Cx hi, int nx, int ny, std::vector<double> const &values,
               std::vector<SvgLayer> const &layers, std::string const &config_hash)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw Error(ErrorCode::InvalidInput, "cannot write " + path); }
  double const W = 600;
  double const H = W * (hi.imag() - lo.imag()) / (hi.real() - lo.real());
  auto X = [&](Cx z) { return W * (z.real() - lo.real()) / (hi.real() - lo.real()); };
  auto Y = [&](Cx z) { return H * (hi.imag() - z.imag()) / (hi.imag() - lo.imag()); };
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<!-- config_hash=" << config_hash << " artifact_version=" << kArtifactVersion << " -->\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(W) << "\" height=\"" << fmt(H) << "\">\n";
  if (!values.empty()) {
    double const vmax = *std::max_element(values.begin(), values.end());
    double const cw = W / nx, ch = H / ny;
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        double const t = vmax > 0 ? std::sqrt(std::max(0.0, values[std::size_t(j) * nx + i] / vmax)) : 0;
        if (t < 0.01) { continue; }
        int const g = int(255 * (1 - t));
        out << "<rect x=\"" << fmt(i * cw) << "\" y=\"" << fmt(H - (j + 1) * ch) << "\" width=\"" << fmt(cw + 0.05)
            << "\" height=\"" << fmt(ch + 0.05) << "\" fill=\"rgb(255," << g << "," << g << ")\"/>\n";
      }
    }
  }
  for (auto const &l : layers) {
    if (l.markers) {
      for (auto const &z : l.points) {
        out << "<circle cx=\"" << fmt(X(z)) << "\" cy=\"" << fmt(Y(z)) << "\" r=\"2\" fill=\"" << l.stroke << "\"/>\n";
      }
      continue;
    }
    out << "<" << (l.closed ? "polygon" : "polyline") << " fill=\"none\" stroke=\"" << l.stroke << "\" points=\"";
    for (auto const &z : l.points) { out << fmt(X(z)) << "," << fmt(Y(z)) << " "; }
    out << "\"/>\n";
  }
  out << "</svg>\n";
}

} // namespace lgop
