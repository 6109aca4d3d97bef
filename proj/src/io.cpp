#include "msamp/io.hpp"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "msamp/errors.hpp"

namespace msamp::io {
namespace {

double parse_double(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0') {
    throw IoError(fmt::format("line {}: '{}' is not a number", line, field));
  }
  return v;
}

std::int64_t parse_int(const std::string& field, std::size_t line) {
  char* end = nullptr;
  const long long v = std::strtoll(field.c_str(), &end, 10);
  if (end == field.c_str() || *end != '\0') {
    throw IoError(fmt::format("line {}: '{}' is not an integer", line, field));
  }
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
    while (!field.empty() && field.front() == ' ') field.erase(field.begin());
    out.push_back(field);
  }
  return out;
}

template <typename T>
T require(const Json& j, const char* key) {
  if (!j.contains(key)) throw IoError(fmt::format("missing JSON field '{}'", key));
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw IoError(fmt::format("JSON field '{}': {}", key, e.what()));
  }
}

}  // namespace

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

Json to_json(const MultiscaleSignalSpec& spec) {
  Json j;
  j["epsilon"] = spec.epsilon();
  j["N"] = spec.half_bandwidth();
  j["M"] = spec.harmonics();
  Json bands = Json::array();
  for (const auto& [m, atoms] : spec.bands()) {
    Json band;
    band["m"] = m;
    Json list = Json::array();
    for (const auto& atom : atoms) {
      list.push_back(
          {{"j", atom.center_index}, {"re", atom.amplitude.real()}, {"im", atom.amplitude.imag()}});
    }
    band["atoms"] = std::move(list);
    bands.push_back(std::move(band));
  }
  j["bands"] = std::move(bands);
  return j;
}

MultiscaleSignalSpec spec_from_json(const Json& j) {
  MultiscaleSignalSpec::BandMap bands;
  if (!j.contains("bands") || !j.at("bands").is_array()) {
    throw IoError("signal spec JSON needs a 'bands' array");
  }
  for (const auto& band : j.at("bands")) {
    const int m = require<int>(band, "m");
    if (bands.count(m) != 0) throw IoError(fmt::format("band {} listed twice", m));
    auto& atoms = bands[m];
    if (!band.contains("atoms") || !band.at("atoms").is_array()) {
      throw IoError(fmt::format("band {} needs an 'atoms' array", m));
    }
    for (const auto& atom : band.at("atoms")) {
      atoms.push_back({require<std::int64_t>(atom, "j"),
                       {require<double>(atom, "re"), require<double>(atom, "im")}});
    }
  }
  return {require<double>(j, "epsilon"), require<double>(j, "N"), require<int>(j, "M"),
          std::move(bands)};
}

Json to_json(const PeriodicSamplingGrid& grid) {
  Json j;
  j["delta_X"] = grid.delta_X();
  j["delta_x"] = grid.delta_x();
  j["P"] = grid.P();
  j["J"] = grid.J();
  return j;
}

PeriodicSamplingGrid grid_from_json(const Json& j) {
  return {require<double>(j, "delta_X"), require<double>(j, "delta_x"), require<int>(j, "P"),
          require<std::int64_t>(j, "J")};
}

Json to_json(const StabilityReport& r) {
  Json j;
  j["N"] = r.params.half_bandwidth;
  j["M"] = r.params.harmonics;
  j["epsilon"] = r.params.epsilon;
  j["delta_X"] = r.delta_X;
  j["delta_x"] = r.delta_x;
  j["P"] = r.P;
  j["J"] = r.J;
  j["C_theoretical"] = r.C_theoretical;
  j["vinv_norm"] = r.vinv_norm;
  j["gautschi_lower"] = r.gautschi_lower;
  j["gautschi_upper"] = r.gautschi_upper;
  j["proof_lower"] = r.proof_lower;
  j["proof_upper"] = r.proof_upper;
  j["min_node_gap"] = r.min_node_gap;
  j["node_gap_violations"] = r.node_gap_violations;
  j["measured_ratio"] = r.measured_ratio;
  j["ratio_allowance"] = r.ratio_allowance;
  j["beurling_density"] = r.beurling_density;
  j["landau_rate"] = r.landau_rate;
  j["nyquist_rate"] = r.nyquist_rate;
  j["gautschi_sandwich_holds"] = r.gautschi_sandwich_holds();
  j["proof_sandwich_holds"] = r.proof_sandwich_holds();
  j["measured_ratio_within_bound"] = r.measured_ratio_within_bound();
  return j;
}

std::string stability_csv_header() {
  return "N,M,epsilon,delta_X,delta_x,P,J,C_theoretical,vinv_norm,gautschi_lower,"
         "gautschi_upper,min_node_gap,measured_ratio,beurling_density,landau_rate,nyquist_rate";
}

std::string stability_csv_row(const StabilityReport& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
                     format_double(r.params.half_bandwidth), r.params.harmonics,
                     format_double(r.params.epsilon), format_double(r.delta_X),
                     format_double(r.delta_x), r.P, r.J, format_double(r.C_theoretical),
                     format_double(r.vinv_norm), format_double(r.gautschi_lower),
                     format_double(r.gautschi_upper), format_double(r.min_node_gap),
                     format_double(r.measured_ratio), format_double(r.beurling_density),
                     format_double(r.landau_rate), format_double(r.nyquist_rate));
}

Json to_json(const CalibrationTable& table) {
  Json j;
  Json tau = Json::object();
  Json max_error = Json::object();
  for (const auto& [J, v] : table.tau) tau[std::to_string(J)] = v;
  for (const auto& [J, v] : table.max_error) max_error[std::to_string(J)] = v;
  j["tau"] = std::move(tau);
  Json meta;
  meta["seed"] = table.seed;
  meta["trials"] = table.trials;
  meta["safety_factor"] = table.safety_factor;
  meta["c_tail"] = table.c_tail;
  meta["max_error"] = std::move(max_error);
  if (!table.generated_at.empty()) meta["generated_at"] = table.generated_at;
  j["metadata"] = std::move(meta);
  return j;
}

CalibrationTable calibration_from_json(const Json& j) {
  CalibrationTable table;
  if (!j.contains("tau") || !j.at("tau").is_object()) {
    throw IoError("calibration JSON needs a 'tau' object");
  }
  for (const auto& [key, value] : j.at("tau").items()) {
    table.tau[parse_int(key, 0)] = value.get<double>();
  }
  if (j.contains("metadata")) {
    const auto& meta = j.at("metadata");
    table.seed = meta.value("seed", std::uint64_t{0});
    table.trials = meta.value("trials", 0);
    table.safety_factor = meta.value("safety_factor", 2.0);
    table.c_tail = meta.value("c_tail", 0.0);
    table.generated_at = meta.value("generated_at", std::string{});
    if (meta.contains("max_error")) {
      for (const auto& [key, value] : meta.at("max_error").items()) {
        table.max_error[parse_int(key, 0)] = value.get<double>();
      }
    }
  }
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  out << text;
  if (!out) throw IoError(fmt::format("failed writing '{}'", path.string()));
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

void write_json(const std::filesystem::path& path, const Json& j) {
  write_text(path, j.dump(2) + "\n");
}

std::string grid_points_csv(const PeriodicSamplingGrid& grid) {
  std::string out = "k,j,x\n";
  for (int k = 0; k <= grid.P(); ++k) {
    for (std::int64_t j = -grid.J(); j <= grid.J(); ++j) {
      out += fmt::format("{},{},{}\n", k, j, format_double(grid.point(k, j)));
    }
  }
  return out;
}

std::string samples_csv(const SampleSet& samples) {
  const auto& grid = samples.grid();
  std::string out = "k,j,x,re,im\n";
  for (int k = 0; k <= grid.P(); ++k) {
    for (std::int64_t j = -grid.J(); j <= grid.J(); ++j) {
      const auto v = samples.value(k, j);
      out += fmt::format("{},{},{},{},{}\n", k, j, format_double(grid.point(k, j)),
                         format_double(v.real()), format_double(v.imag()));
    }
  }
  return out;
}

SampleSet samples_from_csv(const std::string& text, const PeriodicSamplingGrid& grid) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("sample CSV is empty");
  const auto header = split_csv(line);
  if (header != std::vector<std::string>{"k", "j", "x", "re", "im"}) {
    throw IoError("sample CSV header must be 'k,j,x,re,im'");
  }
  std::vector<std::complex<double>> values(grid.size());
  std::vector<bool> seen(grid.size(), false);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv(line);
    if (f.size() != 5) throw IoError(fmt::format("line {}: expected 5 fields", line_no));
    const auto k = parse_int(f[0], line_no);
    const auto j = parse_int(f[1], line_no);
    if (k < 0 || k > grid.P() || j < -grid.J() || j > grid.J()) {
      throw IoError(fmt::format("line {}: (k, j) = ({}, {}) outside the grid", line_no, k, j));
    }
    const double x = parse_double(f[2], line_no);
    const double expected = grid.point(static_cast<int>(k), j);
    if (std::abs(x - expected) > 1e-12 * std::max(1.0, std::abs(expected))) {
      throw IoError(fmt::format("line {}: x = {} does not match grid location {}", line_no,
                                format_double(x), format_double(expected)));
    }
    const auto index = static_cast<std::size_t>(k) * static_cast<std::size_t>(grid.row_length()) +
                       static_cast<std::size_t>(j + grid.J());
    if (seen[index]) throw IoError(fmt::format("line {}: duplicate sample ({}, {})", line_no, k, j));
    seen[index] = true;
    values[index] = {parse_double(f[3], line_no), parse_double(f[4], line_no)};
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) throw IoError(fmt::format("sample CSV is missing {} grid points",
                                            std::count(seen.begin(), seen.end(), false)));
  }
  return {grid, std::move(values)};
}

std::string reconstruction_csv(const ReconstructedSignal& recon, double delta_X,
                               const MultiscaleSignalSpec* ground_truth, bool include_bands) {
  std::string out = "x,re_fhat,im_fhat";
  if (ground_truth != nullptr) out += ",re_err,im_err";
  if (include_bands) {
    for (const auto& s : recon.splits) out += fmt::format(",re_band_{0},im_band_{0}", s.m);
  }
  out += '\n';
  for (std::size_t i = 0; i < recon.points.size(); ++i) {
    const auto v = recon.values[i];
    out += fmt::format("{},{},{}", format_double(recon.points[i]), format_double(v.real()),
                       format_double(v.imag()));
    if (ground_truth != nullptr) {
      const auto err = v - evaluate(*ground_truth, recon.points[i]);
      out += fmt::format(",{},{}", format_double(err.real()), format_double(err.imag()));
    }
    if (include_bands) {
      for (std::size_t b = 0; b < recon.splits.size(); ++b) {
        const auto c = recon.band_component(b, i, delta_X);
        out += fmt::format(",{},{}", format_double(c.real()), format_double(c.imag()));
      }
    }
    out += '\n';
  }
  return out;
}

std::string band_report_csv(const BandSupportReport& report) {
  std::string out = "bin_freq,magnitude,in_band\n";
  for (std::size_t i = 0; i < report.frequencies.size(); ++i) {
    out += fmt::format("{},{},{}\n", format_double(report.frequencies[i]),
                       format_double(report.magnitudes[i]), report.in_band[i] ? 1 : 0);
  }
  return out;
}

}  // namespace msamp::io
