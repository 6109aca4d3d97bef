#pragma once

// JSON and CSV formats. CSV floats carry 17 significant digits so doubles
// round-trip exactly; JSON numbers use nlohmann's shortest round-trip form.

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

#include "msamp/oracle.hpp"
#include "msamp/reconstruction.hpp"
#include "msamp/sampling_grid.hpp"
#include "msamp/sampling_operator.hpp"
#include "msamp/signal_model.hpp"
#include "msamp/stability.hpp"

namespace msamp::io {

using Json = nlohmann::ordered_json;

/// Formats a double with 17 significant digits.
std::string format_double(double v);

// {"epsilon": r, "N": r, "M": n, "bands": [{"m": n, "atoms": [{"j": n, "re": r, "im": r}]}]}
Json to_json(const MultiscaleSignalSpec& spec);
MultiscaleSignalSpec spec_from_json(const Json& j);

// {"delta_X": r, "delta_x": r, "P": n, "J": n}
Json to_json(const PeriodicSamplingGrid& grid);
PeriodicSamplingGrid grid_from_json(const Json& j);

Json to_json(const StabilityReport& report);
std::string stability_csv_header();
std::string stability_csv_row(const StabilityReport& report);

// {"J": tau, ...} under "tau", plus metadata.
Json to_json(const CalibrationTable& table);
CalibrationTable calibration_from_json(const Json& j);

/// Reads a whole file; throws IoError.
std::string read_text(const std::filesystem::path& path);
/// Writes a whole file; throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

/// Columns k, j, x.
std::string grid_points_csv(const PeriodicSamplingGrid& grid);

/// Columns k, j, x, re, im with a header row.
std::string samples_csv(const SampleSet& samples);
/// Parses samples_csv output for the given grid; every (k, j) must appear once
/// and x must match the grid location. Throws IoError.
SampleSet samples_from_csv(const std::string& text, const PeriodicSamplingGrid& grid);

/// Columns x, re_fhat, im_fhat[, re_err, im_err][, re_band_<m>, im_band_<m> ...].
/// Band columns hold the multiscale component c_m(x) exp(2 pi i m x / eps).
std::string reconstruction_csv(const ReconstructedSignal& recon, double delta_X,
                               const MultiscaleSignalSpec* ground_truth, bool include_bands);

/// Columns bin_freq, magnitude, in_band.
std::string band_report_csv(const BandSupportReport& report);

}  // namespace msamp::io
