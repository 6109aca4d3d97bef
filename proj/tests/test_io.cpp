#include <doctest.h>

#include <string>

#include "msamp/errors.hpp"
#include "msamp/io.hpp"
#include "test_support.hpp"

using namespace msamp;
using C = std::complex<double>;

TEST_CASE("spec JSON round trip") {
  const auto spec = random_signal(3, 1.25, 2, 0.03, 3, 1.0);
  const auto back = io::spec_from_json(io::Json::parse(io::to_json(spec).dump()));
  CHECK(back == spec);
  CHECK_THROWS_AS(io::spec_from_json(io::Json::parse(R"({"epsilon": 0.1, "N": 1, "M": 0})")),
                  IoError);
  CHECK_THROWS_AS(
      io::spec_from_json(io::Json::parse(
          R"({"epsilon": 0.1, "N": 1, "M": 0, "bands": [{"m": 0, "atoms": [{"j": 0, "re": "x", "im": 0}]}]})")),
      IoError);
  CHECK_THROWS_AS(
      io::spec_from_json(io::Json::parse(
          R"({"epsilon": 0.6, "N": 1, "M": 0, "bands": [{"m": 0, "atoms": [{"j": 0, "re": 1, "im": 0}]}]})")),
      ConstraintError);
}

TEST_CASE("grid JSON round trip") {
  const auto grid = build_grid(0.35, 0.0123456789012345, 4, 77);
  CHECK(io::grid_from_json(io::Json::parse(io::to_json(grid).dump())) == grid);
}

TEST_CASE("doubles print with 17 significant digits") {
  CHECK(io::format_double(0.1) == "0.10000000000000001");
  CHECK(io::format_double(1.0) == "1");
  CHECK(std::stod(io::format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("sample CSV round trip is lossless") {
  const auto spec = msamp::test::three_band_spec();
  const auto grid = build_grid(0.3, 0.03, 2, 6);
  const auto samples = sample_signal(spec, grid);
  const auto csv = io::samples_csv(samples);
  CHECK(csv.rfind("k,j,x,re,im\n", 0) == 0);
  const auto back = io::samples_from_csv(csv, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(back.values()[i] == samples.values()[i]);
  CHECK(io::samples_csv(back) == csv);
}

TEST_CASE("sample CSV consistency checks") {
  const auto spec = msamp::test::three_band_spec();
  const auto grid = build_grid(0.3, 0.03, 2, 2);
  const auto csv = io::samples_csv(sample_signal(spec, grid));
  CHECK_THROWS_AS(io::samples_from_csv("", grid), IoError);
  CHECK_THROWS_AS(io::samples_from_csv("a,b\n", grid), IoError);
  // Wrong grid: x does not match.
  CHECK_THROWS_AS(io::samples_from_csv(csv, build_grid(0.3, 0.02, 2, 2)), IoError);
  // Grid larger than the file.
  CHECK_THROWS_AS(io::samples_from_csv(csv, build_grid(0.3, 0.03, 2, 3)), IoError);
  // Duplicate row.
  const auto first_row = csv.substr(csv.find('\n') + 1, csv.find('\n', csv.find('\n') + 1) - csv.find('\n'));
  CHECK_THROWS_AS(io::samples_from_csv(csv + first_row, grid), IoError);
  CHECK_THROWS_AS(io::samples_from_csv("k,j,x,re,im\n0,0,0,abc,0\n", grid), IoError);
}

TEST_CASE("grid points CSV") {
  const auto csv = io::grid_points_csv(build_grid(0.5, 0.1, 1, 1));
  CHECK(csv == "k,j,x\n0,-1,-0.5\n0,0,0\n0,1,0.5\n1,-1,-0.40000000000000002\n1,0,0.10000000000000001\n1,1,0.59999999999999998\n");
}

TEST_CASE("reconstruction CSV columns") {
  const auto spec = msamp::test::three_band_spec();
  const auto grid = build_grid(0.3, 0.03, 2, 32);
  const std::vector<double> xs{0.0, 0.1};
  const auto recon = reconstruct(sample_signal(spec, grid), SignalParams::of(spec), xs);
  auto csv = io::reconstruction_csv(recon, 0.3, nullptr, false);
  CHECK(csv.rfind("x,re_fhat,im_fhat\n", 0) == 0);
  csv = io::reconstruction_csv(recon, 0.3, &spec, true);
  CHECK(csv.rfind("x,re_fhat,im_fhat,re_err,im_err,re_band_-1,im_band_-1,re_band_0,im_band_0,"
                  "re_band_1,im_band_1\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("stability JSON and CSV") {
  const auto spec = msamp::test::three_band_spec();
  const auto report = stability_report(spec, build_grid(0.3, 0.03, 2, 32));
  const auto j = io::to_json(report);
  CHECK(j.at("C_theoretical").get<double>() == report.C_theoretical);
  CHECK(j.at("vinv_norm").get<double>() == report.vinv_norm);
  CHECK(j.at("gautschi_sandwich_holds").get<bool>());
  const auto header = io::stability_csv_header();
  const auto row = io::stability_csv_row(report);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
}

TEST_CASE("calibration JSON round trip") {
  CalibrationTable t;
  t.seed = 42;
  t.trials = 31;
  t.c_tail = 0.5;
  t.max_error = {{64, 1e-3}, {128, 4e-4}};
  t.tau = {{64, 2e-3}, {128, 8e-4}};
  const auto back = io::calibration_from_json(io::Json::parse(io::to_json(t).dump()));
  CHECK(back.seed == 42);
  CHECK(back.trials == 31);
  CHECK(back.tau == t.tau);
  CHECK(back.max_error == t.max_error);
  CHECK_THROWS_AS(io::calibration_from_json(io::Json::parse("{}")), IoError);
}

TEST_CASE("file helpers") {
  msamp::test::TempDir dir;
  const auto path = dir.file("x.json");
  io::write_json(path, io::Json{{"a", 1}});
  CHECK(io::read_json(path).at("a").get<int>() == 1);
  io::write_text(dir.file("bad.json"), "{not json");
  CHECK_THROWS_AS(io::read_json(dir.file("bad.json")), IoError);
  CHECK_THROWS_AS(io::read_text(dir.file("missing")), IoError);
  CHECK_THROWS_AS(io::write_text(dir.file("no/such/dir/f"), "x"), IoError);
}

TEST_CASE("band report CSV") {
  BandSupportReport r;
  r.frequencies = {-1.0, 0.0};
  r.magnitudes = {0.5, 2.0};
  r.in_band = {false, true};
  CHECK(io::band_report_csv(r) == "bin_freq,magnitude,in_band\n-1,0.5,0\n0,2,1\n");
}
