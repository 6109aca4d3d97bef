#include "msamp/cli.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <set>

#include "msamp/errors.hpp"
#include "msamp/io.hpp"
#include "msamp/oracle.hpp"
#include "msamp/reconstruction.hpp"
#include "msamp/sampling_grid.hpp"
#include "msamp/sampling_operator.hpp"
#include "msamp/signal_model.hpp"
#include "msamp/stability.hpp"

namespace msamp::cli {
namespace {

using io::Json;

constexpr std::uint64_t kDefaultSeed = 1;

class UsageError : public Error {
 public:
  using Error::Error;
};

// Options of one subcommand, filled from flags first and then from the
// config file for anything the flags left unset.
class Options {
 public:
  explicit Options(CLI::App* app) : app_(app) {}

  template <typename T>
  CLI::Option* add(const std::string& name, T& target, const std::string& help) {
    auto* opt = app_->add_option("--" + name, target, help);
    bindings_.push_back({name, opt, [&target](const Json& v) { target = v.get<T>(); }});
    return opt;
  }

  CLI::Option* flag(const std::string& name, bool& target, const std::string& help) {
    auto* opt = app_->add_flag("--" + name, target, help);
    bindings_.push_back({name, opt, [&target](const Json& v) { target = v.get<bool>(); }});
    return opt;
  }

  void apply_config(const Json& config) {
    for (auto& b : bindings_) {
      if (b.option->count() > 0 || !config.contains(b.name)) continue;
      try {
        b.set(config.at(b.name));
      } catch (const nlohmann::json::exception& e) {
        throw IoError(fmt::format("config key '{}': {}", b.name, e.what()));
      }
      from_config_.insert(b.name);
    }
  }

  bool given(const std::string& name) const {
    for (const auto& b : bindings_) {
      if (b.name == name) return b.option->count() > 0 || from_config_.count(name) > 0;
    }
    return false;
  }

  void require(const std::string& name) const {
    if (!given(name)) throw UsageError(fmt::format("--{} is required", name));
  }

  CLI::App* app() const { return app_; }

 private:
  struct Binding {
    std::string name;
    CLI::Option* option;
    std::function<void(const Json&)> set;
  };
  CLI::App* app_;
  std::vector<Binding> bindings_;
  std::set<std::string> from_config_;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
  } else {
    io::write_text(path, text);
  }
}

std::uint64_t resolve_seed(const Options& opts, std::uint64_t flag_value) {
  if (opts.given("seed")) return flag_value;
  if (const char* env = std::getenv("MSAMP_SEED")) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0') throw UsageError(fmt::format("MSAMP_SEED='{}' is not an integer", env));
    return v;
  }
  return kDefaultSeed;
}

struct GridArgs {
  std::string grid_path;
  double delta_X = 0.0;
  double delta_x = 0.0;
  int P = -1;
  std::int64_t J = 64;

  void add_to(Options& opts) {
    opts.add("grid", grid_path, "grid JSON {delta_X, delta_x, P, J}");
    opts.add("dX", delta_X, "macro spacing");
    opts.add("dx", delta_x, "coset offset");
    opts.add("P", P, "number of cosets minus one (default 2M)");
    opts.add("J", J, "truncation: indices |j| <= J");
  }

  PeriodicSamplingGrid resolve(const Options& opts, int harmonics) const {
    if (!grid_path.empty()) return io::grid_from_json(io::read_json(grid_path));
    opts.require("dX");
    opts.require("dx");
    return build_grid(delta_X, delta_x, opts.given("P") ? P : 2 * harmonics, J);
  }
};

struct PointRange {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t count = 0;
};

PointRange parse_points(const std::string& text) {
  const auto first = text.find(':');
  const auto second = first == std::string::npos ? first : text.find(':', first + 1);
  if (second == std::string::npos) {
    throw UsageError(fmt::format("--points '{}' must look like lo:hi:n", text));
  }
  PointRange r;
  try {
    r.lo = std::stod(text.substr(0, first));
    r.hi = std::stod(text.substr(first + 1, second - first - 1));
    r.count = std::stoul(text.substr(second + 1));
  } catch (const std::exception&) {
    throw UsageError(fmt::format("--points '{}' must look like lo:hi:n", text));
  }
  if (r.count == 0 || !(r.lo <= r.hi) || (r.count > 1 && r.lo == r.hi)) {
    throw UsageError(fmt::format("--points '{}' needs lo < hi and n >= 1", text));
  }
  return r;
}

std::vector<double> linspace(const PointRange& r) {
  std::vector<double> xs(r.count);
  if (r.count == 1) {
    xs[0] = r.lo;
    return xs;
  }
  const double step = (r.hi - r.lo) / static_cast<double>(r.count - 1);
  for (std::size_t i = 0; i < r.count; ++i) xs[i] = r.lo + step * static_cast<double>(i);
  xs.back() = r.hi;
  return xs;
}

SolveMethod parse_method(const std::string& name) {
  if (name == "auto") return SolveMethod::automatic;
  if (name == "lu") return SolveMethod::lu;
  if (name == "bjorck-pereyra") return SolveMethod::bjorck_pereyra;
  throw UsageError(fmt::format("--method '{}' must be auto, lu or bjorck-pereyra", name));
}

std::string support_summary(const MultiscaleSignalSpec& spec) {
  const auto support = spectral_support(spec);
  std::string s = fmt::format("spectral support: {} bands, total measure {}\n",
                              support.intervals.size(), io::format_double(support.total_measure()));
  for (const auto& [lo, hi] : support.intervals) {
    s += fmt::format("  [{}, {}]\n", io::format_double(lo), io::format_double(hi));
  }
  s += fmt::format("nyquist rate {}, landau rate {}\n", io::format_double(nyquist_rate(spec)),
                   io::format_double(landau_rate(spec)));
  return s;
}

// -- subcommands ------------------------------------------------------------

struct SynthArgs {
  double N = 0.0;
  int M = 1;
  double epsilon = 0.0;
  int atoms = 3;
  double amplitude = 1.0;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

int cmd_synth(const Options& opts, const SynthArgs& a, std::ostream& out, std::ostream& err) {
  opts.require("N");
  opts.require("epsilon");
  const auto spec = random_signal(resolve_seed(opts, a.seed), a.N, a.M, a.epsilon, a.atoms, a.amplitude);
  const auto summary = support_summary(spec);
  emit(io::to_json(spec).dump(2) + "\n", a.out, out);
  (a.out.empty() ? err : out) << summary;
  return kOk;
}

struct SampleArgs {
  std::string spec;
  GridArgs grid;
  std::string out;
  std::string grid_out;
};

int cmd_sample(const Options& opts, const SampleArgs& a, std::ostream& out) {
  opts.require("spec");
  const auto spec = io::spec_from_json(io::read_json(a.spec));
  const auto grid = a.grid.resolve(opts, spec.harmonics());
  const auto samples = sample_signal(spec, grid);
  emit(io::samples_csv(samples), a.out, out);
  if (!a.grid_out.empty()) io::write_json(a.grid_out, io::to_json(grid));
  return kOk;
}

struct ReconstructArgs {
  std::string samples;
  std::string spec;
  GridArgs grid;
  double N = 0.0;
  int M = -1;
  double epsilon = 0.0;
  std::string points;
  std::string method = "auto";
  bool bands = false;
  std::string out;
};

int cmd_reconstruct(const Options& opts, const ReconstructArgs& a, std::ostream& out,
                    std::ostream& err) {
  opts.require("samples");
  std::optional<MultiscaleSignalSpec> truth;
  SignalParams params;
  if (!a.spec.empty()) {
    truth = io::spec_from_json(io::read_json(a.spec));
    params = SignalParams::of(*truth);
  } else {
    opts.require("N");
    opts.require("M");
    opts.require("epsilon");
    params = {a.N, a.M, a.epsilon};
  }
  const auto grid = a.grid.resolve(opts, params.harmonics);
  const auto samples = io::samples_from_csv(io::read_text(a.samples), grid);

  std::vector<double> xs;
  if (!a.points.empty()) {
    xs = linspace(parse_points(a.points));
  } else if (truth) {
    xs = interior_points(*truth, grid);
  } else {
    const double half = static_cast<double>(grid.J()) * grid.delta_X() / 2.0;
    xs = linspace({-half, half, 257});
  }

  const auto recon = reconstruct(samples, params, xs, parse_method(a.method));
  emit(io::reconstruction_csv(recon, grid.delta_X(), truth ? &*truth : nullptr, a.bands), a.out,
       out);

  if (truth) {
    double max_err = 0.0;
    double sum_err = 0.0;
    double max_ref = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto ref = evaluate(*truth, xs[i]);
      const double e = std::abs(recon.values[i] - ref);
      max_err = std::max(max_err, e);
      sum_err += e;
      max_ref = std::max(max_ref, std::abs(ref));
    }
    auto& report = a.out.empty() ? err : out;
    fmt::print(report, "points {}\nmax_abs_error {}\nmean_abs_error {}\nmax_relative_error {}\n",
               xs.size(), io::format_double(max_err),
               io::format_double(sum_err / static_cast<double>(xs.size())),
               io::format_double(max_ref > 0.0 ? max_err / max_ref : max_err));
  }
  return kOk;
}

struct StabilityArgs {
  std::string spec;
  GridArgs grid;
  std::string format = "json";
  std::string out;
};

int cmd_stability(const Options& opts, const StabilityArgs& a, std::ostream& out) {
  opts.require("spec");
  const auto spec = io::spec_from_json(io::read_json(a.spec));
  const auto grid = a.grid.resolve(opts, spec.harmonics());
  const auto report = stability_report(spec, grid);
  if (a.format == "json") {
    emit(io::to_json(report).dump(2) + "\n", a.out, out);
  } else if (a.format == "csv") {
    emit(io::stability_csv_header() + "\n" + io::stability_csv_row(report) + "\n", a.out, out);
  } else {
    throw UsageError(fmt::format("--format '{}' must be json or csv", a.format));
  }
  return kOk;
}

struct SweepArgs {
  double N = 1.0;
  int M = 1;
  double epsilon = 0.1;
  double delta_X = 0.0;
  std::int64_t J = 64;
  int count = 16;
  int atoms = 3;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

// Largest dX = L eps <= 1/(2N) with integer L >= 2 when M >= 1, else 1/(2N).
double default_sweep_spacing(double N, int M, double epsilon) {
  const double nyquist_spacing = 1.0 / (2.0 * N);
  if (M == 0) return nyquist_spacing;
  const double L = std::floor(nyquist_spacing / epsilon * (1.0 + 1e-12));
  return L >= 2.0 ? L * epsilon : nyquist_spacing;
}

int cmd_sweep(const Options& opts, const SweepArgs& a, std::ostream& out) {
  if (a.count < 1) throw UsageError("--count must be at least 1");
  const double delta_X = opts.given("dX") ? a.delta_X : default_sweep_spacing(a.N, a.M, a.epsilon);
  const auto spec = random_signal(resolve_seed(opts, a.seed), a.N, a.M, a.epsilon, a.atoms, 1.0);
  const double top = 1.0 / (2.0 * a.M + 1.0);

  std::string csv = "index,dx_over_eps,delta_x,C,vinv_norm,measured_error,skipped,reason\n";
  for (int i = 0; i < a.count; ++i) {
    const double ratio = top * static_cast<double>(i + 1) / static_cast<double>(a.count);
    const double delta_x = ratio * a.epsilon;
    std::string C = "nan";
    std::string vinv = "nan";
    std::string error = "nan";
    std::string reason;
    try {
      C = io::format_double(stability_constant(a.N, a.M, a.epsilon, delta_X, delta_x));
      const auto grid = build_grid(delta_X, delta_x, 2 * a.M, a.J);
      const auto report = validate_against(grid, spec);
      if (!report.passed()) throw ConstraintError(report.summary());
      vinv = io::format_double(vandermonde_inverse_norm(build_vandermonde(spec, grid)));
      error = io::format_double(interior_relative_error(spec, grid));
    } catch (const Error& e) {
      reason = e.what();
      for (auto& ch : reason) {
        if (ch == '\n' || ch == ',') ch = ';';
      }
    }
    csv += fmt::format("{},{},{},{},{},{},{},{}\n", i, io::format_double(ratio),
                       io::format_double(delta_x), C, vinv, error, reason.empty() ? 0 : 1,
                       reason);
  }
  emit(csv, a.out, out);
  return kOk;
}

struct CalibrateArgs {
  std::vector<std::int64_t> J{64, 128, 256, 512};
  int trials = 500;
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

int cmd_calibrate(const Options& opts, const CalibrateArgs& a, std::ostream& out) {
  const auto table = calibrate_truncation(a.J, a.trials, resolve_seed(opts, a.seed));
  emit(io::to_json(table).dump(2) + "\n", a.out, out);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multicoset sampling and reconstruction of multiscale bandlimited signals", "msamp"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with option defaults");

  auto* synth = app.add_subcommand("synth", "write a random signal spec");
  Options synth_opts(synth);
  SynthArgs synth_args;
  synth_opts.add("N", synth_args.N, "band half-width N");
  synth_opts.add("M", synth_args.M, "highest harmonic M");
  synth_opts.add("epsilon", synth_args.epsilon, "scale ratio");
  synth_opts.add("atoms", synth_args.atoms, "sinc atoms per band");
  synth_opts.add("amplitude", synth_args.amplitude, "bound on atom amplitudes");
  synth_opts.add("seed", synth_args.seed, "RNG seed (else MSAMP_SEED, else 1)");
  synth_opts.add("out", synth_args.out, "output JSON (default stdout)");

  auto* sample = app.add_subcommand("sample", "sample a spec on a multicoset grid");
  Options sample_opts(sample);
  SampleArgs sample_args;
  sample_opts.add("spec", sample_args.spec, "signal spec JSON");
  sample_args.grid.add_to(sample_opts);
  sample_opts.add("out", sample_args.out, "output CSV (default stdout)");
  sample_opts.add("grid-out", sample_args.grid_out, "also write the grid JSON here");

  auto* recon = app.add_subcommand("reconstruct", "reconstruct from a sample CSV");
  Options recon_opts(recon);
  ReconstructArgs recon_args;
  recon_opts.add("samples", recon_args.samples, "sample CSV");
  recon_opts.add("spec", recon_args.spec, "ground-truth spec JSON (also supplies N, M, epsilon)");
  recon_args.grid.add_to(recon_opts);
  recon_opts.add("N", recon_args.N, "band half-width when no spec is given");
  recon_opts.add("M", recon_args.M, "highest harmonic when no spec is given");
  recon_opts.add("epsilon", recon_args.epsilon, "scale ratio when no spec is given");
  recon_opts.add("points", recon_args.points, "evaluation points lo:hi:n");
  recon_opts.add("method", recon_args.method, "auto | lu | bjorck-pereyra");
  recon_opts.flag("bands", recon_args.bands, "add per-band component columns");
  recon_opts.add("out", recon_args.out, "output CSV (default stdout)");

  auto* stab = app.add_subcommand("stability", "stability report for a spec and grid");
  Options stab_opts(stab);
  StabilityArgs stab_args;
  stab_opts.add("spec", stab_args.spec, "signal spec JSON");
  stab_args.grid.add_to(stab_opts);
  stab_opts.add("format", stab_args.format, "json | csv");
  stab_opts.add("out", stab_args.out, "output file (default stdout)");

  auto* sweep = app.add_subcommand("sweep", "sweep dx/eps over (0, 1/(2M+1)]");
  Options sweep_opts(sweep);
  SweepArgs sweep_args;
  sweep_opts.add("N", sweep_args.N, "band half-width N");
  sweep_opts.add("M", sweep_args.M, "highest harmonic M");
  sweep_opts.add("epsilon", sweep_args.epsilon, "scale ratio");
  sweep_opts.add("dX", sweep_args.delta_X, "macro spacing (default: largest L*eps <= 1/(2N))");
  sweep_opts.add("J", sweep_args.J, "truncation");
  sweep_opts.add("count", sweep_args.count, "number of sweep points");
  sweep_opts.add("atoms", sweep_args.atoms, "sinc atoms per band of the test signal");
  sweep_opts.add("seed", sweep_args.seed, "RNG seed of the test signal");
  sweep_opts.add("out", sweep_args.out, "output CSV (default stdout)");

  auto* calib = app.add_subcommand("calibrate", "tabulate truncation tolerances tau(J)");
  Options calib_opts(calib);
  CalibrateArgs calib_args;
  calib_opts.add("J", calib_args.J, "ascending truncations")->delimiter(',');
  calib_opts.add("trials", calib_args.trials, "random pairs per J (>= 30)");
  calib_opts.add("seed", calib_args.seed, "RNG seed");
  calib_opts.add("out", calib_args.out, "output JSON (default stdout)");

  std::vector<Options*> all{&synth_opts, &sample_opts, &recon_opts,
                            &stab_opts,  &sweep_opts,  &calib_opts};

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);

    Options* active = nullptr;
    for (auto* o : all) {
      if (o->app()->parsed()) active = o;
    }
    if (!config_path.empty()) {
      Json config = io::read_json(config_path);
      if (!config.is_object()) throw IoError("config file must hold a JSON object");
      const auto name = active->app()->get_name();
      if (config.contains(name) && config.at(name).is_object()) {
        Json section = config.at(name);
        for (auto& [k, v] : config.items()) {
          if (!section.contains(k) && !v.is_object()) section[k] = v;
        }
        config = std::move(section);
      }
      active->apply_config(config);
    }

    if (synth->parsed()) return cmd_synth(synth_opts, synth_args, out, err);
    if (sample->parsed()) return cmd_sample(sample_opts, sample_args, out);
    if (recon->parsed()) return cmd_reconstruct(recon_opts, recon_args, out, err);
    if (stab->parsed()) return cmd_stability(stab_opts, stab_args, out);
    if (sweep->parsed()) return cmd_sweep(sweep_opts, sweep_args, out);
    return cmd_calibrate(calib_opts, calib_args, out);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraintViolation;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraintViolation;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  } catch (const SingularityError& e) {
    err << "singular system: " << e.what() << "\n";
    return kSingular;
  } catch (const ConstraintError& e) {
    err << "constraint violated:\n" << e.what() << "\n";
    return kConstraintViolation;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraintViolation;
  } catch (const DegenerateError& e) {
    err << "error: " << e.what() << "\n";
    return kConstraintViolation;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kIoFailure;
  }
}

}  // namespace msamp::cli
