#include "commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fmt/format.h>
#include <iostream>

#include "atomgrape/analysis.hpp"
#include "atomgrape/errors.hpp"
#include "atomgrape/grape.hpp"
#include "atomgrape/interferometer.hpp"
#include "atomgrape/io.hpp"
#include "atomgrape/kernels.hpp"
#include "atomgrape/raman.hpp"
#include "atomgrape/units.hpp"

namespace pulsectl {

namespace ag = atomgrape;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

json meta_document(const RunContext& ctx, double wall_time, json extra) {
  json meta;
  meta["command_line"] = ctx.argv;
  meta["versions"] = {
      {"pulsectl", kToolVersion},
      {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
      {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                    NLOHMANN_JSON_VERSION_PATCH)},
      {"cli11", CLI11_VERSION},
  };
  meta["kernel_isa"] = std::string(ag::kernels::isa_name(ag::kernels::detected_isa()));
  meta["wall_time_s"] = wall_time;
  if (!extra.is_null()) meta["details"] = std::move(extra);
  return meta;
}

// Writes `contents` to the output file (plus metadata) or to stdout.
void emit(const RunContext& ctx, const Timer& timer, const std::string& contents, json extra = {}) {
  if (!ctx.out) {
    std::cout << contents;
    return;
  }
  ag::io::write_file_atomic(*ctx.out, contents);
  ag::io::write_file_atomic(*ctx.out + ".meta.json",
                            meta_document(ctx, timer.seconds(), std::move(extra)).dump(2) + "\n");
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

json robustness_json(const ag::RobustnessReport& r) {
  return {{"length_t_pi", r.length_t_pi},
          {"width_half", r.width_half},
          {"width_ninety", r.width_ninety},
          {"max_phase_variation_rad", r.max_phase_variation}};
}

// Extra keys in the optimize config that describe the starting pulse.
struct StartSpec {
  double nominal_rabi = ag::hz_to_angular(200e3);
  double duration = 20e-6;
  std::string initial = "flat";
  std::uint64_t seed = 1;
};

StartSpec start_spec_from_json(std::string_view text) {
  const auto doc = json::parse(text, nullptr, false);
  StartSpec s;
  if (!doc.is_object()) return s;  // config_from_json reports the syntax error
  if (auto it = doc.find("nominal_rabi_hz"); it != doc.end()) {
    if (!it->is_number()) throw ag::ValidationError("nominal_rabi_hz must be a number");
    s.nominal_rabi = ag::hz_to_angular(it->get<double>());
  }
  if (auto it = doc.find("duration_s"); it != doc.end()) {
    if (!it->is_number()) throw ag::ValidationError("duration_s must be a number");
    s.duration = it->get<double>();
  }
  if (auto it = doc.find("initial"); it != doc.end()) {
    if (!it->is_string()) throw ag::ValidationError("initial must be \"flat\" or \"random\"");
    s.initial = it->get<std::string>();
  }
  if (auto it = doc.find("seed"); it != doc.end()) {
    if (!it->is_number_unsigned()) throw ag::ValidationError("seed must be a non-negative integer");
    s.seed = it->get<std::uint64_t>();
  }
  if (!(s.nominal_rabi > 0.0)) throw ag::ValidationError("nominal_rabi_hz must be positive");
  if (!(s.duration > 0.0)) throw ag::ValidationError("duration_s must be positive");
  if (s.initial != "flat" && s.initial != "random") {
    throw ag::ValidationError("initial must be \"flat\" or \"random\"");
  }
  return s;
}

}  // namespace

void catalog_list(const RunContext& ctx) {
  Timer timer;
  std::string out = "name,length_t_pi,sequence\n";
  for (const auto& spec : ag::composite_catalog()) {
    out += fmt::format("{},{},{}\n", ag::io::csv_field(spec.name),
                       ag::io::csv_number(static_cast<double>(spec.length_num) / spec.length_den),
                       ag::io::csv_field(spec.description));
  }
  emit(ctx, timer, out);
}

void catalog_emit(const RunContext& ctx, const CatalogEmitArgs& args) {
  Timer timer;
  const double rabi = ag::parse_frequency(args.rabi);
  if (args.angle_deg) {
    if (args.name != "rectangular") throw ag::ValidationError("--angle applies only to 'rectangular'");
    const auto pulse = ag::rectangular(*args.angle_deg * ag::kPi / 180.0, 0.0, rabi);
    emit(ctx, timer, ag::to_json(pulse), {{"name", args.name}, {"angle_deg", *args.angle_deg}});
    return;
  }
  const auto pulse = ag::composite(args.name, rabi);
  emit(ctx, timer, ag::to_json(pulse), {{"name", args.name}});
}

void optimize(const RunContext& ctx, const OptimizeArgs& args) {
  Timer timer;
  if (!ctx.out) throw ag::ValidationError("optimize requires --out");
  const std::string config_text = ag::io::read_file(args.config);
  const auto config = ag::config_from_json(config_text);
  const auto start = start_spec_from_json(config_text);
  const auto kind = ag::parse_fidelity(args.fidelity);

  ag::PulseWaveform initial;
  if (!args.initial.empty()) {
    initial = ag::discretize(ag::load_pulse(args.initial), config.timestep);
  } else {
    const auto n = static_cast<std::size_t>(std::llround(start.duration / config.timestep));
    if (n == 0) throw ag::ValidationError("duration_s shorter than one timestep");
    initial = start.initial == "flat"
                  ? ag::flat_pulse(start.duration, start.nominal_rabi, n)
                  : ag::random_phase_pulse(start.duration, start.nominal_rabi, n, start.seed);
  }
  const auto ensemble =
      args.ensemble.empty()
          ? ag::build_ensemble(args.n_detuning, args.detuning_range, args.n_coupling, args.coupling_range,
                               args.extra, initial.nominal_rabi)
          : ag::load_ensemble(args.ensemble);

  const auto result = ag::optimize(initial, ensemble, kind, config);
  const auto robustness = ag::robustness_report(result.pulse);

  json report;
  report["termination"] = std::string(ag::termination_name(result.termination));
  report["iterations"] = result.iterations;
  report["evaluations"] = result.evaluations;
  report["final_fidelity"] = result.raw_fidelity_trace.back();
  report["final_gradient_norm"] = result.final_gradient_norm;
  report["fidelity_trace"] = result.fidelity_trace;
  report["raw_fidelity_trace"] = result.raw_fidelity_trace;
  report["ensemble_size"] = ensemble.members.size();
  report["fidelity_kind"] = std::string(ag::fidelity_name(kind));
  report["config"] = json::parse(ag::to_json(config));
  report["robustness"] = robustness_json(robustness);
  report["wall_time_s"] = timer.seconds();

  ag::io::write_file_atomic(*ctx.out + ".report.json", report.dump(2) + "\n");
  emit(ctx, timer, ag::to_json(result.pulse),
       {{"final_fidelity", result.raw_fidelity_trace.back()},
        {"termination", report["termination"]}});
  std::cerr << fmt::format("fidelity {:.6f} after {} iterations ({})\n", result.raw_fidelity_trace.back(),
                           result.iterations, ag::termination_name(result.termination));
}

void respond(const RunContext& ctx, const RespondArgs& args) {
  Timer timer;
  if (args.points < 2) throw ag::ValidationError("--points must be at least 2");
  const auto pulse = ag::load_pulse(args.pulse);
  const auto curve = ag::response_curve(pulse, args.range * pulse.nominal_rabi, args.points);
  std::size_t flagged = 0;
  for (const auto& p : curve) flagged += p.phase_interpolated ? 1 : 0;
  emit(ctx, timer, ag::response_csv(curve, pulse.nominal_rabi),
       {{"pulse", args.pulse}, {"interpolated_phase_points", flagged}});
}

void contour(const RunContext& ctx, const ContourArgs& args) {
  Timer timer;
  const auto pulse = ag::load_pulse(args.pulse);
  const auto grid = ag::contour_grid(pulse, args.drange * pulse.nominal_rabi, args.crange, args.res);
  emit(ctx, timer, ag::contour_csv(grid, pulse.nominal_rabi),
       {{"pulse", args.pulse}, {"contour_levels", grid.contour_levels}});
}

void report(const RunContext& ctx, const ReportArgs& args) {
  Timer timer;
  std::vector<ag::NamedPulse> pulses;
  for (const auto& path : args.pulses) pulses.push_back({stem_of(path), ag::load_pulse(path)});
  const auto rows = ag::table_one_report(pulses);
  if (args.format == "csv") {
    emit(ctx, timer, ag::table_csv(rows));
  } else if (args.format == "text") {
    emit(ctx, timer, ag::table_text(rows));
  } else {
    throw ag::ValidationError("--format must be csv or text");
  }
}

void mz_contrast(const RunContext& ctx, const ContrastArgs& args) {
  Timer timer;
  if (args.temps_uk.empty()) throw ag::ValidationError("--temps needs at least one temperature");
  const auto beamsplitter = ag::load_pulse(args.beamsplitter);
  std::vector<ag::NamedMirror> mirrors;
  for (const auto& path : args.mirrors) mirrors.push_back({stem_of(path), ag::load_pulse(path)});
  std::vector<double> temps;
  for (double t : args.temps_uk) temps.push_back(t * 1e-6);
  ag::ThermalModel model;
  model.quadrature_order = args.order;
  model.max_quadrature_order = args.max_order;
  const auto rows = ag::contrast_sweep(beamsplitter, mirrors, temps, model);
  emit(ctx, timer, ag::contrast_csv(rows),
       {{"beamsplitter", args.beamsplitter},
        {"quadrature_order", args.order},
        {"max_quadrature_order", args.max_order},
        {"atom_mass_kg", model.atom_mass},
        {"effective_wavevector_per_m", model.effective_wavevector}});
}

void raman_scan(const RunContext& ctx, const RamanArgs& args) {
  Timer timer;
  auto pulse = ag::load_pulse(args.pulse);
  if (!args.rabi.empty()) pulse = ag::rescale_rabi(pulse, ag::parse_frequency(args.rabi));
  const double rabi = pulse.nominal_rabi;
  ag::RamanScanConfig config;
  config.nominal_rabi = rabi;
  config.laser_detuning_grid = ag::linear_grid(-args.range * rabi, args.range * rabi, args.points);
  config.sublevels = args.profile.empty() ? ag::default_sublevel_profile(rabi) : ag::load_sublevels(args.profile);
  config.momentum = args.momentum.empty() ? ag::gaussian_momentum(args.momentum_fwhm * rabi)
                                          : ag::load_momentum(args.momentum);
  const auto curve = ag::raman_scan(pulse, config);
  const auto peak = ag::peak_population(curve);
  emit(ctx, timer, ag::scan_csv(curve),
       {{"pulse", args.pulse},
        {"nominal_rabi_hz", ag::angular_to_hz(rabi)},
        {"peak_population", peak.value},
        {"peak_laser_detuning_hz", ag::angular_to_hz(peak.laser_detuning)}});
}

}  // namespace pulsectl
