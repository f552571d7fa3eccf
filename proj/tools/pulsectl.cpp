#include <CLI11.hpp>

#include <iostream>

#include "atomgrape/errors.hpp"
#include "commands.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust pulse design and analysis for two-level atoms"};
  app.require_subcommand(1);

  pulsectl::RunContext ctx;
  ctx.argv.assign(argv, argv + argc);
  std::string out;
  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out,-o", out, "Output file (stdout when omitted)");
  };

  auto* catalog = app.add_subcommand("catalog", "Composite pulse catalog");
  catalog->require_subcommand(1);
  auto* list = catalog->add_subcommand("list", "List catalog pulses");
  add_out(list);
  pulsectl::CatalogEmitArgs emit_args;
  auto* emit = catalog->add_subcommand("emit", "Write a catalog pulse as a pulse file");
  emit->add_option("name", emit_args.name, "Catalog name")->required();
  emit->add_option("--rabi", emit_args.rabi, "Nominal Rabi frequency, e.g. 200kHz");
  emit->add_option("--angle", emit_args.angle_deg, "Rotation angle in degrees (rectangular only)");
  add_out(emit);

  pulsectl::OptimizeArgs opt;
  auto* optimize = app.add_subcommand("optimize", "Optimize a pulse over an ensemble");
  optimize->add_option("--config", opt.config, "Optimization config JSON")->required()->check(CLI::ExistingFile);
  auto* ens = optimize->add_option("--ensemble", opt.ensemble, "Ensemble JSON")->check(CLI::ExistingFile);
  optimize->add_option("--n-detuning", opt.n_detuning, "Detuning grid points")->excludes(ens);
  optimize->add_option("--detuning-range", opt.detuning_range, "Detuning half range, units of Rabi")->excludes(ens);
  optimize->add_option("--n-coupling", opt.n_coupling, "Coupling grid points")->excludes(ens);
  optimize->add_option("--coupling-range", opt.coupling_range, "Coupling half range")->excludes(ens);
  optimize->add_option("--extra", opt.extra, "Extra near-resonance members")->excludes(ens);
  optimize->add_option("--fidelity", opt.fidelity, "real|imag|square");
  optimize->add_option("--initial", opt.initial, "Starting pulse file")->check(CLI::ExistingFile);
  add_out(optimize);

  pulsectl::RespondArgs resp;
  auto* respond = app.add_subcommand("respond", "Population and phase versus detuning");
  respond->add_option("--pulse", resp.pulse, "Pulse file")->required();
  respond->add_option("--range", resp.range, "Detuning half range, units of Rabi");
  respond->add_option("--points", resp.points, "Number of samples");
  add_out(respond);

  pulsectl::ContourArgs cont;
  auto* contour = app.add_subcommand("contour", "Population over detuning and coupling errors");
  contour->add_option("--pulse", cont.pulse, "Pulse file")->required();
  contour->add_option("--drange", cont.drange, "Detuning half range, units of Rabi");
  contour->add_option("--crange", cont.crange, "Coupling half range");
  contour->add_option("--res", cont.res, "Points per axis");
  add_out(contour);

  pulsectl::ReportArgs rep;
  auto* report = app.add_subcommand("report", "Robustness table for catalog and given pulses");
  report->add_option("--pulses", rep.pulses, "Extra pulse files");
  report->add_option("--format", rep.format, "csv|text");
  add_out(report);

  pulsectl::ContrastArgs mz;
  auto* contrast = app.add_subcommand("mz-contrast", "Thermal Mach-Zehnder fringe contrast");
  contrast->add_option("--beamsplitter", mz.beamsplitter, "Beamsplitter pulse file")->required();
  contrast->add_option("--mirrors", mz.mirrors, "Mirror pulse files");
  contrast->add_option("--temps", mz.temps_uk, "Temperatures in microkelvin")->required()->delimiter(',');
  contrast->add_option("--order", mz.order, "Starting Gauss-Hermite order (doubled until converged)");
  contrast->add_option("--max-order", mz.max_order, "Largest Gauss-Hermite order; equal to --order fixes it");
  add_out(contrast);

  pulsectl::RamanArgs ram;
  auto* raman = app.add_subcommand("raman-scan", "Sublevel and momentum averaged detuning scan");
  raman->add_option("--pulse", ram.pulse, "Pulse file")->required();
  raman->add_option("--profile", ram.profile, "Sublevel profile JSON");
  raman->add_option("--momentum", ram.momentum, "Momentum distribution CSV");
  raman->add_option("--rabi", ram.rabi, "Rescale the pulse to this Rabi frequency, e.g. 360kHz");
  raman->add_option("--range", ram.range, "Laser detuning half range, units of Rabi");
  raman->add_option("--points", ram.points, "Number of laser detunings");
  raman->add_option("--momentum-fwhm", ram.momentum_fwhm, "Default momentum FWHM, units of Rabi");
  add_out(raman);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  if (!out.empty()) ctx.out = out;

  try {
    if (list->parsed()) pulsectl::catalog_list(ctx);
    if (emit->parsed()) pulsectl::catalog_emit(ctx, emit_args);
    if (optimize->parsed()) pulsectl::optimize(ctx, opt);
    if (respond->parsed()) pulsectl::respond(ctx, resp);
    if (contour->parsed()) pulsectl::contour(ctx, cont);
    if (report->parsed()) pulsectl::report(ctx, rep);
    if (contrast->parsed()) pulsectl::mz_contrast(ctx, mz);
    if (raman->parsed()) pulsectl::raman_scan(ctx, ram);
  } catch (const atomgrape::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const atomgrape::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
