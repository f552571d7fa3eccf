#pragma once

#include <optional>
#include <string>
#include <vector>

namespace pulsectl {

// Shared by every command that writes a data file.
struct RunContext {
  std::vector<std::string> argv;
  std::optional<std::string> out;  // stdout when empty
};

struct CatalogEmitArgs {
  std::string name;
  std::string rabi = "200kHz";
  std::optional<double> angle_deg;
};

struct OptimizeArgs {
  std::string config;
  std::string ensemble;
  std::size_t n_detuning = 20;
  double detuning_range = 1.5;  // units of the nominal Rabi frequency
  std::size_t n_coupling = 5;
  double coupling_range = 0.1;
  std::size_t extra = 8;
  std::string fidelity = "real";
  std::string initial;
};

struct RespondArgs {
  std::string pulse;
  double range = 6.0;  // units of the nominal Rabi frequency
  std::size_t points = 1201;
};

struct ContourArgs {
  std::string pulse;
  double drange = 3.0;
  double crange = 0.5;
  std::size_t res = 101;
};

struct ReportArgs {
  std::vector<std::string> pulses;
  std::string format = "csv";
};

struct ContrastArgs {
  std::string beamsplitter;
  std::vector<std::string> mirrors;
  std::vector<double> temps_uk;
  std::size_t order = 64;
  std::size_t max_order = 8192;
};

struct RamanArgs {
  std::string pulse;
  std::string profile;
  std::string momentum;
  std::string rabi;  // rescale the pulse to this amplitude when set
  double range = 2.0;
  std::size_t points = 161;
  double momentum_fwhm = 1.5;
};

void catalog_list(const RunContext& ctx);
void catalog_emit(const RunContext& ctx, const CatalogEmitArgs& args);
void optimize(const RunContext& ctx, const OptimizeArgs& args);
void respond(const RunContext& ctx, const RespondArgs& args);
void contour(const RunContext& ctx, const ContourArgs& args);
void report(const RunContext& ctx, const ReportArgs& args);
void mz_contrast(const RunContext& ctx, const ContrastArgs& args);
void raman_scan(const RunContext& ctx, const RamanArgs& args);

}  // namespace pulsectl
