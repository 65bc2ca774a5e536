#ifndef TORX_SWEEP_HPP
#define TORX_SWEEP_HPP

#include <string>
#include <utility>
#include <vector>

#include "torx/hamiltonian.hpp"
#include "torx/leads.hpp"
#include "torx/observables.hpp"

namespace torx {

/// Declarative sweep over (E, B, alpha, t_hop, V_sd).  Lists are sorted
/// ascending at validation so that output rows are lexicographic in the
/// parameter tuple.
struct SweepSpec {
    TorusGeometry geometry;
    HoppingParams hopping;
    LeadParams lead;   // contact grid is rebuilt from the geometry
    EnergyGrid grid;
    std::vector<double> b_list{0.0};
    std::vector<double> alpha_list{180.0};
    std::vector<double> t_hop_list{-0.25};
    std::vector<double> bias_list;
    std::vector<std::string> outputs{"transmission"};
    double eta = 2e-4;          // spectral tables (dos, transmission, angle_scan);
                                // resolves the default grids, stays well below kT
    double eta_current = 1e-4;  // integrated tables (current, flux_scan)
    double kt = 0.030;          // eV
    FluxConvention flux;
    double plateau_tolerance = 0.25;
    int plateau_min_steps = 5;

    void validate() const;  // throws ConfigError
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat key = value text; '#' comments; lists are comma-separated values or
/// linspace(a, b, n).  Unknown keys are rejected.
SweepSpec parse_config(const std::string& path);
SweepSpec parse_config_text(const std::string& text);

enum class RunStatus { ok = 0, partial = 3, hard_failure = 4 };

struct TableInfo {
    std::string name;
    std::size_t rows = 0;
    std::string digest;  // fnv1a-64 of the file content
};

struct RunManifest {
    std::vector<std::pair<std::string, std::string>> echo;
    std::vector<TableInfo> tables;
    std::vector<std::string> failures;  // one line per failed tuple
    double wall_ms = 0.0;
    RunStatus status = RunStatus::ok;
};

/// Run every requested table, writing <out_dir>/<table>.csv, geometry.txt
/// and manifest.txt.  CSV columns, fixed order:
///   E_eV,B_T,alpha_deg,t_hop_eV,V_sd_eV,T,D_total,I_over_e_h
/// with %.12g floats; rows ordered by (B, alpha, t_hop, V_sd, E).  A solver
/// failure drops the affected tuple, is logged, and the run continues.
RunManifest run_sweep(const SweepSpec& spec, const std::string& out_dir,
                      int workers);

struct Plateau {
    double alpha_start = 0.0;
    double alpha_end = 0.0;
    double mean_t = 0.0;
};

struct PlateauReport {
    std::vector<Plateau> plateaus;
    std::vector<double> center_spacings;  // deg, between consecutive centers
};

/// Maximal runs of >= min_steps consecutive angles whose T stays within
/// +-tolerance of the running mean of the segment.
PlateauReport detect_plateaus(const std::vector<double>& alpha_deg,
                              const std::vector<double>& t_values,
                              double tolerance = 0.25, int min_steps = 5);

struct FluxPeak {
    double period = 0.0;  // in the units of the flux axis
    double weight = 0.0;  // fraction of total oscillation power
};

/// Discrete-spectrum peaks of a uniformly sampled I(flux) series, strongest
/// first.  The mean is removed; periods are span / bin.
std::vector<FluxPeak> extract_flux_period(const std::vector<double>& flux,
                                          const std::vector<double>& current);

/// FNV-1a 64-bit digest, hex; used for the manifest content digests.
std::string fnv1a_digest(const std::string& content);

/// One CSV row in the fixed column order.
struct SweepRow {
    double e = 0.0, b = 0.0, alpha = 0.0, t_hop = 0.0, v_sd = 0.0;
    double t = 0.0, d_total = 0.0, i_over_e_h = 0.0;
};

std::vector<SweepRow> read_table(const std::string& path);

} // namespace torx

#endif
