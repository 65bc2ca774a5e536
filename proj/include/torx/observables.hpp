#ifndef TORX_OBSERVABLES_HPP
#define TORX_OBSERVABLES_HPP

#include <array>
#include <vector>

#include "torx/greens.hpp"

namespace torx {

struct BiasConfig {
    double v_sd = 0.0;   // eV
    double kt = 0.030;   // eV

    double mu_left() const { return 0.5 * v_sd; }
    double mu_right() const { return -0.5 * v_sd; }
};

struct EnergyGrid {
    double e_min = -0.2;  // eV
    double e_max = 0.2;   // eV
    double step = 5e-5;   // eV

    int n_points() const;
    double at(int i) const { return e_min + i * step; }
    void validate() const;
};

/// The paper labels flux through the torus as B / b_per_phi0.  The value
/// 0.026 T per flux quantum is taken verbatim; note that the geometric area
/// pi R^2 of the default torus gives ~39 T per flux quantum instead, i.e.
/// 0.026 matches the flux *per Tesla*, not per quantum.  We keep the label
/// convention and expose the geometric one separately.
struct FluxConvention {
    double b_per_phi0 = 0.026;  // T
};

/// D(E) = G (Gamma_L + Gamma_R) G^dag.  Gamma is supported on the eight
/// contact sites, so the diagonal reduces exactly to the contact columns of
/// G: D_jj = sum_pq G_jp Gamma_pq G_jq^*, reported for every site together
/// with the sum (the trace of the full product).
struct DensityOfStates {
    std::vector<double> site;  // eV^-1, one entry per lattice site
    double total = 0.0;
};

/// Needs a GreensResult solved with keep_columns = true.
DensityOfStates density_of_states(const GreensResult& g,
                                  const ContactSelfEnergy& left,
                                  const ContactSelfEnergy& right);

/// T(E) = Trace[Gamma_L G Gamma_R G^dag] over the joint contact subspace.
/// Real up to roundoff; values in [-1e-12, 0) clamp to zero, anything more
/// negative throws (solver failure).
double transmission(const GreensResult& g, const ContactSelfEnergy& left,
                    const ContactSelfEnergy& right);

/// Fermi function 1 / (exp((E - mu)/kT) + 1), overflow-safe.
double fermi(double energy, double mu, double kt);

/// Landauer current by trapezoidal quadrature of T(E) [f_L - f_R] over the
/// grid, returned in units of e/h (i.e. 2 * integral in eV).  The grid must
/// reach 5 kT past both chemical potentials.
double current(const std::vector<double>& t_of_e, const EnergyGrid& grid,
               const BiasConfig& bias);

double flux_ratio(double b_field, const FluxConvention& conv = {});

/// field that threads one flux quantum through the plane circle of radius R
double b_per_phi0_geometric(double major_radius);

struct InterferenceEstimate {
    double lambda_nm = 0.0;      // de Broglie wavelength
    double delta_alpha_deg = 0.0;  // spacing of interference minima
};

/// lambda from E = hbar^2 k^2 / 2 m_e, and
/// delta_alpha = 360 deg * (lambda/2) / (2 pi R).
InterferenceEstimate interference_estimate(double energy, double major_radius);

} // namespace torx

#endif
