#include "torx/leads.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "torx/constants.hpp"

namespace torx {

namespace {
constexpr double kPi = constants::pi;
constexpr double kTailBound = 1e-10;
} // namespace

double LeadParams::t_lead() const {
    return constants::hbar2_over_me / (a_lead * a_lead);
}

int LeadParams::lattice_mode_limit_y() const {
    return std::max(1, static_cast<int>(std::lround(ly / a_lead)) - 1);
}

int LeadParams::lattice_mode_limit_z() const {
    return std::max(1, static_cast<int>(std::lround(lz / a_lead)) - 1);
}

void LeadParams::validate() const {
    if (!(a_lead > 0.0 && ly > 0.0 && lz > 0.0))
        throw std::invalid_argument("lead dimensions must be positive");
    if (mode_cutoff < 1)
        throw std::invalid_argument("mode_cutoff must be at least 1");
    for (const auto& c : contact_yz)
        if (!(c[0] > 0.0 && c[0] < ly && c[1] > 0.0 && c[1] < lz))
            throw std::invalid_argument("contact point outside the lead cross-section");
}

double mode_energy(int m, int n, const LeadParams& params) {
    const double c = constants::hbar2_over_2me * kPi * kPi;
    return c * (static_cast<double>(m) * m / (params.ly * params.ly) +
                static_cast<double>(n) * n / (params.lz * params.lz));
}

cdouble lead_bracket(double alpha) {
    if (std::abs(alpha) <= 1.0)
        return {-alpha, std::sqrt(1.0 - alpha * alpha)};
    const double root = std::sqrt(alpha * alpha - 1.0);
    return {(alpha > 0.0 ? root : -root) - alpha, 0.0};
}

namespace {

double mode_alpha(double energy, double e_mn, const LeadParams& p) {
    return (energy + p.fermi_energy - e_mn) / p.t_lead() - 1.0;
}

} // namespace

cdouble surface_green(double energy, const std::array<double, 2>& r_t,
                      const std::array<double, 2>& r_s, const LeadParams& params) {
    params.validate();
    const int my = std::min(params.mode_cutoff, params.lattice_mode_limit_y());
    const int mz = std::min(params.mode_cutoff, params.lattice_mode_limit_z());

    const double prefactor = -8.0 * params.a_lead / constants::hbar2_over_me /
                             (params.ly * params.lz);
    cdouble g = 0.0;
    for (int m = 1; m <= my; ++m) {
        for (int n = 1; n <= mz; ++n) {
            // grouped per point so that swapping r_t and r_s is exact
            const double s_t = std::sin(m * kPi * r_t[0] / params.ly) *
                               std::sin(n * kPi * r_t[1] / params.lz);
            const double s_s = std::sin(m * kPi * r_s[0] / params.ly) *
                               std::sin(n * kPi * r_s[1] / params.lz);
            g += prefactor * (s_t * s_s) *
                 lead_bracket(mode_alpha(energy, mode_energy(m, n, params), params));
        }
    }

    // lattice modes dropped by a sub-physical cutoff are a real truncation,
    // not a convergent tail; flag them with the achieved bound
    if (my < params.lattice_mode_limit_y() || mz < params.lattice_mode_limit_z()) {
        double tail = 0.0;
        for (int m = 1; m <= params.lattice_mode_limit_y(); ++m)
            for (int n = 1; n <= params.lattice_mode_limit_z(); ++n) {
                if (m <= my && n <= mz) continue;
                tail += std::abs(prefactor) *
                        std::abs(lead_bracket(mode_alpha(energy, mode_energy(m, n, params), params)));
            }
        if (tail > kTailBound) {
            std::ostringstream msg;
            msg << "lead mode sum not converged: cutoff " << params.mode_cutoff
                << " drops lattice modes worth " << tail << " (> " << kTailBound << ")";
            throw std::runtime_error(msg.str());
        }
    }
    return g;
}

ContactSelfEnergy self_energy(double energy, const LeadParams& lead, double t_hop) {
    ContactSelfEnergy out;
    out.energy = energy;
    const double t2 = t_hop * t_hop;
    for (int p = 0; p < 4; ++p) {
        for (int q = p; q < 4; ++q) {
            const cdouble g = surface_green(energy, lead.contact_yz[p],
                                            lead.contact_yz[q], lead);
            out.sigma(p, q) = t2 * g;
            out.sigma(q, p) = t2 * g;  // mode expansion is symmetric in (r_t, r_s)
        }
    }
    const cdouble i2pi(0.0, 2.0 * kPi);
    out.gamma = i2pi * (out.sigma - out.sigma.adjoint());
    return out;
}

LeadParams default_lead(const TorusGeometry& geom) {
    LeadParams p;
    // contact grid spacing from the torus: the two same-sublattice contact
    // slots sit 60 deg apart on the minor circle (theta = -20 and +40 deg),
    // and the grid repeats one layer further around
    const double dz = 2.0 * geom.minor_radius * std::sin(kPi / 6.0);
    const double rho = geom.major_radius + geom.minor_radius * std::cos(kPi / 9.0);
    const double dy = 2.0 * rho * std::sin(kPi / geom.n_layers);
    const double y0 = 0.5 * (p.ly - dy), y1 = 0.5 * (p.ly + dy);
    const double z0 = 0.5 * (p.lz - dz), z1 = 0.5 * (p.lz + dz);
    // order matches place_leads: (layer, slot 11), (layer, slot 0), then the
    // same two slots on the next layer
    p.contact_yz = {{{y0, z0}, {y0, z1}, {y1, z0}, {y1, z1}}};
    return p;
}

} // namespace torx
