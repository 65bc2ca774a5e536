#include "torx/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "torx/constants.hpp"

namespace torx {

namespace {
constexpr double kClampTol = 1e-12;

Matrix8c embed_gammas(const ContactSelfEnergy& left, const ContactSelfEnergy& right) {
    Matrix8c g = Matrix8c::Zero();
    g.block<4, 4>(0, 0) = left.gamma;
    g.block<4, 4>(4, 4) = right.gamma;
    return g;
}
} // namespace

int EnergyGrid::n_points() const {
    return static_cast<int>(std::lround((e_max - e_min) / step)) + 1;
}

void EnergyGrid::validate() const {
    if (!(step > 0.0) || !(e_max >= e_min))
        throw std::invalid_argument("energy grid must have positive step and e_max >= e_min");
    const double span = e_max - e_min;
    const double steps = span / step;
    if (std::abs(steps - std::lround(steps)) > 1e-6)
        throw std::invalid_argument("energy grid span is not a multiple of the step");
}

DensityOfStates density_of_states(const GreensResult& g,
                                  const ContactSelfEnergy& left,
                                  const ContactSelfEnergy& right) {
    if (left.energy != g.energy || right.energy != g.energy)
        throw std::invalid_argument("density_of_states: energy mismatch between G and Gamma");
    if (g.columns.empty() || g.contact_sites.empty())
        throw std::invalid_argument("density_of_states needs the contact columns of G");
    const Matrix8c gamma = embed_gammas(left, right);

    // stack the eight contact columns of G: gc(j, q) = G_{j, site_q}
    const auto rows = g.columns.front().rows();
    Eigen::Matrix<cdouble, Eigen::Dynamic, 8> gc(rows, 8);
    for (int q = 0; q < 8; ++q) {
        const int layer = static_cast<int>(g.contact_sites[q]) / kBlock;
        const int slot = static_cast<int>(g.contact_sites[q]) % kBlock;
        const auto layer_it =
            std::find(g.column_layers.begin(), g.column_layers.end(), layer);
        if (layer_it == g.column_layers.end())
            throw std::invalid_argument("density_of_states: contact column missing");
        gc.col(q) = g.columns[layer_it - g.column_layers.begin()].col(slot);
    }

    const Eigen::Matrix<cdouble, Eigen::Dynamic, 8> gg = gc * gamma;
    DensityOfStates out;
    out.site.resize(rows);
    for (Eigen::Index j = 0; j < rows; ++j) {
        out.site[j] = (gg.row(j) * gc.row(j).adjoint()).value().real();
        out.total += out.site[j];
    }
    return out;
}

double transmission(const GreensResult& g, const ContactSelfEnergy& left,
                    const ContactSelfEnergy& right) {
    if (left.energy != g.energy || right.energy != g.energy)
        throw std::invalid_argument("transmission: energy mismatch between G and Gamma");
    const auto g_lr = g.contact.block<4, 4>(0, 4);
    const double t = (left.gamma * g_lr * right.gamma * g_lr.adjoint()).trace().real();
    if (t < -kClampTol) {
        std::ostringstream msg;
        msg << "transmission " << t << " below clamp tolerance at E = " << g.energy;
        throw std::runtime_error(msg.str());
    }
    return t < 0.0 ? 0.0 : t;
}

double fermi(double energy, double mu, double kt) {
    if (!(kt > 0.0)) throw std::invalid_argument("fermi: kT must be positive");
    const double x = (energy - mu) / kt;
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(x));
}

double current(const std::vector<double>& t_of_e, const EnergyGrid& grid,
               const BiasConfig& bias) {
    grid.validate();
    if (static_cast<int>(t_of_e.size()) != grid.n_points())
        throw std::invalid_argument("current: T(E) table does not match the grid");
    const double reach = 5.0 * bias.kt;
    const double lo = std::min(bias.mu_left(), bias.mu_right()) - reach;
    const double hi = std::max(bias.mu_left(), bias.mu_right()) + reach;
    if (grid.e_min > lo + 1e-12 || grid.e_max < hi - 1e-12) {
        std::ostringstream msg;
        msg << "current: grid [" << grid.e_min << ", " << grid.e_max
            << "] does not cover the required [" << lo << ", " << hi << "] eV";
        throw std::invalid_argument(msg.str());
    }
    if (bias.v_sd == 0.0) return 0.0;

    double sum = 0.0;
    const int n = grid.n_points();
    for (int i = 0; i < n; ++i) {
        const double e = grid.at(i);
        const double w = (i == 0 || i == n - 1) ? 0.5 : 1.0;
        sum += w * t_of_e[i] *
               (fermi(e, bias.mu_left(), bias.kt) - fermi(e, bias.mu_right(), bias.kt));
    }
    // I = (2e/h) integral; reported in units of e/h
    return 2.0 * sum * grid.step;
}

double flux_ratio(double b_field, const FluxConvention& conv) {
    if (!(conv.b_per_phi0 > 0.0))
        throw std::invalid_argument("flux convention requires b_per_phi0 > 0");
    return b_field / conv.b_per_phi0;
}

double b_per_phi0_geometric(double major_radius) {
    return constants::flux_quantum / (constants::pi * major_radius * major_radius);
}

InterferenceEstimate interference_estimate(double energy, double major_radius) {
    if (!(energy > 0.0))
        throw std::invalid_argument("interference estimate needs E > 0");
    const double k = std::sqrt(energy / constants::hbar2_over_2me);  // 1/A
    const double lambda = 2.0 * constants::pi / k;                   // A
    const double u = 2.0 * constants::pi * major_radius;             // A
    InterferenceEstimate est;
    est.lambda_nm = lambda / 10.0;
    est.delta_alpha_deg = 360.0 * (0.5 * lambda) / u;
    return est;
}

} // namespace torx
