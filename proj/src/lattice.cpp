#include "torx/lattice.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "torx/constants.hpp"

namespace torx {

namespace {

constexpr double kPi = constants::pi;

// Minor-circle angles of the twelve atoms of one armchair unit cell, in
// units of 2*pi/9.  The cell is two rings of six: ring A (slots 0..5) at
// sub-azimuth 0, ring B (slots 6..11) half a layer pitch further around the
// torus.  Within a ring the atoms come in vertically bonded pairs, which is
// what makes every atom end up with two intra-layer neighbors and one
// neighbor in an adjacent layer.
constexpr double kRingA[6] = {1.0, 2.0, 4.0, 5.0, 7.0, 8.0};
constexpr double kRingB[6] = {0.5, 2.5, 3.5, 5.5, 6.5, 8.5};

} // namespace

double TorusGeometry::layer_angle() const { return 2.0 * kPi / n_layers; }

void TorusGeometry::validate() const {
    if (!(major_radius > minor_radius && minor_radius > 0.0))
        throw std::invalid_argument("torus geometry requires R > a > 0");
    if (n_layers < 3)
        throw std::invalid_argument("torus needs at least 3 layers for ring closure");
}

Vec3 torus_position(double theta, double phi, const TorusGeometry& geom) {
    const double rho = geom.major_radius + geom.minor_radius * std::cos(theta);
    return {rho * std::cos(phi), rho * std::sin(phi),
            geom.minor_radius * std::sin(theta)};
}

std::vector<AtomSite> build_torus(const TorusGeometry& geom) {
    geom.validate();
    const double dphi = geom.layer_angle();
    std::vector<AtomSite> sites;
    sites.reserve(geom.n_sites());
    for (int layer = 0; layer < geom.n_layers; ++layer) {
        for (int slot = 0; slot < TorusGeometry::atoms_per_layer; ++slot) {
            const bool ring_b = slot >= 6;
            const double unit = ring_b ? kRingB[slot - 6] : kRingA[slot];
            AtomSite s;
            s.layer = layer;
            s.slot = slot;
            s.theta = unit * 2.0 * kPi / 9.0;
            s.phi = (layer + (ring_b ? 0.5 : 0.0)) * dphi;
            s.position = torus_position(s.theta, s.phi, geom);
            sites.push_back(s);
        }
    }
    return sites;
}

// Contact slots: the two sites of one carbon sublattice nearest the outer
// equator (theta = -20 and +40 deg).  Keeping both contacts on a single
// sublattice preserves the approximate E -> -E symmetry of the transport
// spectra; a mixed-sublattice pair couples the leads to both chiral sectors
// and visibly breaks it.
std::array<int, 2> equator_slots() { return {11, 0}; }

LeadPlacement place_leads(const std::vector<AtomSite>& sites,
                          const TorusGeometry& geom, double alpha_deg,
                          bool strict) {
    geom.validate();
    if (sites.size() != static_cast<std::size_t>(geom.n_sites()))
        throw std::invalid_argument("site list does not match geometry");

    const double grid = 360.0 / geom.n_layers;
    double alpha = std::fmod(alpha_deg, 360.0);
    if (alpha < 0.0) alpha += 360.0;

    const double steps = alpha / grid;
    // round half away from zero
    const int layer = static_cast<int>(std::floor(steps + 0.5));
    if (strict && std::abs(steps - std::round(steps)) > 1e-9) {
        std::ostringstream msg;
        msg << "alpha = " << alpha_deg << " deg is not a multiple of the "
            << grid << " deg layer grid";
        throw std::invalid_argument(msg.str());
    }
    const int r = layer % geom.n_layers;
    if (r < 1 || r > geom.n_layers - 2)
        throw std::invalid_argument("lead opening angle places both leads on the same layers");

    LeadPlacement p;
    p.alpha_requested = alpha_deg;
    p.alpha_realized = r * grid;
    p.right_layer = r;
    const auto eq = equator_slots();
    for (int k = 0; k < 2; ++k) {
        for (int e = 0; e < 2; ++e) {
            p.left_sites[2 * k + e] = site_index(k, eq[e], geom);
            p.right_sites[2 * k + e] =
                site_index((r + k) % geom.n_layers, eq[e], geom);
        }
    }
    return p;
}

} // namespace torx
