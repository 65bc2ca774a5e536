#ifndef TORX_LATTICE_HPP
#define TORX_LATTICE_HPP

#include <array>
#include <cstddef>
#include <vector>

namespace torx {

using Vec3 = std::array<double, 3>;

/// Torus dimensions.  The default geometry is the 150-layer (3,3) armchair
/// nanotorus: central diameter 116 A, tube width 4 A, 1800 atoms.
struct TorusGeometry {
    double major_radius = 58.0;  // A
    double minor_radius = 2.0;   // A
    int n_layers = 150;
    static constexpr int atoms_per_layer = 12;

    int n_sites() const { return n_layers * atoms_per_layer; }
    /// azimuthal pitch of one layer, radians
    double layer_angle() const;
    void validate() const;  // throws std::invalid_argument
};

struct AtomSite {
    int layer = 0;   // 0 .. n_layers-1
    int slot = 0;    // 0 .. 11 within the layer
    double theta = 0.0;  // minor-circle angle, rad; 0 = outer equator
    double phi = 0.0;    // azimuth, rad
    Vec3 position{};     // A
};

/// Four contact atoms per lead, addressed into the site list of build_torus.
struct LeadPlacement {
    double alpha_requested = 180.0;  // deg
    double alpha_realized = 180.0;   // deg, on the 360/n_layers grid
    int right_layer = 0;             // first contact layer of the rotated lead
    std::array<std::size_t, 4> left_sites{};
    std::array<std::size_t, 4> right_sites{};
};

/// Position on the torus surface:
///   ((R + a cos t) cos p, (R + a cos t) sin p, a sin t)
Vec3 torus_position(double theta, double phi, const TorusGeometry& geom);

/// All atom positions of the armchair nanotorus.  Each layer is one armchair
/// unit cell: two rings of six atoms on the minor circle, the second ring
/// shifted azimuthally by half a layer.  Sites are ordered layer-major and
/// (layer, slot) pairs are unique.
std::vector<AtomSite> build_torus(const TorusGeometry& geom);

/// Index of a site in the vector returned by build_torus.
inline std::size_t site_index(int layer, int slot, const TorusGeometry& geom) {
    return static_cast<std::size_t>(layer) * TorusGeometry::atoms_per_layer + slot;
}

/// Slots of the two atoms of a layer closest to the outer equator.
std::array<int, 2> equator_slots();

/// Fixed lead at layers {0,1}; rotated lead at the layer pair selected by
/// alpha.  Non-grid alpha is rounded half-away-from-zero to the nearest
/// layer and the realized angle echoed (strict = true rejects it instead,
/// naming the angle grid).  The four contacts per lead are the outer-equator
/// sites of the contact layer and its successor.
LeadPlacement place_leads(const std::vector<AtomSite>& sites,
                          const TorusGeometry& geom, double alpha_deg,
                          bool strict = false);

} // namespace torx

#endif
