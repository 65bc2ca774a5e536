#ifndef TORX_LEADS_HPP
#define TORX_LEADS_HPP

#include <array>
#include <utility>

#include "torx/lattice.hpp"
#include "torx/linalg.hpp"

namespace torx {

using Matrix4c = Eigen::Matrix<cdouble, 4, 4>;

/// Semi-infinite metallic lead, discretized with lattice spacing a_lead and a
/// hard-wall Ly x Lz cross-section.  The transverse mode basis is the one the
/// lattice actually supports: round(L/a) - 1 modes per direction; mode_cutoff
/// is clamped there (the continuum tail of the mode sum does not converge and
/// corresponds to no lattice state).
struct LeadParams {
    double fermi_energy = 6.0;   // eV, measured from the tube Fermi level
    double a_lead = 2.0;         // A, longitudinal lattice spacing
    double ly = 14.0;            // A
    double lz = 14.0;            // A
    int mode_cutoff = 6;         // per transverse direction
    std::array<std::array<double, 2>, 4> contact_yz{};  // (y, z) per contact

    /// t = hbar^2 / (m a^2), the lead hopping energy scale
    double t_lead() const;
    /// number of transverse modes the lattice supports per direction
    int lattice_mode_limit_y() const;
    int lattice_mode_limit_z() const;
    void validate() const;
};

/// Self-energy and broadening of one lead on its 4-site contact subspace.
struct ContactSelfEnergy {
    Matrix4c sigma = Matrix4c::Zero();
    Matrix4c gamma = Matrix4c::Zero();  // 2 pi i (sigma - sigma^dag)
    double energy = 0.0;                // eV
};

/// Particle-in-a-box transverse mode energy
///   E_mn = (hbar^2 pi^2 / 2 m_e) (m^2/Ly^2 + n^2/Lz^2),  m, n >= 1.
double mode_energy(int m, int n, const LeadParams& params);

/// Retarded branch of sqrt(alpha^2 - 1) - alpha: unit-modulus complex for
/// |alpha| <= 1 with non-negative imaginary part, decaying real otherwise.
cdouble lead_bracket(double alpha);

/// Surface Green's function of the lead, evaluated between two transverse
/// points of the layer closest to the torus:
///   g(E) = (-8 m a / hbar^2) (1/Ly Lz) sum_mn sin sin sin sin * bracket.
/// Throws if mode_cutoff drops lattice modes whose contribution exceeds the
/// 1e-10 tail bound.
cdouble surface_green(double energy, const std::array<double, 2>& r_t,
                      const std::array<double, 2>& r_s, const LeadParams& params);

/// sigma[p][q] = t_hop^2 g(contact_p, contact_q); gamma from the first
/// equality of the broadening formula, Gamma = 2 pi i (Sigma - Sigma^dag).
ContactSelfEnergy self_energy(double energy, const LeadParams& lead, double t_hop);

/// Default lead whose 2x2 contact grid is centered in the cross-section and
/// spaced by the distances between the torus contact atoms of `geom`.
LeadParams default_lead(const TorusGeometry& geom);

} // namespace torx

#endif
