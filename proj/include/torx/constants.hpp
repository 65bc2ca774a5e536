#ifndef TORX_CONSTANTS_HPP
#define TORX_CONSTANTS_HPP

// Single constants table for the whole code base.  Lengths are in Angstrom,
// energies in eV, magnetic fields in Tesla.  Everything else is derived from
// the two primitives below so that no unit conversion can drift between
// modules.

namespace torx::constants {

// hbar^2 / (2 m_e) in eV * A^2
inline constexpr double hbar2_over_2me = 3.8099821;

// magnetic flux quantum h/e in T * A^2  (4.135667696e-15 Wb)
inline constexpr double flux_quantum = 4.135667696e5;

// hbar^2 / m_e in eV * A^2
inline constexpr double hbar2_over_me = 2.0 * hbar2_over_2me;

inline constexpr double pi = 3.14159265358979323846;

// e / hbar in 1 / (T * A^2); multiplies A.dr line integrals into phases
inline constexpr double e_over_hbar = 2.0 * pi / flux_quantum;

// version tag echoed in run manifests
inline constexpr const char* table_version = "constants-1";

} // namespace torx::constants

#endif
