#ifndef TORX_HAMILTONIAN_HPP
#define TORX_HAMILTONIAN_HPP

#include <string>
#include <utility>
#include <vector>

#include "torx/lattice.hpp"
#include "torx/linalg.hpp"

namespace torx {

struct HoppingParams {
    double v_device = -3.1;  // eV, C-C hopping in the torus
    double t_hop = -0.25;    // eV, metal-torus contact hopping
    double onsite = 0.0;     // eV
};

struct FieldConfig {
    double b0 = 0.0;  // T, along +z (the toroidal symmetry axis)
};

/// Nearest-neighbor bond between two sites, layer-ordered so that bonds
/// always run within a layer, into the next layer, or across the 0 / n-1
/// ring-closure seam.
struct Bond {
    std::size_t i = 0;
    std::size_t j = 0;
};

/// Cyclic block-tridiagonal device Hamiltonian.  Stored in the sign
/// convention of the layer-block form: the full matrix has A_i on the
/// diagonal, -V_i at (i+1, i), -V_i^dag at (i, i+1) and -V_corner,
/// -V_corner^dag at the (0, n-1) / (n-1, 0) ring-closure corners.
struct BlockHamiltonian {
    std::vector<Block> diag;      // A_i, Hermitian
    std::vector<Block> coupling;  // V_i, i = 0 .. n-2
    Block corner;                 // V_corner: layer n-1 -> 0
    double b_field = 0.0;         // T, provenance
    int n_layers = 0;

    /// entry of the assembled full matrix at (row block a, col block b)
    Block full_block(int a, int b) const;
};

/// Peierls factor exp[i (e/hbar) A(r_mid) . (r_i - r_j)] for the symmetric
/// gauge A = B0/2 (-y, x, 0).  A is linear in position, so the midpoint rule
/// equals the exact line integral along the bond chord.  Unit modulus.
cdouble peierls_phase(const Vec3& r_i, const Vec3& r_j, const FieldConfig& field);

/// Nearest-neighbor pairs by distance cutoff (1.7 A around the 1.4 A C-C
/// bond).  Throws if the resulting graph is not 3-regular or if any pair
/// spans more than adjacent layers.
std::vector<Bond> find_bonds(const std::vector<AtomSite>& sites,
                             const TorusGeometry& geom);

/// Assemble the device Hamiltonian with Peierls phases on every bond.
BlockHamiltonian assemble(const std::vector<AtomSite>& sites,
                          const TorusGeometry& geom,
                          const HoppingParams& params,
                          const FieldConfig& field);

/// Same, reusing a precomputed bond list (phases still depend on the field).
BlockHamiltonian assemble(const std::vector<AtomSite>& sites,
                          const TorusGeometry& geom,
                          const std::vector<Bond>& bonds,
                          const HoppingParams& params,
                          const FieldConfig& field);

/// Binary dump for the oracle test harness: one ASCII header line, then all
/// blocks as interleaved (real, imag) doubles in row-major block order
/// diag[0..n-1], coupling[0..n-2], corner.
void write_matrix_dump(const std::string& path, const BlockHamiltonian& h);
BlockHamiltonian read_matrix_dump(const std::string& path);

} // namespace torx

#endif
