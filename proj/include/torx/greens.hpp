#ifndef TORX_GREENS_HPP
#define TORX_GREENS_HPP

#include <array>
#include <stdexcept>
#include <vector>

#include "torx/hamiltonian.hpp"
#include "torx/leads.hpp"
#include "torx/linalg.hpp"

namespace torx {

using Matrix8c = Eigen::Matrix<cdouble, 8, 8>;

/// (layer, slot) address of one contact site inside the block structure.
struct ContactAddress {
    int layer = 0;
    int slot = 0;
};

/// The retarded operator  M = (E + i eta) I - H_d - Sigma_L - Sigma_R,
/// materialized as cyclic block-tridiagonal blocks.  Self-energies live on
/// contact-site pairs and may touch diagonal, coupling and corner blocks.
struct EffectiveSystem {
    int n_layers = 0;
    double energy = 0.0;      // eV
    double eta = 1e-6;        // eV
    std::vector<Block> diag;  // M_ii
    std::vector<Block> sub;   // M_{i+1, i},  i = 0 .. n-2
    std::vector<Block> sup;   // M_{i, i+1}
    Block corner_ne = Block::Zero();  // M_{0, n-1}
    Block corner_sw = Block::Zero();  // M_{n-1, 0}
    std::array<ContactAddress, 8> contacts{};  // left 0..3, right 4..7

    /// M restricted to (row block a, col block b); zero off the pattern
    Block block(int a, int b) const;
    /// add m at the site pair (a, b); throws if (a.layer, b.layer) is off
    /// the cyclic tridiagonal pattern
    void add_at(const ContactAddress& a, const ContactAddress& b, cdouble m);
};

/// Build the effective system from the device Hamiltonian, the lead
/// placement and both contact self-energies (which must be at `energy`).
EffectiveSystem make_effective_system(const BlockHamiltonian& h,
                                      const LeadPlacement& leads,
                                      const ContactSelfEnergy& sigma_left,
                                      const ContactSelfEnergy& sigma_right,
                                      double energy, double eta = 1e-6);

/// Selected blocks of the retarded Green's function at one energy.  The
/// advanced function is the conjugate transpose and is never solved for.
struct GreensResult {
    double energy = 0.0;
    double eta = 0.0;
    Matrix8c contact = Matrix8c::Zero();  // G on contact rows x contact cols
    std::array<std::size_t, 8> contact_sites{};  // global site index per contact
    std::vector<Block> diag;              // G_ii, present when requested
    /// full block-columns of G at the contact layers (and the ring seam),
    /// ordered as `column_layers`; kept on request
    std::vector<MatrixXc> columns;
    std::vector<int> column_layers;
    bool used_dense_fallback = false;
};

struct SolveOptions {
    bool want_diag = false;     // all diagonal blocks (needed for DOS sweeps)
    bool keep_columns = false;  // retain full contact block-columns
};

/// Oracle: factorize the full (12 n)^2 matrix and extract the selected
/// blocks.  Throws SingularSystem if the operator is numerically singular
/// (possible only at eta = 0 on a real eigenvalue).
GreensResult solve_dense(const EffectiveSystem& sys, const SolveOptions& opt = {});

/// Production path: block-Thomas factorization of the open chain plus a
/// rank <= 2b corner correction for the ring closure, O(n b^3) total.
/// A block pivot breakdown falls back to solve_dense and flags the result.
GreensResult solve_recursive(const EffectiveSystem& sys, const SolveOptions& opt = {});

/// y = M x for the full cyclic operator, applied blockwise; x is a stacked
/// (12 n) x k column set.  Used for residual checks.
MatrixXc apply_cyclic(const EffectiveSystem& sys, const MatrixXc& x);

struct SingularSystem : std::runtime_error {
    double energy;
    explicit SingularSystem(double e);
};

} // namespace torx

#endif
