#include "torx/greens.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace torx {

SingularSystem::SingularSystem(double e)
    : std::runtime_error([e] {
          std::ostringstream msg;
          msg << "retarded operator is numerically singular at E = " << e << " eV";
          return msg.str();
      }()),
      energy(e) {}

namespace {

struct PivotBreakdown : std::runtime_error {
    PivotBreakdown() : std::runtime_error("block pivot breakdown") {}
};

constexpr double kPivotRatio = 1e-13;

template <typename LU>
void check_pivots(const LU& lu) {
    const auto d = lu.matrixLU().diagonal().cwiseAbs();
    const double lo = d.minCoeff(), hi = d.maxCoeff();
    if (!(hi > 0.0) || lo < kPivotRatio * hi || !std::isfinite(hi))
        throw PivotBreakdown();
}

/// Block-Thomas factorization of the open (non-cyclic) tridiagonal part.
/// F_i are the partial Schur complements, kept as LU factors; the cached
/// P_i = F_i^{-1} sup_i drive back-substitution.
class ChainFactors {
public:
    explicit ChainFactors(const EffectiveSystem& sys) : n_(sys.n_layers) {
        lus_.reserve(n_);
        p_.reserve(n_ - 1);
        Block f = sys.diag[0];
        lus_.emplace_back(f);
        check_pivots(lus_.back());
        for (int i = 1; i < n_; ++i) {
            p_.push_back(lus_.back().solve(sys.sup[i - 1]));
            f = sys.diag[i] - sys.sub[i - 1] * p_.back();
            lus_.emplace_back(f);
            check_pivots(lus_.back());
        }
    }

    /// x = T^{-1} r for a stacked right-hand side (12 n x k)
    MatrixXc solve(const EffectiveSystem& sys, const MatrixXc& r) const {
        const auto k = r.cols();
        MatrixXc x(r.rows(), k);
        x.topRows(kBlock) = lus_[0].solve(r.topRows(kBlock));
        for (int i = 1; i < n_; ++i)
            x.middleRows(kBlock * i, kBlock) = lus_[i].solve(
                (r.middleRows(kBlock * i, kBlock) -
                 sys.sub[i - 1] * x.middleRows(kBlock * (i - 1), kBlock))
                    .eval());
        for (int i = n_ - 2; i >= 0; --i)
            x.middleRows(kBlock * i, kBlock) -= p_[i] * x.middleRows(kBlock * (i + 1), kBlock);
        return x;
    }

    /// x = T^{-T} r, reusing the same factors (T = L U, T^T = U^T L^T)
    MatrixXc solve_transposed(const EffectiveSystem& sys, const MatrixXc& r) const {
        MatrixXc x(r.rows(), r.cols());
        x.topRows(kBlock) = lus_[0].transpose().solve(r.topRows(kBlock));
        for (int i = 1; i < n_; ++i)
            x.middleRows(kBlock * i, kBlock) = lus_[i].transpose().solve(
                (r.middleRows(kBlock * i, kBlock) -
                 sys.sup[i - 1].transpose() * x.middleRows(kBlock * (i - 1), kBlock))
                    .eval());
        for (int i = n_ - 2; i >= 0; --i) {
            const MatrixXc step = lus_[i].transpose().solve(
                (sys.sub[i].transpose() * x.middleRows(kBlock * (i + 1), kBlock)).eval());
            x.middleRows(kBlock * i, kBlock) -= step;
        }
        return x;
    }

    /// diagonal blocks of T^{-1}, bottom-up:
    ///   T^{-1}_{nn} = F_n^{-1};  T^{-1}_{ii} = F_i^{-1} + P_i T^{-1}_{i+1,i+1} Q_i
    std::vector<Block> inverse_diag(const EffectiveSystem& sys) const {
        std::vector<Block> g(n_);
        g[n_ - 1] = lus_[n_ - 1].inverse();
        for (int i = n_ - 2; i >= 0; --i) {
            const Block qt = lus_[i].transpose().solve(sys.sub[i].transpose());
            g[i] = lus_[i].inverse() + p_[i] * g[i + 1] * qt.transpose();
        }
        return g;
    }

private:
    int n_;
    std::vector<Eigen::PartialPivLU<Block>> lus_;
    std::vector<Block> p_;
};

using Matrix24c = Eigen::Matrix<cdouble, 2 * kBlock, 2 * kBlock>;

/// corner blocks folded into a rank <= 24 update M = T + S B S^T with the
/// selector S = [e_0 | e_{n-1}]
struct CornerUpdate {
    bool active = false;
    MatrixXc x;       // T^{-1} S, 12n x 24
    Matrix24c k = Matrix24c::Zero();  // (I + B S^T x)^{-1} B

    static Matrix24c corner_b(const EffectiveSystem& sys) {
        Matrix24c b = Matrix24c::Zero();
        b.block<kBlock, kBlock>(0, kBlock) = sys.corner_ne;
        b.block<kBlock, kBlock>(kBlock, 0) = sys.corner_sw;
        return b;
    }

    CornerUpdate(const EffectiveSystem& sys, const ChainFactors& chain) {
        const Matrix24c b = corner_b(sys);
        if (b.isZero(0.0)) return;  // open chain: rank-0 update
        active = true;
        const auto rows = static_cast<Eigen::Index>(kBlock) * sys.n_layers;
        MatrixXc rhs = MatrixXc::Zero(rows, 2 * kBlock);
        rhs.block<kBlock, kBlock>(0, 0).setIdentity();
        rhs.block<kBlock, kBlock>(rows - kBlock, kBlock).setIdentity();
        x = chain.solve(sys, rhs);
        Matrix24c s;
        s.topRows(kBlock) = x.topRows(kBlock);
        s.bottomRows(kBlock) = x.bottomRows(kBlock);
        const Matrix24c cap = Matrix24c::Identity() + b * s;
        Eigen::PartialPivLU<Matrix24c> lu(cap);
        check_pivots(lu);
        k = lu.solve(b);
    }

    /// turn T^{-1} r (a stacked column solve) into M^{-1} r
    void correct(MatrixXc& cols) const {
        if (!active) return;
        MatrixXc top(2 * kBlock, cols.cols());
        top.topRows(kBlock) = cols.topRows(kBlock);
        top.bottomRows(kBlock) = cols.bottomRows(kBlock);
        cols.noalias() -= x * (k * top);
    }

    /// correction for one diagonal block given Y_i = rows {0, n-1} of the
    /// i-th block column of T^{-1}
    Block correct_diag(const Block& t_ii, const MatrixXc& x_i,
                       const Eigen::Matrix<cdouble, 2 * kBlock, kBlock>& y_i) const {
        if (!active) return t_ii;
        return t_ii - x_i * (k * y_i);
    }
};

std::vector<int> wanted_column_layers(const EffectiveSystem& sys) {
    std::vector<int> layers;
    for (const auto& c : sys.contacts) layers.push_back(c.layer);
    layers.push_back(0);
    layers.push_back(sys.n_layers - 1);
    std::sort(layers.begin(), layers.end());
    layers.erase(std::unique(layers.begin(), layers.end()), layers.end());
    return layers;
}

void validate_system(const EffectiveSystem& sys) {
    if (sys.n_layers < 3)
        throw std::invalid_argument("effective system needs n_layers >= 3");
    const auto n = static_cast<std::size_t>(sys.n_layers);
    if (sys.diag.size() != n || sys.sub.size() != n - 1 || sys.sup.size() != n - 1)
        throw std::invalid_argument("effective system has inconsistent block counts");
    for (const auto& c : sys.contacts)
        if (c.layer < 0 || c.layer >= sys.n_layers || c.slot < 0 || c.slot >= kBlock)
            throw std::invalid_argument("contact address out of range");
}

Matrix8c extract_contacts(const EffectiveSystem& sys, const std::vector<int>& layers,
                          const MatrixXc& cols) {
    Matrix8c out;
    for (int p = 0; p < 8; ++p) {
        const auto row = static_cast<Eigen::Index>(kBlock) * sys.contacts[p].layer +
                         sys.contacts[p].slot;
        for (int q = 0; q < 8; ++q) {
            const auto it = std::find(layers.begin(), layers.end(), sys.contacts[q].layer);
            const auto col = static_cast<Eigen::Index>(kBlock) * (it - layers.begin()) +
                             sys.contacts[q].slot;
            out(p, q) = cols(row, col);
        }
    }
    return out;
}

GreensResult finish_result(const EffectiveSystem& sys, const SolveOptions& opt,
                           const std::vector<int>& layers, MatrixXc&& cols,
                           std::vector<Block>&& diag) {
    GreensResult res;
    res.energy = sys.energy;
    res.eta = sys.eta;
    res.contact = extract_contacts(sys, layers, cols);
    for (int p = 0; p < 8; ++p)
        res.contact_sites[p] = static_cast<std::size_t>(kBlock) * sys.contacts[p].layer +
                               sys.contacts[p].slot;
    res.diag = std::move(diag);
    if (opt.keep_columns) {
        res.column_layers = layers;
        for (std::size_t c = 0; c < layers.size(); ++c)
            res.columns.push_back(cols.middleCols(kBlock * c, kBlock));
    }
    return res;
}

} // namespace

Block EffectiveSystem::block(int a, int b) const {
    Block out = Block::Zero();
    if (a == b) out += diag[a];
    if (b + 1 == a) out += sub[b];
    if (a + 1 == b) out += sup[a];
    if (a == 0 && b == n_layers - 1) out += corner_ne;
    if (a == n_layers - 1 && b == 0) out += corner_sw;
    return out;
}

void EffectiveSystem::add_at(const ContactAddress& a, const ContactAddress& b, cdouble m) {
    if (a.layer == b.layer) {
        diag[a.layer](a.slot, b.slot) += m;
    } else if (b.layer == a.layer + 1) {
        sup[a.layer](a.slot, b.slot) += m;
    } else if (a.layer == b.layer + 1) {
        sub[b.layer](a.slot, b.slot) += m;
    } else if (a.layer == 0 && b.layer == n_layers - 1) {
        corner_ne(a.slot, b.slot) += m;
    } else if (a.layer == n_layers - 1 && b.layer == 0) {
        corner_sw(a.slot, b.slot) += m;
    } else {
        throw std::invalid_argument("self-energy entry off the cyclic tridiagonal pattern");
    }
}

EffectiveSystem make_effective_system(const BlockHamiltonian& h,
                                      const LeadPlacement& leads,
                                      const ContactSelfEnergy& sigma_left,
                                      const ContactSelfEnergy& sigma_right,
                                      double energy, double eta) {
    if (sigma_left.energy != energy || sigma_right.energy != energy)
        throw std::invalid_argument("self-energies evaluated at a different energy");
    EffectiveSystem sys;
    sys.n_layers = h.n_layers;
    sys.energy = energy;
    sys.eta = eta;
    const cdouble w(energy, eta);
    sys.diag.reserve(h.n_layers);
    for (const Block& a : h.diag)
        sys.diag.push_back(w * Block::Identity() - a);
    sys.sub.reserve(h.coupling.size());
    sys.sup.reserve(h.coupling.size());
    for (const Block& v : h.coupling) {
        sys.sub.push_back(v);             // M_{i+1,i} = -(-V_i)
        sys.sup.push_back(v.adjoint());   // M_{i,i+1} = -(-V_i^dag)
    }
    sys.corner_ne = h.corner;
    sys.corner_sw = h.corner.adjoint();

    auto address = [&](std::size_t site) {
        return ContactAddress{static_cast<int>(site) / kBlock,
                              static_cast<int>(site) % kBlock};
    };
    for (int p = 0; p < 4; ++p) {
        sys.contacts[p] = address(leads.left_sites[p]);
        sys.contacts[4 + p] = address(leads.right_sites[p]);
    }
    for (int p = 0; p < 4; ++p)
        for (int q = 0; q < 4; ++q) {
            sys.add_at(sys.contacts[p], sys.contacts[q], -sigma_left.sigma(p, q));
            sys.add_at(sys.contacts[4 + p], sys.contacts[4 + q], -sigma_right.sigma(p, q));
        }
    return sys;
}

MatrixXc apply_cyclic(const EffectiveSystem& sys, const MatrixXc& x) {
    const int n = sys.n_layers;
    MatrixXc y(x.rows(), x.cols());
    for (int i = 0; i < n; ++i) {
        auto yi = y.middleRows(kBlock * i, kBlock);
        yi.noalias() = sys.diag[i] * x.middleRows(kBlock * i, kBlock);
        if (i > 0) yi.noalias() += sys.sub[i - 1] * x.middleRows(kBlock * (i - 1), kBlock);
        if (i < n - 1) yi.noalias() += sys.sup[i] * x.middleRows(kBlock * (i + 1), kBlock);
    }
    y.topRows(kBlock).noalias() += sys.corner_ne * x.bottomRows(kBlock);
    y.bottomRows(kBlock).noalias() += sys.corner_sw * x.topRows(kBlock);
    return y;
}

GreensResult solve_dense(const EffectiveSystem& sys, const SolveOptions& opt) {
    validate_system(sys);
    const int n = sys.n_layers;
    const auto dim = static_cast<Eigen::Index>(kBlock) * n;
    MatrixXc m = MatrixXc::Zero(dim, dim);
    for (int i = 0; i < n; ++i) {
        m.block<kBlock, kBlock>(kBlock * i, kBlock * i) = sys.diag[i];
        if (i < n - 1) {
            m.block<kBlock, kBlock>(kBlock * (i + 1), kBlock * i) = sys.sub[i];
            m.block<kBlock, kBlock>(kBlock * i, kBlock * (i + 1)) = sys.sup[i];
        }
    }
    m.block<kBlock, kBlock>(0, dim - kBlock) += sys.corner_ne;
    m.block<kBlock, kBlock>(dim - kBlock, 0) += sys.corner_sw;

    Eigen::PartialPivLU<MatrixXc> lu(m);
    {
        const auto d = lu.matrixLU().diagonal().cwiseAbs();
        if (!(d.maxCoeff() > 0.0) || d.minCoeff() < 1e-14 * d.maxCoeff())
            throw SingularSystem(sys.energy);
    }

    const auto layers = wanted_column_layers(sys);
    std::vector<Block> diag;
    MatrixXc cols;
    if (opt.want_diag) {
        const MatrixXc g = lu.inverse();
        diag.resize(n);
        for (int i = 0; i < n; ++i)
            diag[i] = g.block<kBlock, kBlock>(kBlock * i, kBlock * i);
        cols.resize(dim, kBlock * layers.size());
        for (std::size_t c = 0; c < layers.size(); ++c)
            cols.middleCols(kBlock * c, kBlock) = g.middleCols(kBlock * layers[c], kBlock);
    } else {
        MatrixXc rhs = MatrixXc::Zero(dim, kBlock * layers.size());
        for (std::size_t c = 0; c < layers.size(); ++c)
            rhs.block<kBlock, kBlock>(kBlock * layers[c], kBlock * c).setIdentity();
        cols = lu.solve(rhs);
    }
    return finish_result(sys, opt, layers, std::move(cols), std::move(diag));
}

GreensResult solve_recursive(const EffectiveSystem& sys, const SolveOptions& opt) {
    validate_system(sys);
    try {
        const int n = sys.n_layers;
        const auto dim = static_cast<Eigen::Index>(kBlock) * n;
        const ChainFactors chain(sys);
        const CornerUpdate corner(sys, chain);

        const auto layers = wanted_column_layers(sys);
        MatrixXc rhs = MatrixXc::Zero(dim, kBlock * layers.size());
        for (std::size_t c = 0; c < layers.size(); ++c)
            rhs.block<kBlock, kBlock>(kBlock * layers[c], kBlock * c).setIdentity();

        MatrixXc cols = chain.solve(sys, rhs);
        corner.correct(cols);
        // refine against the full cyclic operator when the solution is large
        // enough for first-pass roundoff to threaten the 1e-9 residual bound
        if (max_abs(cols) > 1e3) {
            MatrixXc resid = rhs - apply_cyclic(sys, cols);
            MatrixXc delta = chain.solve(sys, resid);
            corner.correct(delta);
            cols += delta;
        }

        std::vector<Block> diag;
        if (opt.want_diag) {
            diag = chain.inverse_diag(sys);
            if (corner.active) {
                MatrixXc z = MatrixXc::Zero(dim, 2 * kBlock);
                z.block<kBlock, kBlock>(0, 0).setIdentity();
                z.block<kBlock, kBlock>(dim - kBlock, kBlock).setIdentity();
                z = chain.solve_transposed(sys, z);
                for (int i = 0; i < n; ++i) {
                    Eigen::Matrix<cdouble, 2 * kBlock, kBlock> y_i;
                    y_i.topRows(kBlock) =
                        z.block<kBlock, kBlock>(kBlock * i, 0).transpose();
                    y_i.bottomRows(kBlock) =
                        z.block<kBlock, kBlock>(kBlock * i, kBlock).transpose();
                    diag[i] = corner.correct_diag(
                        diag[i], corner.x.middleRows(kBlock * i, kBlock), y_i);
                }
            }
            // contact-layer diagonal blocks come from the refined columns
            for (std::size_t c = 0; c < layers.size(); ++c)
                diag[layers[c]] =
                    cols.block<kBlock, kBlock>(kBlock * layers[c], kBlock * c);
        }
        return finish_result(sys, opt, layers, std::move(cols), std::move(diag));
    } catch (const PivotBreakdown&) {
        std::cerr << "torx: block pivot breakdown at E = " << sys.energy
                  << " eV; falling back to dense solve\n";
        GreensResult res = solve_dense(sys, opt);
        res.used_dense_fallback = true;
        return res;
    }
}

} // namespace torx
