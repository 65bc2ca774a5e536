#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "torx/greens.hpp"
#include "torx/observables.hpp"

using namespace torx;

namespace {

/// default physical pipeline at one energy
struct Pipeline {
    TorusGeometry geom;
    std::vector<AtomSite> sites;
    LeadPlacement leads;
    LeadParams lead;
    BlockHamiltonian h;

    explicit Pipeline(double b_field = 0.0, double alpha = 180.0) {
        sites = build_torus(geom);
        leads = place_leads(sites, geom, alpha);
        lead = default_lead(geom);
        h = assemble(sites, geom, HoppingParams{}, FieldConfig{b_field});
    }

    EffectiveSystem system(double energy, double eta = 1e-6,
                           double t_hop = -0.25) const {
        const auto sigma = self_energy(energy, lead, t_hop);
        return make_effective_system(h, leads, sigma, sigma, energy, eta);
    }
};

double compare_results(const GreensResult& a, const GreensResult& b) {
    double scale = max_abs(b.contact);
    for (const auto& d : b.diag) scale = std::max(scale, max_abs(d));
    double diff = max_abs(a.contact - b.contact);
    REQUIRE(a.diag.size() == b.diag.size());
    for (std::size_t i = 0; i < a.diag.size(); ++i)
        diff = std::max(diff, max_abs(a.diag[i] - b.diag[i]));
    return diff / scale;
}

} // namespace

TEST_CASE("huge eta dominates the diagonal") {
    auto sys = oracles::random_cyclic_system(6, 11, 0.3, 1e6);
    SolveOptions opt;
    opt.want_diag = true;
    const auto g = solve_recursive(sys, opt);
    for (const auto& d : g.diag)
        for (int r = 0; r < kBlock; ++r)
            CHECK(std::abs(d(r, r) - cdouble(0.0, -1e-6)) < 1e-11);
}

TEST_CASE("decoupled sites invert trivially") {
    TorusGeometry geom;
    const auto sites = build_torus(geom);
    HoppingParams p;
    p.v_device = 0.0;
    const auto h = assemble(sites, geom, p, FieldConfig{0.0});
    const auto leads = place_leads(sites, geom, 180.0);
    ContactSelfEnergy zero;
    const double energy = 0.17, eta = 1e-6;
    zero.energy = energy;
    const auto sys = make_effective_system(h, leads, zero, zero, energy, eta);
    SolveOptions opt;
    opt.want_diag = true;
    const auto g = solve_recursive(sys, opt);
    const cdouble expected = 1.0 / cdouble(energy, eta);
    for (const auto& d : g.diag) {
        CHECK(max_abs(d - expected * Block::Identity()) < 1e-9 * std::abs(expected));
    }
}

TEST_CASE("dense solver agrees with an independent Gauss-Jordan inversion") {
    const auto sys = oracles::random_cyclic_system(6, 23);
    SolveOptions opt;
    opt.want_diag = true;
    const auto dense = solve_dense(sys, opt);

    const int dim = kBlock * sys.n_layers;
    const auto inv = oracles::gauss_jordan_inverse(oracles::dense_of_system(sys), dim);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < sys.n_layers; ++i)
        for (int r = 0; r < kBlock; ++r)
            for (int c = 0; c < kBlock; ++c) {
                const cdouble o = inv[static_cast<std::size_t>(kBlock * i + r) * dim +
                                      (kBlock * i + c)];
                worst = std::max(worst, std::abs(dense.diag[i](r, c) - o));
                scale = std::max(scale, std::abs(o));
            }
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            const auto& cp = sys.contacts[p];
            const auto& cq = sys.contacts[q];
            const cdouble o = inv[static_cast<std::size_t>(kBlock * cp.layer + cp.slot) * dim +
                                  (kBlock * cq.layer + cq.slot)];
            worst = std::max(worst, std::abs(dense.contact(p, q) - o));
        }
    CHECK(worst <= 1e-10 * scale);
}

TEST_CASE("recursive matches dense on random cyclic systems") {
    for (int n : {3, 6, 10}) {
        for (unsigned seed = 0; seed < 3; ++seed) {
            const auto sys = oracles::random_cyclic_system(n, 100 * n + seed);
            SolveOptions opt;
            opt.want_diag = true;
            const auto dense = solve_dense(sys, opt);
            const auto rec = solve_recursive(sys, opt);
            CHECK(!rec.used_dense_fallback);
            CHECK(compare_results(rec, dense) <= 1e-8);
        }
    }
}

TEST_CASE("zero corners reduce to the open-chain solver") {
    auto sys = oracles::random_cyclic_system(8, 5);
    sys.corner_ne.setZero();
    sys.corner_sw.setZero();
    SolveOptions opt;
    opt.want_diag = true;
    const auto dense = solve_dense(sys, opt);
    const auto rec = solve_recursive(sys, opt);
    CHECK(compare_results(rec, dense) <= 1e-10);
}

TEST_CASE("residual of the computed columns") {
    const Pipeline pipe(0.5);
    SolveOptions opt;
    opt.keep_columns = true;
    for (double e : {-0.12, 0.0, 0.05}) {
        const auto sys = pipe.system(e);
        const auto g = solve_recursive(sys, opt);
        REQUIRE(!g.columns.empty());
        const auto dim = static_cast<Eigen::Index>(kBlock) * sys.n_layers;
        for (std::size_t c = 0; c < g.columns.size(); ++c) {
            MatrixXc rhs = MatrixXc::Zero(dim, kBlock);
            rhs.block<kBlock, kBlock>(kBlock * g.column_layers[c], 0).setIdentity();
            const double resid = max_abs(apply_cyclic(sys, g.columns[c]) - rhs);
            CHECK(resid <= 1e-9);
        }
    }
}

TEST_CASE("retarded diagonal has non-positive imaginary part") {
    const Pipeline pipe(1.0);
    SolveOptions opt;
    opt.want_diag = true;
    for (double e : {-0.5, -0.03, 0.2}) {
        const auto g = solve_recursive(pipe.system(e), opt);
        for (const auto& d : g.diag)
            for (int r = 0; r < kBlock; ++r) CHECK(d(r, r).imag() <= 1e-12);
    }
}

TEST_CASE("reciprocity at zero field: G is complex symmetric on the contacts") {
    const Pipeline pipe(0.0);
    const auto g = solve_recursive(pipe.system(0.04));
    CHECK(max_abs(g.contact - g.contact.transpose()) <=
          1e-10 * std::max(1.0, max_abs(g.contact)));
}

TEST_CASE("winding gauge transformation preserves |G|") {
    // adding a pure gauge (including one full 2 pi winding around the ring)
    // to the bond phases must leave every |G_ij| unchanged
    const int n = 6;
    auto sys = oracles::random_cyclic_system(n, 31);
    SolveOptions opt;
    opt.want_diag = true;
    const auto base = solve_recursive(sys, opt);

    std::vector<double> chi(n);
    for (int i = 0; i < n; ++i) chi[i] = 2.0 * constants::pi * i / n;  // winding 1
    auto phase = [&](int layer) {
        return cdouble(std::cos(chi[layer]), std::sin(chi[layer]));
    };
    auto gauged = sys;
    for (int i = 0; i < n; ++i)
        gauged.diag[i] = (phase(i) * sys.diag[i] * std::conj(phase(i))).eval();
    for (int i = 0; i + 1 < n; ++i) {
        gauged.sub[i] = (phase(i + 1) * sys.sub[i] * std::conj(phase(i))).eval();
        gauged.sup[i] = (phase(i) * sys.sup[i] * std::conj(phase(i + 1))).eval();
    }
    gauged.corner_ne = (phase(0) * sys.corner_ne * std::conj(phase(n - 1))).eval();
    gauged.corner_sw = (phase(n - 1) * sys.corner_sw * std::conj(phase(0))).eval();

    const auto trans = solve_recursive(gauged, opt);
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        worst = std::max(worst, max_abs(base.diag[i].cwiseAbs() - trans.diag[i].cwiseAbs()));
    worst = std::max(worst, max_abs(base.contact.cwiseAbs() - trans.contact.cwiseAbs()));
    CHECK(worst <= 1e-9);
}

TEST_CASE("singular operator at eta = 0 is reported") {
    EffectiveSystem sys;
    sys.n_layers = 3;
    sys.energy = 1.0;
    sys.eta = 0.0;
    // diagonal Hamiltonian with eigenvalue exactly at E = 1
    sys.diag.assign(3, Block::Zero());
    sys.sub.assign(2, Block::Zero());
    sys.sup.assign(2, Block::Zero());
    for (auto& d : sys.diag) d = (1.0 - 1.0) * Block::Identity();  // E - H = 0
    CHECK_THROWS_AS(solve_dense(sys), SingularSystem);
}

TEST_CASE("pivot breakdown falls back to the dense path") {
    auto sys = oracles::random_cyclic_system(5, 77);
    // make the first partial Schur complement exactly singular while the
    // full cyclic operator stays invertible through the corner coupling
    sys.diag[0].setZero();
    const auto dense = solve_dense(sys);  // must succeed
    const auto rec = solve_recursive(sys);
    CHECK(rec.used_dense_fallback);
    CHECK(max_abs(rec.contact - dense.contact) <= 1e-10 * std::max(1.0, max_abs(dense.contact)));
}

TEST_CASE("advanced function equals the adjoint of the retarded one") {
    // the solver only ever computes the retarded function; solving the
    // advanced operator (adjoint blocks, -i eta) must give exactly the
    // adjoint of the retarded result
    const auto sys = oracles::random_cyclic_system(6, 91, 0.02, 1e-5);
    SolveOptions opt;
    opt.want_diag = true;
    const auto ret = solve_recursive(sys, opt);

    EffectiveSystem adv = sys;
    adv.eta = -sys.eta;
    for (int i = 0; i < sys.n_layers; ++i) adv.diag[i] = sys.diag[i].adjoint();
    for (std::size_t i = 0; i < sys.sub.size(); ++i) {
        adv.sub[i] = sys.sup[i].adjoint();
        adv.sup[i] = sys.sub[i].adjoint();
    }
    adv.corner_ne = sys.corner_sw.adjoint();
    adv.corner_sw = sys.corner_ne.adjoint();
    const auto advanced = solve_dense(adv, opt);

    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < sys.n_layers; ++i) {
        worst = std::max(worst, max_abs(advanced.diag[i] - ret.diag[i].adjoint()));
        scale = std::max(scale, max_abs(ret.diag[i]));
    }
    CHECK(worst <= 1e-9 * scale);
}
