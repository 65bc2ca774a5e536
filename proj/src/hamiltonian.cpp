#include "torx/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "torx/constants.hpp"

namespace torx {

namespace {

// first neighbors sit at 1.37..1.47 A, second neighbors above 2.3 A
constexpr double kBondCutoff = 1.7;

double dist2(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return dx * dx + dy * dy + dz * dz;
}

} // namespace

cdouble peierls_phase(const Vec3& r_i, const Vec3& r_j, const FieldConfig& field) {
    // A(r) = B0/2 * (-y, x, 0)
    const double mx = 0.5 * (r_i[0] + r_j[0]);
    const double my = 0.5 * (r_i[1] + r_j[1]);
    const double dx = r_i[0] - r_j[0];
    const double dy = r_i[1] - r_j[1];
    const double a_dot_dr = 0.5 * field.b0 * (-my * dx + mx * dy);
    const double angle = constants::e_over_hbar * a_dot_dr;
    return {std::cos(angle), std::sin(angle)};
}

std::vector<Bond> find_bonds(const std::vector<AtomSite>& sites,
                             const TorusGeometry& geom) {
    const double cut2 = kBondCutoff * kBondCutoff;
    const int n = geom.n_layers;
    std::vector<Bond> bonds;
    bonds.reserve(sites.size() * 3 / 2);
    std::vector<int> degree(sites.size(), 0);

    for (std::size_t i = 0; i < sites.size(); ++i) {
        for (std::size_t j = i + 1; j < sites.size(); ++j) {
            if (dist2(sites[i].position, sites[j].position) > cut2) continue;
            const int li = sites[i].layer, lj = sites[j].layer;
            const int span = std::abs(li - lj);
            if (!(span == 0 || span == 1 || span == n - 1)) {
                std::ostringstream msg;
                msg << "bond between layers " << li << " and " << lj
                    << " breaks the cyclic block-tridiagonal pattern";
                throw std::invalid_argument(msg.str());
            }
            Bond b{i, j};
            // orient inter-layer bonds from layer l into layer (l+1) mod n;
            // for the seam pair that means b.i in layer n-1, b.j in layer 0
            if (span == 1 && li > lj) std::swap(b.i, b.j);
            if (span == n - 1 && sites[b.i].layer == 0) std::swap(b.i, b.j);
            ++degree[i];
            ++degree[j];
            bonds.push_back(b);
        }
    }
    for (std::size_t i = 0; i < degree.size(); ++i) {
        if (degree[i] != 3) {
            std::ostringstream msg;
            msg << "site " << i << " has " << degree[i]
                << " neighbors; lattice is not 3-regular";
            throw std::invalid_argument(msg.str());
        }
    }
    return bonds;
}

BlockHamiltonian assemble(const std::vector<AtomSite>& sites,
                          const TorusGeometry& geom,
                          const HoppingParams& params,
                          const FieldConfig& field) {
    return assemble(sites, geom, find_bonds(sites, geom), params, field);
}

BlockHamiltonian assemble(const std::vector<AtomSite>& sites,
                          const TorusGeometry& geom,
                          const std::vector<Bond>& bonds,
                          const HoppingParams& params,
                          const FieldConfig& field) {
    geom.validate();
    const int n = geom.n_layers;
    BlockHamiltonian h;
    h.n_layers = n;
    h.b_field = field.b0;
    h.diag.assign(n, Block::Zero());
    h.coupling.assign(n - 1, Block::Zero());
    h.corner = Block::Zero();

    for (int l = 0; l < n; ++l)
        for (int p = 0; p < kBlock; ++p)
            h.diag[l](p, p) = params.onsite;

    for (const Bond& b : bonds) {
        const AtomSite& si = sites[b.i];
        const AtomSite& sj = sites[b.j];
        const cdouble t = params.v_device *
                          peierls_phase(si.position, sj.position, field);
        if (si.layer == sj.layer) {
            h.diag[si.layer](si.slot, sj.slot) += t;
            h.diag[si.layer](sj.slot, si.slot) += std::conj(t);
        } else if (sj.layer == si.layer + 1) {
            // H_{l+1,l}[q][p] = t(j,i); stored V_l = -H_{l+1,l}
            const cdouble tji = std::conj(t);  // t was phase(i -> j)
            h.coupling[si.layer](sj.slot, si.slot) += -tji;
        } else if (si.layer == n - 1 && sj.layer == 0) {
            // ring closure: H_{0,n-1}[q][p] = t(j,i); stored V_c = -H_{0,n-1}
            const cdouble tji = std::conj(t);
            h.corner(sj.slot, si.slot) += -tji;
        } else {
            throw std::invalid_argument("bond list is not layer-oriented");
        }
    }
    return h;
}

Block BlockHamiltonian::full_block(int a, int b) const {
    const int n = n_layers;
    Block out = Block::Zero();
    if (a == b) out += diag[a];
    if (b + 1 == a) out += -coupling[b];                // (i+1, i) = -V_i
    if (a + 1 == b) out += -coupling[a].adjoint();      // (i, i+1) = -V_i^dag
    if (a == 0 && b == n - 1) out += -corner;           // (0, n-1) = -V_c
    if (a == n - 1 && b == 0) out += -corner.adjoint(); // (n-1, 0) = -V_c^dag
    return out;
}

void write_matrix_dump(const std::string& path, const BlockHamiltonian& h) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path);
    char header[128];
    std::snprintf(header, sizeof(header), "torx-hdump n_layers=%d block=%d b_field=%.17g\n",
                  h.n_layers, kBlock, h.b_field);
    out << header;
    auto put = [&out](const Block& m) {
        for (int r = 0; r < kBlock; ++r)
            for (int c = 0; c < kBlock; ++c) {
                const double re = m(r, c).real(), im = m(r, c).imag();
                out.write(reinterpret_cast<const char*>(&re), sizeof(double));
                out.write(reinterpret_cast<const char*>(&im), sizeof(double));
            }
    };
    for (const Block& m : h.diag) put(m);
    for (const Block& m : h.coupling) put(m);
    put(h.corner);
    if (!out) throw std::runtime_error("short write to " + path);
}

BlockHamiltonian read_matrix_dump(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string header;
    std::getline(in, header);
    BlockHamiltonian h;
    int block = 0;
    if (std::sscanf(header.c_str(), "torx-hdump n_layers=%d block=%d b_field=%lg",
                    &h.n_layers, &block, &h.b_field) != 3 ||
        block != kBlock || h.n_layers < 3)
        throw std::runtime_error("bad dump header in " + path);
    auto get = [&in](Block& m) {
        for (int r = 0; r < kBlock; ++r)
            for (int c = 0; c < kBlock; ++c) {
                double re = 0, im = 0;
                in.read(reinterpret_cast<char*>(&re), sizeof(double));
                in.read(reinterpret_cast<char*>(&im), sizeof(double));
                m(r, c) = {re, im};
            }
    };
    h.diag.assign(h.n_layers, Block::Zero());
    h.coupling.assign(h.n_layers - 1, Block::Zero());
    for (Block& m : h.diag) get(m);
    for (Block& m : h.coupling) get(m);
    get(h.corner);
    if (!in) throw std::runtime_error("short read from " + path);
    return h;
}

} // namespace torx
