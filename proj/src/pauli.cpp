// pauli.cpp — sector basis and sector-restricted operator applications

#include "pauli.hpp"

#include <bit>

#include "sr/errors.hpp"

namespace sr::detail {

SectorBasis::SectorBasis(int atoms) : n_atoms(atoms) {
    if (atoms < 1 || atoms > 24) {
        throw CapacityError("sector basis supports 1 to 24 emitters");
    }
    const std::uint32_t dim = 1u << atoms;
    masks.resize(atoms + 1);
    rank.assign(dim, -1);
    for (std::uint32_t m = 0; m < dim; ++m) {
        const int n_exc = std::popcount(m);
        rank[m] = static_cast<std::int32_t>(masks[n_exc].size());
        masks[n_exc].push_back(m);
    }
}

void apply_quadratic_in_sector(const SectorBasis& basis, int n_exc, const MatXc& k,
                               Eigen::Ref<const Eigen::VectorXcd> in,
                               Eigen::Ref<Eigen::VectorXcd> out) {
    const auto& sector = basis.masks[n_exc];
    const int n = basis.n_atoms;
    out.setZero();
    for (std::size_t s = 0; s < sector.size(); ++s) {
        const std::uint32_t mask = sector[s];
        const cplx amp = in[static_cast<Eigen::Index>(s)];
        if (amp == cplx(0.0, 0.0)) continue;
        cplx diag = 0.0;
        for (int j = 0; j < n; ++j) {
            const std::uint32_t bj = 1u << j;
            if (!(mask & bj)) continue;
            diag += k(j, j);
            const std::uint32_t removed = mask & ~bj;
            for (int i = 0; i < n; ++i) {
                const std::uint32_t bi = 1u << i;
                if (mask & bi) continue;
                out[basis.rank[removed | bi]] += k(i, j) * amp;
            }
        }
        out[static_cast<Eigen::Index>(s)] += diag * amp;
    }
}

void apply_lowering_in_sector(const SectorBasis& basis, int n_exc,
                              const Eigen::VectorXcd& alpha,
                              Eigen::Ref<const Eigen::VectorXcd> in,
                              Eigen::Ref<Eigen::VectorXcd> out) {
    const auto& sector = basis.masks[n_exc];
    const int n = basis.n_atoms;
    out.setZero();
    for (std::size_t s = 0; s < sector.size(); ++s) {
        const std::uint32_t mask = sector[s];
        const cplx amp = in[static_cast<Eigen::Index>(s)];
        if (amp == cplx(0.0, 0.0)) continue;
        for (int i = 0; i < n; ++i) {
            const std::uint32_t bi = 1u << i;
            if (mask & bi) out[basis.rank[mask & ~bi]] += alpha[i] * amp;
        }
    }
}

}  // namespace sr::detail
