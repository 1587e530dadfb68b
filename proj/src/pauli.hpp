// pauli.hpp — internal fixed-excitation sector bookkeeping and operator
// applications over the 2^N product basis (emitter i is bit i, bit value 1 =
// excited). Not part of the public interface.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <vector>

#include "sr/interactions.hpp"

namespace sr::detail {

using cplx = std::complex<double>;

// Basis of each excitation-number sector, with a global mask -> in-sector
// index table. Excitation number is the popcount of the mask.
struct SectorBasis {
    int n_atoms = 0;
    std::vector<std::vector<std::uint32_t>> masks;  // [n_exc] -> ascending masks
    std::vector<std::int32_t> rank;                 // mask -> index within its sector

    explicit SectorBasis(int n_atoms);
    int dim(int n_exc) const { return static_cast<int>(masks[n_exc].size()); }
};

// out = (sum_{ij} K_ij sigma^+_i sigma^-_j) in, restricted to one sector.
// out must be pre-sized to the sector dimension; it is overwritten.
void apply_quadratic_in_sector(const SectorBasis& basis, int n_exc, const MatXc& k,
                               Eigen::Ref<const Eigen::VectorXcd> in,
                               Eigen::Ref<Eigen::VectorXcd> out);

// out = (sum_i alpha_i sigma^-_i) in, mapping sector n_exc to n_exc - 1.
// out must be pre-sized to the target sector dimension; it is overwritten.
void apply_lowering_in_sector(const SectorBasis& basis, int n_exc,
                              const Eigen::VectorXcd& alpha,
                              Eigen::Ref<const Eigen::VectorXcd> in,
                              Eigen::Ref<Eigen::VectorXcd> out);

}  // namespace sr::detail
