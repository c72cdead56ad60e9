#pragma once

#include "renyi/operator_core.hpp"

#include <random>

namespace renyi {

/// Ginibre-induced random density matrix: G G^dagger normalized to unit
/// trace, G with iid standard complex Gaussian entries.
DensityMatrix random_density(std::mt19937_64& rng, int dim);

/// Random density mixed toward the maximally mixed state so that every
/// eigenvalue stays above roughly floor / dim.
DensityMatrix random_density_full_rank(std::mt19937_64& rng, int dim, double floor = 0.1);

/// Flat Dirichlet sample with an optional per-entry floor.
ClassicalState random_classical(std::mt19937_64& rng, int size, double floor = 0.0);

}  // namespace renyi
