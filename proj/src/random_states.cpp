#include "renyi/random_states.hpp"

namespace renyi {

DensityMatrix random_density(std::mt19937_64& rng, int dim) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            g(r, c) = std::complex<double>(normal(rng), normal(rng));
        }
    }
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(std::move(rho));
}

DensityMatrix random_density_full_rank(std::mt19937_64& rng, int dim, double floor) {
    const DensityMatrix raw = random_density(rng, dim);
    Matrix mixed = (1.0 - floor) * raw.entries() +
                   floor / dim * Matrix::Identity(dim, dim);
    return DensityMatrix(std::move(mixed));
}

ClassicalState random_classical(std::mt19937_64& rng, int size, double floor) {
    std::exponential_distribution<double> expo(1.0);
    RealVector w(size);
    for (int i = 0; i < size; ++i) w[i] = expo(rng) + floor;
    w /= w.sum();
    return ClassicalState(std::move(w));
}

}  // namespace renyi
