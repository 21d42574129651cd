#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cpbures/cpmap.hpp"

namespace cpbures {

/// Deterministic generator shared by the property suites and tests.
using Rng = std::mt19937_64;

/// Entries i.i.d. complex with unit-normal real and imaginary parts.
CMat random_complex(Rng& rng, Eigen::Index rows, Eigen::Index cols);

/// Haar-distributed unitary via QR of a Ginibre matrix with phase fix.
CMat random_unitary(Rng& rng, Eigen::Index n);

/// Hermitian matrix with unit-normal entries.
CMat random_hermitian(Rng& rng, Eigen::Index n);

/// CP map with `rank` Kraus blocks drawn from random_complex.
CpMap random_cpmap(Rng& rng, Eigen::Index dim_in, Eigen::Index dim_out, Eigen::Index rank);

/// Probability vector with entries drawn uniformly then normalized.
std::vector<double> random_probability(Rng& rng, std::size_t length);

/// Density matrix of size n drawn from a Ginibre ensemble.
CMat random_density(Rng& rng, Eigen::Index n);

}  // namespace cpbures
