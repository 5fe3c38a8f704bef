#pragma once

#include <cstdint>
#include <random>

#include "ccshare/linalg.hpp"

namespace ccshare {

// Key of an independent random stream: one stream per (run seed, sample).
struct SampleSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t sample_index = 0;
};

// Engine seeded deterministically from a SampleSeed. The stream depends only on
// the key, so results do not depend on which worker draws which sample.
std::mt19937_64 make_engine(const SampleSeed &seed);

// Haar-random N-qubit pure state: 2^N complex Gaussian amplitudes, normalized.
PureState haar_random_pure(int n_qubits, const SampleSeed &seed);
PureState haar_random_pure(int n_qubits, std::mt19937_64 &engine);

// Haar-random d x d unitary (QR of a Ginibre matrix with phase correction).
ComplexMatrix haar_random_unitary(int dim, std::mt19937_64 &engine);

} // namespace ccshare
