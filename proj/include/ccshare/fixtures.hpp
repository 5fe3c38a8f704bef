#pragma once

// Named states with known correlation content.

#include <filesystem>
#include <string_view>

#include "ccshare/linalg.hpp"

namespace ccshare {

// (|0...0> + |1...1>) / sqrt(2)
PureState ghz_state(int n_qubits);

// Equal superposition of all single-excitation basis states.
PureState w_state(int n_qubits);

// |0>^{(x)N}
PureState product_state(int n_qubits);

// Product of single-qubit states with Bloch angles (theta, phi) on every qubit.
PureState uniform_product_state(int n_qubits, double theta, double phi);

// Amplitudes from a text file: one amplitude per line as "re,im" or "re";
// blank lines and lines starting with '#' are skipped. The vector is
// normalized; throws IoError / ArgumentError on bad input.
PureState load_amplitudes(const std::filesystem::path &path);

// "ghz3", "w3", "product4", ... Throws ArgumentError for unknown names.
PureState named_fixture(std::string_view name);

} // namespace ccshare
