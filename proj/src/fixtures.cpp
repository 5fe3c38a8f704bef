#include "ccshare/fixtures.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ccshare/errors.hpp"

namespace ccshare {

namespace {

Eigen::Index dimension_for(int n_qubits) {
    if (n_qubits < kMinQubits || n_qubits > kMaxQubits) {
        throw ArgumentError("number of qubits must be in [2, 8], got " + std::to_string(n_qubits));
    }
    return Eigen::Index{1} << n_qubits;
}

double parse_double(const std::string &token, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        while (used < token.size() && std::isspace(static_cast<unsigned char>(token[used]))) ++used;
        if (used != token.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception &) {
        throw ArgumentError("amplitude file line " + std::to_string(line) + ": cannot parse '" + token + "'");
    }
}

} // namespace

PureState ghz_state(int n_qubits) {
    const auto dim = dimension_for(n_qubits);
    ComplexVector amps = ComplexVector::Zero(dim);
    amps(0) = amps(dim - 1) = 1.0 / std::sqrt(2.0);
    return PureState::normalized(std::move(amps));
}

PureState w_state(int n_qubits) {
    const auto dim = dimension_for(n_qubits);
    ComplexVector amps = ComplexVector::Zero(dim);
    for (int q = 0; q < n_qubits; ++q) amps(Eigen::Index{1} << q) = 1.0;
    return PureState::normalized(std::move(amps));
}

PureState product_state(int n_qubits) {
    const auto dim = dimension_for(n_qubits);
    ComplexVector amps = ComplexVector::Zero(dim);
    amps(0) = 1.0;
    return PureState(std::move(amps));
}

PureState uniform_product_state(int n_qubits, double theta, double phi) {
    const auto dim = dimension_for(n_qubits);
    const Complex up = std::cos(theta / 2.0);
    const Complex down = std::polar(std::sin(theta / 2.0), phi);
    ComplexVector amps(dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        Complex a = 1.0;
        for (int q = 0; q < n_qubits; ++q) a *= ((k >> q) & 1) ? down : up;
        amps(k) = a;
    }
    return PureState::normalized(std::move(amps));
}

PureState load_amplitudes(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open state file " + path.string());
    std::vector<Complex> values;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto comma = line.find(',');
        const double re = parse_double(line.substr(0, comma), number);
        const double im = comma == std::string::npos ? 0.0 : parse_double(line.substr(comma + 1), number);
        values.emplace_back(re, im);
    }
    ComplexVector amps(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < values.size(); ++k) amps(static_cast<Eigen::Index>(k)) = values[k];
    return PureState::normalized(std::move(amps));
}

PureState named_fixture(std::string_view name) {
    auto with_count = [&](std::string_view stem) -> int {
        const auto digits = name.substr(stem.size());
        int n = 0;
        const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
        if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
            throw ArgumentError("fixture '" + std::string(name) + "' needs a qubit count, e.g. " + std::string(stem) +
                                "3");
        }
        return n;
    };
    if (name.starts_with("ghz")) return ghz_state(with_count("ghz"));
    if (name.starts_with("product")) return product_state(with_count("product"));
    if (name.starts_with("w")) return w_state(with_count("w"));
    throw ArgumentError("unknown fixture '" + std::string(name) + "' (expected ghzN, wN or productN)");
}

} // namespace ccshare
