// Copyright 2026 The QVPG Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Grover search building blocks: phase oracles, the diffusion operator, the
 * standalone search driver and the fixed amplification block that follows
 * the variational circuit in the QVP-G model.
 *
 * All equivalence statements hold up to a single global phase.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "qvpg/errors.hpp"
#include "qvpg/simcore.hpp"

namespace qvpg::grover {

using sim::Circuit;
using sim::GateOp;
using sim::StateVector;

/// Set of marked basis states, f(x) = 1 iff x is marked.
struct OracleSpec {
    std::size_t n_qubits = 1;
    std::vector<std::size_t> marked; // sorted, unique

    OracleSpec(std::size_t n, std::vector<std::size_t> marked_states)
        : n_qubits(n), marked(std::move(marked_states)) {
        sim::detail::check_qubit_count(n);
        std::sort(marked.begin(), marked.end());
        marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
        const std::size_t n_states = std::size_t{1} << n;
        if (marked.empty()) {
            throw ArgumentError("oracle: marked set is empty");
        }
        if (marked.size() >= n_states) {
            throw ArgumentError("oracle: every basis state is marked");
        }
        if (marked.back() >= n_states) {
            throw ArgumentError("oracle: marked index " + std::to_string(marked.back()) +
                                " out of range for " + std::to_string(n) + " qubits");
        }
    }

    [[nodiscard]] std::size_t n_states() const { return std::size_t{1} << n_qubits; }
};

struct GroverBlock {
    Circuit circuit;
    std::size_t iterations = 1;
};

/**
 * Z controlled on every other listed qubit: flips the sign of basis states
 * where all `qubits` are 1.
 *
 * One or two qubits map onto Z and CZ. Wider gates use the ancilla-free
 * phase-polynomial expansion
 *
 *   pi * x_1 x_2 ... x_k = sum_{T != {}} (-1)^{|T|+1} pi / 2^{k-1} * parity_T(x),
 *
 * where each parity term is a phase gate on the last qubit of T conjugated
 * by CNOTs from the remaining members.
 */
inline Circuit multi_controlled_z(std::size_t n_qubits, const std::vector<std::size_t> &qubits) {
    Circuit c(n_qubits);
    const std::size_t k = qubits.size();
    if (k == 0) {
        throw ArgumentError("multi_controlled_z: no qubits given");
    }
    if (k == 1) {
        c.add(GateOp::single(sim::gates::pauli_z(), qubits[0]));
        return c;
    }
    if (k == 2) {
        c.add(GateOp::cz(qubits[0], qubits[1]));
        return c;
    }
    const double unit = std::numbers::pi / static_cast<double>(std::size_t{1} << (k - 1));
    for (std::size_t subset = 1; subset < (std::size_t{1} << k); ++subset) {
        std::vector<std::size_t> members;
        for (std::size_t j = 0; j < k; ++j) {
            if ((subset >> j) & 1U) {
                members.push_back(qubits[j]);
            }
        }
        const double angle = (members.size() % 2 == 1 ? unit : -unit);
        const std::size_t target = members.back();
        for (std::size_t j = 0; j + 1 < members.size(); ++j) {
            c.add(GateOp::cnot(members[j], target));
        }
        c.add(GateOp::single(sim::gates::phase(angle), target));
        for (std::size_t j = members.size() - 1; j-- > 0;) {
            c.add(GateOp::cnot(members[j], target));
        }
    }
    return c;
}

namespace detail {

inline std::vector<std::size_t> all_qubits(std::size_t n) {
    std::vector<std::size_t> q(n);
    for (std::size_t i = 0; i < n; ++i) {
        q[i] = i;
    }
    return q;
}

inline void add_layer(Circuit &c, const sim::GateMatrix &m) {
    for (std::size_t q = 0; q < c.n_qubits; ++q) {
        c.add(GateOp::single(m, q));
    }
}

} // namespace detail

/// Phase oracle O|x> = (-1)^{f(x)} |x>, one X-conjugated multi-controlled Z per marked state.
inline Circuit oracle_circuit(const OracleSpec &spec) {
    const std::size_t n = spec.n_qubits;
    const Circuit mcz = multi_controlled_z(n, detail::all_qubits(n));
    Circuit c(n);
    for (const std::size_t x : spec.marked) {
        std::vector<std::size_t> zero_bits;
        for (std::size_t q = 0; q < n; ++q) {
            if ((x & sim::detail::qubit_mask(n, q)) == 0) {
                zero_bits.push_back(q);
            }
        }
        for (const auto q : zero_bits) {
            c.add(GateOp::single(sim::gates::pauli_x(), q));
        }
        c.append(mcz);
        for (const auto q : zero_bits) {
            c.add(GateOp::single(sim::gates::pauli_x(), q));
        }
    }
    return c;
}

/// Inversion about the mean, 2|s><s| - I up to global phase: H X MCZ X H.
inline Circuit diffusion_circuit(std::size_t n_qubits) {
    if (n_qubits < 2) {
        throw ArgumentError("diffusion_circuit: need at least 2 qubits");
    }
    Circuit c(n_qubits);
    detail::add_layer(c, sim::gates::hadamard());
    detail::add_layer(c, sim::gates::pauli_x());
    c.append(multi_controlled_z(n_qubits, detail::all_qubits(n_qubits)));
    detail::add_layer(c, sim::gates::pauli_x());
    detail::add_layer(c, sim::gates::hadamard());
    return c;
}

/// floor(pi/4 * sqrt(N/M))
inline std::size_t optimal_iterations(std::size_t n_states, std::size_t n_marked) {
    if (n_marked < 1 || n_marked >= n_states) {
        throw ArgumentError("optimal_iterations: need 1 <= marked < states");
    }
    const double ratio = static_cast<double>(n_states) / static_cast<double>(n_marked);
    return static_cast<std::size_t>(std::floor(std::numbers::pi / 4.0 * std::sqrt(ratio)));
}

/// sin^2((2k+1) asin(sqrt(M/N))), the ideal success probability after k iterations.
inline double success_probability_closed_form(std::size_t n_states, std::size_t n_marked,
                                              std::size_t iterations) {
    const double theta0 =
        std::asin(std::sqrt(static_cast<double>(n_marked) / static_cast<double>(n_states)));
    const double s = std::sin(static_cast<double>(2 * iterations + 1) * theta0);
    return s * s;
}

struct SearchResult {
    StateVector state;
    double success_prob = 0.0;
};

inline double marked_probability(const OracleSpec &spec, const StateVector &state) {
    double p = 0.0;
    for (const auto x : spec.marked) {
        p += std::norm(state[x]);
    }
    return p;
}

inline SearchResult grover_search(const OracleSpec &spec, std::size_t iterations) {
    Circuit step = oracle_circuit(spec);
    step.append(diffusion_circuit(spec.n_qubits));

    StateVector state = StateVector::uniform(spec.n_qubits);
    for (std::size_t k = 0; k < iterations; ++k) {
        sim::run_inplace(step, state);
    }
    const double p = marked_probability(spec, state);
    return SearchResult{std::move(state), p};
}

/**
 * Amplification block appended after the variational circuit.
 *
 * Each iteration marks the readout=1 half of the basis (a single Z on the
 * readout qubit, written as u3(0, 0, pi)) and then applies diffusion over
 * all qubits. The block has no parameters.
 */
inline GroverBlock qvpg_block(std::size_t n_qubits, std::size_t readout, std::size_t iterations) {
    if (n_qubits < 2) {
        throw ArgumentError("qvpg_block: need at least 2 qubits");
    }
    if (readout >= n_qubits) {
        throw ArgumentError("qvpg_block: readout qubit out of range");
    }
    if (iterations < 1) {
        throw ArgumentError("qvpg_block: iterations must be positive");
    }
    const Circuit diffusion = diffusion_circuit(n_qubits);
    Circuit c(n_qubits);
    for (std::size_t k = 0; k < iterations; ++k) {
        c.add(GateOp::single(sim::u3_matrix(0.0, 0.0, std::numbers::pi), readout));
        c.append(diffusion);
    }
    return GroverBlock{std::move(c), iterations};
}

/// Alternative block that marks an explicit set of basis states instead of the readout half.
inline GroverBlock qvpg_block(const OracleSpec &marked, std::size_t iterations) {
    if (marked.n_qubits < 2) {
        throw ArgumentError("qvpg_block: need at least 2 qubits");
    }
    if (iterations < 1) {
        throw ArgumentError("qvpg_block: iterations must be positive");
    }
    Circuit step = oracle_circuit(marked);
    step.append(diffusion_circuit(marked.n_qubits));
    Circuit c(marked.n_qubits);
    for (std::size_t k = 0; k < iterations; ++k) {
        c.append(step);
    }
    return GroverBlock{std::move(c), iterations};
}

} // namespace qvpg::grover
