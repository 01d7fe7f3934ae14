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
 * Dense statevector simulation: states, gates, circuits and measurement.
 *
 * Basis index convention: qubit 0 is the most significant bit, so basis
 * index b encodes qubit values as b = sum_i q_i * 2^(n-1-i).
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qvpg/errors.hpp"
#include "qvpg/rng.hpp"

namespace qvpg::sim {

using Amplitude = std::complex<double>;

inline constexpr std::size_t kMaxQubits = 24;
inline constexpr double kNormTolerance = 1e-10;

/// Row-major 2x2 complex matrix: {m00, m01, m10, m11}.
using GateMatrix = std::array<Amplitude, 4>;

namespace detail {

inline void check_qubit_count(std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                          "], got " + std::to_string(n_qubits));
    }
}

/// Bit mask selecting `qubit` inside a basis index.
inline std::size_t qubit_mask(std::size_t n_qubits, std::size_t qubit) {
    return std::size_t{1} << (n_qubits - 1 - qubit);
}

} // namespace detail

class StateVector {
  public:
    /// |0...0> on n_qubits qubits.
    explicit StateVector(std::size_t n_qubits) : n_qubits_(n_qubits) {
        detail::check_qubit_count(n_qubits);
        amps_.assign(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    /// Computational basis state |index>.
    static StateVector basis(std::size_t n_qubits, std::size_t index) {
        StateVector s(n_qubits);
        if (index >= s.dim()) {
            throw ArgumentError("basis index " + std::to_string(index) + " out of range");
        }
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    /// Takes ownership of a normalized amplitude array of length 2^n_qubits.
    static StateVector from_amplitudes(std::size_t n_qubits, std::vector<Amplitude> amps) {
        StateVector s(n_qubits);
        if (amps.size() != s.dim()) {
            throw ArgumentError("amplitude array length " + std::to_string(amps.size()) +
                                " does not match 2^" + std::to_string(n_qubits));
        }
        double norm = 0.0;
        for (const auto &a : amps) {
            if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
                throw ArgumentError("non-finite amplitude");
            }
            norm += std::norm(a);
        }
        if (std::abs(norm - 1.0) > kNormTolerance) {
            throw ArgumentError("amplitudes are not normalized (norm^2 = " +
                                std::to_string(norm) + ")");
        }
        s.amps_ = std::move(amps);
        return s;
    }

    /// Uniform superposition over all 2^n basis states.
    static StateVector uniform(std::size_t n_qubits) {
        StateVector s(n_qubits);
        const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
        std::fill(s.amps_.begin(), s.amps_.end(), Amplitude{a, 0.0});
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t dim() const { return amps_.size(); }

    [[nodiscard]] std::span<const Amplitude> amplitudes() const { return amps_; }
    /// Mutable view for gate kernels. Callers must keep the state normalized.
    [[nodiscard]] std::span<Amplitude> amplitudes_mut() { return amps_; }

    const Amplitude &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] double norm_squared() const {
        double total = 0.0;
        for (const auto &a : amps_) {
            total += std::norm(a);
        }
        return total;
    }

    /// <this|other>
    [[nodiscard]] Amplitude inner(const StateVector &other) const {
        if (other.n_qubits_ != n_qubits_) {
            throw ArgumentError("inner product between states of different size");
        }
        Amplitude acc{0.0, 0.0};
        for (std::size_t i = 0; i < amps_.size(); ++i) {
            acc += std::conj(amps_[i]) * other.amps_[i];
        }
        return acc;
    }

    bool operator==(const StateVector &) const = default;

  private:
    std::size_t n_qubits_;
    std::vector<Amplitude> amps_;
};

inline StateVector new_state(std::size_t n_qubits) { return StateVector(n_qubits); }

/**
 * Generic single-qubit unitary
 *
 *   [[cos(t/2),            -e^{i l} sin(t/2)       ],
 *    [e^{i p} sin(t/2),     e^{i(l+p)} cos(t/2)    ]]
 *
 * with t = theta, p = phi, l = lambda.
 */
inline GateMatrix u3_matrix(double theta, double phi, double lambda) {
    if (!std::isfinite(theta) || !std::isfinite(phi) || !std::isfinite(lambda)) {
        throw ArgumentError("u3_matrix: angles must be finite");
    }
    const double c = std::cos(theta / 2.0);
    const double s = std::sin(theta / 2.0);
    return {Amplitude{c, 0.0}, -std::polar(1.0, lambda) * s, std::polar(1.0, phi) * s,
            std::polar(1.0, lambda + phi) * c};
}

namespace gates {

inline GateMatrix identity() { return {1.0, 0.0, 0.0, 1.0}; }
inline GateMatrix pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
inline GateMatrix pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }
inline GateMatrix hadamard() {
    const double r = 1.0 / std::sqrt(2.0);
    return {r, r, r, -r};
}
/// diag(1, e^{i angle})
inline GateMatrix phase(double angle) { return {1.0, 0.0, 0.0, std::polar(1.0, angle)}; }

} // namespace gates

/// M^dagger M compared against I, largest elementwise deviation.
inline double unitarity_error(const GateMatrix &m) {
    double worst = 0.0;
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            Amplitude acc = std::conj(m[0 * 2 + r]) * m[0 * 2 + c] +
                            std::conj(m[1 * 2 + r]) * m[1 * 2 + c];
            worst = std::max(worst, std::abs(acc - Amplitude{r == c ? 1.0 : 0.0, 0.0}));
        }
    }
    return worst;
}

struct GateOp {
    enum class Kind { Single, Cnot, Cz };

    Kind kind = Kind::Single;
    GateMatrix matrix = gates::identity(); // used by Kind::Single only
    std::size_t q0 = 0;                    // target (Single), control (Cnot), first (Cz)
    std::size_t q1 = 0;                    // target (Cnot), second (Cz)

    static GateOp single(const GateMatrix &m, std::size_t qubit) {
        return GateOp{Kind::Single, m, qubit, 0};
    }
    static GateOp cnot(std::size_t control, std::size_t target) {
        if (control == target) {
            throw ArgumentError("cnot: control and target must differ");
        }
        return GateOp{Kind::Cnot, gates::identity(), control, target};
    }
    static GateOp cz(std::size_t a, std::size_t b) {
        if (a == b) {
            throw ArgumentError("cz: qubits must differ");
        }
        return GateOp{Kind::Cz, gates::identity(), a, b};
    }

    [[nodiscard]] std::size_t max_qubit() const {
        return kind == Kind::Single ? q0 : std::max(q0, q1);
    }

    bool operator==(const GateOp &) const = default;
};

struct Circuit {
    std::size_t n_qubits = 1;
    std::vector<GateOp> ops;

    explicit Circuit(std::size_t n) : n_qubits(n) { detail::check_qubit_count(n); }

    Circuit &add(const GateOp &op) {
        if (op.max_qubit() >= n_qubits) {
            throw ArgumentError("gate references qubit " + std::to_string(op.max_qubit()) +
                                " in a " + std::to_string(n_qubits) + "-qubit circuit");
        }
        ops.push_back(op);
        return *this;
    }

    /// Appends every op of `other` (same width required).
    Circuit &append(const Circuit &other) {
        if (other.n_qubits != n_qubits) {
            throw ArgumentError("cannot concatenate circuits of different width");
        }
        ops.insert(ops.end(), other.ops.begin(), other.ops.end());
        return *this;
    }

    [[nodiscard]] std::size_t size() const { return ops.size(); }
};

inline Circuit concat(Circuit first, const Circuit &second) {
    first.append(second);
    return first;
}

/// Applies `op` in place using stride arithmetic over the amplitude array.
inline void apply_inplace(StateVector &state, const GateOp &op) {
    const std::size_t n = state.n_qubits();
    if (op.max_qubit() >= n) {
        throw ArgumentError("gate qubit index " + std::to_string(op.max_qubit()) +
                            " out of range for " + std::to_string(n) + " qubits");
    }
    auto amps = state.amplitudes_mut();
    const std::size_t dim = amps.size();

    switch (op.kind) {
    case GateOp::Kind::Single: {
        const std::size_t stride = detail::qubit_mask(n, op.q0);
        const auto &m = op.matrix;
        for (std::size_t block = 0; block < dim; block += 2 * stride) {
            for (std::size_t i = block; i < block + stride; ++i) {
                const Amplitude a0 = amps[i];
                const Amplitude a1 = amps[i + stride];
                amps[i] = m[0] * a0 + m[1] * a1;
                amps[i + stride] = m[2] * a0 + m[3] * a1;
            }
        }
        break;
    }
    case GateOp::Kind::Cnot: {
        const std::size_t cmask = detail::qubit_mask(n, op.q0);
        const std::size_t tmask = detail::qubit_mask(n, op.q1);
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cmask) != 0 && (i & tmask) == 0) {
                std::swap(amps[i], amps[i | tmask]);
            }
        }
        break;
    }
    case GateOp::Kind::Cz: {
        const std::size_t both = detail::qubit_mask(n, op.q0) | detail::qubit_mask(n, op.q1);
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & both) == both) {
                amps[i] = -amps[i];
            }
        }
        break;
    }
    }
}

inline StateVector apply_gate(StateVector state, const GateOp &op) {
    apply_inplace(state, op);
    return state;
}

inline void run_inplace(const Circuit &circuit, StateVector &state) {
    if (circuit.n_qubits != state.n_qubits()) {
        throw ArgumentError("circuit has " + std::to_string(circuit.n_qubits) +
                            " qubits but state has " + std::to_string(state.n_qubits()));
    }
    for (const auto &op : circuit.ops) {
        apply_inplace(state, op);
    }
}

inline StateVector run_circuit(const Circuit &circuit, StateVector state) {
    run_inplace(circuit, state);
    return state;
}

/// Probability that measuring `qubit` yields 1.
inline double prob_qubit_one(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.n_qubits()) {
        throw ArgumentError("qubit index " + std::to_string(qubit) + " out of range");
    }
    const std::size_t mask = detail::qubit_mask(state.n_qubits(), qubit);
    const auto amps = state.amplitudes();
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) != 0) {
            p += std::norm(amps[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

inline double prob_qubit_zero(const StateVector &state, std::size_t qubit) {
    if (qubit >= state.n_qubits()) {
        throw ArgumentError("qubit index " + std::to_string(qubit) + " out of range");
    }
    const std::size_t mask = detail::qubit_mask(state.n_qubits(), qubit);
    const auto amps = state.amplitudes();
    double p = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        if ((i & mask) == 0) {
            p += std::norm(amps[i]);
        }
    }
    return std::clamp(p, 0.0, 1.0);
}

using Counts = std::map<std::size_t, std::size_t>;

/// Draws `shots` i.i.d. basis-state outcomes from |amps|^2.
inline Counts sample_counts(const StateVector &state, std::size_t shots, std::uint64_t seed) {
    if (shots == 0) {
        throw ArgumentError("sample_counts: shots must be positive");
    }
    const auto amps = state.amplitudes();
    std::vector<double> cumulative(amps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        total += std::norm(amps[i]);
        cumulative[i] = total;
    }
    Rng rng(seed);
    Counts counts;
    for (std::size_t s = 0; s < shots; ++s) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        auto index = static_cast<std::size_t>(it - cumulative.begin());
        // Skip zero-probability tail entries that share the final cumulative value.
        index = std::min(index, amps.size() - 1);
        while (index > 0 && std::norm(amps[index]) == 0.0) {
            --index;
        }
        ++counts[index];
    }
    return counts;
}

} // namespace qvpg::sim
