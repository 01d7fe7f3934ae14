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
 * Quantum variational perceptron: amplitude encoding, the layered u3 + CNOT
 * ansatz, the readout probability pi(x; theta) = P(q_readout = 1) and its
 * exact gradient via shifted-gate circuit evaluations.
 */

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvpg/errors.hpp"
#include "qvpg/grover.hpp"
#include "qvpg/rng.hpp"
#include "qvpg/simcore.hpp"

namespace qvpg::vqp {

using sim::Amplitude;
using sim::Circuit;
using sim::GateOp;
using sim::StateVector;

using FeatureVector = std::vector<double>;
using GradientVector = std::vector<double>;
using Entangler = std::pair<std::size_t, std::size_t>; // (control, target)

struct AnsatzSpec {
    std::size_t n_qubits = 2;
    std::size_t n_layers = 2;
    std::size_t readout = 0;
    std::vector<std::vector<Entangler>> entangler; // one CNOT list per layer

    /// u3 on every qubit then a CNOT chain 0->1->...->n-1, repeated n_layers times.
    static AnsatzSpec chain(std::size_t n_qubits, std::size_t n_layers, std::size_t readout = 0) {
        AnsatzSpec spec;
        spec.n_qubits = n_qubits;
        spec.n_layers = n_layers;
        spec.readout = readout;
        std::vector<Entangler> layer;
        for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
            layer.emplace_back(q, q + 1);
        }
        spec.entangler.assign(n_layers, layer);
        spec.validate();
        return spec;
    }

    void validate() const {
        sim::detail::check_qubit_count(n_qubits);
        if (n_layers < 1) {
            throw ArgumentError("ansatz: n_layers must be positive");
        }
        if (readout >= n_qubits) {
            throw ArgumentError("ansatz: readout qubit out of range");
        }
        if (entangler.size() != n_layers) {
            throw ArgumentError("ansatz: entangler list must have one entry per layer");
        }
        for (const auto &layer : entangler) {
            for (const auto &[c, t] : layer) {
                if (c >= n_qubits || t >= n_qubits || c == t) {
                    throw ArgumentError("ansatz: invalid entangler pair");
                }
            }
        }
    }

    [[nodiscard]] std::size_t n_params() const { return n_layers * n_qubits * 3; }
};

enum class Angle : std::size_t { Theta = 0, Phi = 1, Lambda = 2 };

/// Trainable angles laid out as [layer][qubit][theta, phi, lambda].
struct AnsatzParams {
    std::size_t n_layers = 0;
    std::size_t n_qubits = 0;
    std::vector<double> values;

    AnsatzParams() = default;
    AnsatzParams(std::size_t layers, std::size_t qubits, double fill = 0.0)
        : n_layers(layers), n_qubits(qubits), values(layers * qubits * 3, fill) {}

    static AnsatzParams from_flat(std::size_t layers, std::size_t qubits,
                                  std::vector<double> flat) {
        if (flat.size() != layers * qubits * 3) {
            throw ArgumentError("AnsatzParams: flat vector has wrong length");
        }
        AnsatzParams p(layers, qubits);
        p.values = std::move(flat);
        return p;
    }

    /// Every angle drawn uniformly from [0, 2pi).
    static AnsatzParams random(const AnsatzSpec &spec, Rng &rng) {
        AnsatzParams p(spec.n_layers, spec.n_qubits);
        for (auto &v : p.values) {
            v = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        return p;
    }

    [[nodiscard]] static std::size_t index(std::size_t layer, std::size_t qubit,
                                           std::size_t n_qubits, Angle a) {
        return (layer * n_qubits + qubit) * 3 + static_cast<std::size_t>(a);
    }

    [[nodiscard]] double at(std::size_t layer, std::size_t qubit, Angle a) const {
        return values[index(layer, qubit, n_qubits, a)];
    }
    double &at(std::size_t layer, std::size_t qubit, Angle a) {
        return values[index(layer, qubit, n_qubits, a)];
    }

    [[nodiscard]] std::size_t size() const { return values.size(); }

    bool operator==(const AnsatzParams &) const = default;
};

namespace detail {

inline void check_shapes(const AnsatzSpec &spec, const AnsatzParams &params) {
    spec.validate();
    if (params.n_layers != spec.n_layers || params.n_qubits != spec.n_qubits ||
        params.values.size() != spec.n_params()) {
        throw ArgumentError("ansatz params shape [" + std::to_string(params.n_layers) + "][" +
                            std::to_string(params.n_qubits) + "] does not match spec [" +
                            std::to_string(spec.n_layers) + "][" +
                            std::to_string(spec.n_qubits) + "]");
    }
    for (const double v : params.values) {
        if (!std::isfinite(v)) {
            throw ArgumentError("ansatz params contain a non-finite angle");
        }
    }
}

/// Position of the u3 gate for (layer, qubit) inside build_ansatz's op list.
inline std::size_t gate_position(const AnsatzSpec &spec, std::size_t layer, std::size_t qubit) {
    std::size_t pos = 0;
    for (std::size_t l = 0; l < layer; ++l) {
        pos += spec.n_qubits + spec.entangler[l].size();
    }
    return pos + qubit;
}

} // namespace detail

/// amps[i] = x[i] / |x|, zero-padded to 2^n_qubits.
inline StateVector amplitude_encode(std::span<const double> x, std::size_t n_qubits) {
    sim::detail::check_qubit_count(n_qubits);
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (x.size() > dim) {
        throw ArgumentError("amplitude_encode: " + std::to_string(x.size()) +
                            " features do not fit in " + std::to_string(n_qubits) + " qubits");
    }
    double norm2 = 0.0;
    for (const double v : x) {
        if (!std::isfinite(v)) {
            throw EncodingError("amplitude_encode: non-finite feature");
        }
        norm2 += v * v;
    }
    if (norm2 == 0.0) {
        throw EncodingError("amplitude_encode: feature vector has zero norm");
    }
    const double norm = std::sqrt(norm2);
    std::vector<Amplitude> amps(dim, Amplitude{0.0, 0.0});
    for (std::size_t i = 0; i < x.size(); ++i) {
        amps[i] = x[i] / norm;
    }
    return StateVector::from_amplitudes(n_qubits, std::move(amps));
}

inline Circuit build_ansatz(const AnsatzSpec &spec, const AnsatzParams &params) {
    detail::check_shapes(spec, params);
    Circuit c(spec.n_qubits);
    for (std::size_t l = 0; l < spec.n_layers; ++l) {
        for (std::size_t q = 0; q < spec.n_qubits; ++q) {
            c.add(GateOp::single(sim::u3_matrix(params.at(l, q, Angle::Theta),
                                                params.at(l, q, Angle::Phi),
                                                params.at(l, q, Angle::Lambda)),
                                 q));
        }
        for (const auto &[control, target] : spec.entangler[l]) {
            c.add(GateOp::cnot(control, target));
        }
    }
    return c;
}

using OptionalBlock = std::optional<grover::GroverBlock>;

/// Full model circuit: ansatz followed by the Grover block when one is given.
inline Circuit model_circuit(const AnsatzSpec &spec, const AnsatzParams &params,
                             const OptionalBlock &block) {
    Circuit c = build_ansatz(spec, params);
    if (block) {
        c.append(block->circuit);
    }
    return c;
}

/// Statevector at the end of the model circuit.
inline StateVector output_state(const AnsatzSpec &spec, const AnsatzParams &params,
                                std::span<const double> x, const OptionalBlock &block) {
    return sim::run_circuit(model_circuit(spec, params, block), amplitude_encode(x, spec.n_qubits));
}

/// pi(x; theta) = P(q_readout = 1 | x; theta), computed exactly from amplitudes.
inline double forward(const AnsatzSpec &spec, const AnsatzParams &params,
                      std::span<const double> x, const OptionalBlock &block = std::nullopt) {
    return sim::prob_qubit_one(output_state(spec, params, x, block), spec.readout);
}

/// Shot-based estimate of forward(): fraction of `shots` samples with readout = 1.
inline double forward_sampled(const AnsatzSpec &spec, const AnsatzParams &params,
                              std::span<const double> x, const OptionalBlock &block,
                              std::size_t shots, std::uint64_t seed) {
    const StateVector out = output_state(spec, params, x, block);
    const std::size_t mask = sim::detail::qubit_mask(spec.n_qubits, spec.readout);
    std::size_t ones = 0;
    for (const auto &[index, count] : sim::sample_counts(out, shots, seed)) {
        if ((index & mask) != 0) {
            ones += count;
        }
    }
    return static_cast<double>(ones) / static_cast<double>(shots);
}

/// <a| sigma_z(readout) |b>
inline Amplitude sigma_z_overlap(const StateVector &a, const StateVector &b, std::size_t readout) {
    const std::size_t mask = sim::detail::qubit_mask(a.n_qubits(), readout);
    Amplitude acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const Amplitude term = std::conj(a[i]) * b[i];
        acc += (i & mask) != 0 ? -term : term;
    }
    return acc;
}

struct GradientResult {
    GradientVector grad;
    double value = 0.0;                   // forward() at the unshifted parameters
    std::size_t circuit_evaluations = 0;
};

/**
 * Exact gradient of pi(x; theta) with respect to every angle.
 *
 * With psi = G U(theta) phi(x) and pi = (1 - <sigma_z>)/2,
 * d pi = -Re <d psi| sigma_z |psi>. Each u3 derivative is a shifted copy of
 * the gate:
 *
 *   d/dtheta  U = 1/2 U(theta + pi, phi, lambda)
 *   d/dphi    U = i/2 (U(theta, phi, lambda) - U(theta, phi + pi, lambda))
 *   d/dlambda U = i/2 (U(theta, phi, lambda) - U(theta, phi, lambda + pi))
 *
 * so theta entries take the real part and phi/lambda entries the imaginary
 * part of <psi_shift| sigma_z |psi>:
 *
 *   d pi/d theta = -1/2 Re <psi_shift| sigma_z |psi>
 *   d pi/d phi   =  1/2 Im <psi_shift| sigma_z |psi>   (same for lambda)
 *
 * One unshifted run plus one shifted run per parameter.
 */
inline GradientResult gradient_with_stats(const AnsatzSpec &spec, const AnsatzParams &params,
                                          std::span<const double> x,
                                          const OptionalBlock &block = std::nullopt) {
    const Circuit base = model_circuit(spec, params, block);
    const StateVector input = amplitude_encode(x, spec.n_qubits);
    const StateVector psi = sim::run_circuit(base, input);

    GradientResult result;
    result.grad.assign(spec.n_params(), 0.0);
    result.value = sim::prob_qubit_one(psi, spec.readout);
    result.circuit_evaluations = 1;

    Circuit shifted = base;
    for (std::size_t l = 0; l < spec.n_layers; ++l) {
        for (std::size_t q = 0; q < spec.n_qubits; ++q) {
            const std::size_t pos = detail::gate_position(spec, l, q);
            const double theta = params.at(l, q, Angle::Theta);
            const double phi = params.at(l, q, Angle::Phi);
            const double lambda = params.at(l, q, Angle::Lambda);
            const std::array<sim::GateMatrix, 3> shifts = {
                sim::u3_matrix(theta + std::numbers::pi, phi, lambda),
                sim::u3_matrix(theta, phi + std::numbers::pi, lambda),
                sim::u3_matrix(theta, phi, lambda + std::numbers::pi),
            };
            for (std::size_t k = 0; k < 3; ++k) {
                shifted.ops[pos].matrix = shifts[k];
                const StateVector psi_shift = sim::run_circuit(shifted, input);
                ++result.circuit_evaluations;
                const Amplitude overlap = sigma_z_overlap(psi_shift, psi, spec.readout);
                const double entry = (k == 0) ? -0.5 * overlap.real() : 0.5 * overlap.imag();
                result.grad[AnsatzParams::index(l, q, spec.n_qubits, static_cast<Angle>(k))] =
                    entry;
            }
            shifted.ops[pos].matrix = base.ops[pos].matrix;
        }
    }
    return result;
}

inline GradientVector gradient(const AnsatzSpec &spec, const AnsatzParams &params,
                               std::span<const double> x,
                               const OptionalBlock &block = std::nullopt) {
    return gradient_with_stats(spec, params, x, block).grad;
}

/// 1 iff forward() >= threshold; ties go to class 1.
inline int predict(const AnsatzSpec &spec, const AnsatzParams &params, std::span<const double> x,
                   const OptionalBlock &block, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ArgumentError("predict: threshold must lie in (0, 1)");
    }
    return forward(spec, params, x, block) >= threshold ? 1 : 0;
}

/// Thresholding rule on its own, for callers that already hold pi(x; theta).
inline int predict_from_probability(double probability, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw ArgumentError("predict: threshold must lie in (0, 1)");
    }
    return probability >= threshold ? 1 : 0;
}

} // namespace qvpg::vqp
