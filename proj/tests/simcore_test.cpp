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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dense_oracle.hpp"
#include "qvpg/simcore.hpp"

namespace qvpg::sim {
namespace {

using testing::amps_of;
using testing::cplx;

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

void ExpectMatrixNear(const GateMatrix &got, const GateMatrix &want, double tol) {
    for (int i = 0; i < 4; ++i) {
        EXPECT_NEAR(got[i].real(), want[i].real(), tol) << "entry " << i;
        EXPECT_NEAR(got[i].imag(), want[i].imag(), tol) << "entry " << i;
    }
}

void ExpectAmpsNear(const StateVector &s, const std::vector<cplx> &want, double tol) {
    ASSERT_EQ(s.dim(), want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        EXPECT_NEAR(s[i].real(), want[i].real(), tol) << "amp " << i;
        EXPECT_NEAR(s[i].imag(), want[i].imag(), tol) << "amp " << i;
    }
}

TEST(NewState, StartsInAllZeros) {
    ExpectAmpsNear(new_state(1), {1.0, 0.0}, 0.0);
    ExpectAmpsNear(new_state(2), {1.0, 0.0, 0.0, 0.0}, 0.0);
}

TEST(NewState, RejectsOutOfRangeWidths) {
    EXPECT_THROW(new_state(0), ConfigError);
    EXPECT_THROW(new_state(kMaxQubits + 1), ConfigError);
}

TEST(U3Matrix, NamedGates) {
    ExpectMatrixNear(u3_matrix(0, 0, 0), gates::identity(), 1e-12);
    ExpectMatrixNear(u3_matrix(kPi, 0, kPi), gates::pauli_x(), 1e-12);
    ExpectMatrixNear(u3_matrix(kPi / 2, 0, kPi), gates::hadamard(), 1e-12);
    ExpectMatrixNear(u3_matrix(0, 0, kPi), gates::pauli_z(), 1e-12);
}

TEST(U3Matrix, RejectsNonFiniteAngles) {
    EXPECT_THROW(u3_matrix(NAN, 0, 0), ArgumentError);
    EXPECT_THROW(u3_matrix(0, INFINITY, 0), ArgumentError);
}

TEST(U3Matrix, UnitaryForRandomAngles) {
    Rng rng(2024);
    for (int i = 0; i < 1000; ++i) {
        EXPECT_LE(unitarity_error(testing::random_u3(rng)), 1e-10);
    }
}

TEST(ApplyGate, Examples) {
    ExpectAmpsNear(apply_gate(new_state(1), GateOp::single(gates::hadamard(), 0)),
                   {kInvSqrt2, kInvSqrt2}, 1e-15);
    ExpectAmpsNear(apply_gate(StateVector::basis(2, 0b10), GateOp::cnot(0, 1)), {0, 0, 0, 1}, 0.0);
    ExpectAmpsNear(apply_gate(StateVector::basis(2, 0b11), GateOp::cz(0, 1)), {0, 0, 0, -1}, 0.0);
}

TEST(ApplyGate, QubitZeroIsMostSignificant) {
    // X on qubit 0 of |00> gives index 0b10 = 2.
    const auto s = apply_gate(new_state(2), GateOp::single(gates::pauli_x(), 0));
    EXPECT_EQ(s[2], cplx(1.0, 0.0));
    const auto t = apply_gate(new_state(3), GateOp::single(gates::pauli_x(), 2));
    EXPECT_EQ(t[1], cplx(1.0, 0.0));
}

TEST(ApplyGate, RejectsBadIndices) {
    EXPECT_THROW(apply_gate(new_state(2), GateOp::single(gates::hadamard(), 2)), ArgumentError);
    EXPECT_THROW(apply_gate(new_state(2), GateOp::cnot(0, 5)), ArgumentError);
    EXPECT_THROW(GateOp::cnot(1, 1), ArgumentError);
    EXPECT_THROW(GateOp::cz(0, 0), ArgumentError);
    Circuit c(2);
    EXPECT_THROW(c.add(GateOp::cz(0, 2)), ArgumentError);
}

TEST(RunCircuit, Examples) {
    EXPECT_EQ(run_circuit(Circuit(2), new_state(2)), new_state(2));

    Circuit bell(2);
    bell.add(GateOp::single(gates::hadamard(), 0)).add(GateOp::cnot(0, 1));
    ExpectAmpsNear(run_circuit(bell, new_state(2)), {kInvSqrt2, 0, 0, kInvSqrt2}, 1e-15);

    Circuit hh(1);
    hh.add(GateOp::single(gates::hadamard(), 0)).add(GateOp::single(gates::hadamard(), 0));
    ExpectAmpsNear(run_circuit(hh, new_state(1)), {1.0, 0.0}, 1e-15);
}

TEST(RunCircuit, RejectsWidthMismatch) {
    EXPECT_THROW(run_circuit(Circuit(3), new_state(2)), ArgumentError);
}

TEST(RunCircuit, MatchesDenseMatrixOracle) {
    Rng rng(11);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            const Circuit c = testing::random_circuit(n, 12, rng);
            const StateVector in = testing::random_state(n, rng);
            const auto dense = testing::apply(testing::circuit_matrix(c), amps_of(in));
            EXPECT_LE(testing::max_abs_diff(amps_of(run_circuit(c, in)), dense), 1e-10)
                << "n=" << n << " trial=" << trial;
        }
    }
}

TEST(RunCircuit, SingleGateMatchesTensorProductForEveryPosition) {
    Rng rng(5);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (std::size_t q = 0; q < n; ++q) {
            const GateMatrix m = testing::random_u3(rng);
            const StateVector in = testing::random_state(n, rng);
            const auto dense = testing::apply(testing::embed_single(m, q, n), amps_of(in));
            EXPECT_LE(testing::max_abs_diff(amps_of(apply_gate(in, GateOp::single(m, q))), dense),
                      1e-10);
        }
    }
}

TEST(RunCircuit, PreservesNorm) {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(6);
        const auto out = run_circuit(testing::random_circuit(n, 40, rng), testing::random_state(n, rng));
        EXPECT_NEAR(out.norm_squared(), 1.0, 1e-10);
    }
}

TEST(RunCircuit, CompositionIsSequential) {
    Rng rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const Circuit a = testing::random_circuit(n, 8, rng);
        const Circuit b = testing::random_circuit(n, 8, rng);
        const StateVector s = testing::random_state(n, rng);
        const auto joint = run_circuit(concat(a, b), s);
        const auto staged = run_circuit(b, run_circuit(a, s));
        EXPECT_LE(testing::max_abs_diff(amps_of(joint), amps_of(staged)), 1e-12);
    }
}

TEST(ProbQubitOne, Examples) {
    EXPECT_NEAR(prob_qubit_one(StateVector::uniform(2), 0), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(prob_qubit_one(StateVector::basis(2, 0b10), 0), 1.0);
    Circuit bell(2);
    bell.add(GateOp::single(gates::hadamard(), 0)).add(GateOp::cnot(0, 1));
    EXPECT_NEAR(prob_qubit_one(run_circuit(bell, new_state(2)), 1), 0.5, 1e-15);
    EXPECT_THROW(prob_qubit_one(new_state(2), 2), ArgumentError);
}

TEST(ProbQubitOne, ComplementMatchesDirectSum) {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(5);
        const auto s = testing::random_state(n, rng);
        const auto q = static_cast<std::size_t>(rng.below(n));
        const double one = prob_qubit_one(s, q);
        EXPECT_GE(one, 0.0);
        EXPECT_LE(one, 1.0);
        EXPECT_NEAR(1.0 - one, prob_qubit_zero(s, q), 1e-12);
    }
}

TEST(SampleCounts, DeterministicDistribution) {
    const auto counts = sample_counts(StateVector::basis(2, 0b01), 100, 123);
    ASSERT_EQ(counts.size(), 1U);
    EXPECT_EQ(counts.at(1), 100U);
}

TEST(SampleCounts, UniformQubitWithinThreeSigma) {
    const auto counts = sample_counts(StateVector::uniform(1), 10000, 7);
    EXPECT_EQ(counts.at(0) + counts.at(1), 10000U);
    EXPECT_NEAR(static_cast<double>(counts.at(0)), 5000.0, 150.0);
}

TEST(SampleCounts, SameSeedSameCounts) {
    Rng rng(1);
    const auto s = testing::random_state(3, rng);
    EXPECT_EQ(sample_counts(s, 500, 9), sample_counts(s, 500, 9));
}

TEST(SampleCounts, RejectsZeroShots) {
    EXPECT_THROW(sample_counts(new_state(1), 0, 1), ArgumentError);
}

TEST(StateVector, FromAmplitudesValidates) {
    EXPECT_THROW(StateVector::from_amplitudes(1, {1.0, 1.0}), ArgumentError);
    EXPECT_THROW(StateVector::from_amplitudes(2, {1.0, 0.0}), ArgumentError);
    EXPECT_NO_THROW(StateVector::from_amplitudes(1, {kInvSqrt2, cplx(0.0, kInvSqrt2)}));
}

} // namespace
} // namespace qvpg::sim
