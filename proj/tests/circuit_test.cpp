// Copyright 2026 The capdil Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "capdil/circuit.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "capdil/classical_solver.hpp"
#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace capdil;
using capdil::testing::max_abs_diff;
using Eigen::MatrixXcd;

namespace {

ComplexVector basis(int qubits, Eigen::Index index) {
    ComplexVector v = ComplexVector::Zero(Eigen::Index{1} << qubits);
    v[index] = 1.0;
    return v;
}

Circuit random_circuit(int qubits, int gates, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> kind(0, 6);
    std::uniform_int_distribution<int> qubit(0, qubits - 1);
    std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
    Circuit c(qubits);
    while (static_cast<int>(c.size()) < gates) {
        const int t = qubit(rng);
        int o = qubit(rng);
        const auto k = static_cast<GateKind>(kind(rng));
        if (is_two_qubit(k)) {
            if (qubits < 2) continue;
            while (o == t) o = qubit(rng);
        }
        c.append(Gate{k, t, is_two_qubit(k) ? std::optional<int>(o) : std::nullopt,
                      has_angle(k) ? angle(rng) : 0.0});
    }
    return c;
}

} // namespace

TEST(gates, hadamard_twice_is_identity) {
    std::mt19937_64 rng(1);
    StateVector s(3, capdil::testing::random_state(8, rng));
    const ComplexVector before = s.amplitudes();
    s.apply(Gate::h(1));
    s.apply(Gate::h(1));
    ASSERT_LT((s.amplitudes() - before).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(gates, cnot_flips_target_when_control_set) {
    // Control qubit 1 set, target qubit 0: |q1 q0> = |10> -> |11>.
    StateVector s(2, basis(2, 0b10));
    s.apply(Gate::cnot(1, 0));
    ASSERT_EQ(s.amplitudes()[0b11], Complex(1.0, 0.0));
    StateVector unset(2, basis(2, 0b00));
    unset.apply(Gate::cnot(1, 0));
    ASSERT_EQ(unset.amplitudes()[0b00], Complex(1.0, 0.0));
}

TEST(gates, ry_rotates_zero_state) {
    for (double theta : {0.0, 0.3, std::numbers::pi / 2, 2.5, -1.1}) {
        StateVector s(1);
        s.apply(Gate::ry(0, theta));
        ASSERT_NEAR(std::abs(s.amplitudes()[0] - std::cos(theta / 2)), 0.0, 1e-15);
        ASSERT_NEAR(std::abs(s.amplitudes()[1] - std::sin(theta / 2)), 0.0, 1e-15);
    }
}

TEST(gates, single_gate_matrices) {
    const double a = 0.7;
    const auto P = circuit_unitary(Circuit(1).append(Gate::phase(0, a)));
    ASSERT_NEAR(std::abs(P(1, 1) - std::polar(1.0, a)), 0.0, 1e-15);
    ASSERT_EQ(P(0, 0), Complex(1.0, 0.0));
    const auto CP = circuit_unitary(Circuit(2).append(Gate::cphase(0, 1, a)));
    MatrixXcd expected = MatrixXcd::Identity(4, 4);
    expected(3, 3) = std::polar(1.0, a);
    ASSERT_LT(max_abs_diff(CP, expected), 1e-15);
    const auto Z = circuit_unitary(Circuit(1).append(Gate::z(0)));
    ASSERT_EQ(Z(1, 1), Complex(-1.0, 0.0));
    const auto SW = circuit_unitary(Circuit(2).append(Gate::swap(0, 1)));
    MatrixXcd swap = MatrixXcd::Zero(4, 4);
    swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1.0;
    ASSERT_LT(max_abs_diff(SW, swap), 1e-15);
}

TEST(gates, adjoint_inverts) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = random_circuit(3, 15, rng);
        Circuit both(3);
        both.append(c).append(c.adjoint());
        ASSERT_LT(max_abs_diff(circuit_unitary(both), MatrixXcd::Identity(8, 8)), 1e-12);
    }
}

TEST(gates, validation) {
    Circuit c(2);
    ASSERT_THROW(c.append(Gate::h(2)), std::out_of_range);
    ASSERT_THROW(c.append(Gate::h(-1)), std::out_of_range);
    ASSERT_THROW(c.append(Gate::cnot(1, 1)), std::invalid_argument);
    ASSERT_THROW(c.append(Gate::cnot(3, 0)), std::out_of_range);
    ASSERT_THROW(c.append(Gate::ry(0, std::nan(""))), std::invalid_argument);
    ASSERT_THROW(Circuit(0), std::invalid_argument);
    StateVector s(1);
    ASSERT_THROW(s.apply(Gate::h(1)), std::out_of_range);
    ASSERT_THROW(StateVector(2, ComplexVector::Zero(3)), std::invalid_argument);
}

TEST(statevector, random_circuits_preserve_norm) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
        const int q = 1 + trial % 6;
        StateVector s(q, capdil::testing::random_state(std::size_t{1} << q, rng));
        s.apply(random_circuit(q, 40, rng));
        ASSERT_NEAR(s.norm(), 1.0, 1e-12);
    }
}

TEST(statevector, empty_circuit_is_identity) {
    ASSERT_EQ(max_abs_diff(circuit_unitary(Circuit(3)), MatrixXcd::Identity(8, 8)), 0.0);
}

TEST(statevector, with_ancilla_puts_system_in_lower_half) {
    std::mt19937_64 rng(4);
    const auto psi = capdil::testing::random_state(8, rng);
    const auto s = StateVector::with_ancilla(psi);
    ASSERT_EQ(s.num_qubits(), 4);
    ASSERT_EQ((s.amplitudes().head(8) - psi).norm(), 0.0);
    ASSERT_EQ(s.amplitudes().tail(8).norm(), 0.0);
    ASSERT_THROW(StateVector::with_ancilla(ComplexVector::Zero(6)), std::invalid_argument);
}

TEST(qft, one_qubit_is_hadamard) {
    const auto U = circuit_unitary(qft_circuit(1));
    MatrixXcd H(2, 2);
    H << 1, 1, 1, -1;
    ASSERT_LT(max_abs_diff(U, H / std::numbers::sqrt2), 1e-15);
}

TEST(qft, matches_dft_matrix) {
    for (int n = 1; n <= 6; ++n) {
        const auto F = capdil::testing::dft_matrix(std::size_t{1} << n);
        ASSERT_LT(max_abs_diff(circuit_unitary(qft_circuit(n)), F), 1e-12) << "n=" << n;
        ASSERT_LT(max_abs_diff(circuit_unitary(inverse_qft_circuit(n)), F.adjoint()), 1e-12);
    }
}

TEST(qft, round_trip_on_random_states) {
    std::mt19937_64 rng(5);
    for (int n = 1; n <= 8; ++n) {
        StateVector s(n, capdil::testing::random_state(std::size_t{1} << n, rng));
        const ComplexVector before = s.amplitudes();
        s.apply(qft_circuit(n));
        s.apply(inverse_qft_circuit(n));
        ASSERT_LT((s.amplitudes() - before).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(qft, gate_census) {
    for (int n = 1; n <= 8; ++n) {
        const auto c = qft_circuit(n);
        ASSERT_EQ(c.count(GateKind::Hadamard), static_cast<std::size_t>(n));
        ASSERT_EQ(c.count(GateKind::ControlledPhase), static_cast<std::size_t>(n * (n - 1) / 2));
        ASSERT_EQ(c.count(GateKind::Swap), static_cast<std::size_t>(n / 2));
    }
}

TEST(kinetic_phase, zero_time_is_identity) {
    const auto g = make_grid(-5, 5, 4);
    ASSERT_LT(max_abs_diff(circuit_unitary(kinetic_phase_circuit(g, 0.0)),
                           MatrixXcd::Identity(16, 16)),
              1e-15);
    ASSERT_NEAR(std::abs(kinetic_global_phase(g, 0.0) - 1.0), 0.0, 1e-15);
}

TEST(kinetic_phase, diagonal_matches_momentum_phases) {
    for (int n = 1; n <= 6; ++n) {
        const auto g = make_grid(-3, 4, n);
        const double dt = 0.83;
        const auto U = circuit_unitary(kinetic_phase_circuit(g, dt));
        const Complex global = kinetic_global_phase(g, dt);
        for (std::size_t k = 0; k < g.size(); ++k) {
            const auto i = static_cast<Eigen::Index>(k);
            const Complex expected =
                std::polar(1.0, -g.momentum(k) * g.momentum(k) * dt / (2 * g.mass()));
            ASSERT_NEAR(std::abs(U(i, i) * global - expected), 0.0, 1e-12)
                << "n=" << n << " k=" << k;
        }
        MatrixXcd off = U;
        off.diagonal().setZero();
        ASSERT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
    }
}

TEST(kinetic_block, matches_classical_substep_on_gaussian) {
    const auto g = make_grid(-5, 5, 4);
    const auto wf = gaussian_packet(g, g.midpoint(), 0.4, 0.0);
    StateVector s(4, wf.amplitudes);
    s.apply(kinetic_block_circuit(g, 1.2));
    const ComplexVector circuit = s.amplitudes() * kinetic_global_phase(g, 1.2);
    ASSERT_LT((circuit - kinetic_substep(wf.amplitudes, g, 1.2)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(kinetic_block, matches_plane_wave_oracle_on_random_states) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.01, 2.0);
    for (int n = 1; n <= 5; ++n) {
        const auto g = make_grid(-5, 5, n);
        for (int trial = 0; trial < 10; ++trial) {
            const double dt = u(rng);
            const auto psi = capdil::testing::random_state(g.size(), rng);
            StateVector s(n, psi);
            s.apply(kinetic_block_circuit(g, dt));
            const ComplexVector expected = capdil::testing::plane_wave_propagator(g, dt) * psi;
            ASSERT_LT((s.amplitudes() * kinetic_global_phase(g, dt) - expected)
                          .cwiseAbs()
                          .maxCoeff(),
                      1e-10)
                << "n=" << n;
        }
    }
}

TEST(potential_block, zero_is_identity_and_constant_is_global_phase) {
    const auto g = make_grid(-5, 5, 3);
    std::mt19937_64 rng(7);
    const auto psi = capdil::testing::random_state(16, rng);
    StateVector s(4, psi);
    potential_phase_block(g, zero_potential(g), 0.5).apply(s);
    ASSERT_EQ((s.amplitudes() - psi).norm(), 0.0);

    PotentialField flat{RealVector::Constant(8, 0.9), PotentialKind::real_potential};
    StateVector t(4, psi);
    potential_phase_block(g, flat, 0.5).apply(t);
    ASSERT_LT((t.amplitudes() - psi * std::polar(1.0, -0.45)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(potential_block, gaussian_well_phases) {
    const auto g = make_grid(-5, 5, 4);
    const auto V = gaussian_well(g, -1.0, 1.0);
    const auto psi = gaussian_packet(g, 0.0, 0.8, 0.0).amplitudes;
    StateVector s(4, psi);
    potential_phase_block(g, V, 0.3).apply(s);
    for (Eigen::Index i = 0; i < 16; ++i) {
        ASSERT_NEAR(std::abs(s.amplitudes()[i]), std::abs(psi[i]), 1e-15);
        ASSERT_NEAR(std::abs(s.amplitudes()[i] - psi[i] * std::polar(1.0, -V.values[i] * 0.3)),
                    0.0, 1e-15);
    }
    ASSERT_THROW(potential_phase_block(make_grid(-5, 5, 3), V, 0.3), std::invalid_argument);
}

TEST(circuit_io, round_trip) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 20; ++trial) {
        const auto c = random_circuit(4, 30, rng);
        std::stringstream ss;
        dump_circuit(c, ss);
        const auto back = parse_circuit(ss);
        ASSERT_EQ(back.num_qubits(), 4);
        ASSERT_EQ(back.size(), c.size());
        ASSERT_EQ(max_abs_diff(circuit_unitary(back), circuit_unitary(c)), 0.0);
    }
}

TEST(circuit_io, rejects_malformed_dumps) {
    std::stringstream no_header("GATE H 0\n");
    ASSERT_THROW(parse_circuit(no_header), std::invalid_argument);
    std::stringstream bad_gate("QUBITS 2\nGATE FOO 0\n");
    ASSERT_THROW(parse_circuit(bad_gate), std::invalid_argument);
    std::stringstream missing_angle("QUBITS 2\nGATE RY 0\n");
    ASSERT_THROW(parse_circuit(missing_angle), std::invalid_argument);
    std::stringstream empty("");
    ASSERT_THROW(parse_circuit(empty), std::invalid_argument);
}
