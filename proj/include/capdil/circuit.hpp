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

/**
 * @file
 * Gate lists and a dense statevector executor.
 *
 * Qubit q is bit q of the basis-state index. On an (n+1)-qubit register the
 * system occupies qubits 0..n-1 (grid index in standard binary) and the
 * ancilla is qubit n, the most significant bit.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "capdil/grid.hpp"

namespace capdil {

enum class GateKind {
    Hadamard,
    Phase,           // diag(1, e^{i angle})
    ControlledPhase, // diag(1, 1, 1, e^{i angle})
    CNOT,
    RotY,            // [[cos a/2, -sin a/2], [sin a/2, cos a/2]]
    PauliZ,
    Swap,
};

inline std::string_view gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::Hadamard:
        return "H";
    case GateKind::Phase:
        return "P";
    case GateKind::ControlledPhase:
        return "CP";
    case GateKind::CNOT:
        return "CX";
    case GateKind::RotY:
        return "RY";
    case GateKind::PauliZ:
        return "Z";
    case GateKind::Swap:
        return "SWAP";
    }
    return "?";
}

inline std::optional<GateKind> parse_gate_name(std::string_view name) {
    for (auto kind : {GateKind::Hadamard, GateKind::Phase,
                      GateKind::ControlledPhase, GateKind::CNOT, GateKind::RotY,
                      GateKind::PauliZ, GateKind::Swap}) {
        if (gate_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

inline bool is_two_qubit(GateKind kind) {
    return kind == GateKind::ControlledPhase || kind == GateKind::CNOT ||
           kind == GateKind::Swap;
}

inline bool has_angle(GateKind kind) {
    return kind == GateKind::Phase || kind == GateKind::ControlledPhase ||
           kind == GateKind::RotY;
}

/// A single gate. For Swap, `control` holds the second qubit.
struct Gate {
    GateKind kind = GateKind::Hadamard;
    int target = 0;
    std::optional<int> control;
    double angle = 0.0;

    static Gate h(int q) { return {GateKind::Hadamard, q, std::nullopt, 0.0}; }
    static Gate phase(int q, double a) { return {GateKind::Phase, q, std::nullopt, a}; }
    static Gate cphase(int c, int t, double a) { return {GateKind::ControlledPhase, t, c, a}; }
    static Gate cnot(int c, int t) { return {GateKind::CNOT, t, c, 0.0}; }
    static Gate ry(int q, double a) { return {GateKind::RotY, q, std::nullopt, a}; }
    static Gate z(int q) { return {GateKind::PauliZ, q, std::nullopt, 0.0}; }
    static Gate swap(int a, int b) { return {GateKind::Swap, a, b, 0.0}; }

    [[nodiscard]] Gate adjoint() const {
        Gate g = *this;
        if (has_angle(kind)) {
            g.angle = -angle;
        }
        return g;
    }

    bool operator==(const Gate &) const = default;
};

inline void validate_gate(const Gate &gate, int num_qubits) {
    const auto in_range = [&](int q) { return q >= 0 && q < num_qubits; };
    if (!in_range(gate.target)) {
        throw std::out_of_range("gate target " + std::to_string(gate.target) +
                                " outside register of " +
                                std::to_string(num_qubits) + " qubits");
    }
    if (is_two_qubit(gate.kind)) {
        if (!gate.control) {
            throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                        " needs a second qubit");
        }
        if (!in_range(*gate.control)) {
            throw std::out_of_range("gate control " +
                                    std::to_string(*gate.control) +
                                    " outside register");
        }
        if (*gate.control == gate.target) {
            throw std::invalid_argument("control equals target");
        }
    } else if (gate.control) {
        throw std::invalid_argument(std::string(gate_name(gate.kind)) +
                                    " takes no control");
    }
    if (!std::isfinite(gate.angle)) {
        throw std::invalid_argument("gate angle must be finite");
    }
}

class Circuit {
  public:
    explicit Circuit(int num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits < 1) {
            throw std::invalid_argument("circuit needs at least one qubit");
        }
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }

    Circuit &append(const Gate &gate) {
        validate_gate(gate, num_qubits_);
        gates_.push_back(gate);
        return *this;
    }

    /// Appends `other`, which may act on a narrower register.
    Circuit &append(const Circuit &other) {
        if (other.num_qubits() > num_qubits_) {
            throw std::invalid_argument("appended circuit is wider than target");
        }
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    [[nodiscard]] Circuit adjoint() const {
        Circuit inv(num_qubits_);
        inv.gates_.reserve(gates_.size());
        for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
            inv.gates_.push_back(it->adjoint());
        }
        return inv;
    }

    [[nodiscard]] Circuit widened(int num_qubits) const {
        if (num_qubits < num_qubits_) {
            throw std::invalid_argument("cannot narrow a circuit");
        }
        Circuit wide(num_qubits);
        wide.gates_ = gates_;
        return wide;
    }

    [[nodiscard]] std::size_t count(GateKind kind) const {
        std::size_t c = 0;
        for (const auto &g : gates_) {
            c += (g.kind == kind) ? 1 : 0;
        }
        return c;
    }

  private:
    int num_qubits_;
    std::vector<Gate> gates_;
};

/**
 * @brief Dense statevector over num_qubits qubits.
 *
 * Gate application walks the 2^{d-1} (or 2^{d-2}) independent amplitude
 * groups of each gate.
 */
class StateVector {
  public:
    explicit StateVector(int num_qubits)
        : num_qubits_(num_qubits),
          amplitudes_(ComplexVector::Zero(Eigen::Index{1} << num_qubits)) {
        amplitudes_[0] = 1.0;
    }

    StateVector(int num_qubits, ComplexVector amplitudes)
        : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != (Eigen::Index{1} << num_qubits)) {
            throw std::invalid_argument("amplitude count must be 2^num_qubits");
        }
    }

    /// |0>_ancilla (x) system, with the ancilla as qubit `system.size()` bits up.
    static StateVector with_ancilla(const ComplexVector &system) {
        const auto n = static_cast<int>(std::log2(static_cast<double>(system.size())));
        if ((Eigen::Index{1} << n) != system.size()) {
            throw std::invalid_argument("system size must be a power of two");
        }
        ComplexVector amps = ComplexVector::Zero(system.size() * 2);
        amps.head(system.size()) = system;
        return StateVector(n + 1, std::move(amps));
    }

    [[nodiscard]] int num_qubits() const { return num_qubits_; }
    [[nodiscard]] const ComplexVector &amplitudes() const { return amplitudes_; }
    ComplexVector &amplitudes() { return amplitudes_; }
    [[nodiscard]] double norm() const { return amplitudes_.squaredNorm(); }

    void apply(const Gate &gate) {
        validate_gate(gate, num_qubits_);
        const std::uint64_t dim = std::uint64_t{1} << num_qubits_;
        const std::uint64_t tbit = std::uint64_t{1} << gate.target;
        auto *a = amplitudes_.data();
        switch (gate.kind) {
        case GateKind::Hadamard: {
            const double s = std::numbers::sqrt2 / 2.0;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & tbit) continue;
                const Complex a0 = a[i], a1 = a[i | tbit];
                a[i] = s * (a0 + a1);
                a[i | tbit] = s * (a0 - a1);
            }
            break;
        }
        case GateKind::Phase: {
            const Complex ph = std::polar(1.0, gate.angle);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & tbit) a[i] *= ph;
            }
            break;
        }
        case GateKind::ControlledPhase: {
            const std::uint64_t mask = tbit | (std::uint64_t{1} << *gate.control);
            const Complex ph = std::polar(1.0, gate.angle);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & mask) == mask) a[i] *= ph;
            }
            break;
        }
        case GateKind::CNOT: {
            const std::uint64_t cbit = std::uint64_t{1} << *gate.control;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & cbit) && !(i & tbit)) std::swap(a[i], a[i | tbit]);
            }
            break;
        }
        case GateKind::RotY: {
            const double c = std::cos(gate.angle / 2.0);
            const double s = std::sin(gate.angle / 2.0);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & tbit) continue;
                const Complex a0 = a[i], a1 = a[i | tbit];
                a[i] = c * a0 - s * a1;
                a[i | tbit] = s * a0 + c * a1;
            }
            break;
        }
        case GateKind::PauliZ: {
            for (std::uint64_t i = 0; i < dim; ++i) {
                if (i & tbit) a[i] = -a[i];
            }
            break;
        }
        case GateKind::Swap: {
            const std::uint64_t obit = std::uint64_t{1} << *gate.control;
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & tbit) && !(i & obit)) std::swap(a[i], a[(i ^ tbit) | obit]);
            }
            break;
        }
        }
    }

    void apply(const Circuit &circuit) {
        if (circuit.num_qubits() > num_qubits_) {
            throw std::invalid_argument("circuit wider than statevector");
        }
        for (const auto &g : circuit.gates()) {
            apply(g);
        }
    }

  private:
    int num_qubits_;
    ComplexVector amplitudes_;
};

inline StateVector apply_gate(StateVector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

/**
 * @brief Textbook QFT, |x> -> 2^{-n/2} sum_k e^{2 pi i x k / 2^n} |k>, with the
 * final bit-reversal swaps included.
 */
inline Circuit qft_circuit(int n) {
    if (n < 1) {
        throw std::invalid_argument("QFT needs at least one qubit");
    }
    Circuit c(n);
    for (int j = n - 1; j >= 0; --j) {
        c.append(Gate::h(j));
        for (int k = j - 1; k >= 0; --k) {
            c.append(Gate::cphase(k, j, std::numbers::pi / std::ldexp(1.0, j - k)));
        }
    }
    for (int q = 0; q < n / 2; ++q) {
        c.append(Gate::swap(q, n - 1 - q));
    }
    return c;
}

inline Circuit inverse_qft_circuit(int n) { return qft_circuit(n).adjoint(); }

/// (-1)^j on grid index j: a Z on the parity bit, system qubit 0.
inline Circuit momentum_ramp_circuit(int n) {
    Circuit c(n);
    c.append(Gate::z(0));
    return c;
}

/**
 * @brief Diagonal e^{-i c (k - 2^{n-1})^2 dt / 2m} on the momentum register,
 * c = (2 pi / L)^2 (1 - 2^{-n})^2, up to the dropped global phase
 * e^{-i c 2^{2n-2} dt / 2m}.
 *
 * Expanding (k - 2^{n-1})^2 in the bits k_j leaves one phase per qubit and one
 * controlled phase per qubit pair.
 */
inline Circuit kinetic_phase_circuit(const Grid &grid, double dt) {
    const int n = grid.qubits();
    const double band = 2.0 * std::numbers::pi / grid.length() *
                        (1.0 - std::ldexp(1.0, -n));
    const double scale = band * band * dt / (2.0 * grid.mass());
    Circuit c(n);
    for (int j = 0; j < n; ++j) {
        const double coeff = std::ldexp(1.0, 2 * j) - std::ldexp(1.0, n + j);
        c.append(Gate::phase(j, -scale * coeff));
    }
    for (int j = 0; j < n; ++j) {
        for (int k = j + 1; k < n; ++k) {
            c.append(Gate::cphase(j, k, -scale * std::ldexp(1.0, k + j + 1)));
        }
    }
    return c;
}

/// ramp, QFT, kinetic phases, QFT^dag, ramp: e^{-iK dt} up to a global phase.
inline Circuit kinetic_block_circuit(const Grid &grid, double dt) {
    const int n = grid.qubits();
    Circuit c(n);
    c.append(momentum_ramp_circuit(n));
    c.append(qft_circuit(n));
    c.append(kinetic_phase_circuit(grid, dt));
    c.append(inverse_qft_circuit(n));
    c.append(momentum_ramp_circuit(n));
    return c;
}

/// Dropped global phase of kinetic_phase_circuit.
inline Complex kinetic_global_phase(const Grid &grid, double dt) {
    const int n = grid.qubits();
    const double band = 2.0 * std::numbers::pi / grid.length() *
                        (1.0 - std::ldexp(1.0, -n));
    return std::polar(1.0, -band * band * std::ldexp(1.0, 2 * n - 2) * dt /
                               (2.0 * grid.mass()));
}

/// Diagonal operator on the system qubits, applied identically in both
/// ancilla branches.
struct DiagonalOperator {
    ComplexVector diagonal;

    void apply(StateVector &state) const {
        const auto n = diagonal.size();
        auto &a = state.amplitudes();
        if (n == 0 || a.size() % n != 0) {
            throw std::invalid_argument("diagonal does not fit the register");
        }
        for (Eigen::Index i = 0; i < a.size(); ++i) {
            a[i] *= diagonal[i % n];
        }
    }
};

inline DiagonalOperator potential_phase_block(const Grid &grid,
                                              const PotentialField &V,
                                              double dt) {
    if (V.size() != grid.size()) {
        throw std::invalid_argument("potential does not match grid");
    }
    DiagonalOperator op{ComplexVector(V.values.size())};
    for (Eigen::Index i = 0; i < V.values.size(); ++i) {
        op.diagonal[i] = std::polar(1.0, -V.values[i] * dt);
    }
    return op;
}

inline constexpr int kMaxUnitaryQubits = 8;

/// Dense matrix of the circuit; column j is the image of |j>.
inline Eigen::MatrixXcd circuit_unitary(const Circuit &circuit) {
    const int d = circuit.num_qubits();
    if (d > kMaxUnitaryQubits) {
        throw std::invalid_argument("circuit_unitary limited to " +
                                    std::to_string(kMaxUnitaryQubits) + " qubits");
    }
    const Eigen::Index dim = Eigen::Index{1} << d;
    Eigen::MatrixXcd U(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        ComplexVector e = ComplexVector::Zero(dim);
        e[j] = 1.0;
        StateVector s(d, std::move(e));
        s.apply(circuit);
        U.col(j) = s.amplitudes();
    }
    return U;
}

/// One gate per line: `GATE kind target [control] [angle]`.
inline void dump_circuit(const Circuit &circuit, std::ostream &out) {
    out << "QUBITS " << circuit.num_qubits() << '\n';
    const auto old_precision = out.precision();
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto &g : circuit.gates()) {
        out << "GATE " << gate_name(g.kind) << ' ' << g.target;
        if (g.control) out << ' ' << *g.control;
        if (has_angle(g.kind)) out << ' ' << g.angle;
        out << '\n';
    }
    out.precision(old_precision);
}

inline Circuit parse_circuit(std::istream &in) {
    std::string line;
    std::optional<Circuit> circuit;
    int line_no = 0;
    const auto fail = [&](const std::string &why) {
        throw std::invalid_argument("circuit dump line " +
                                    std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        if (head == "QUBITS") {
            int q = 0;
            if (!(ls >> q)) fail("bad qubit count");
            circuit.emplace(q);
            continue;
        }
        if (head != "GATE") fail("expected GATE or QUBITS");
        if (!circuit) fail("GATE before QUBITS");
        std::string name;
        ls >> name;
        const auto kind = parse_gate_name(name);
        if (!kind) fail("unknown gate '" + name + "'");
        Gate g{*kind, 0, std::nullopt, 0.0};
        if (!(ls >> g.target)) fail("missing target");
        if (is_two_qubit(*kind)) {
            int c = 0;
            if (!(ls >> c)) fail("missing control");
            g.control = c;
        }
        if (has_angle(*kind) && !(ls >> g.angle)) fail("missing angle");
        circuit->append(g);
    }
    if (!circuit) {
        throw std::invalid_argument("circuit dump has no QUBITS header");
    }
    return *circuit;
}

} // namespace capdil
