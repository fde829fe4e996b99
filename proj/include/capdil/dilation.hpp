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
 * One-ancilla dilation of the absorption factor e^{-W dt}.
 *
 * For a diagonal contraction M = diag(cos theta_i) the dilation
 *
 *     D = [[C, S], [-S, C]],   C = diag(cos theta_i), S = diag(sin theta_i)
 *
 * (row/column blocks indexed by the ancilla) is a uniformly controlled
 * rotation of the ancilla. It is synthesised with 2^n RY and 2^n CNOT gates
 * using a Gray-code ladder.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "capdil/circuit.hpp"
#include "capdil/grid.hpp"

namespace capdil {

/// Which contraction the dilation realises in its ancilla-0 block.
enum class Prescription {
    /// M = e^{-W dt}; success probability tracks the surviving norm.
    absorbing,
    /// M = e^{-W dt} / sqrt(1 + e^{-2W dt}); success probability <= 1/2.
    turro,
};

/// Per-point rotation angles, cos theta_i = M_ii, theta_i in [0, pi/2].
struct DilationAngles {
    std::vector<double> theta;
};

struct MultiplexedRotation {
    std::vector<double> alpha;
    Circuit circuit;
};

namespace detail {

inline void check_absorbing(const PotentialField &W) {
    for (Eigen::Index i = 0; i < W.values.size(); ++i) {
        if (W.values[i] < 0.0 || !std::isfinite(W.values[i])) {
            throw std::invalid_argument("absorbing potential must be finite and "
                                        "non-negative, entry " +
                                        std::to_string(i) + " is " +
                                        std::to_string(W.values[i]));
        }
    }
}

inline int log2_exact(std::size_t size, const char *what) {
    if (size == 0 || !std::has_single_bit(size)) {
        throw std::invalid_argument(std::string(what) + " length " +
                                    std::to_string(size) +
                                    " is not a power of two");
    }
    return std::countr_zero(size);
}

inline std::size_t gray(std::size_t i) { return i ^ (i >> 1); }

/// Diagonal of the contraction M for the given prescription.
inline RealVector contraction_diagonal(const PotentialField &W, double dt,
                                       Prescription prescription) {
    check_absorbing(W);
    if (!(dt > 0.0)) {
        throw std::invalid_argument("time step must be positive");
    }
    RealVector m(W.values.size());
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const double e = std::exp(-W.values[i] * dt);
        m[i] = prescription == Prescription::absorbing
                   ? e
                   : e / std::sqrt(1.0 + e * e);
    }
    return m;
}

inline DilationAngles angles_from_contraction(const RealVector &m) {
    DilationAngles angles;
    angles.theta.resize(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        angles.theta[static_cast<std::size_t>(i)] =
            std::acos(std::clamp(m[i], 0.0, 1.0));
    }
    return angles;
}

/// [[M, S], [s_lower * S, s_corner * M]] with S = sqrt(1 - M^2).
inline Eigen::MatrixXcd block_dilation(const RealVector &m, double s_lower,
                                       double s_corner) {
    const Eigen::Index N = m.size();
    Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(2 * N, 2 * N);
    for (Eigen::Index i = 0; i < N; ++i) {
        const double s = std::sqrt(std::max(0.0, 1.0 - m[i] * m[i]));
        U(i, i) = m[i];
        U(i, N + i) = s;
        U(N + i, i) = s_lower * s;
        U(N + i, N + i) = s_corner * m[i];
    }
    return U;
}

} // namespace detail

/// theta_i = arccos(e^{-W_i dt}).
inline DilationAngles dilation_angles(const PotentialField &W, double dt) {
    return detail::angles_from_contraction(
        detail::contraction_diagonal(W, dt, Prescription::absorbing));
}

inline DilationAngles turro_angles(const PotentialField &W, double dt) {
    return detail::angles_from_contraction(
        detail::contraction_diagonal(W, dt, Prescription::turro));
}

/// D = [[C, S], [-S, C]] for M = e^{-W dt}.
inline Eigen::MatrixXcd dilation_unitary(const PotentialField &W, double dt) {
    if (W.size() > (std::size_t{1} << 7)) {
        throw std::invalid_argument("dense dilation limited to 7 system qubits");
    }
    return detail::block_dilation(
        detail::contraction_diagonal(W, dt, Prescription::absorbing), -1.0, 1.0);
}

/// [[M, S], [S, -M]] for M = e^{-W dt} / sqrt(1 + e^{-2W dt}).
inline Eigen::MatrixXcd turro_dilation(const PotentialField &W, double dt) {
    if (W.size() > (std::size_t{1} << 7)) {
        throw std::invalid_argument("dense dilation limited to 7 system qubits");
    }
    return detail::block_dilation(
        detail::contraction_diagonal(W, dt, Prescription::turro), 1.0, -1.0);
}

/**
 * @brief Maps per-branch rotation angles to the RY angles of the Gray-code
 * ladder: alpha_i = 2^{-n} sum_j (-1)^{popcount(j & gray(i))} angles_j.
 */
inline std::vector<double> angle_transform(std::span<const double> angles) {
    const int n = detail::log2_exact(angles.size(), "angle vector");
    const std::size_t N = angles.size();
    const double scale = std::ldexp(1.0, -n);
    std::vector<double> alpha(N, 0.0);
    for (std::size_t i = 0; i < N; ++i) {
        const std::size_t g = detail::gray(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
            acc += (std::popcount(j & g) % 2 == 0) ? angles[j] : -angles[j];
        }
        alpha[i] = scale * acc;
    }
    return alpha;
}

/**
 * @brief Uniformly controlled RY on the ancilla (qubit n) with controls on
 * the n system qubits, realising D for the given angles.
 *
 * Branch i receives RY(-2 theta_i), whose 2x2 block is
 * [[cos theta_i, sin theta_i], [-sin theta_i, cos theta_i]]. Gate t is
 * RY(alpha_t) followed by a CNOT controlled on the bit that flips between
 * gray(t) and gray(t+1); the last CNOT closes the cycle on the top bit.
 */
inline MultiplexedRotation multiplexed_ry_circuit(const DilationAngles &angles) {
    const std::size_t N = angles.theta.size();
    const int n = detail::log2_exact(N, "angle vector");
    if (n < 1) {
        throw std::invalid_argument("need at least one control qubit");
    }
    std::vector<double> branch(N);
    for (std::size_t i = 0; i < N; ++i) {
        branch[i] = -2.0 * angles.theta[i];
    }
    MultiplexedRotation result{angle_transform(branch), Circuit(n + 1)};
    for (std::size_t t = 0; t < N; ++t) {
        const int control = (t + 1 < N) ? std::countr_zero(t + 1) : n - 1;
        result.circuit.append(Gate::ry(n, result.alpha[t]));
        result.circuit.append(Gate::cnot(control, n));
    }
    return result;
}

/// Gate-level dilation for either prescription; Turro's variant adds a Z on
/// the ancilla to flip the sign of the lower block row.
inline Circuit dilation_circuit(const PotentialField &W, double dt,
                                Prescription prescription) {
    const auto angles = detail::angles_from_contraction(
        detail::contraction_diagonal(W, dt, prescription));
    Circuit c = multiplexed_ry_circuit(angles).circuit;
    if (prescription == Prescription::turro) {
        c.append(Gate::z(c.num_qubits() - 1));
    }
    return c;
}

} // namespace capdil
