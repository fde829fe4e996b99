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
 * CNOT-count table, Trotter-bound audit and observables on post-selected
 * states.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "capdil/circuit.hpp"
#include "capdil/classical_solver.hpp"
#include "capdil/dilation.hpp"
#include "capdil/evolution.hpp"
#include "capdil/grid.hpp"

namespace capdil {

/// CNOT counts for a (n+1)-qubit dilation matrix under several synthesis
/// routes.
struct ComplexityRow {
    int n = 0;
    std::int64_t csd = 0;
    std::int64_t qsd = 0;
    std::int64_t svd = 0;
    std::int64_t dilation = 0;

    [[nodiscard]] int d() const { return n + 1; }
    bool operator==(const ComplexityRow &) const = default;
};

inline ComplexityRow complexity_row(int n) {
    if (n < 1 || n > 30) {
        throw std::invalid_argument("system qubit count must be in [1, 30]");
    }
    const int d = n + 1;
    const std::int64_t four = std::int64_t{1} << (2 * d);
    const std::int64_t two = std::int64_t{1} << d;
    ComplexityRow row;
    row.n = n;
    // Optimised CSD: (4^d - 2^d) / 2 - 2.
    row.csd = (four - two) / 2 - 2;
    // Optimised QSD: (23/48) 4^d - (3/2) 2^d + 4/3, exact in integers.
    const std::int64_t qsd48 = 23 * four - 72 * two + 64;
    if (qsd48 % 48 != 0) {
        throw std::logic_error("QSD count not integral at d = " + std::to_string(d));
    }
    row.qsd = qsd48 / 48;
    row.svd = two - 2;
    row.dilation = std::int64_t{1} << n;
    return row;
}

inline std::vector<ComplexityRow> gate_count_table(std::span<const int> n_values) {
    std::vector<ComplexityRow> rows;
    rows.reserve(n_values.size());
    for (int n : n_values) {
        rows.push_back(complexity_row(n));
    }
    return rows;
}

/// CNOTs in the synthesised dilation circuit for a non-trivial CAP on n qubits.
inline std::size_t emitted_dilation_cnots(int n) {
    const Grid grid(-5.0, 5.0, n);
    const auto W = cap_potential(grid, 0.4, 1.5, grid.size() / 2);
    return dilation_circuit(W, 1.0, Prescription::absorbing).count(GateKind::CNOT);
}

inline double spectral_norm(const Eigen::MatrixXcd &m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
}

struct BoundRow {
    double dt = 0.0;
    double measured_error = 0.0;
    /// (dt^2 / 2) ||[K, V - iW]||
    double commutator_bound = 0.0;
    /// dt^2 ||K|| (||V|| + ||W||)
    double product_bound = 0.0;
    bool pass = false;
};

struct BoundReport {
    std::vector<BoundRow> rows;

    [[nodiscard]] bool all_pass() const {
        for (const auto &r : rows) {
            if (!r.pass) return false;
        }
        return !rows.empty();
    }
};

inline constexpr int kMaxBoundQubits = 5;

/**
 * @brief Measures ||e^{-i(K+V-iW)dt} - e^{-W dt} e^{-iV dt} e^{-iK dt}|| with
 * dense spectral norms and compares against both bounds.
 *
 * `pass` holds the product bound. The commutator estimate is leading order
 * only and is reported, not enforced.
 */
inline BoundReport verify_trotter_bound(const Grid &grid, const PotentialField &V,
                                        const PotentialField &W,
                                        std::span<const double> dts) {
    if (grid.qubits() > kMaxBoundQubits) {
        throw std::invalid_argument("bound check limited to " +
                                    std::to_string(kMaxBoundQubits) + " qubits");
    }
    const Eigen::MatrixXcd K = kinetic_operator(grid);
    Eigen::MatrixXcd B = Eigen::MatrixXcd::Zero(K.rows(), K.cols());
    for (Eigen::Index i = 0; i < B.rows(); ++i) {
        B(i, i) = Complex(V.values[i], -W.values[i]);
    }
    const double commutator = spectral_norm(K * B - B * K);
    const double k_norm = kinetic_spectral_norm(grid);
    BoundReport report;
    for (double dt : dts) {
        BoundRow row;
        row.dt = dt;
        row.measured_error = spectral_norm(dense_propagator(grid, V, W, dt) -
                                           split_propagator(grid, V, W, dt));
        row.commutator_bound = 0.5 * dt * dt * commutator;
        row.product_bound = trotter_error_bound(dt, k_norm, V.max_abs(), W.max_abs());
        row.pass = row.measured_error <= row.product_bound + 1e-10;
        report.rows.push_back(row);
    }
    return report;
}

/// error(dt_{i+1}) / error(dt_i) for consecutive rows.
inline std::vector<double> error_ratios(const BoundReport &report) {
    std::vector<double> ratios;
    for (std::size_t i = 1; i < report.rows.size(); ++i) {
        ratios.push_back(report.rows[i].measured_error /
                         report.rows[i - 1].measured_error);
    }
    return ratios;
}

/// Least-squares slope of log(error) against log(dt).
inline double convergence_order(std::span<const double> dts,
                                std::span<const double> errors) {
    if (dts.size() != errors.size() || dts.size() < 2) {
        throw std::invalid_argument("need matching series of length >= 2");
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i) {
        const double x = std::log(dts[i]);
        const double y = std::log(errors[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// max_i |a_i - e^{i phi} b_i| with phi aligning b onto a.
inline double max_deviation_up_to_phase(const ComplexVector &a,
                                        const ComplexVector &b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("vectors differ in length");
    }
    const Complex overlap = b.dot(a);
    const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap)
                                                  : Complex(1.0, 0.0);
    return (a - phase * b).cwiseAbs().maxCoeff();
}

/// Diagonal observable in the position basis.
struct DiagonalObservable {
    RealVector values;

    /// Rejects anything with off-diagonal entries or a non-real diagonal.
    static DiagonalObservable from_matrix(const Eigen::MatrixXcd &m,
                                          double tol = 1e-14) {
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("observable must be square");
        }
        DiagonalObservable obs{RealVector(m.rows())};
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            for (Eigen::Index j = 0; j < m.cols(); ++j) {
                if (i != j && std::abs(m(i, j)) > tol) {
                    throw std::invalid_argument(
                        "only position-diagonal observables are supported");
                }
            }
            if (std::abs(m(i, i).imag()) > tol) {
                throw std::invalid_argument("observable must be hermitian");
            }
            obs.values[i] = m(i, i).real();
        }
        return obs;
    }
};

/// P_s(r dt) <O>_dil on the exact post-selected state; step defaults to the last.
inline double observable_expectation(const RunResult &result,
                                     const DiagonalObservable &O,
                                     std::optional<int> step = std::nullopt) {
    const int r = step.value_or(result.steps());
    if (r < 0 || r > result.steps()) {
        throw std::out_of_range("step outside the recorded trajectory");
    }
    const auto &psi = result.snapshots[static_cast<std::size_t>(r)];
    if (psi.size() != O.values.size()) {
        throw std::invalid_argument("observable does not match grid");
    }
    double acc = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        acc += O.values[i] * std::norm(psi[i]);
    }
    return result.cumulative_success[static_cast<std::size_t>(r)] * acc;
}

/// Empirical success times the readout-frequency average of O.
inline double observable_expectation(const SampledResult &result,
                                     const DiagonalObservable &O) {
    const auto f = result.frequencies();
    if (f.size() != static_cast<std::size_t>(O.values.size())) {
        throw std::invalid_argument("observable does not match grid");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        acc += O.values[static_cast<Eigen::Index>(i)] * f[i];
    }
    return result.empirical_success * acc;
}

} // namespace capdil
