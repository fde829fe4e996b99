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
 * Reference split-operator propagation of i d/dt psi = (K + V - iW) psi on the
 * mesh, plus dense operators for small grids.
 *
 * One step applies e^{-W dt} e^{-iV dt} e^{-iK dt}, kinetic factor first. The
 * kinetic factor is taken in momentum space after multiplying psi_j by (-1)^j,
 * which centres the FFT band on zero momentum; the quantum circuit uses the
 * same ramp so both sides act with the identical operator.
 */

#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/MatrixFunctions>

#include "capdil/grid.hpp"

namespace capdil {

using Matrix = Eigen::MatrixXcd;

inline constexpr int kMaxDenseQubits = 8;

struct Snapshot {
    double time = 0.0;
    ComplexVector amplitudes;
    double physical_norm = 1.0;
};

/// Snapshots at t = r dt for r = 0..n_steps.
struct ClassicalTrajectory {
    double dt = 0.0;
    std::vector<Snapshot> snapshots;
};

namespace detail {

inline void check_length(const Grid &grid, Eigen::Index length,
                         const char *what) {
    if (static_cast<std::size_t>(length) != grid.size()) {
        throw std::invalid_argument(std::string(what) + " has " +
                                    std::to_string(length) +
                                    " entries, grid has " +
                                    std::to_string(grid.size()));
    }
}

inline void apply_ramp(ComplexVector &psi) {
    for (Eigen::Index j = 1; j < psi.size(); j += 2) {
        psi[j] = -psi[j];
    }
}

inline Eigen::VectorXd ramp_diagonal(std::size_t size) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(size));
    for (Eigen::Index j = 0; j < r.size(); ++j) {
        r[j] = (j % 2 == 0) ? 1.0 : -1.0;
    }
    return r;
}

/// Unitary DFT with the FFT's sign, F_{kj} = N^{-1/2} e^{-2 pi i jk / N}.
inline Matrix fft_matrix(std::size_t size) {
    const auto N = static_cast<Eigen::Index>(size);
    Matrix F(N, N);
    const double scale = 1.0 / std::sqrt(static_cast<double>(N));
    for (Eigen::Index k = 0; k < N; ++k) {
        for (Eigen::Index j = 0; j < N; ++j) {
            const auto phase = -2.0 * std::numbers::pi *
                               static_cast<double>((j * k) % N) /
                               static_cast<double>(N);
            F(k, j) = std::polar(scale, phase);
        }
    }
    return F;
}

inline void check_dense(const Grid &grid) {
    if (grid.qubits() > kMaxDenseQubits) {
        throw std::invalid_argument("dense operators limited to " +
                                    std::to_string(kMaxDenseQubits) +
                                    " qubits, grid has " +
                                    std::to_string(grid.qubits()));
    }
}

/// Builds R F^dag diag(f(p_k)) F R for the ramped FFT basis.
template <typename Fn>
Matrix momentum_diagonal_operator(const Grid &grid, Fn &&f) {
    const Matrix F = fft_matrix(grid.size());
    const Eigen::VectorXd ramp = ramp_diagonal(grid.size());
    ComplexVector diag(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t k = 0; k < grid.size(); ++k) {
        diag[static_cast<Eigen::Index>(k)] = f(grid.momentum(k));
    }
    Matrix inner = F.adjoint() * diag.asDiagonal() * F;
    return ramp.asDiagonal() * inner * ramp.asDiagonal();
}

} // namespace detail

/// e^{-iK dt} psi through FFT, momentum-space phases and inverse FFT.
inline ComplexVector kinetic_substep(const ComplexVector &psi, const Grid &grid,
                                     double dt) {
    detail::check_length(grid, psi.size(), "wavefunction");
    ComplexVector work = psi;
    detail::apply_ramp(work);
    Eigen::FFT<double> fft;
    ComplexVector spectrum;
    fft.fwd(spectrum, work);
    const double inv_2m = 1.0 / (2.0 * grid.mass());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double p = grid.momentum(k);
        spectrum[static_cast<Eigen::Index>(k)] *=
            std::polar(1.0, -p * p * inv_2m * dt);
    }
    fft.inv(work, spectrum);
    detail::apply_ramp(work);
    return work;
}

/**
 * @brief One first-order step e^{-W dt} e^{-iV dt} e^{-iK dt}.
 *
 * The result is not renormalised; its physical_norm is the squared norm of the
 * returned amplitudes.
 */
inline WaveFunction split_step(const WaveFunction &wf, const Grid &grid,
                               const PotentialField &V, const PotentialField &W,
                               double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("time step must be positive");
    }
    detail::check_length(grid, V.values.size(), "real potential");
    detail::check_length(grid, W.values.size(), "absorbing potential");
    ComplexVector psi = kinetic_substep(wf.amplitudes, grid, dt);
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
        psi[i] *= std::polar(std::exp(-W.values[i] * dt), -V.values[i] * dt);
    }
    const double n = norm(psi);
    return WaveFunction{std::move(psi), n};
}

inline ClassicalTrajectory evolve_classical(const Grid &grid,
                                            const PotentialField &V,
                                            const PotentialField &W,
                                            const WaveFunction &wf0, double dt,
                                            int n_steps) {
    if (n_steps < 0) {
        throw std::invalid_argument("step count must be non-negative");
    }
    detail::check_length(grid, wf0.amplitudes.size(), "initial wavefunction");
    ClassicalTrajectory trajectory;
    trajectory.dt = dt;
    trajectory.snapshots.reserve(static_cast<std::size_t>(n_steps) + 1);
    trajectory.snapshots.push_back({0.0, wf0.amplitudes, wf0.physical_norm});
    WaveFunction wf = wf0;
    for (int r = 1; r <= n_steps; ++r) {
        wf = split_step(wf, grid, V, W, dt);
        trajectory.snapshots.push_back(
            {static_cast<double>(r) * dt, wf.amplitudes, wf.physical_norm});
    }
    return trajectory;
}

/// Dense kinetic operator K = R F^dag diag(p_k^2 / 2m) F R.
inline Matrix kinetic_operator(const Grid &grid) {
    detail::check_dense(grid);
    const double inv_2m = 1.0 / (2.0 * grid.mass());
    return detail::momentum_diagonal_operator(
        grid, [&](double p) { return Complex(p * p * inv_2m, 0.0); });
}

/// Dense non-hermitian Hamiltonian K + V - iW.
inline Matrix effective_hamiltonian(const Grid &grid, const PotentialField &V,
                                    const PotentialField &W) {
    detail::check_length(grid, V.values.size(), "real potential");
    detail::check_length(grid, W.values.size(), "absorbing potential");
    Matrix H = kinetic_operator(grid);
    for (Eigen::Index i = 0; i < H.rows(); ++i) {
        H(i, i) += Complex(V.values[i], -W.values[i]);
    }
    return H;
}

/// Exact e^{-i (K + V - iW) dt} by Pade scaling-and-squaring.
inline Matrix dense_propagator(const Grid &grid, const PotentialField &V,
                               const PotentialField &W, double dt) {
    const Matrix H = effective_hamiltonian(grid, V, W);
    const Matrix A = Complex(0.0, -dt) * H;
    return A.exp();
}

/// Dense product of the three split factors, e^{-W dt} e^{-iV dt} e^{-iK dt}.
inline Matrix split_propagator(const Grid &grid, const PotentialField &V,
                               const PotentialField &W, double dt) {
    detail::check_dense(grid);
    detail::check_length(grid, V.values.size(), "real potential");
    detail::check_length(grid, W.values.size(), "absorbing potential");
    const double inv_2m = 1.0 / (2.0 * grid.mass());
    Matrix U = detail::momentum_diagonal_operator(grid, [&](double p) {
        return std::polar(1.0, -p * p * inv_2m * dt);
    });
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        U.row(i) *= std::polar(std::exp(-W.values[i] * dt), -V.values[i] * dt);
    }
    return U;
}

/// ||K|| = pi^2 2^{2n-1} / (L^2 m), evaluated at the band edge 2^{n-1} 2pi/L.
inline double kinetic_spectral_norm(const Grid &grid) {
    const double L = grid.length();
    return std::numbers::pi * std::numbers::pi *
           std::ldexp(1.0, 2 * grid.qubits() - 1) / (L * L * grid.mass());
}

/// Upper bound dt^2 ||K|| (||V|| + ||W||) on the one-step splitting error.
inline double trotter_error_bound(double dt, double K_norm, double V_norm,
                                  double W_norm) {
    if (K_norm < 0.0 || V_norm < 0.0 || W_norm < 0.0) {
        throw std::invalid_argument("operator norms must be non-negative");
    }
    return dt * dt * K_norm * (V_norm + W_norm);
}

} // namespace capdil
