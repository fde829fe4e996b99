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
 * Uniform 1D mesh, initial wavepackets and the two potential families used
 * by both solvers: the Kosloff cosh^-2 absorbing potential and a Gaussian
 * well.
 *
 * Units: hbar = 1 and hbar^2 / 2m = 1, hence the default mass of 1/2.
 */

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace capdil {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

inline constexpr double kDefaultMass = 0.5;
inline constexpr int kMaxQubits = 12;

/**
 * @brief Uniform mesh of 2^n points spanning [x_min, x_max], both ends
 * included.
 *
 * Grid index i maps to the register state |i> in standard binary, so the
 * point count is always a power of two.
 */
class Grid {
  public:
    Grid(double x_min, double x_max, int n, double mass = kDefaultMass)
        : x_min_(x_min), x_max_(x_max), n_(n), mass_(mass) {
        if (!(x_max > x_min)) {
            throw std::invalid_argument("grid extent must be positive");
        }
        if (n < 1 || n > kMaxQubits) {
            throw std::invalid_argument("qubit count must be in [1, " +
                                        std::to_string(kMaxQubits) + "], got " +
                                        std::to_string(n));
        }
        if (!(mass > 0.0)) {
            throw std::invalid_argument("mass must be positive");
        }
    }

    [[nodiscard]] double x_min() const { return x_min_; }
    [[nodiscard]] double x_max() const { return x_max_; }
    [[nodiscard]] int qubits() const { return n_; }
    [[nodiscard]] double mass() const { return mass_; }
    [[nodiscard]] std::size_t size() const { return std::size_t{1} << n_; }
    [[nodiscard]] double length() const { return x_max_ - x_min_; }
    [[nodiscard]] double dx() const {
        return length() / static_cast<double>(size() - 1);
    }

    [[nodiscard]] double x(std::size_t i) const {
        return x_min_ + static_cast<double>(i) * dx();
    }

    /// Momentum carried by bin k once the position ramp has centred the band:
    /// p_k = 2 pi (k - 2^{n-1}) / (2^n dx).
    [[nodiscard]] double momentum(std::size_t k) const {
        const auto half = static_cast<double>(size() / 2);
        return 2.0 * std::numbers::pi * (static_cast<double>(k) - half) /
               (static_cast<double>(size()) * dx());
    }

    [[nodiscard]] RealVector positions() const {
        RealVector xs(static_cast<Eigen::Index>(size()));
        for (std::size_t i = 0; i < size(); ++i) {
            xs[static_cast<Eigen::Index>(i)] = x(i);
        }
        return xs;
    }

    [[nodiscard]] RealVector momenta() const {
        RealVector ps(static_cast<Eigen::Index>(size()));
        for (std::size_t k = 0; k < size(); ++k) {
            ps[static_cast<Eigen::Index>(k)] = momentum(k);
        }
        return ps;
    }

    [[nodiscard]] double midpoint() const { return 0.5 * (x_min_ + x_max_); }

  private:
    double x_min_;
    double x_max_;
    int n_;
    double mass_;
};

inline Grid make_grid(double x_min, double x_max, int n,
                      double mass = kDefaultMass) {
    return Grid(x_min, x_max, n, mass);
}

/// Amplitudes on the grid plus the norm that survived absorption so far.
struct WaveFunction {
    ComplexVector amplitudes;
    double physical_norm = 1.0;
};

enum class PotentialKind { real_potential, absorbing_potential };

/// Real diagonal potential sampled on the grid. Used for both V and W.
struct PotentialField {
    RealVector values;
    PotentialKind kind = PotentialKind::real_potential;

    [[nodiscard]] std::size_t size() const {
        return static_cast<std::size_t>(values.size());
    }
    /// Spectral norm of a diagonal operator.
    [[nodiscard]] double max_abs() const {
        return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
    }
};

inline double norm(const ComplexVector &amplitudes) {
    return amplitudes.squaredNorm();
}

inline double norm(const WaveFunction &wf) { return norm(wf.amplitudes); }

/**
 * @brief Gaussian packet exp[-(x - x0)^2 / 2 sigma^2 + i m v (x - x0)] sampled
 * on the mesh.
 *
 * The continuum prefactor does not normalise a coarse mesh, so the samples are
 * rescaled to unit discrete norm instead.
 */
inline WaveFunction gaussian_packet(const Grid &grid, double x0, double sigma,
                                    double v) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("packet width must be positive");
    }
    if (x0 < grid.x_min() || x0 > grid.x_max()) {
        throw std::invalid_argument("packet centre lies outside the box");
    }
    const double k0 = grid.mass() * v;
    ComplexVector psi(static_cast<Eigen::Index>(grid.size()));
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double d = grid.x(i) - x0;
        psi[static_cast<Eigen::Index>(i)] =
            std::exp(-d * d / (2.0 * sigma * sigma)) *
            std::polar(1.0, k0 * d);
    }
    psi /= psi.norm();
    return WaveFunction{std::move(psi), 1.0};
}

inline PotentialField zero_potential(const Grid &grid,
                                     PotentialKind kind =
                                         PotentialKind::real_potential) {
    return PotentialField{RealVector::Zero(static_cast<Eigen::Index>(grid.size())),
                          kind};
}

/**
 * @brief Kosloff absorbing potential U0 / cosh^2(alpha * distance-to-edge) on
 * the k outermost points of each edge, zero in between.
 *
 * Distances are counted in mesh steps from the nearest edge point, so the two
 * branches mirror each other exactly.
 */
inline PotentialField cap_potential(const Grid &grid, double U0, double alpha,
                                    std::size_t k) {
    if (U0 < 0.0) {
        throw std::invalid_argument("CAP strength must be non-negative");
    }
    if (!(alpha > 0.0)) {
        throw std::invalid_argument("CAP steepness must be positive");
    }
    const std::size_t N = grid.size();
    if (k > N / 2) {
        throw std::invalid_argument("CAP width " + std::to_string(k) +
                                    " overlaps: at most " +
                                    std::to_string(N / 2) + " points per edge");
    }
    PotentialField W{RealVector::Zero(static_cast<Eigen::Index>(N)),
                     PotentialKind::absorbing_potential};
    const auto profile = [&](std::size_t steps) {
        const double c = std::cosh(alpha * grid.dx() * static_cast<double>(steps));
        return U0 / (c * c);
    };
    for (std::size_t i = 0; i < k; ++i) {
        W.values[static_cast<Eigen::Index>(i)] = profile(i);
        W.values[static_cast<Eigen::Index>(N - 1 - i)] = profile(i);
    }
    return W;
}

/// Gaussian well V0 exp(-x^2 / 2 sigma_V^2); confining for V0 < 0.
inline PotentialField gaussian_well(const Grid &grid, double V0,
                                    double sigma_V) {
    if (!(sigma_V > 0.0)) {
        throw std::invalid_argument("well width must be positive");
    }
    PotentialField V{RealVector(static_cast<Eigen::Index>(grid.size())),
                     PotentialKind::real_potential};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid.x(i);
        V.values[static_cast<Eigen::Index>(i)] =
            V0 * std::exp(-x * x / (2.0 * sigma_V * sigma_V));
    }
    return V;
}

} // namespace capdil
