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
 * Quantum-side time loop: per step, the kinetic block, the potential phases
 * and the dilation circuit act on |0>_anc (x) psi, then the ancilla is
 * post-selected on 0.
 *
 * Two drivers share one exact trajectory:
 *  - run_exact records p_s(r), the cumulative success P_s(r) and the
 *    renormalised system state after each step;
 *  - run_sampled draws finite-shot statistics. Every shot that measured 0 at
 *    all previous steps sits in the same collapsed state, so survivor counts
 *    are Binomial(survivors, p_s(r)) step by step and the final register
 *    readout is multinomial over |psi_i|^2. The literal per-shot simulation
 *    is kept behind RunConfig::literal_sampling for cross-checks.
 */

#pragma once

#include <cmath>
#include <cstdint>
#include <future>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "capdil/circuit.hpp"
#include "capdil/dilation.hpp"
#include "capdil/grid.hpp"

namespace capdil {

inline constexpr double kFullAbsorptionThreshold = 1e-14;

enum class Mode { exact, sampled };

/// Raised when the ancilla-0 branch has (numerically) vanished.
class FullAbsorption : public std::runtime_error {
  public:
    explicit FullAbsorption(double p)
        : std::runtime_error("post-selection probability " + std::to_string(p) +
                             " below threshold; state fully absorbed"),
          probability(p) {}
    double probability;
};

struct RunConfig {
    // Mesh.
    double x_min = -5.0;
    double x_max = 5.0;
    int qubits = 4;
    double mass = kDefaultMass;
    // Initial packet; centre defaults to the box midpoint.
    std::optional<double> x0;
    double sigma = 0.4;
    double boost = 0.0;
    // Absorbing potential; width defaults to a quarter of the points per edge.
    double cap_strength = 0.4;
    double cap_steepness = 1.5;
    std::optional<std::size_t> cap_width;
    // Gaussian well, off when depth is zero.
    double well_depth = 0.0;
    double well_width = 1.0;
    // Time stepping.
    double dt = 1.2;
    int n_steps = 5;
    // Execution.
    Mode mode = Mode::exact;
    std::uint64_t shots = 1u << 14;
    std::uint64_t seed = 20240101;
    Prescription prescription = Prescription::absorbing;
    bool literal_sampling = false;

    void validate() const {
        if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
        if (n_steps < 0) throw std::invalid_argument("steps must be non-negative");
        if (mode == Mode::sampled && shots < 1) {
            throw std::invalid_argument("sampled mode needs at least one shot");
        }
    }
};

/// Grid, potentials and initial state built from a RunConfig.
struct Problem {
    Grid grid;
    PotentialField V;
    PotentialField W;
    WaveFunction initial;
};

inline Problem make_problem(const RunConfig &config) {
    config.validate();
    Grid grid(config.x_min, config.x_max, config.qubits, config.mass);
    PotentialField V = config.well_depth == 0.0
                           ? zero_potential(grid)
                           : gaussian_well(grid, config.well_depth, config.well_width);
    const std::size_t width = config.cap_width.value_or(grid.size() / 4);
    PotentialField W =
        cap_potential(grid, config.cap_strength, config.cap_steepness, width);
    WaveFunction wf = gaussian_packet(grid, config.x0.value_or(grid.midpoint()),
                                      config.sigma, config.boost);
    return Problem{grid, std::move(V), std::move(W), std::move(wf)};
}

/// Reusable gate sequence for one time step on n+1 qubits.
class TrotterStep {
  public:
    TrotterStep(const Grid &grid, const PotentialField &V,
                const PotentialField &W, double dt,
                Prescription prescription = Prescription::absorbing)
        : qubits_(grid.qubits() + 1),
          kinetic_(kinetic_block_circuit(grid, dt).widened(grid.qubits() + 1)),
          potential_(potential_phase_block(grid, V, dt)),
          dilation_(dilation_circuit(W, dt, prescription)) {
        if (W.size() != grid.size()) {
            throw std::invalid_argument("absorbing potential does not match grid");
        }
    }

    void apply(StateVector &state) const {
        if (state.num_qubits() != qubits_) {
            throw std::invalid_argument("state has " +
                                        std::to_string(state.num_qubits()) +
                                        " qubits, step expects " +
                                        std::to_string(qubits_));
        }
        state.apply(kinetic_);
        potential_.apply(state);
        state.apply(dilation_);
    }

    [[nodiscard]] const Circuit &kinetic() const { return kinetic_; }
    [[nodiscard]] const Circuit &dilation() const { return dilation_; }

  private:
    int qubits_;
    Circuit kinetic_;
    DiagonalOperator potential_;
    Circuit dilation_;
};

/// Probability of reading 0 on the ancilla (the top qubit).
inline double ancilla_zero_probability(const StateVector &state) {
    const auto half = state.amplitudes().size() / 2;
    return state.amplitudes().head(half).squaredNorm();
}

inline StateVector trotter_block(StateVector state, const Grid &grid,
                                 const PotentialField &V,
                                 const PotentialField &W, double dt,
                                 Prescription prescription = Prescription::absorbing) {
    if (state.num_qubits() != grid.qubits() + 1) {
        throw std::invalid_argument("state dimension does not match grid + ancilla");
    }
    const auto half = state.amplitudes().size() / 2;
    if (state.amplitudes().tail(half).squaredNorm() > 1e-12) {
        throw std::invalid_argument("ancilla must start in |0>");
    }
    TrotterStep(grid, V, W, dt, prescription).apply(state);
    return state;
}

struct Projection {
    StateVector state;
    double success = 0.0;
};

/// Collapses the ancilla onto 0 and renormalises.
inline Projection project_ancilla_zero(StateVector state) {
    const double p = ancilla_zero_probability(state);
    if (p < kFullAbsorptionThreshold) {
        throw FullAbsorption(p);
    }
    auto &a = state.amplitudes();
    const auto half = a.size() / 2;
    a.tail(half).setZero();
    a.head(half) /= std::sqrt(p);
    return Projection{std::move(state), p};
}

inline ComplexVector system_amplitudes(const StateVector &state) {
    return state.amplitudes().head(state.amplitudes().size() / 2);
}

struct RunResult {
    double dt = 0.0;
    Prescription prescription = Prescription::absorbing;
    /// p_s(r) for r = 1..n_steps.
    std::vector<double> per_step_success;
    /// P_s(r dt) for r = 0..n_steps, P_s(0) = 1.
    std::vector<double> cumulative_success;
    /// Renormalised system amplitudes for r = 0..n_steps.
    std::vector<ComplexVector> snapshots;

    [[nodiscard]] int steps() const {
        return static_cast<int>(per_step_success.size());
    }
    [[nodiscard]] double time(int r) const { return r * dt; }
};

namespace detail {

/// Iterates step + post-selection. With `stop_when_absorbed` a vanished
/// ancilla-0 branch ends the trajectory early instead of throwing.
inline RunResult run_trajectory(const Problem &problem, double dt, int n_steps,
                                Prescription prescription, bool stop_when_absorbed) {
    if (n_steps < 0) {
        throw std::invalid_argument("step count must be non-negative");
    }
    const TrotterStep step(problem.grid, problem.V, problem.W, dt, prescription);
    RunResult result;
    result.dt = dt;
    result.prescription = prescription;
    result.cumulative_success.push_back(1.0);
    result.snapshots.push_back(problem.initial.amplitudes /
                               problem.initial.amplitudes.norm());
    StateVector state = StateVector::with_ancilla(result.snapshots.front());
    for (int r = 1; r <= n_steps; ++r) {
        step.apply(state);
        if (stop_when_absorbed &&
            ancilla_zero_probability(state) < kFullAbsorptionThreshold) {
            break;
        }
        auto projected = project_ancilla_zero(std::move(state));
        state = std::move(projected.state);
        result.per_step_success.push_back(projected.success);
        result.cumulative_success.push_back(result.cumulative_success.back() *
                                            projected.success);
        result.snapshots.push_back(system_amplitudes(state));
    }
    return result;
}

} // namespace detail

/// Exact post-selected evolution; throws FullAbsorption if a step's success
/// probability drops below the threshold.
inline RunResult run_exact(const Problem &problem, double dt, int n_steps,
                           Prescription prescription = Prescription::absorbing) {
    return detail::run_trajectory(problem, dt, n_steps, prescription, false);
}

inline RunResult run_exact(const RunConfig &config) {
    return run_exact(make_problem(config), config.dt, config.n_steps,
                     config.prescription);
}

struct SampledResult {
    std::uint64_t total_shots = 0;
    std::uint64_t accepted_count = 0;
    double empirical_success = 0.0;
    /// Shots whose ancilla read 0 at every step up to r, r = 0..n_steps.
    std::vector<std::uint64_t> survivors;
    /// Final register readout of accepted shots, one bin per grid point.
    std::vector<std::uint64_t> histogram;
    /// Per-point standard deviation of the frequency across repeated runs.
    std::vector<double> error_bars;
    bool zero_accepted = false;

    [[nodiscard]] double success_at(int r) const {
        return total_shots == 0
                   ? 0.0
                   : static_cast<double>(survivors.at(static_cast<std::size_t>(r))) /
                         static_cast<double>(total_shots);
    }

    [[nodiscard]] std::vector<double> frequencies() const {
        std::vector<double> f(histogram.size(), 0.0);
        if (accepted_count == 0) return f;
        for (std::size_t i = 0; i < f.size(); ++i) {
            f[i] = static_cast<double>(histogram[i]) /
                   static_cast<double>(accepted_count);
        }
        return f;
    }
};

namespace detail {

inline std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed),
                      static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream),
                      static_cast<std::uint32_t>(stream >> 32)};
    return std::mt19937_64(seq);
}

inline std::vector<double> probabilities(const ComplexVector &amps) {
    std::vector<double> p(static_cast<std::size_t>(amps.size()));
    for (Eigen::Index i = 0; i < amps.size(); ++i) {
        p[static_cast<std::size_t>(i)] = std::norm(amps[i]);
    }
    return p;
}

inline void finish(SampledResult &result) {
    result.accepted_count = result.survivors.back();
    result.empirical_success = static_cast<double>(result.accepted_count) /
                               static_cast<double>(result.total_shots);
    result.zero_accepted = result.accepted_count == 0;
}

/// Survivor counts and readout drawn from the exact post-selected trajectory.
inline SampledResult sample_factorized(const RunResult &exact, std::size_t points,
                                       std::uint64_t shots, int n_steps,
                                       std::mt19937_64 &rng) {
    SampledResult result;
    result.total_shots = shots;
    result.histogram.assign(points, 0);
    result.survivors.push_back(shots);
    for (int r = 1; r <= n_steps; ++r) {
        const auto alive = result.survivors.back();
        const double p = r <= exact.steps()
                             ? exact.per_step_success[static_cast<std::size_t>(r - 1)]
                             : 0.0;
        std::binomial_distribution<std::uint64_t> draw(alive, std::min(p, 1.0));
        result.survivors.push_back(alive == 0 ? 0 : draw(rng));
    }
    finish(result);
    if (result.accepted_count > 0) {
        const auto probs = probabilities(exact.snapshots.back());
        std::discrete_distribution<std::size_t> readout(probs.begin(), probs.end());
        for (std::uint64_t s = 0; s < result.accepted_count; ++s) {
            ++result.histogram[readout(rng)];
        }
    }
    return result;
}

/// Full statevector simulation per shot, with random ancilla collapse.
inline SampledResult sample_literal(const Problem &problem, const TrotterStep &step,
                                    std::uint64_t shots, int n_steps,
                                    std::mt19937_64 &rng) {
    SampledResult result;
    result.total_shots = shots;
    result.histogram.assign(problem.grid.size(), 0);
    result.survivors.assign(static_cast<std::size_t>(n_steps) + 1, 0);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const ComplexVector psi0 = problem.initial.amplitudes / problem.initial.amplitudes.norm();
    for (std::uint64_t s = 0; s < shots; ++s) {
        StateVector state = StateVector::with_ancilla(psi0);
        ++result.survivors[0];
        bool alive = true;
        for (int r = 1; r <= n_steps && alive; ++r) {
            step.apply(state);
            const double p0 = ancilla_zero_probability(state);
            if (uniform(rng) >= p0) {
                alive = false;
                break;
            }
            state = project_ancilla_zero(std::move(state)).state;
            ++result.survivors[static_cast<std::size_t>(r)];
        }
        if (!alive) continue;
        const auto probs = probabilities(system_amplitudes(state));
        std::discrete_distribution<std::size_t> readout(probs.begin(), probs.end());
        ++result.histogram[readout(rng)];
    }
    finish(result);
    return result;
}

inline SampledResult run_sampled_stream(const Problem &problem,
                                        const RunConfig &config,
                                        const RunResult &exact,
                                        std::uint64_t stream) {
    auto rng = make_engine(config.seed, stream);
    if (config.literal_sampling) {
        const TrotterStep step(problem.grid, problem.V, problem.W, config.dt,
                               config.prescription);
        return sample_literal(problem, step, config.shots, config.n_steps, rng);
    }
    return sample_factorized(exact, problem.grid.size(), config.shots,
                             config.n_steps, rng);
}

} // namespace detail

/// One finite-shot run. Deterministic for a fixed seed.
inline SampledResult run_sampled(const RunConfig &config) {
    config.validate();
    if (config.shots < 1) {
        throw std::invalid_argument("sampled mode needs at least one shot");
    }
    const Problem problem = make_problem(config);
    const RunResult exact = detail::run_trajectory(problem, config.dt, config.n_steps,
                                                   config.prescription, true);
    return detail::run_sampled_stream(problem, config, exact, 0);
}

/// Independent repeats plus across-run spread, as used for error bars.
struct RepeatedSampling {
    std::vector<SampledResult> runs;
    /// Per step r = 0..n_steps, mean and standard deviation of the empirical
    /// cumulative success across runs.
    std::vector<double> success_mean;
    std::vector<double> success_stddev;
    /// Per grid point, mean and standard deviation of readout frequency.
    std::vector<double> frequency_mean;
    std::vector<double> frequency_stddev;
};

namespace detail {

inline std::pair<double, double> mean_stddev(const std::vector<double> &xs) {
    if (xs.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return {mean, 0.0};
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return {mean, std::sqrt(var / static_cast<double>(xs.size() - 1))};
}

} // namespace detail

/**
 * @brief `repeats` independent sampled runs, each on its own RNG stream
 * derived from the seed. Runs execute concurrently; the result does not
 * depend on scheduling.
 */
inline RepeatedSampling run_sampled_repeated(const RunConfig &config, int repeats) {
    config.validate();
    if (repeats < 1) {
        throw std::invalid_argument("need at least one repeat");
    }
    if (config.shots < 1) {
        throw std::invalid_argument("sampled mode needs at least one shot");
    }
    const Problem problem = make_problem(config);
    const RunResult exact = detail::run_trajectory(problem, config.dt, config.n_steps,
                                                   config.prescription, true);

    std::vector<std::future<SampledResult>> pending;
    pending.reserve(static_cast<std::size_t>(repeats));
    for (int k = 0; k < repeats; ++k) {
        pending.push_back(std::async(std::launch::async, [&, k] {
            return detail::run_sampled_stream(problem, config, exact,
                                              static_cast<std::uint64_t>(k) + 1);
        }));
    }
    RepeatedSampling out;
    for (auto &f : pending) {
        out.runs.push_back(f.get());
    }

    const auto steps = static_cast<std::size_t>(config.n_steps) + 1;
    for (std::size_t r = 0; r < steps; ++r) {
        std::vector<double> xs;
        for (const auto &run : out.runs) xs.push_back(run.success_at(static_cast<int>(r)));
        const auto [m, s] = detail::mean_stddev(xs);
        out.success_mean.push_back(m);
        out.success_stddev.push_back(s);
    }
    for (std::size_t i = 0; i < problem.grid.size(); ++i) {
        std::vector<double> xs;
        for (const auto &run : out.runs) xs.push_back(run.frequencies()[i]);
        const auto [m, s] = detail::mean_stddev(xs);
        out.frequency_mean.push_back(m);
        out.frequency_stddev.push_back(s);
    }
    for (auto &run : out.runs) {
        run.error_bars = out.frequency_stddev;
    }
    return out;
}

} // namespace capdil
