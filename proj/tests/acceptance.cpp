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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "capdil/analysis.hpp"
#include "capdil/circuit.hpp"
#include "capdil/classical_solver.hpp"
#include "capdil/commands.hpp"
#include "capdil/config.hpp"
#include "capdil/dilation.hpp"
#include "capdil/evolution.hpp"
#include "test_util.hpp"

using namespace capdil;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

ExperimentConfig shipped(const std::string &name) {
    return load_config(std::string(CAPDIL_CONFIG_DIR) + "/" + name);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

// 1. Exact-mode snapshots against the classical split-operator solver.
Outcome oracle_equivalence() {
    Outcome out;
    double worst = 0;
    for (const char *name : {"free_packet.cfg", "boosted_packet.cfg"}) {
        const auto cfg = shipped(name);
        const Problem problem = make_problem(cfg.run);
        const auto quantum = run_exact(problem, cfg.run.dt, cfg.run.n_steps);
        const auto classical = evolve_classical(problem.grid, problem.V, problem.W,
                                                problem.initial, cfg.run.dt, cfg.run.n_steps);
        for (int r = 1; r <= 5; ++r) {
            const auto &c = classical.snapshots[static_cast<std::size_t>(r)].amplitudes;
            worst = std::max(worst, max_deviation_up_to_phase(
                                        c / c.norm(), quantum.snapshots[static_cast<std::size_t>(r)]));
        }
    }
    out.pass = worst < 1e-9;
    out.detail = "max deviation " + fmt(worst) + " (< 1e-9), v in {0, 4}, r = 1..5";
    return out;
}

// 2. Cumulative success probability against the classical physical norm.
Outcome norm_identity() {
    Outcome out;
    double worst = 0;
    for (const char *name : {"free_packet.cfg", "boosted_packet.cfg"}) {
        const auto cfg = shipped(name);
        const Problem problem = make_problem(cfg.run);
        const auto quantum = run_exact(problem, cfg.run.dt, cfg.run.n_steps);
        const auto classical = evolve_classical(problem.grid, problem.V, problem.W,
                                                problem.initial, cfg.run.dt, cfg.run.n_steps);
        for (std::size_t r = 1; r <= 5; ++r) {
            worst = std::max(worst, std::abs(quantum.cumulative_success[r] -
                                             classical.snapshots[r].physical_norm));
        }
    }
    out.pass = worst < 1e-10;
    out.detail = "max |P_s - norm| " + fmt(worst) + " (< 1e-10)";
    return out;
}

// 3. Finite-shot statistics.
Outcome sampled_fidelity() {
    Outcome out;
    auto cfg = shipped("free_packet.cfg");
    cfg.run.shots = 1u << 14;
    const auto exact = run_exact(cfg.run);
    const auto s = run_sampled(cfg.run);
    const double P = exact.cumulative_success.back();
    const double shots = static_cast<double>(cfg.run.shots);
    const double success_z = std::abs(s.empirical_success - P) / std::sqrt(P * (1 - P) / shots);
    double worst_bin_z = 0;
    const double accepted = static_cast<double>(s.accepted_count);
    for (std::size_t i = 0; i < s.histogram.size(); ++i) {
        const double p = std::norm(exact.snapshots.back()[static_cast<Eigen::Index>(i)]);
        const double sd = std::sqrt(accepted * p * (1 - p));
        const double dev = std::abs(static_cast<double>(s.histogram[i]) - accepted * p);
        if (sd > 0) {
            worst_bin_z = std::max(worst_bin_z, dev / sd);
        } else if (dev > 0) {
            worst_bin_z = INFINITY;
        }
    }

    const auto rep_cfg = shipped("norm_history.cfg");
    const auto rep_exact = run_exact(rep_cfg.run);
    const auto repeated = run_sampled_repeated(rep_cfg.run, rep_cfg.repeats);
    int min_covered = rep_cfg.repeats;
    for (int r = 1; r <= rep_cfg.run.n_steps; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        int covered = 0;
        for (const auto &run : repeated.runs) {
            covered += std::abs(run.success_at(r) - rep_exact.cumulative_success[ur]) <=
                               2 * repeated.success_stddev[ur]
                           ? 1
                           : 0;
        }
        min_covered = std::min(min_covered, covered);
    }
    out.pass = worst_bin_z <= 4 && success_z <= 4 && min_covered >= 18;
    out.detail = "worst bin " + fmt(worst_bin_z) + " sd, success " + fmt(success_z) +
                 " sd (<= 4); error bars cover exact in >= " + std::to_string(min_covered) +
                 "/" + std::to_string(rep_cfg.repeats) + " runs at every step (>= 18)";
    return out;
}

// 4. Bound state in a Gaussian well: the success probability saturates.
Outcome confined_plateau() {
    Outcome out;
    const auto cfg = shipped("gaussian_well.cfg");
    const Problem problem = make_problem(cfg.run);
    const auto quantum = run_exact(problem, cfg.run.dt, cfg.run.n_steps);
    const auto classical = evolve_classical(problem.grid, problem.V, problem.W, problem.initial,
                                            cfg.run.dt, cfg.run.n_steps);
    const auto &P = quantum.cumulative_success;
    bool monotone = cfg.run.n_steps == 100 && cfg.run.well_depth == -1.0 &&
                    cfg.run.well_width == 1.0;
    double worst = 0;
    for (std::size_t r = 1; r < P.size(); ++r) {
        monotone = monotone && P[r] <= P[r - 1];
        worst = std::max(worst, std::abs(P[r] - classical.snapshots[r].physical_norm));
    }
    const auto tail = std::vector<double>(P.end() - 20, P.end());
    const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
    const double variation = (*hi - *lo) / *hi;
    out.pass = monotone && variation < 0.01 && worst < 1e-9;
    out.detail = std::string(monotone ? "non-increasing" : "NOT non-increasing") +
                 ", plateau " + fmt(P.back()) + ", last-20 variation " + fmt(variation) +
                 " (< 0.01), max |P_s - norm| " + fmt(worst) + " (< 1e-9)";
    return out;
}

// 5. Turro prescription.
Outcome turro_comparison() {
    Outcome out;
    auto cfg = shipped("free_packet.cfg");
    cfg.run.prescription = Prescription::turro;
    cfg.run.cap_strength = 0.0;
    cfg.run.n_steps = 10;
    const auto free = run_exact(cfg.run);
    double worst = 0;
    for (int r = 0; r <= 10; ++r) {
        worst = std::max(worst, std::abs(free.cumulative_success[static_cast<std::size_t>(r)] -
                                         std::ldexp(1.0, -r)));
    }
    double max_ps = 0;
    for (double u0 : {0.1, 0.4, 1.0, 5.0}) {
        for (double v : {0.0, 4.0}) {
            cfg.run.cap_strength = u0;
            cfg.run.boost = v;
            for (double p : run_exact(cfg.run).per_step_success) max_ps = std::max(max_ps, p);
        }
    }
    out.pass = worst <= 1e-12 && max_ps <= 0.5 + 1e-12;
    out.detail = "max |P_s - 2^-r| " + fmt(worst) + " (r <= 10), max p_s with U0 > 0 " +
                 fmt(max_ps) + " (<= 1/2 + 1e-12)";
    return out;
}

// 6. Gate counts and the complexity table.
Outcome gate_counts() {
    Outcome out;
    bool counts_ok = true;
    std::mt19937_64 rng(6);
    for (int n = 1; n <= 6; ++n) {
        const Grid g(-5.0, 5.0, n);
        const auto W = capdil::testing::random_absorbing(g.size(), rng);
        const auto c = dilation_circuit(W, 1.2, Prescription::absorbing);
        const std::size_t N = std::size_t{1} << n;
        counts_ok = counts_ok && c.count(GateKind::CNOT) == N && c.count(GateKind::RotY) == N &&
                    c.size() == 2 * N;
    }
    const std::vector<ComplexityRow> printed{{2, 26, 20, 6, 4}, {3, 118, 100, 14, 8},
                                             {4, 494, 444, 30, 16}, {5, 2014, 1868, 62, 32}};
    bool table_ok = true;
    for (const auto &row : printed) table_ok = table_ok && complexity_row(row.n) == row;
    std::ostringstream log;
    const bool audit_ok = cmd_complexity(6, (std::filesystem::temp_directory_path() /
                                             "capdil_acceptance").string(),
                                         log) == kExitOk;
    out.pass = counts_ok && table_ok && audit_ok;
    out.detail = std::string("2^n CNOT + 2^n RY for n = 1..6: ") + (counts_ok ? "yes" : "NO") +
                 "; table rows n = 2..5 bit-exact: " + (table_ok ? "yes" : "NO");
    return out;
}

// 7. Multiplexed-Ry synthesis against the analytic dilation.
Outcome synthesis_correctness() {
    Outcome out;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dt(0.05, 2.0);
    double worst = 0;
    for (int n = 1; n <= 5; ++n) {
        const std::size_t N = std::size_t{1} << n;
        for (int trial = 0; trial < 50; ++trial) {
            const auto W = capdil::testing::random_absorbing(N, rng, 3.0);
            const double step = dt(rng);
            // Analytic block written out directly.
            Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(2 * static_cast<Eigen::Index>(N),
                                                        2 * static_cast<Eigen::Index>(N));
            const auto n_ = static_cast<Eigen::Index>(N);
            for (Eigen::Index i = 0; i < n_; ++i) {
                const double c = std::exp(-W.values[i] * step);
                const double s = std::sqrt(1 - c * c);
                D(i, i) = D(n_ + i, n_ + i) = c;
                D(i, n_ + i) = s;
                D(n_ + i, i) = -s;
            }
            const auto U =
                circuit_unitary(dilation_circuit(W, step, Prescription::absorbing));
            worst = std::max(worst, capdil::testing::max_abs_diff(U, D));
        }
    }
    out.pass = worst <= 1e-10;
    out.detail = "max-norm " + fmt(worst) + " over 250 random CAPs (<= 1e-10)";
    return out;
}

// 8. Trotter splitting error against the product bound.
Outcome trotter_bound() {
    Outcome out;
    const auto cfg = shipped("bound_check.cfg");
    const Problem problem = make_problem(cfg.run);
    const std::vector<double> dts{0.2, 0.1, 0.05};
    const auto report = verify_trotter_bound(problem.grid, problem.V, problem.W, dts);
    bool bounded = problem.grid.qubits() == 3;
    for (const auto &row : report.rows) bounded = bounded && row.measured_error <= row.product_bound;
    bool ratios_ok = true;
    std::string ratio_text;
    for (double q : error_ratios(report)) {
        const double halving = 1.0 / q;
        ratios_ok = ratios_ok && std::abs(halving - 4.0) <= 0.8;
        ratio_text += (ratio_text.empty() ? "" : ", ") + fmt(halving);
    }
    out.pass = bounded && ratios_ok;
    out.detail = std::string("error <= dt^2 ||K|| (||V|| + ||W||) at dt = 0.2, 0.1, 0.05: ") +
                 (bounded ? "yes" : "NO") + "; halving ratios " + ratio_text + " (4 +- 20%)";
    return out;
}

// 9. QFT and kinetic block.
Outcome qft_kinetic() {
    Outcome out;
    double qft_worst = 0;
    for (int n = 1; n <= 5; ++n) {
        qft_worst = std::max(qft_worst,
                             capdil::testing::max_abs_diff(circuit_unitary(qft_circuit(n)),
                                                           capdil::testing::dft_matrix(std::size_t{1} << n)));
    }
    std::mt19937_64 rng(9);
    double kin_worst = 0;
    for (int n = 1; n <= 8; ++n) {
        const Grid g(-5.0, 5.0, n);
        for (int trial = 0; trial < 10; ++trial) {
            const auto psi = capdil::testing::random_state(g.size(), rng);
            StateVector s(n, psi);
            s.apply(kinetic_block_circuit(g, 1.2));
            const ComplexVector circuit = s.amplitudes() * kinetic_global_phase(g, 1.2);
            kin_worst = std::max(
                kin_worst, (circuit - kinetic_substep(psi, g, 1.2)).cwiseAbs().maxCoeff());
        }
    }
    out.pass = qft_worst <= 1e-12 && kin_worst <= 1e-10;
    out.detail = "QFT vs DFT " + fmt(qft_worst) + " (n <= 5, <= 1e-12); kinetic block vs substep " +
                 fmt(kin_worst) + " (<= 1e-10)";
    return out;
}

} // namespace

int main() {
    const std::vector<std::pair<const char *, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"norm/success identity", norm_identity},
        {"sampled fidelity", sampled_fidelity},
        {"confined plateau", confined_plateau},
        {"turro comparison", turro_comparison},
        {"gate counts", gate_counts},
        {"synthesis correctness", synthesis_correctness},
        {"trotter bound", trotter_bound},
        {"qft/kinetic correctness", qft_kinetic},
    };
    int failures = 0;
    int index = 0;
    for (const auto &[name, check] : criteria) {
        ++index;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failures += o.pass ? 0 : 1;
        std::printf("%s %d %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", index, name,
                    o.detail.c_str(), secs);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
