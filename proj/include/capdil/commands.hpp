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
 * Experiment drivers behind the `capdil` executable. Each command reads an
 * ExperimentConfig, writes CSV files into the output directory and returns
 * a process exit code.
 *
 * CSV schemas (header row first):
 *   <tag>_classical.csv        step,time,x,re,im,prob,norm
 *   <tag>_quantum.csv          step,time,x,re,im,prob,norm,mode
 *   <tag>_success.csv          step,time,p_step,P_cumulative,classical_norm
 *   <tag>_histogram.csv        x,counts,frequency,stddev
 *   <tag>_sampled_success.csv  step,time,mean,stddev,exact
 *   <tag>_bounds.csv           dt,measured_error,commutator_bound,product_bound,pass
 *   complexity.csv             n,d,csd,qsd,svd,dilation
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "capdil/analysis.hpp"
#include "capdil/classical_solver.hpp"
#include "capdil/config.hpp"
#include "capdil/evolution.hpp"

namespace capdil {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfigError = 1,
    kExitValidationFailure = 2,
    kExitZeroAccepted = 3,
};

/// Deviations above this fail `compare`.
inline constexpr double kCompareTolerance = 1e-9;

namespace detail {

class CsvFile {
  public:
    CsvFile(const std::filesystem::path &path, const std::string &header)
        : out_(path) {
        if (!out_) {
            throw std::runtime_error("cannot write " + path.string());
        }
        out_ << std::setprecision(std::numeric_limits<double>::max_digits10);
        out_ << header << '\n';
    }

    template <typename... Ts>
    void row(const Ts &...fields) {
        std::size_t i = 0;
        ((out_ << (i++ == 0 ? "" : ",") << fields), ...);
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

inline std::filesystem::path output_path(const ExperimentConfig &config,
                                         const std::string &suffix) {
    std::filesystem::create_directories(config.output_dir);
    return std::filesystem::path(config.output_dir) / (config.tag + suffix);
}

inline void write_amplitudes(CsvFile &csv, int step, double time, const Grid &grid,
                             const ComplexVector &psi, double norm_value,
                             const std::string *mode = nullptr) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const Complex a = psi[static_cast<Eigen::Index>(i)];
        if (mode) {
            csv.row(step, time, grid.x(i), a.real(), a.imag(), std::norm(a),
                    norm_value, *mode);
        } else {
            csv.row(step, time, grid.x(i), a.real(), a.imag(), std::norm(a),
                    norm_value);
        }
    }
}

inline ClassicalTrajectory classical_for(const Problem &problem, double dt,
                                         int n_steps) {
    return evolve_classical(problem.grid, problem.V, problem.W, problem.initial,
                            dt, n_steps);
}

} // namespace detail

inline int cmd_evolve_classical(const ExperimentConfig &config, std::ostream &log) {
    const Problem problem = make_problem(config.run);
    const auto trajectory =
        detail::classical_for(problem, config.run.dt, config.run.n_steps);
    detail::CsvFile csv(detail::output_path(config, "_classical.csv"),
                        "step,time,x,re,im,prob,norm");
    for (std::size_t r = 0; r < trajectory.snapshots.size(); ++r) {
        const auto &s = trajectory.snapshots[r];
        detail::write_amplitudes(csv, static_cast<int>(r), s.time, problem.grid,
                                 s.amplitudes, s.physical_norm);
    }
    log << "classical: " << trajectory.snapshots.size() << " snapshots, final norm "
        << trajectory.snapshots.back().physical_norm << '\n';
    return kExitOk;
}

inline int cmd_evolve_quantum(const ExperimentConfig &config, std::ostream &log) {
    const Problem problem = make_problem(config.run);
    RunResult result;
    try {
        result = run_exact(problem, config.run.dt, config.run.n_steps,
                           config.run.prescription);
    } catch (const FullAbsorption &e) {
        log << "error: " << e.what() << '\n';
        return kExitValidationFailure;
    }
    const auto classical =
        detail::classical_for(problem, config.run.dt, config.run.n_steps);
    detail::CsvFile success(detail::output_path(config, "_success.csv"),
                            "step,time,p_step,P_cumulative,classical_norm");
    detail::CsvFile amps(detail::output_path(config, "_quantum.csv"),
                         "step,time,x,re,im,prob,norm,mode");
    const std::string mode = "exact";
    for (int r = 0; r <= result.steps(); ++r) {
        const auto ur = static_cast<std::size_t>(r);
        const double p_step = r == 0 ? 1.0 : result.per_step_success[ur - 1];
        success.row(r, result.time(r), p_step, result.cumulative_success[ur],
                    classical.snapshots[ur].physical_norm);
        detail::write_amplitudes(amps, r, result.time(r), problem.grid,
                                 result.snapshots[ur], result.cumulative_success[ur],
                                 &mode);
    }
    log << "quantum: " << result.steps() << " steps, P_s = "
        << result.cumulative_success.back() << '\n';
    return kExitOk;
}

inline int cmd_sample(const ExperimentConfig &config, std::ostream &log) {
    RunConfig run = config.run;
    run.mode = Mode::sampled;
    const Problem problem = make_problem(run);
    const auto sampling = run_sampled_repeated(run, config.repeats);
    const RunResult exact =
        detail::run_trajectory(problem, run.dt, run.n_steps, run.prescription, true);

    const SampledResult &first = sampling.runs.front();
    detail::CsvFile hist(detail::output_path(config, "_histogram.csv"),
                         "x,counts,frequency,stddev");
    const auto freq = first.frequencies();
    for (std::size_t i = 0; i < problem.grid.size(); ++i) {
        double stddev = sampling.frequency_stddev[i];
        if (config.repeats == 1 && first.accepted_count > 0) {
            stddev = std::sqrt(freq[i] * (1.0 - freq[i]) /
                               static_cast<double>(first.accepted_count));
        }
        hist.row(problem.grid.x(i), first.histogram[i], freq[i], stddev);
    }
    detail::CsvFile succ(detail::output_path(config, "_sampled_success.csv"),
                         "step,time,mean,stddev,exact");
    for (int r = 0; r <= run.n_steps; ++r) {
        const auto ur = static_cast<std::size_t>(r);
        const double exact_p =
            ur < exact.cumulative_success.size() ? exact.cumulative_success[ur] : 0.0;
        succ.row(r, r * run.dt, sampling.success_mean[ur], sampling.success_stddev[ur],
                 exact_p);
    }
    log << "sampled: " << config.repeats << " x " << run.shots << " shots, accepted "
        << first.accepted_count << " in first run, mean success "
        << sampling.success_mean.back() << " +- " << sampling.success_stddev.back()
        << '\n';
    const bool any_zero = std::any_of(sampling.runs.begin(), sampling.runs.end(),
                                      [](const auto &r) { return r.zero_accepted; });
    if (any_zero) {
        log << "error: a run accepted zero shots; histogram is empty\n";
        return kExitZeroAccepted;
    }
    return kExitOk;
}

struct CompareReport {
    double max_amplitude_deviation = 0.0;
    double max_norm_deviation = 0.0;
};

/// Classical and exact quantum runs side by side. Amplitude deviation is on
/// renormalised states with the global phase removed.
inline CompareReport compare_runs(const ExperimentConfig &config) {
    const Problem problem = make_problem(config.run);
    const double classical_dt = config.classical_dt.value_or(config.run.dt);
    const auto classical = detail::classical_for(problem, classical_dt, config.run.n_steps);
    const auto quantum = run_exact(problem, config.run.dt, config.run.n_steps,
                                   config.run.prescription);
    CompareReport report;
    for (int r = 0; r <= quantum.steps(); ++r) {
        const auto ur = static_cast<std::size_t>(r);
        const auto &c = classical.snapshots[ur];
        const ComplexVector renorm = c.amplitudes / c.amplitudes.norm();
        report.max_amplitude_deviation =
            std::max(report.max_amplitude_deviation,
                     max_deviation_up_to_phase(renorm, quantum.snapshots[ur]));
        report.max_norm_deviation =
            std::max(report.max_norm_deviation,
                     std::abs(c.physical_norm - quantum.cumulative_success[ur]));
    }
    return report;
}

inline int cmd_compare(const ExperimentConfig &config, std::ostream &log) {
    CompareReport report;
    try {
        report = compare_runs(config);
    } catch (const FullAbsorption &e) {
        log << "error: " << e.what() << '\n';
        return kExitValidationFailure;
    }
    log << std::setprecision(3) << std::scientific
        << "max amplitude deviation: " << report.max_amplitude_deviation << '\n'
        << "max norm-vs-success deviation: " << report.max_norm_deviation << '\n';
    log << std::defaultfloat;
    if (report.max_amplitude_deviation > kCompareTolerance ||
        report.max_norm_deviation > kCompareTolerance) {
        log << "FAIL: classical and quantum runs disagree beyond "
            << kCompareTolerance << '\n';
        return kExitValidationFailure;
    }
    log << "OK: classical and quantum runs agree\n";
    return kExitOk;
}

inline int cmd_complexity(int n_max, const std::string &output_dir, std::ostream &log) {
    if (n_max < 1) {
        log << "error: n-max must be at least 1\n";
        return kExitConfigError;
    }
    std::vector<int> ns;
    for (int n = 1; n <= n_max; ++n) ns.push_back(n);
    const auto rows = gate_count_table(ns);
    std::filesystem::create_directories(output_dir);
    detail::CsvFile csv(std::filesystem::path(output_dir) / "complexity.csv",
                        "n,d,csd,qsd,svd,dilation");
    log << "| d = n+1 | CSD | QSD | SVD | dilation | emitted CNOT |\n"
        << "|---|---|---|---|---|---|\n";
    bool audited = true;
    for (const auto &row : rows) {
        csv.row(row.n, row.d(), row.csd, row.qsd, row.svd, row.dilation);
        std::string emitted = "-";
        if (row.n <= kMaxQubits) {
            const auto cnots = emitted_dilation_cnots(row.n);
            audited = audited && static_cast<std::int64_t>(cnots) == row.dilation;
            emitted = std::to_string(cnots);
        }
        log << "| " << row.d() << " | " << row.csd << " | " << row.qsd << " | "
            << row.svd << " | " << row.dilation << " | " << emitted << " |\n";
    }
    if (!audited) {
        log << "FAIL: emitted dilation circuit CNOT count differs from 2^n\n";
        return kExitValidationFailure;
    }
    return kExitOk;
}

inline int cmd_bound_check(const ExperimentConfig &config, std::ostream &log) {
    const Problem problem = make_problem(config.run);
    const auto report =
        verify_trotter_bound(problem.grid, problem.V, problem.W, config.bound_dts);
    detail::CsvFile csv(detail::output_path(config, "_bounds.csv"),
                        "dt,measured_error,commutator_bound,product_bound,pass");
    for (const auto &row : report.rows) {
        csv.row(row.dt, row.measured_error, row.commutator_bound, row.product_bound,
                row.pass ? "true" : "false");
        log << "dt=" << row.dt << " error=" << row.measured_error
            << " commutator=" << row.commutator_bound
            << " product=" << row.product_bound << (row.pass ? " ok" : " FAIL")
            << '\n';
    }
    const auto ratios = error_ratios(report);
    for (double q : ratios) {
        log << "error ratio under refinement: " << q << '\n';
    }
    return report.all_pass() ? kExitOk : kExitValidationFailure;
}

} // namespace capdil
