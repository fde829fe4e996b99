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

#include <cstdint>
#include <exception>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "capdil/commands.hpp"

namespace {

struct ConfigArgs {
    std::string path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
};

CLI::App *add_config_command(CLI::App &app, const std::string &name,
                             const std::string &description, ConfigArgs &args) {
    auto *sub = app.add_subcommand(name, description);
    sub->add_option("config", args.path, "experiment config file")->required();
    sub->add_option("--seed", args.seed, "override run.seed");
    sub->add_option("--out", args.out, "override output.dir");
    return sub;
}

int run_with_config(const ConfigArgs &args,
                    const std::function<int(const capdil::ExperimentConfig &)> &command) {
    capdil::ExperimentConfig config;
    try {
        config = capdil::load_config(args.path);
    } catch (const capdil::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return capdil::kExitConfigError;
    }
    if (args.seed) config.run.seed = *args.seed;
    if (args.out) config.output_dir = *args.out;
    try {
        return command(config);
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return capdil::kExitConfigError;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Absorbing-boundary Schroedinger evolution: classical split-operator "
                 "reference and gate-level dilation circuit"};
    app.require_subcommand(1);

    ConfigArgs classical_args, quantum_args, sample_args, compare_args, bound_args;
    auto *classical = add_config_command(app, "evolve-classical",
                                         "split-operator reference trajectory",
                                         classical_args);
    auto *quantum = add_config_command(app, "evolve-quantum",
                                       "exact post-selected circuit evolution",
                                       quantum_args);
    auto *sample = add_config_command(app, "sample",
                                      "finite-shot sampling with repeat-run error bars",
                                      sample_args);
    auto *compare = add_config_command(app, "compare",
                                       "classical vs quantum deviation report",
                                       compare_args);
    auto *bounds = add_config_command(app, "bound-check",
                                      "dense Trotter error vs analytic bounds",
                                      bound_args);

    int n_max = 5;
    std::string complexity_out = ".";
    auto *complexity = app.add_subcommand("complexity", "CNOT-count table");
    complexity->add_option("--n-max", n_max, "largest system qubit count")
        ->check(CLI::Range(1, 30));
    complexity->add_option("--out", complexity_out, "output directory");

    CLI11_PARSE(app, argc, argv);

    auto &out = std::cout;
    try {
        if (*classical) {
            return run_with_config(classical_args, [&](const auto &c) {
                return capdil::cmd_evolve_classical(c, out);
            });
        }
        if (*quantum) {
            return run_with_config(quantum_args, [&](const auto &c) {
                return capdil::cmd_evolve_quantum(c, out);
            });
        }
        if (*sample) {
            return run_with_config(sample_args,
                                   [&](const auto &c) { return capdil::cmd_sample(c, out); });
        }
        if (*compare) {
            return run_with_config(compare_args,
                                   [&](const auto &c) { return capdil::cmd_compare(c, out); });
        }
        if (*bounds) {
            return run_with_config(bound_args, [&](const auto &c) {
                return capdil::cmd_bound_check(c, out);
            });
        }
        if (*complexity) {
            return capdil::cmd_complexity(n_max, complexity_out, out);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return capdil::kExitValidationFailure;
    }
    return capdil::kExitOk;
}
