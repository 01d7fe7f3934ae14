// Copyright 2026 The QVPG Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qvpg/cli.hpp"

namespace {

using qvpg::cli::RunOptions;

template <class T> std::vector<T> parse_list(const std::string &text, const char *flag) {
    std::vector<T> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw CLI::ValidationError(flag, "expected a comma-separated list of integers");
        }
        out.push_back(static_cast<T>(v));
    }
    if (out.empty()) {
        throw CLI::ValidationError(flag, "list is empty");
    }
    return out;
}

void add_run_flags(CLI::App &cmd, RunOptions &opts, std::string &classes) {
    auto &cfg = opts.config;
    cmd.add_option("--data", opts.data_path, "CSV file: header, numeric features, class name")
        ->required();
    cmd.add_option("--classes", classes, "Class pair A,B (A -> label 0, B -> label 1)")
        ->capture_default_str();
    cmd.add_option("--epochs", cfg.epochs, "Training epochs")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--batch", cfg.batch_size, "Minibatch size")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--lr", cfg.learning_rate, "SGD learning rate")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--layers", opts.layers, "Ansatz layers")->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--grover-iters", cfg.grover_iterations, "Grover iterations in the QVP-G block")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--shots", cfg.shots, "Measure accuracies from N shots instead of exactly");
    cmd.add_option("--split", opts.split_fraction, "Training fraction of the stratified split")
        ->capture_default_str();
    cmd.add_option("--threshold", cfg.threshold, "Decision threshold on P(readout = 1)")
        ->capture_default_str();
    cmd.add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    cmd.add_flag("--cp-shuffle", cfg.cp_shuffle, "Reshuffle the perceptron's data every epoch");
    cmd.add_flag("--cp-random-init", cfg.cp_random_init,
                 "Start the perceptron from small seeded random weights");
}

bool apply_classes(const std::string &text, RunOptions &opts) {
    const auto comma = text.find(',');
    if (comma == std::string::npos || comma == 0 || comma + 1 == text.size() ||
        text.find(',', comma + 1) != std::string::npos) {
        std::cerr << "error: --classes expects exactly two names, e.g. setosa,versicolor\n";
        return false;
    }
    opts.classes = {text.substr(0, comma), text.substr(comma + 1)};
    return true;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Statevector simulation and benchmark runs for classical, variational and "
                 "Grover-amplified perceptrons"};
    app.require_subcommand(1);

    std::vector<std::string> args(argv, argv + argc);

    // grover
    qvpg::cli::GroverOptions grover_opts;
    std::string marked_text;
    std::size_t grover_iters = 0;
    auto *grover = app.add_subcommand("grover", "Run Grover search and report success probabilities");
    grover->add_option("--qubits", grover_opts.n_qubits, "Number of qubits")->required();
    grover->add_option("--marked", marked_text, "Marked basis indices, comma-separated")->required();
    auto *iters_opt = grover->add_option("--iterations", grover_iters, "Iterations to report");
    grover->add_option("--shots", grover_opts.shots, "Sample the final state N times");
    grover->add_option("--seed", grover_opts.seed, "Sampling seed");

    // train
    RunOptions train_opts;
    std::string train_classes = "setosa,versicolor";
    std::string model_name;
    auto *train = app.add_subcommand("train", "Train one model and write metrics");
    train->add_option("model", model_name, "cp, qvp or qvpg")
        ->required()
        ->check(CLI::IsMember({"cp", "qvp", "qvpg"}));
    add_run_flags(*train, train_opts, train_classes);
    train->add_option("--seed", train_opts.config.seed, "Run seed")->capture_default_str();

    // compare
    qvpg::cli::CompareOptions compare_opts;
    std::string compare_classes = "setosa,versicolor";
    std::string seeds_text = "1,2,3,4,5";
    auto *compare = app.add_subcommand("compare", "Train all three models over several seeds");
    add_run_flags(*compare, compare_opts.run, compare_classes);
    compare->add_option("--seeds", seeds_text, "Comma-separated seeds")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (*grover) {
            grover_opts.marked = parse_list<std::size_t>(marked_text, "--marked");
            if (iters_opt->count() > 0) {
                grover_opts.iterations = grover_iters;
            }
        }
        if (*compare) {
            compare_opts.seeds = parse_list<std::uint64_t>(seeds_text, "--seeds");
        }
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : qvpg::cli::kExitUsage;
    }

    if (*grover) {
        return qvpg::cli::cmd_grover(grover_opts, std::cout, std::cerr);
    }
    if (*train) {
        if (!apply_classes(train_classes, train_opts)) {
            return qvpg::cli::kExitUsage;
        }
        train_opts.argv = args;
        return qvpg::cli::cmd_train(qvpg::trainer::parse_model_kind(model_name), train_opts,
                                    std::cout, std::cerr);
    }
    if (!apply_classes(compare_classes, compare_opts.run)) {
        return qvpg::cli::kExitUsage;
    }
    compare_opts.run.argv = args;
    return qvpg::cli::cmd_compare(compare_opts, std::cout, std::cerr);
}
