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
/**
 * @file
 * Command implementations behind the `qvpg` executable.
 *
 * Each command takes parsed options plus output/diagnostic streams and
 * returns a process exit code:
 *   0  success
 *   2  usage or input error (bad flags, unreadable data, unwritable output)
 *   3  numerical abort during training
 */

#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "qvpg/errors.hpp"
#include "qvpg/grover.hpp"
#include "qvpg/trainer.hpp"
#include "qvpg/vqp.hpp"

namespace qvpg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

struct GroverOptions {
    std::size_t n_qubits = 2;
    std::vector<std::size_t> marked;
    std::optional<std::size_t> iterations;
    std::size_t shots = 0;
    std::uint64_t seed = 42;
};

/// Flags shared by `train` and `compare`.
struct RunOptions {
    std::string data_path;
    std::pair<std::string, std::string> classes{"setosa", "versicolor"};
    trainer::TrainConfig config;
    std::size_t layers = 2;
    double split_fraction = 0.7;
    std::string out_dir = ".";
    std::vector<std::string> argv; // recorded verbatim in the manifest
};

struct CompareOptions {
    RunOptions run;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
};

inline std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Writes `contents` to `path` through a sibling temporary file and a rename.
inline void write_atomic(const fs::path &path, const std::string &contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ArgumentError("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            throw ArgumentError("failed writing " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

inline void ensure_output_dir(const fs::path &dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw ArgumentError("cannot create output directory " + dir.string() +
                            (ec ? ": " + ec.message() : ""));
    }
    // Probe writability up front so a bad --out fails before any training work.
    write_atomic(dir / ".qvpg_write_probe", "");
    fs::remove(dir / ".qvpg_write_probe", ec);
}

inline json config_json(const RunOptions &opts, const trainer::TrainConfig &config) {
    json entangler = json::array();
    for (const auto &layer : config.ansatz.entangler) {
        json pairs = json::array();
        for (const auto &[c, t] : layer) {
            pairs.push_back({c, t});
        }
        entangler.push_back(pairs);
    }
    return json{
        {"batch", config.batch_size},
        {"classes", {opts.classes.first, opts.classes.second}},
        {"cp_random_init", config.cp_random_init},
        {"cp_shuffle", config.cp_shuffle},
        {"entangler", entangler},
        {"epochs", config.epochs},
        {"grover_iters", config.grover_iterations},
        {"layers", config.ansatz.n_layers},
        {"lr", config.learning_rate},
        {"qubits", config.ansatz.n_qubits},
        {"readout", config.ansatz.readout},
        {"seed", config.seed},
        {"shots", config.shots},
        {"split", opts.split_fraction},
        {"threshold", config.threshold},
    };
}

inline json manifest_json(const std::string &command, const RunOptions &opts, json config) {
    return json{
        {"argv", opts.argv},
        {"command", command},
        {"config", std::move(config)},
        {"input_path", fs::absolute(opts.data_path).string()},
        {"output_dir", fs::absolute(opts.out_dir).string()},
        {"timestamp", utc_timestamp()},
    };
}

inline json model_json(const trainer::TrainConfig &config, const trainer::TrainedModel &model) {
    if (const auto *cp = std::get_if<classical::PerceptronModel>(&model)) {
        return json{{"kind", "cp"}, {"w", cp->w}, {"b", cp->b}};
    }
    const auto &params = std::get<vqp::AnsatzParams>(model);
    json out{
        {"kind", trainer::to_string(config.model_kind)},
        {"shape", {params.n_layers, params.n_qubits, 3}},
        {"angles", params.values},
        {"readout", config.ansatz.readout},
    };
    if (config.model_kind == trainer::ModelKind::QVPG) {
        out["grover_iters"] = config.grover_iterations;
    }
    return out;
}

/// Ansatz width follows the feature count: ceil(log2(dim)) qubits, at least 2.
inline std::size_t qubits_for_features(std::size_t dim) {
    std::size_t n = 1;
    while ((std::size_t{1} << n) < dim) {
        ++n;
    }
    return std::max<std::size_t>(n, 2);
}

struct PreparedData {
    trainer::Dataset train;
    trainer::Dataset valid;
};

inline PreparedData prepare_data(const RunOptions &opts, std::uint64_t seed) {
    auto data = trainer::rescale_minmax(trainer::load_csv(opts.data_path, opts.classes));
    auto [train, valid] = trainer::split(data, opts.split_fraction, seed);
    return PreparedData{std::move(train), std::move(valid)};
}

inline trainer::TrainConfig resolve_config(const RunOptions &opts, trainer::ModelKind kind,
                                           std::uint64_t seed, std::size_t feature_dim) {
    trainer::TrainConfig config = opts.config;
    config.model_kind = kind;
    config.seed = seed;
    config.ansatz = vqp::AnsatzSpec::chain(qubits_for_features(feature_dim), opts.layers);
    return config;
}

template <class Fn> int guarded(std::ostream &err, Fn &&body) {
    try {
        return body();
    } catch (const NumericalError &e) {
        err << "error: numerical abort: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const fs::filesystem_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

inline int cmd_grover(const GroverOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const grover::OracleSpec spec(opts.n_qubits, opts.marked);
        const std::size_t optimal = grover::optimal_iterations(spec.n_states(), spec.marked.size());
        const std::size_t last = std::max(opts.iterations.value_or(optimal), optimal);

        out << "qubits " << spec.n_qubits << ", marked";
        for (const auto m : spec.marked) {
            out << ' ' << m;
        }
        out << ", optimal_iterations " << optimal << '\n';
        out << "iteration,success_prob,closed_form\n";
        for (std::size_t k = 0; k <= last; ++k) {
            const auto result = grover::grover_search(spec, k);
            out << k << ',' << trainer::format_fixed(result.success_prob) << ','
                << trainer::format_fixed(grover::success_probability_closed_form(
                       spec.n_states(), spec.marked.size(), k))
                << '\n';
        }
        if (opts.shots > 0) {
            const std::size_t k = opts.iterations.value_or(optimal);
            const auto result = grover::grover_search(spec, k);
            out << "counts after " << k << " iterations (" << opts.shots << " shots)\n";
            for (const auto &[index, count] : sim::sample_counts(result.state, opts.shots, opts.seed)) {
                out << index << ',' << count << '\n';
            }
        }
        return kExitOk;
    });
}

inline int cmd_train(trainer::ModelKind kind, const RunOptions &opts, std::ostream &out,
                     std::ostream &err) {
    return guarded(err, [&] {
        const fs::path dir(opts.out_dir);
        ensure_output_dir(dir);
        const auto data = prepare_data(opts, opts.config.seed);
        const auto config = resolve_config(opts, kind, opts.config.seed, data.train.dim());
        const auto result = trainer::train(data.train, data.valid, config);

        write_atomic(dir / "metrics.csv", trainer::metrics_csv(result.history));
        write_atomic(dir / "final_model.json", model_json(config, result.model).dump(2) + "\n");
        json manifest = manifest_json("train", opts, config_json(opts, config));
        manifest["model"] = trainer::to_string(kind);
        write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

        const auto &last = result.history.back();
        out << trainer::to_string(kind) << " seed " << config.seed << ": iter " << last.iter
            << " acc_train " << trainer::format_fixed(last.acc_train) << " acc_valid "
            << trainer::format_fixed(last.acc_valid) << " loss_train "
            << trainer::format_fixed(last.loss_train) << '\n';
        return kExitOk;
    });
}

inline double median(std::vector<double> v) {
    if (v.empty()) {
        throw ArgumentError("median of an empty list");
    }
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

/// Iterations 1, 10, 15, ..., up to `epochs` (the last epoch is always included).
inline std::vector<std::size_t> table_iterations(std::size_t epochs) {
    std::vector<std::size_t> iters{1};
    for (std::size_t i = 10; i <= epochs; i += 5) {
        iters.push_back(i);
    }
    if (iters.back() != epochs) {
        iters.push_back(epochs);
    }
    return iters;
}

inline const std::vector<trainer::ModelKind> &all_models() {
    static const std::vector<trainer::ModelKind> kinds{
        trainer::ModelKind::CP, trainer::ModelKind::QVP, trainer::ModelKind::QVPG};
    return kinds;
}

/// Per-model, per-seed histories from a comparison run.
using ComparisonRuns = std::map<trainer::ModelKind, std::vector<std::vector<trainer::MetricsRow>>>;

/// Median over seeds of one metric at epoch `iter` (1-based).
template <class Field>
double median_at(const std::vector<std::vector<trainer::MetricsRow>> &runs, std::size_t iter,
                 Field field) {
    std::vector<double> values;
    for (const auto &history : runs) {
        values.push_back(history.at(iter - 1).*field);
    }
    return median(values);
}

inline std::string comparison_table(const ComparisonRuns &runs, std::size_t epochs) {
    using trainer::MetricsRow;
    std::ostringstream t;
    t << "        CP                  QVP                 QVP-G\n";
    t << "Iter    Acc train Acc valid Acc train Acc valid Acc train Acc valid\n";
    for (const auto iter : table_iterations(epochs)) {
        char line[128];
        std::snprintf(line, sizeof line, "%-7zu", iter);
        t << line;
        for (const auto kind : all_models()) {
            std::snprintf(line, sizeof line, " %9.4f %9.4f",
                          median_at(runs.at(kind), iter, &MetricsRow::acc_train),
                          median_at(runs.at(kind), iter, &MetricsRow::acc_valid));
            t << line;
        }
        t << '\n';
    }
    return t.str();
}

inline int cmd_compare(const CompareOptions &opts, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        if (opts.seeds.empty()) {
            throw ArgumentError("compare: no seeds given");
        }
        const fs::path dir(opts.run.out_dir);
        ensure_output_dir(dir);

        ComparisonRuns runs;
        std::ostringstream csv;
        csv << "model,seed,iter,acc_train,acc_valid,loss_train\n";
        trainer::TrainConfig reference;
        for (const auto kind : all_models()) {
            for (const auto seed : opts.seeds) {
                const auto data = prepare_data(opts.run, seed);
                const auto config = resolve_config(opts.run, kind, seed, data.train.dim());
                reference = config;
                auto result = trainer::train(data.train, data.valid, config);
                for (const auto &r : result.history) {
                    csv << trainer::to_string(kind) << ',' << seed << ',' << r.iter << ','
                        << trainer::format_fixed(r.acc_train) << ','
                        << trainer::format_fixed(r.acc_valid) << ','
                        << trainer::format_fixed(r.loss_train) << '\n';
                }
                runs[kind].push_back(std::move(result.history));
            }
        }

        const std::size_t epochs = opts.run.config.epochs;
        const std::string table = comparison_table(runs, epochs);
        write_atomic(dir / "comparison.csv", csv.str());
        write_atomic(dir / "table.txt", table);
        for (const auto kind : all_models()) {
            std::ostringstream dat;
            dat << "# iter median_loss_train\n";
            for (std::size_t iter = 1; iter <= epochs; ++iter) {
                dat << iter << ' '
                    << trainer::format_fixed(
                           median_at(runs.at(kind), iter, &trainer::MetricsRow::loss_train))
                    << '\n';
            }
            write_atomic(dir / ("loss_" + trainer::to_string(kind) + ".dat"), dat.str());
        }
        json config = config_json(opts.run, reference);
        config.erase("seed");
        json manifest = manifest_json("compare", opts.run, std::move(config));
        manifest["seeds"] = opts.seeds;
        write_atomic(dir / "manifest.json", manifest.dump(2) + "\n");

        out << table;
        return kExitOk;
    });
}

} // namespace qvpg::cli
