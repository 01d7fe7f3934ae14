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
 * Dataset handling and training loops for the three classifiers.
 *
 * Quantum models minimize the mean binary cross-entropy of pi(x; theta)
 * with plain minibatch SGD. The classical perceptron runs one mistake-driven
 * pass per epoch and reports its mistake rate as the loss.
 */

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <variant>
#include <vector>

#include "qvpg/classical.hpp"
#include "qvpg/errors.hpp"
#include "qvpg/grover.hpp"
#include "qvpg/rng.hpp"
#include "qvpg/vqp.hpp"

namespace qvpg::trainer {

using vqp::FeatureVector;

struct Sample {
    FeatureVector x;
    int label = 0; // 0 or 1

    bool operator==(const Sample &) const = default;
};

struct Dataset {
    std::vector<Sample> samples;
    std::vector<std::string> feature_names;
    std::pair<std::string, std::string> class_names;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] bool empty() const { return samples.empty(); }
    [[nodiscard]] std::size_t dim() const { return samples.empty() ? 0 : samples.front().x.size(); }

    [[nodiscard]] std::size_t count_label(int label) const {
        return static_cast<std::size_t>(std::count_if(
            samples.begin(), samples.end(), [label](const Sample &s) { return s.label == label; }));
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(trim(line.substr(start)));
            return out;
        }
        out.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

inline bool parse_double(std::string_view text, double &out) {
    if (text.empty()) {
        return false;
    }
    if (text.front() == '+') {
        text.remove_prefix(1);
    }
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size() && std::isfinite(out);
}

} // namespace detail

/**
 * Reads a comma-separated file with a header row, numeric feature columns
 * and a trailing class-name column. Only rows of the two named classes are
 * kept; the first name becomes label 0 and the second label 1.
 */
inline Dataset load_csv(const std::string &path,
                        const std::pair<std::string, std::string> &class_pair) {
    if (class_pair.first == class_pair.second) {
        throw EmptyDatasetError("class pair names the same class twice: " + class_pair.first);
    }
    std::ifstream in(path);
    if (!in) {
        throw MissingFileError("cannot open data file: " + path);
    }

    Dataset d;
    d.class_names = class_pair;
    std::string line;
    if (!std::getline(in, line)) {
        throw EmptyDatasetError("data file is empty: " + path);
    }
    const auto header = detail::split_fields(line);
    if (header.size() < 2) {
        throw MalformedRowError(path + ":1: header needs feature columns and a class column");
    }
    for (std::size_t i = 0; i + 1 < header.size(); ++i) {
        d.feature_names.emplace_back(header[i]);
    }
    const std::size_t n_features = d.feature_names.size();

    bool seen_first = false;
    bool seen_second = false;
    std::size_t line_no = 1;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (detail::trim(line).empty()) {
            continue;
        }
        const auto fields = detail::split_fields(line);
        const std::string where = path + ":" + std::to_string(line_no);
        if (fields.size() != n_features + 1) {
            throw MalformedRowError(where + ": expected " + std::to_string(n_features + 1) +
                                    " fields, got " + std::to_string(fields.size()));
        }
        ++rows;
        FeatureVector x(n_features);
        for (std::size_t i = 0; i < n_features; ++i) {
            if (!detail::parse_double(fields[i], x[i])) {
                throw MalformedRowError(where + ": not a number: '" + std::string(fields[i]) + "'");
            }
        }
        const std::string_view cls = fields.back();
        if (cls.empty()) {
            throw MalformedRowError(where + ": missing class name");
        }
        if (cls == class_pair.first) {
            seen_first = true;
            d.samples.push_back(Sample{std::move(x), 0});
        } else if (cls == class_pair.second) {
            seen_second = true;
            d.samples.push_back(Sample{std::move(x), 1});
        }
    }

    if (rows == 0) {
        throw EmptyDatasetError("data file has a header but no rows: " + path);
    }
    if (!seen_first) {
        throw UnknownClassError("class '" + class_pair.first + "' does not occur in " + path);
    }
    if (!seen_second) {
        throw UnknownClassError("class '" + class_pair.second + "' does not occur in " + path);
    }
    if (d.count_label(0) < 2 || d.count_label(1) < 2) {
        throw EmptyDatasetError("each class needs at least two rows in " + path);
    }
    return d;
}

inline constexpr double kRescaleFloor = 1e-3;

/// Maps every feature column affinely onto [1e-3, 1].
inline Dataset rescale_minmax(Dataset d) {
    if (d.empty()) {
        throw ArgumentError("rescale_minmax: empty dataset");
    }
    const std::size_t dim = d.dim();
    for (std::size_t j = 0; j < dim; ++j) {
        double lo = d.samples.front().x[j];
        double hi = lo;
        for (const auto &s : d.samples) {
            lo = std::min(lo, s.x[j]);
            hi = std::max(hi, s.x[j]);
        }
        if (!(hi > lo)) {
            const std::string name = j < d.feature_names.size() ? d.feature_names[j]
                                                                : "#" + std::to_string(j);
            throw DegenerateFeatureError("feature " + name + " is constant");
        }
        const double span = hi - lo;
        for (auto &s : d.samples) {
            s.x[j] = kRescaleFloor + (1.0 - kRescaleFloor) * (s.x[j] - lo) / span;
        }
    }
    return d;
}

/**
 * Stratified split. Samples of each label are shuffled with `seed` (label 0
 * first), and round(train_fraction * count) of them go to the training side.
 * Both sides must end up with both labels.
 */
inline std::pair<Dataset, Dataset> split(const Dataset &d, double train_fraction,
                                         std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ArgumentError("split: train fraction must lie in (0, 1)");
    }
    Rng rng(seed);
    Dataset train{{}, d.feature_names, d.class_names};
    Dataset valid{{}, d.feature_names, d.class_names};
    for (const int label : {0, 1}) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < d.samples.size(); ++i) {
            if (d.samples[i].label == label) {
                idx.push_back(i);
            }
        }
        rng.shuffle(std::span(idx));
        const auto n_train =
            static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(idx.size())));
        if (n_train == 0 || n_train >= idx.size()) {
            throw ArgumentError("split: fraction " + std::to_string(train_fraction) +
                                " leaves a side without label " + std::to_string(label));
        }
        for (std::size_t k = 0; k < idx.size(); ++k) {
            (k < n_train ? train : valid).samples.push_back(d.samples[idx[k]]);
        }
    }
    return {std::move(train), std::move(valid)};
}

inline constexpr double kProbClamp = 1e-9;

inline double clamp_probability(double p) { return std::clamp(p, kProbClamp, 1.0 - kProbClamp); }

/// Binary cross-entropy on the clamped probability.
inline double bce_loss(double p, int y) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("bce_loss: probability outside [0, 1]");
    }
    if (y != 0 && y != 1) {
        throw ArgumentError("bce_loss: label must be 0 or 1");
    }
    const double q = clamp_probability(p);
    return y == 1 ? -std::log(q) : -std::log(1.0 - q);
}

/// d bce / d p at the clamped probability: (q - y) / (q (1 - q)).
inline double bce_derivative(double p, int y) {
    const double q = clamp_probability(p);
    return (q - static_cast<double>(y)) / (q * (1.0 - q));
}

struct LossAndGrad {
    double loss = 0.0;
    vqp::GradientVector grad;
};

/// Mean loss and mean gradient over `batch`; summation follows batch order.
inline LossAndGrad loss_and_grad(const vqp::AnsatzSpec &spec, const vqp::AnsatzParams &params,
                                 std::span<const Sample> batch, const vqp::OptionalBlock &block) {
    if (batch.empty()) {
        throw ArgumentError("loss_and_grad: empty batch");
    }
    LossAndGrad out;
    out.grad.assign(spec.n_params(), 0.0);
    for (const auto &s : batch) {
        const auto g = vqp::gradient_with_stats(spec, params, s.x, block);
        out.loss += bce_loss(g.value, s.label);
        const double scale = bce_derivative(g.value, s.label);
        for (std::size_t k = 0; k < out.grad.size(); ++k) {
            out.grad[k] += scale * g.grad[k];
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    out.loss *= inv;
    for (auto &v : out.grad) {
        v *= inv;
    }
    return out;
}

/// Mean loss over `data` without gradients.
inline double mean_loss(const vqp::AnsatzSpec &spec, const vqp::AnsatzParams &params,
                        std::span<const Sample> data, const vqp::OptionalBlock &block) {
    double total = 0.0;
    for (const auto &s : data) {
        total += bce_loss(vqp::forward(spec, params, s.x, block), s.label);
    }
    return total / static_cast<double>(data.size());
}

/// Fraction of samples where predict(x) equals the stored label.
template <class PredictFn> double accuracy(PredictFn &&predict, std::span<const Sample> data) {
    if (data.empty()) {
        throw ArgumentError("accuracy: empty dataset");
    }
    std::size_t correct = 0;
    for (const auto &s : data) {
        if (std::invoke(predict, s.x) == s.label) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

inline int to_signed_label(int label) { return label == 1 ? 1 : -1; }
inline int from_signed_label(int y) { return y == 1 ? 1 : 0; }

inline std::vector<classical::SignedSample> to_signed(std::span<const Sample> data) {
    std::vector<classical::SignedSample> out;
    out.reserve(data.size());
    for (const auto &s : data) {
        if (s.label != 0 && s.label != 1) {
            throw ArgumentError("label must be 0 or 1");
        }
        out.push_back(classical::SignedSample{s.x, to_signed_label(s.label)});
    }
    return out;
}

inline std::vector<Sample> from_signed(std::span<const classical::SignedSample> data) {
    std::vector<Sample> out;
    out.reserve(data.size());
    for (const auto &s : data) {
        out.push_back(Sample{s.x, from_signed_label(s.y)});
    }
    return out;
}

enum class ModelKind { CP, QVP, QVPG };

inline std::string to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::CP:
        return "cp";
    case ModelKind::QVP:
        return "qvp";
    case ModelKind::QVPG:
        return "qvpg";
    }
    return "?";
}

inline ModelKind parse_model_kind(std::string_view name) {
    if (name == "cp") {
        return ModelKind::CP;
    }
    if (name == "qvp") {
        return ModelKind::QVP;
    }
    if (name == "qvpg") {
        return ModelKind::QVPG;
    }
    throw ArgumentError("unknown model kind '" + std::string(name) + "' (expected cp, qvp or qvpg)");
}

struct TrainConfig {
    std::size_t epochs = 100;
    std::size_t batch_size = 16;
    double learning_rate = 0.5;
    std::uint64_t seed = 42;
    ModelKind model_kind = ModelKind::QVP;
    double threshold = 0.5;
    std::size_t grover_iterations = 1;
    vqp::AnsatzSpec ansatz = vqp::AnsatzSpec::chain(2, 2);
    // Perceptron only: seeded [-0.01, 0.01] start instead of zeros, and per-epoch reshuffling.
    bool cp_random_init = false;
    bool cp_shuffle = false;
    // When positive, accuracies are measured from this many shots per sample
    // instead of exact probabilities. Gradients always use exact probabilities.
    std::size_t shots = 0;

    void validate(std::size_t train_size) const {
        if (epochs < 1) {
            throw ArgumentError("epochs must be positive");
        }
        if (batch_size < 1 || batch_size > train_size) {
            throw ArgumentError("batch size must lie in [1, training-set size]");
        }
        if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
            throw ArgumentError("learning rate must be positive");
        }
        if (!(threshold > 0.0 && threshold < 1.0)) {
            throw ArgumentError("threshold must lie in (0, 1)");
        }
        if (grover_iterations < 1) {
            throw ArgumentError("grover iterations must be positive");
        }
        ansatz.validate();
    }
};

struct MetricsRow {
    std::size_t iter = 0;
    double acc_train = 0.0;
    double acc_valid = 0.0;
    double loss_train = 0.0;

    bool operator==(const MetricsRow &) const = default;
};

using TrainedModel = std::variant<classical::PerceptronModel, vqp::AnsatzParams>;

struct TrainResult {
    std::vector<MetricsRow> history;
    TrainedModel model;
};

/// The Grover block used by a QVP-G run, or nothing for the other kinds.
inline vqp::OptionalBlock block_for(const TrainConfig &config) {
    if (config.model_kind != ModelKind::QVPG) {
        return std::nullopt;
    }
    return grover::qvpg_block(config.ansatz.n_qubits, config.ansatz.readout,
                              config.grover_iterations);
}

namespace detail {

inline void check_finite(double v, std::size_t epoch, const char *what) {
    if (!std::isfinite(v)) {
        throw NumericalError(std::string("non-finite ") + what + " in epoch " +
                             std::to_string(epoch));
    }
}

inline TrainResult train_perceptron(const Dataset &train_set, const Dataset &valid_set,
                                    const TrainConfig &config) {
    Rng rng(config.seed);
    auto model = config.cp_random_init ? classical::PerceptronModel::random(train_set.dim(), rng)
                                       : classical::PerceptronModel::zeros(train_set.dim());
    auto data = to_signed(train_set.samples);
    auto predict = [&model](const FeatureVector &x) {
        return from_signed_label(classical::cp_predict(model, x));
    };

    TrainResult result;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        if (config.cp_shuffle) {
            rng.shuffle(std::span(data));
        }
        auto step = classical::cp_train_epoch(std::move(model), data);
        model = std::move(step.model);
        MetricsRow row;
        row.iter = epoch;
        row.loss_train = static_cast<double>(step.mistakes) / static_cast<double>(data.size());
        row.acc_train = accuracy(predict, train_set.samples);
        row.acc_valid = accuracy(predict, valid_set.samples);
        result.history.push_back(row);
    }
    result.model = std::move(model);
    return result;
}

inline TrainResult train_quantum(const Dataset &train_set, const Dataset &valid_set,
                                 const TrainConfig &config) {
    const auto &spec = config.ansatz;
    const auto block = block_for(config);
    Rng rng(config.seed);
    auto params = vqp::AnsatzParams::random(spec, rng);

    std::uint64_t shot_seed = config.seed;
    auto predict = [&](const FeatureVector &x) {
        const double p = config.shots > 0
                             ? vqp::forward_sampled(spec, params, x, block, config.shots, shot_seed++)
                             : vqp::forward(spec, params, x, block);
        return vqp::predict_from_probability(p, config.threshold);
    };

    std::vector<Sample> order = train_set.samples;
    TrainResult result;
    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        rng.shuffle(std::span(order));
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const auto step = loss_and_grad(
                spec, params, std::span<const Sample>(order).subspan(start, stop - start), block);
            check_finite(step.loss, epoch, "batch loss");
            for (std::size_t k = 0; k < params.values.size(); ++k) {
                check_finite(step.grad[k], epoch, "gradient");
                params.values[k] -= config.learning_rate * step.grad[k];
            }
        }
        MetricsRow row;
        row.iter = epoch;
        row.loss_train = mean_loss(spec, params, train_set.samples, block);
        check_finite(row.loss_train, epoch, "training loss");
        row.acc_train = accuracy(predict, train_set.samples);
        row.acc_valid = accuracy(predict, valid_set.samples);
        result.history.push_back(row);
    }
    result.model = std::move(params);
    return result;
}

} // namespace detail

inline TrainResult train(const Dataset &train_set, const Dataset &valid_set,
                         const TrainConfig &config) {
    if (train_set.empty() || valid_set.empty()) {
        throw ArgumentError("train: training and validation sets must be non-empty");
    }
    if (train_set.dim() != valid_set.dim()) {
        throw ArgumentError("train: training and validation feature dimensions differ");
    }
    config.validate(train_set.size());
    if (config.model_kind == ModelKind::CP) {
        return detail::train_perceptron(train_set, valid_set, config);
    }
    return detail::train_quantum(train_set, valid_set, config);
}

inline std::string format_fixed(double v, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

/// `iter,acc_train,acc_valid,loss_train` with six decimals per float.
inline void write_metrics_csv(std::ostream &out, std::span<const MetricsRow> history) {
    out << "iter,acc_train,acc_valid,loss_train\n";
    for (const auto &r : history) {
        out << r.iter << ',' << format_fixed(r.acc_train) << ',' << format_fixed(r.acc_valid) << ','
            << format_fixed(r.loss_train) << '\n';
    }
}

inline std::string metrics_csv(std::span<const MetricsRow> history) {
    std::ostringstream out;
    write_metrics_csv(out, history);
    return out.str();
}

} // namespace qvpg::trainer
