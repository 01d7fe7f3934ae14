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
// Classical perceptron baseline with the mistake-driven update w += y x, b += y.

#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qvpg/errors.hpp"
#include "qvpg/rng.hpp"

namespace qvpg::classical {

struct PerceptronModel {
    std::vector<double> w;
    double b = 0.0;

    static PerceptronModel zeros(std::size_t dim) { return PerceptronModel{std::vector<double>(dim, 0.0), 0.0}; }

    /// Weights and bias drawn uniformly from [-0.01, 0.01].
    static PerceptronModel random(std::size_t dim, Rng &rng) {
        PerceptronModel m = zeros(dim);
        for (auto &v : m.w) {
            v = rng.uniform(-0.01, 0.01);
        }
        m.b = rng.uniform(-0.01, 0.01);
        return m;
    }

    bool operator==(const PerceptronModel &) const = default;
};

/// A training example for the perceptron; label is -1 or +1.
struct SignedSample {
    std::vector<double> x;
    int y = 1;
};

/// <w, x> + b
inline double activation(const PerceptronModel &model, std::span<const double> x) {
    if (x.size() != model.w.size()) {
        throw ArgumentError("perceptron: feature dimension " + std::to_string(x.size()) +
                            " does not match model dimension " + std::to_string(model.w.size()));
    }
    double acc = model.b;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += model.w[i] * x[i];
    }
    return acc;
}

/// sign(<w, x> + b) with sign(0) = -1.
inline int cp_predict(const PerceptronModel &model, std::span<const double> x) {
    return activation(model, x) > 0.0 ? 1 : -1;
}

struct EpochResult {
    PerceptronModel model;
    std::size_t mistakes = 0;
};

/// One pass over `data` in order, updating on every misclassified sample.
inline EpochResult cp_train_epoch(PerceptronModel model, std::span<const SignedSample> data) {
    std::size_t mistakes = 0;
    for (const auto &sample : data) {
        if (sample.y != 1 && sample.y != -1) {
            throw ArgumentError("perceptron: label must be -1 or +1, got " +
                                std::to_string(sample.y));
        }
        if (cp_predict(model, sample.x) != sample.y) {
            const double y = sample.y;
            for (std::size_t i = 0; i < model.w.size(); ++i) {
                model.w[i] += y * sample.x[i];
            }
            model.b += y;
            ++mistakes;
        }
    }
    return EpochResult{std::move(model), mistakes};
}

} // namespace qvpg::classical
