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
 * Exception types shared by the library. Every error derives from
 * qvpg::Error so callers can catch the whole family at once; the CLI maps
 * the concrete types onto its exit codes.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace qvpg {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (qubit counts, sizes).
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// A call was made with an argument outside its documented domain.
class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A feature vector could not be turned into a quantum state.
class EncodingError : public Error {
  public:
    using Error::Error;
};

/// Base class for everything that can go wrong while reading a dataset.
class IngestionError : public Error {
  public:
    using Error::Error;
};

class MissingFileError : public IngestionError {
  public:
    using IngestionError::IngestionError;
};

class MalformedRowError : public IngestionError {
  public:
    using IngestionError::IngestionError;
};

class UnknownClassError : public IngestionError {
  public:
    using IngestionError::IngestionError;
};

/// The rows that survived class filtering do not form a two-class problem.
class EmptyDatasetError : public IngestionError {
  public:
    using IngestionError::IngestionError;
};

class DegenerateFeatureError : public Error {
  public:
    using Error::Error;
};

/// Training produced a non-finite value and was aborted.
class NumericalError : public Error {
  public:
    using Error::Error;
};

} // namespace qvpg
