//
// Copyright 2026 The ldikit Authors
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
//

#pragma once

#include <stdexcept>
#include <string>

namespace ldikit {

/// Invalid configuration value or malformed user input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Rasters that are required to share dimensions do not.
class DimensionError : public std::runtime_error {
public:
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Geometric precondition violated (e.g. camera outside the room).
class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A reduction over an empty pixel set was requested.
class EmptyMaskError : public std::runtime_error {
public:
    explicit EmptyMaskError(const std::string& msg) : std::runtime_error(msg) {}
};

/// File-system level failure: missing file, unreadable, unwritable.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

/// On-disk data is structurally broken: bad magic, truncation,
/// unrecognized version.
class FormatError : public std::runtime_error {
public:
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A class name or id that is not present in the class table.
class UnknownClassError : public std::runtime_error {
public:
    explicit UnknownClassError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ldikit
