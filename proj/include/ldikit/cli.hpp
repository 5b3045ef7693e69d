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

#include <cstdint>
#include <optional>
#include <string>

#include "ldikit/render.hpp"
#include "ldikit/scenegen.hpp"

namespace ldikit::cli {

// Exit codes, also listed in --help.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitFormat = 4;
inline constexpr int kExitDimension = 5;
inline constexpr int kExitGeometry = 6;
inline constexpr int kExitUnknownClass = 7;
inline constexpr int kExitEmptyMask = 8;
inline constexpr int kExitInternal = 9;

struct GenOptions {
    std::uint64_t seed = 0;
    int count = 1;
    GenerationConfig config;
    std::string out;
    int threads = 0; // 0 = hardware default
};

struct GenSummary {
    int accepted = 0;
    int attempted = 0;
    double acceptance_ratio() const {
        return attempted == 0 ? 0.0 : static_cast<double>(accepted) / attempted;
    }
};

/// Generates `count` accepted scenes under out/scene_NNN (stack, detector
/// outputs, perturbed-pose target view) and records the effective
/// configuration. Deterministic in (options, seed).
GenSummary cmd_gen(const GenOptions& options);

struct ComposeOptions {
    std::string scene;
    std::string out;
    double alpha_min = 0.5;
};

/// Writes the pooled image, depth and a color-coded index map.
void cmd_compose(const ComposeOptions& options);

struct SynthOptions {
    std::string scene;
    std::string out;
    /// "tx,ty,tz,rx,ry,rz" in meters and degrees (rotation applied
    /// yaw -> pitch -> roll); when absent the scene's stored target pose
    /// is used.
    std::optional<std::string> pose;
    WarpConfig warp;
};

struct SynthSummary {
    double fill_ratio = 0.0; // fraction of valid output pixels
};

SynthSummary cmd_synth(const SynthOptions& options);

struct RemoveOptions {
    std::string scene;
    std::string out;
    std::string class_name;
};

void cmd_remove(const RemoveOptions& options);

struct EvalOptions {
    std::string pred;
    std::string gt;
    std::string report;
};

/// Compares two scene directories (full per-layer protocol) or two plain
/// view-image directories (image metrics only) and writes a JSON report.
void cmd_eval(const EvalOptions& options);

/// Argument parsing + dispatch; returns a documented exit code.
int run_cli(int argc, const char* const* argv);

} // namespace ldikit::cli
