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

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldikit/image.hpp"

namespace ldikit {

/// Spatial weight field for the completion loss. Every pixel carries
/// exactly one of the three weights: `occluded` on ground-truth-only
/// pixels, `visible` on the visible area plus its dilated neighborhood,
/// `background` elsewhere. Occlusion takes precedence over the band.
struct RelevanceWeights {
    double occluded = 1.5;
    double visible = 0.7;
    double background = 0.2;
};

struct RelevanceMap {
    Plane<float> weights;
};

/// Builds the relevance map from the ground-truth (full extent) mask and
/// the visible-region mask. `dilation` is the side of the square
/// structuring element (must be odd); the default is the standard 31x31.
RelevanceMap relevance_map(const Mask& gt_mask, const Mask& visible_mask,
                           int dilation = 31, const RelevanceWeights& weights = {});

/// Fixed bank of 3x3 kernels applied per channel with stride 1,
/// absolute-value activation and replicated borders; output has
/// kernel_count * channel_count planes of the input size. Stands in for a
/// pretrained feature extractor while staying deterministic; any other
/// extractor with the same signature can be swapped in.
class FeatureExtractor {
public:
    static FeatureExtractor edge_preset();
    static FeatureExtractor random_bank(std::uint64_t seed, int kernel_count);

    int kernel_count() const { return static_cast<int>(kernels_.size()); }
    const std::vector<std::array<float, 9>>& kernels() const { return kernels_; }

    std::vector<Plane<float>> apply(std::span<const Plane<float>* const> channels) const;

private:
    std::vector<std::array<float, 9>> kernels_;
};

struct LossWeights {
    double lambda_r = 100.0;
    double lambda_p = 25.0;
};

/// Mean gamma-weighted absolute error over pixels x 5 channels (RGBA +
/// depth), with its subgradient with respect to pred:
/// -gamma * sign(gt - pred) / (N * 5), sign(0) = 0.
struct CompletionLossResult {
    double value = 0.0;
    std::array<Plane<float>, 5> gradient; // r, g, b, a, depth
};

CompletionLossResult completion_loss(const RgbadImage& gt, const RgbadImage& pred,
                                     const RelevanceMap& gamma);

/// Unweighted mean absolute error over pixels x 5 channels.
double auto_loss(const RgbadImage& x, const RgbadImage& x_hat);

/// mean |color difference| + mean |depth difference| (color channels
/// averaged together, depth averaged separately).
double reconstruction_loss(std::span<const Plane<float>* const> gt_color,
                           std::span<const Plane<float>* const> pred_color,
                           const Plane<float>& gt_depth, const Plane<float>& pred_depth);
double reconstruction_loss(const RgbadImage& gt, const RgbadImage& pred);

/// reconstruction_loss plus its subgradient with respect to pred:
/// -sign(gt - pred) / (N * 4) on color channels, -sign(gt - pred) / N on
/// depth, sign(0) = 0.
struct ReconstructionLossResult {
    double value = 0.0;
    std::array<Plane<float>, 4> color_gradient;
    Plane<float> depth_gradient;
};

ReconstructionLossResult reconstruction_loss_with_gradient(const RgbadImage& gt,
                                                           const RgbadImage& pred);

/// Mean absolute difference between feature maps of the two color stacks.
double perceptual_loss(std::span<const Plane<float>* const> gt_color,
                       std::span<const Plane<float>* const> pred_color,
                       const FeatureExtractor& extractor);
double perceptual_loss(const RgbadImage& gt, const RgbadImage& pred,
                       const FeatureExtractor& extractor);

/// mean log D(real) + mean log(1 - D(fake)) with scores clamped to
/// [eps, 1-eps], eps = 1e-7. Value evaluator only.
double adversarial_value(std::span<const double> d_real, std::span<const double> d_fake);

struct LayoutLossTerms {
    double reconstruction = 0.0;
    double perceptual = 0.0;
    std::optional<double> adversarial; // empty when the GAN term is disabled
    double total = 0.0;
};

LayoutLossTerms combine_layout_terms(double l_r, double l_p, std::optional<double> l_a,
                                     const LossWeights& weights);

/// Full layout objective on a ground-truth/prediction pair. The
/// adversarial term is included only when both score lists are non-empty.
LayoutLossTerms layout_loss(const RgbadImage& gt, const RgbadImage& pred,
                            const FeatureExtractor& extractor, const LossWeights& weights,
                            std::span<const double> d_real = {},
                            std::span<const double> d_fake = {});

/// Term-name -> value record for report serialization.
std::map<std::string, double> layout_terms_record(const LayoutLossTerms& terms);

/// Greedy IoU matching: every ground-truth mask takes the unassigned
/// prediction with the highest IoU, pairs below min_iou are discarded.
/// Returns (gt_index, pred_index) pairs sorted by gt index.
std::vector<std::pair<int, int>> iou_match(std::span<const Mask> pred_masks,
                                           std::span<const Mask> gt_masks,
                                           double min_iou = 0.3);

/// Intersection over union of two masks; 0 when both are empty.
double mask_iou(const Mask& a, const Mask& b);

} // namespace ldikit
