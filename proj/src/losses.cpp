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

#include "ldikit/losses.hpp"

#include <algorithm>
#include <cmath>

#include "ldikit/kernels.hpp"
#include "ldikit/rng.hpp"

namespace ldikit {

namespace {

constexpr double kScoreEps = 1e-7;

double neumaier_total(std::span<const double> values) {
    double sum = 0.0, comp = 0.0;
    for (double v : values) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }
    return sum + comp;
}

Mask dilate_square_side(const Mask& m, int side) {
    if (side <= 1) return m;
    if (side % 2 == 0) throw ConfigError("relevance_map: dilation side must be odd");
    const int radius = (side - 1) / 2;
    const int w = m.width(), h = m.height();
    Mask tmp(w, h, 0), out(w, h, 0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 0;
            for (int k = std::max(0, x - radius); k <= std::min(w - 1, x + radius); ++k)
                v |= m.at(k, y);
            tmp.at(x, y) = v;
        }
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            std::uint8_t v = 0;
            for (int k = std::max(0, y - radius); k <= std::min(h - 1, y + radius); ++k)
                v |= tmp.at(x, k);
            out.at(x, y) = v;
        }
    }
    return out;
}

// Replicated-border padded row: dst[0] = src[0], dst[1..w] = src, dst[w+1] = src[w-1].
void fill_padded_row(const Plane<float>& src, int y, std::vector<float>& dst) {
    const int w = src.width();
    const int yy = std::clamp(y, 0, src.height() - 1);
    const float* row = src.row(yy);
    dst[0] = row[0];
    std::copy(row, row + w, dst.begin() + 1);
    dst[static_cast<size_t>(w) + 1] = row[w - 1];
}

} // namespace

RelevanceMap relevance_map(const Mask& gt_mask, const Mask& visible_mask, int dilation,
                           const RelevanceWeights& weights) {
    require_same_size(gt_mask, visible_mask, "relevance_map");
    if (dilation < 1) throw ConfigError("relevance_map: dilation must be >= 1");
    const Mask band = dilate_square_side(visible_mask, dilation);

    RelevanceMap map;
    map.weights = Plane<float>(gt_mask.width(), gt_mask.height(), 0.f);
    for (size_t i = 0; i < gt_mask.size(); ++i) {
        const bool occluded = gt_mask.data()[i] && !visible_mask.data()[i];
        float w;
        if (occluded)
            w = static_cast<float>(weights.occluded);
        else if (band.data()[i])
            w = static_cast<float>(weights.visible);
        else
            w = static_cast<float>(weights.background);
        map.weights.data()[i] = w;
    }
    return map;
}

FeatureExtractor FeatureExtractor::edge_preset() {
    FeatureExtractor fe;
    fe.kernels_ = {
        // Horizontal and vertical gradient, Laplacian, diagonal ramp; all
        // zero-sum, so constant shifts produce zero response.
        std::array<float, 9>{-1, 0, 1, -2, 0, 2, -1, 0, 1},
        std::array<float, 9>{-1, -2, -1, 0, 0, 0, 1, 2, 1},
        std::array<float, 9>{0, 1, 0, 1, -4, 1, 0, 1, 0},
        std::array<float, 9>{-2, -1, 0, -1, 0, 1, 0, 1, 2},
    };
    return fe;
}

FeatureExtractor FeatureExtractor::random_bank(std::uint64_t seed, int kernel_count) {
    if (kernel_count <= 0) throw ConfigError("random_bank: kernel_count must be > 0");
    FeatureExtractor fe;
    Rng rng(seed);
    fe.kernels_.resize(static_cast<size_t>(kernel_count));
    for (auto& k : fe.kernels_) {
        float mean = 0.f;
        for (auto& v : k) {
            v = static_cast<float>(rng.uniform(-1.0, 1.0));
            mean += v;
        }
        mean /= 9.f;
        for (auto& v : k) v -= mean; // roughly zero-sum
    }
    return fe;
}

std::vector<Plane<float>> FeatureExtractor::apply(
    std::span<const Plane<float>* const> channels) const {
    std::vector<Plane<float>> out;
    out.reserve(channels.size() * kernels_.size());
    const auto& kt = kernels::table();
    for (const Plane<float>* channel : channels) {
        const int w = channel->width();
        const int h = channel->height();
        std::vector<float> row0(static_cast<size_t>(w) + 2);
        std::vector<float> row1(static_cast<size_t>(w) + 2);
        std::vector<float> row2(static_cast<size_t>(w) + 2);
        for (const auto& k : kernels_) {
            Plane<float> feat(w, h, 0.f);
            for (int y = 0; y < h; ++y) {
                fill_padded_row(*channel, y - 1, row0);
                fill_padded_row(*channel, y, row1);
                fill_padded_row(*channel, y + 1, row2);
                kt.conv3x3_abs_row(row0.data(), row1.data(), row2.data(), k.data(), w,
                                   feat.row(y));
            }
            out.push_back(std::move(feat));
        }
    }
    return out;
}

CompletionLossResult completion_loss(const RgbadImage& gt, const RgbadImage& pred,
                                     const RelevanceMap& gamma) {
    require_same_size(gt, pred, "completion_loss");
    require_same_size(gamma.weights, gt.r, "completion_loss");
    const size_t n = gt.r.size();
    const double denom = static_cast<double>(n) * 5.0;

    const auto gt_planes = gt.channel_planes();
    const auto pred_planes = pred.channel_planes();

    CompletionLossResult res;
    std::array<double, 5> channel_sums{};
    for (int c = 0; c < 5; ++c) {
        channel_sums[static_cast<size_t>(c)] = kernels::sum_abs_diff_weighted(
            gt_planes[static_cast<size_t>(c)]->data(),
            pred_planes[static_cast<size_t>(c)]->data(), gamma.weights.data(), n);
        Plane<float> grad(gt.width(), gt.height(), 0.f);
        const float* gp = gt_planes[static_cast<size_t>(c)]->data();
        const float* pp = pred_planes[static_cast<size_t>(c)]->data();
        for (size_t i = 0; i < n; ++i) {
            const float diff = gp[i] - pp[i];
            const float sign = diff > 0.f ? 1.f : (diff < 0.f ? -1.f : 0.f);
            grad.data()[i] =
                static_cast<float>(-static_cast<double>(gamma.weights.data()[i]) * sign /
                                   denom);
        }
        res.gradient[static_cast<size_t>(c)] = std::move(grad);
    }
    res.value = neumaier_total(channel_sums) / denom;
    return res;
}

double auto_loss(const RgbadImage& x, const RgbadImage& x_hat) {
    require_same_size(x, x_hat, "auto_loss");
    const size_t n = x.r.size();
    const auto a = x.channel_planes();
    const auto b = x_hat.channel_planes();
    std::array<double, 5> sums{};
    for (size_t c = 0; c < 5; ++c)
        sums[c] = kernels::sum_abs_diff(a[c]->data(), b[c]->data(), n);
    return neumaier_total(sums) / (static_cast<double>(n) * 5.0);
}

double reconstruction_loss(std::span<const Plane<float>* const> gt_color,
                           std::span<const Plane<float>* const> pred_color,
                           const Plane<float>& gt_depth, const Plane<float>& pred_depth) {
    if (gt_color.size() != pred_color.size() || gt_color.empty())
        throw DimensionError("reconstruction_loss: channel count mismatch");
    const size_t n = gt_depth.size();
    std::vector<double> sums;
    sums.reserve(gt_color.size());
    for (size_t c = 0; c < gt_color.size(); ++c) {
        require_same_size(*gt_color[c], gt_depth, "reconstruction_loss");
        require_same_size(*pred_color[c], gt_depth, "reconstruction_loss");
        sums.push_back(kernels::sum_abs_diff(gt_color[c]->data(), pred_color[c]->data(), n));
    }
    require_same_size(pred_depth, gt_depth, "reconstruction_loss");
    const double color_mean =
        neumaier_total(sums) / (static_cast<double>(n) * static_cast<double>(gt_color.size()));
    const double depth_mean =
        kernels::sum_abs_diff(gt_depth.data(), pred_depth.data(), n) / static_cast<double>(n);
    return color_mean + depth_mean;
}

double reconstruction_loss(const RgbadImage& gt, const RgbadImage& pred) {
    require_same_size(gt, pred, "reconstruction_loss");
    const auto ga = gt.rgba_planes();
    const auto pa = pred.rgba_planes();
    return reconstruction_loss(std::span<const Plane<float>* const>(ga.data(), ga.size()),
                               std::span<const Plane<float>* const>(pa.data(), pa.size()),
                               gt.depth, pred.depth);
}

ReconstructionLossResult reconstruction_loss_with_gradient(const RgbadImage& gt,
                                                           const RgbadImage& pred) {
    require_same_size(gt, pred, "reconstruction_loss");
    ReconstructionLossResult res;
    res.value = reconstruction_loss(gt, pred);
    const size_t n = gt.r.size();
    const auto sign_of = [](float d) { return d > 0.f ? 1.f : (d < 0.f ? -1.f : 0.f); };
    const auto ga = gt.rgba_planes();
    const auto pa = pred.rgba_planes();
    for (size_t c = 0; c < 4; ++c) {
        Plane<float> grad(gt.width(), gt.height(), 0.f);
        for (size_t i = 0; i < n; ++i)
            grad.data()[i] = -sign_of(ga[c]->data()[i] - pa[c]->data()[i]) /
                             (static_cast<float>(n) * 4.f);
        res.color_gradient[c] = std::move(grad);
    }
    res.depth_gradient = Plane<float>(gt.width(), gt.height(), 0.f);
    for (size_t i = 0; i < n; ++i)
        res.depth_gradient.data()[i] =
            -sign_of(gt.depth.data()[i] - pred.depth.data()[i]) / static_cast<float>(n);
    return res;
}

double perceptual_loss(std::span<const Plane<float>* const> gt_color,
                       std::span<const Plane<float>* const> pred_color,
                       const FeatureExtractor& extractor) {
    if (gt_color.size() != pred_color.size() || gt_color.empty())
        throw DimensionError("perceptual_loss: channel count mismatch");
    for (size_t c = 0; c < gt_color.size(); ++c)
        require_same_size(*gt_color[c], *pred_color[c], "perceptual_loss");
    const auto fa = extractor.apply(gt_color);
    const auto fb = extractor.apply(pred_color);
    std::vector<double> sums;
    sums.reserve(fa.size());
    size_t total = 0;
    for (size_t i = 0; i < fa.size(); ++i) {
        sums.push_back(kernels::sum_abs_diff(fa[i].data(), fb[i].data(), fa[i].size()));
        total += fa[i].size();
    }
    return neumaier_total(sums) / static_cast<double>(total);
}

double perceptual_loss(const RgbadImage& gt, const RgbadImage& pred,
                       const FeatureExtractor& extractor) {
    const auto ga = gt.rgba_planes();
    const auto pa = pred.rgba_planes();
    return perceptual_loss(std::span<const Plane<float>* const>(ga.data(), ga.size()),
                           std::span<const Plane<float>* const>(pa.data(), pa.size()),
                           extractor);
}

double adversarial_value(std::span<const double> d_real, std::span<const double> d_fake) {
    if (d_real.empty() || d_fake.empty())
        throw ConfigError("adversarial_value: empty score list");
    const auto clamp_log = [](double v) {
        return std::log(std::clamp(v, kScoreEps, 1.0 - kScoreEps));
    };
    std::vector<double> terms;
    terms.reserve(d_real.size());
    for (double d : d_real) terms.push_back(clamp_log(d));
    const double real_mean = neumaier_total(terms) / static_cast<double>(d_real.size());
    terms.clear();
    for (double d : d_fake) terms.push_back(clamp_log(1.0 - d));
    const double fake_mean = neumaier_total(terms) / static_cast<double>(d_fake.size());
    return real_mean + fake_mean;
}

LayoutLossTerms combine_layout_terms(double l_r, double l_p, std::optional<double> l_a,
                                     const LossWeights& weights) {
    if (weights.lambda_r < 0.0 || weights.lambda_p < 0.0 ||
        !std::isfinite(weights.lambda_r) || !std::isfinite(weights.lambda_p))
        throw ConfigError("layout_loss: invalid weights");
    LayoutLossTerms terms;
    terms.reconstruction = l_r;
    terms.perceptual = l_p;
    terms.adversarial = l_a;
    terms.total =
        weights.lambda_r * l_r + weights.lambda_p * l_p + (l_a.has_value() ? *l_a : 0.0);
    return terms;
}

LayoutLossTerms layout_loss(const RgbadImage& gt, const RgbadImage& pred,
                            const FeatureExtractor& extractor, const LossWeights& weights,
                            std::span<const double> d_real,
                            std::span<const double> d_fake) {
    const double l_r = reconstruction_loss(gt, pred);
    const double l_p = perceptual_loss(gt, pred, extractor);
    std::optional<double> l_a;
    if (!d_real.empty() && !d_fake.empty()) l_a = adversarial_value(d_real, d_fake);
    return combine_layout_terms(l_r, l_p, l_a, weights);
}

std::map<std::string, double> layout_terms_record(const LayoutLossTerms& terms) {
    std::map<std::string, double> rec{
        {"reconstruction", terms.reconstruction},
        {"perceptual", terms.perceptual},
        {"total", terms.total},
    };
    if (terms.adversarial.has_value()) rec["adversarial"] = *terms.adversarial;
    return rec;
}

double mask_iou(const Mask& a, const Mask& b) {
    require_same_size(a, b, "mask_iou");
    long inter = 0, uni = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        const bool pa = a.data()[i] != 0;
        const bool pb = b.data()[i] != 0;
        inter += pa && pb;
        uni += pa || pb;
    }
    if (uni == 0) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::pair<int, int>> iou_match(std::span<const Mask> pred_masks,
                                           std::span<const Mask> gt_masks,
                                           double min_iou) {
    struct Candidate {
        double iou;
        int gt;
        int pred;
    };
    std::vector<Candidate> candidates;
    for (size_t g = 0; g < gt_masks.size(); ++g) {
        for (size_t p = 0; p < pred_masks.size(); ++p) {
            const double iou = mask_iou(gt_masks[g], pred_masks[p]);
            if (iou >= min_iou)
                candidates.push_back({iou, static_cast<int>(g), static_cast<int>(p)});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.iou != b.iou) return a.iou > b.iou;
        if (a.gt != b.gt) return a.gt < b.gt;
        return a.pred < b.pred;
    });
    std::vector<bool> gt_used(gt_masks.size(), false);
    std::vector<bool> pred_used(pred_masks.size(), false);
    std::vector<std::pair<int, int>> pairs;
    for (const auto& c : candidates) {
        if (gt_used[static_cast<size_t>(c.gt)] || pred_used[static_cast<size_t>(c.pred)])
            continue;
        gt_used[static_cast<size_t>(c.gt)] = true;
        pred_used[static_cast<size_t>(c.pred)] = true;
        pairs.emplace_back(c.gt, c.pred);
    }
    std::sort(pairs.begin(), pairs.end());
    return pairs;
}

} // namespace ldikit
