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

#include "ldikit/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ldikit/kernels.hpp"

namespace ldikit {

namespace {

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

void check_metric_inputs(std::span<const Plane<float>* const> a,
                         std::span<const Plane<float>* const> b, const Mask& mask) {
    if (a.size() != b.size() || a.empty())
        throw DimensionError("metric: channel count mismatch");
    for (size_t c = 0; c < a.size(); ++c) {
        require_same_size(*a[c], mask, "metric");
        require_same_size(*b[c], mask, "metric");
    }
}

std::array<const Plane<float>*, 3> rgb_planes(const RgbadImage& img) {
    return {&img.r, &img.g, &img.b};
}

// Uniform-window sums of a plane, window w, stride 1, fresh per-window
// accumulation (no sliding subtraction) in double.
Plane<double> window_sums(const Plane<double>& src, int win) {
    const int w = src.width(), h = src.height();
    const int ow = w - win + 1, oh = h - win + 1;
    Plane<double> horiz(ow, h, 0.0);
    for (int y = 0; y < h; ++y) {
        const double* row = src.row(y);
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < win; ++k) s += row[x + k];
            horiz.at(x, y) = s;
        }
    }
    Plane<double> out(ow, oh, 0.0);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int k = 0; k < win; ++k) s += horiz.at(x, y + k);
            out.at(x, y) = s;
        }
    }
    return out;
}

} // namespace

double mpe(std::span<const Plane<float>* const> a, std::span<const Plane<float>* const> b,
           const Mask& mask, double scale) {
    check_metric_inputs(a, b, mask);
    const long count = mask_count(mask);
    if (count == 0) throw EmptyMaskError("mpe: empty mask");
    std::vector<double> sums;
    sums.reserve(a.size());
    for (size_t c = 0; c < a.size(); ++c)
        sums.push_back(kernels::sum_abs_diff_masked(a[c]->data(), b[c]->data(),
                                                    mask.data(), mask.size()));
    return scale * neumaier_total(sums) /
           (static_cast<double>(count) * static_cast<double>(a.size()));
}

double rmse(std::span<const Plane<float>* const> a,
            std::span<const Plane<float>* const> b, const Mask& mask, double scale) {
    check_metric_inputs(a, b, mask);
    const long count = mask_count(mask);
    if (count == 0) throw EmptyMaskError("rmse: empty mask");
    std::vector<double> sums;
    sums.reserve(a.size());
    for (size_t c = 0; c < a.size(); ++c)
        sums.push_back(kernels::sum_sq_diff_masked(a[c]->data(), b[c]->data(),
                                                   mask.data(), mask.size()));
    return scale * std::sqrt(neumaier_total(sums) /
                             (static_cast<double>(count) * static_cast<double>(a.size())));
}

double color_mpe(const RgbadImage& a, const RgbadImage& b, const Mask& mask) {
    const auto pa = rgb_planes(a);
    const auto pb = rgb_planes(b);
    return mpe(std::span<const Plane<float>* const>(pa.data(), pa.size()),
               std::span<const Plane<float>* const>(pb.data(), pb.size()), mask, 255.0);
}

double color_rmse(const RgbadImage& a, const RgbadImage& b, const Mask& mask) {
    const auto pa = rgb_planes(a);
    const auto pb = rgb_planes(b);
    return rmse(std::span<const Plane<float>* const>(pa.data(), pa.size()),
                std::span<const Plane<float>* const>(pb.data(), pb.size()), mask, 255.0);
}

double depth_mpe(const RgbadImage& a, const RgbadImage& b, const Mask& mask) {
    const Plane<float>* pa[] = {&a.depth};
    const Plane<float>* pb[] = {&b.depth};
    return mpe(std::span<const Plane<float>* const>(pa, 1),
               std::span<const Plane<float>* const>(pb, 1), mask, 1.0);
}

double depth_rmse(const RgbadImage& a, const RgbadImage& b, const Mask& mask) {
    const Plane<float>* pa[] = {&a.depth};
    const Plane<float>* pb[] = {&b.depth};
    return rmse(std::span<const Plane<float>* const>(pa, 1),
                std::span<const Plane<float>* const>(pb, 1), mask, 1.0);
}

double ssim(std::span<const Plane<float>* const> a,
            std::span<const Plane<float>* const> b, const SsimConfig& config) {
    if (a.size() != b.size() || a.empty())
        throw DimensionError("ssim: channel count mismatch");
    const int w = a[0]->width(), h = a[0]->height();
    const int win = config.window;
    if (w < win || h < win) throw DimensionError("ssim: image smaller than the window");
    const double n = static_cast<double>(win) * win;

    double channel_acc = 0.0;
    for (size_t c = 0; c < a.size(); ++c) {
        require_same_size(*a[c], *b[c], "ssim");
        // 0-255 scale, matching the constants.
        Plane<double> xa(w, h, 0.0), xb(w, h, 0.0), xaa(w, h, 0.0), xbb(w, h, 0.0),
            xab(w, h, 0.0);
        for (size_t i = 0; i < xa.size(); ++i) {
            const double va = 255.0 * static_cast<double>(a[c]->data()[i]);
            const double vb = 255.0 * static_cast<double>(b[c]->data()[i]);
            xa.data()[i] = va;
            xb.data()[i] = vb;
            xaa.data()[i] = va * va;
            xbb.data()[i] = vb * vb;
            xab.data()[i] = va * vb;
        }
        const Plane<double> sa = window_sums(xa, win);
        const Plane<double> sb = window_sums(xb, win);
        const Plane<double> saa = window_sums(xaa, win);
        const Plane<double> sbb = window_sums(xbb, win);
        const Plane<double> sab = window_sums(xab, win);

        double acc = 0.0, comp = 0.0;
        for (size_t i = 0; i < sa.size(); ++i) {
            const double mu_a = sa.data()[i] / n;
            const double mu_b = sb.data()[i] / n;
            const double var_a = saa.data()[i] / n - mu_a * mu_a;
            const double var_b = sbb.data()[i] / n - mu_b * mu_b;
            const double cov = sab.data()[i] / n - mu_a * mu_b;
            const double num = (2.0 * mu_a * mu_b + config.c1) * (2.0 * cov + config.c2);
            const double den =
                (mu_a * mu_a + mu_b * mu_b + config.c1) * (var_a + var_b + config.c2);
            const double v = num / den;
            const double t = acc + v;
            if (std::abs(acc) >= std::abs(v))
                comp += (acc - t) + v;
            else
                comp += (v - t) + acc;
            acc = t;
        }
        channel_acc += (acc + comp) / static_cast<double>(sa.size());
    }
    return channel_acc / static_cast<double>(a.size());
}

double ssim_color(const RgbadImage& a, const RgbadImage& b, const SsimConfig& config) {
    const auto pa = rgb_planes(a);
    const auto pb = rgb_planes(b);
    return ssim(std::span<const Plane<float>* const>(pa.data(), pa.size()),
                std::span<const Plane<float>* const>(pb.data(), pb.size()), config);
}

std::vector<LayerEval> per_layer_eval(const Ldi& pred, const Ldi& gt, int max_layers,
                                      double novel_depth_eps) {
    if (pred.width() != gt.width() || pred.height() != gt.height())
        throw DimensionError("per_layer_eval: LDI size mismatch");
    const int w = gt.width(), h = gt.height();
    const int layers = std::min(max_layers, gt.max_samples());

    std::vector<LayerEval> out;
    for (int l = 0; l < layers; ++l) {
        RgbadImage gt_img(w, h), pred_img(w, h);
        Mask eval_mask(w, h, 0);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                const auto gl = gt.samples_at(x, y);
                if (l >= static_cast<int>(gl.size())) continue;
                const LdiSample& gs = gl[static_cast<size_t>(l)];
                // Novel content: first rank always counts; deeper ranks
                // only where ground truth reveals a different surface.
                if (l > 0 &&
                    !(std::abs(static_cast<double>(gs.depth) -
                               static_cast<double>(gl[static_cast<size_t>(l) - 1].depth)) >
                      novel_depth_eps))
                    continue;
                const auto pl = pred.samples_at(x, y);
                if (pl.empty()) continue; // nothing to migrate from
                const LdiSample& ps = pl[static_cast<size_t>(
                    std::min<int>(l, static_cast<int>(pl.size()) - 1))];
                gt_img.set_pixel(x, y, gs.rgba[0], gs.rgba[1], gs.rgba[2], gs.rgba[3],
                                 gs.depth);
                pred_img.set_pixel(x, y, ps.rgba[0], ps.rgba[1], ps.rgba[2], ps.rgba[3],
                                   ps.depth);
                eval_mask.at(x, y) = 1;
            }
        }
        const long count = mask_count(eval_mask);
        if (count == 0) continue;
        LayerEval le;
        le.layer = l + 1;
        le.pixel_count = count;
        le.color_mpe = color_mpe(pred_img, gt_img, eval_mask);
        le.color_rmse = color_rmse(pred_img, gt_img, eval_mask);
        le.depth_mpe = depth_mpe(pred_img, gt_img, eval_mask);
        le.depth_rmse = depth_rmse(pred_img, gt_img, eval_mask);
        out.push_back(le);
    }
    return out;
}

std::vector<double> layer_histogram(std::span<const Ldi> ldis) {
    if (ldis.empty()) return {};
    int deepest = 0;
    for (const Ldi& l : ldis) deepest = std::max(deepest, l.max_samples());
    std::vector<double> hist(static_cast<size_t>(deepest), 0.0);
    for (const Ldi& l : ldis) {
        const int m = l.max_samples();
        for (int k = 1; k <= m; ++k) hist[static_cast<size_t>(k - 1)] += 1.0;
    }
    for (double& v : hist) v /= static_cast<double>(ldis.size());
    return hist;
}

} // namespace ldikit
