#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "kpa/image.hpp"
#include "kpa/rng.hpp"

namespace kpa::synth {

// Deterministic stand-in corpora for environments without the real dataset
// files: handwriting-like sparse strokes (28x28 gray) and natural-image-like
// smooth color fields (32x32 RGB). Statistically close enough for the
// attack experiments; the real files drop in through the same loaders when
// available.

namespace detail {

struct P2 {
    double x, y;
};

inline void stamp_stroke(ImageBytes& img, P2 a, P2 b, P2 c, double thickness) {
    const int steps = 64;
    for (int s = 0; s <= steps; ++s) {
        double t = static_cast<double>(s) / steps;
        double u = 1.0 - t;
        double px = u * u * a.x + 2 * u * t * b.x + t * t * c.x;
        double py = u * u * a.y + 2 * u * t * b.y + t * t * c.y;
        int x0 = std::max(0, static_cast<int>(px - 3));
        int x1 = std::min(img.width - 1, static_cast<int>(px + 3));
        int y0 = std::max(0, static_cast<int>(py - 3));
        int y1 = std::min(img.height - 1, static_cast<int>(py + 3));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                double dx = x - px, dy = y - py;
                double d2 = dx * dx + dy * dy;
                double v = 255.0 * std::exp(-d2 / (2.0 * thickness * thickness));
                auto& px8 = img.at(0, y, x);
                px8 = static_cast<std::uint8_t>(std::max<double>(px8, v));
            }
        }
    }
}

}  // namespace detail

// Sparse bright strokes on black, digit-like statistics.
inline ImageBytes stroke_image(std::uint64_t seed) {
    ImageBytes img(28, 28, 1);
    SplitMix64 rng(seed);
    int strokes = 2 + static_cast<int>(rng.below(3));
    for (int s = 0; s < strokes; ++s) {
        auto pt = [&] { return detail::P2{4.0 + rng.uniform() * 20.0, 4.0 + rng.uniform() * 20.0}; };
        detail::stamp_stroke(img, pt(), pt(), pt(), 0.9 + rng.uniform() * 0.6);
    }
    return img;
}

// Smooth low-frequency color field plus one soft blob; full value range.
inline ImageBytes texture_image(std::uint64_t seed) {
    ImageBytes img(32, 32, 3);
    SplitMix64 rng(seed);

    struct Wave {
        double fx, fy, phase, amp;
    };
    // shared luma waves + per-channel chroma waves
    std::vector<Wave> luma(3), chroma(9);
    for (auto& w : luma)
        w = {rng.uniform() * 2.2 / 32, rng.uniform() * 2.2 / 32, rng.uniform() * 2 * std::numbers::pi,
             25.0 + rng.uniform() * 40.0};
    for (auto& w : chroma)
        w = {rng.uniform() * 2.8 / 32, rng.uniform() * 2.8 / 32, rng.uniform() * 2 * std::numbers::pi,
             10.0 + rng.uniform() * 25.0};

    double bx = 6.0 + rng.uniform() * 20.0, by = 6.0 + rng.uniform() * 20.0;
    double br = 4.0 + rng.uniform() * 7.0;
    double blob_rgb[3] = {rng.uniform() * 110.0 - 55.0, rng.uniform() * 110.0 - 55.0, rng.uniform() * 110.0 - 55.0};
    double base = 90.0 + rng.uniform() * 75.0;

    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            double shared = base;
            for (const auto& w : luma)
                shared += w.amp * std::cos(2 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
            double dx = x - bx, dy = y - by;
            double blob = std::exp(-(dx * dx + dy * dy) / (2.0 * br * br));
            for (int c = 0; c < 3; ++c) {
                double v = shared + blob * blob_rgb[c];
                for (int k = 0; k < 3; ++k) {
                    const auto& w = chroma[c * 3 + k];
                    v += w.amp * std::cos(2 * std::numbers::pi * (w.fx * x + w.fy * y) + w.phase);
                }
                img.at(c, y, x) = static_cast<std::uint8_t>(std::clamp(v, 0.0, 255.0));
            }
        }
    }
    return img;
}

inline std::vector<ImageBytes> stroke_corpus(std::size_t count, std::uint64_t seed) {
    std::vector<ImageBytes> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(stroke_image(mix_seed(seed, 0x5742u, i)));
    return out;
}

inline std::vector<ImageBytes> texture_corpus(std::size_t count, std::uint64_t seed) {
    std::vector<ImageBytes> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(texture_image(mix_seed(seed, 0x43464bu, i)));
    return out;
}

}  // namespace kpa::synth
