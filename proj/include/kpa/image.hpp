#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpa/errors.hpp"

namespace kpa {

// Raw byte image, channel-major then row-major:
// data[c*H*W + y*W + x], values 0..255, channels 1 (gray) or 3 (RGB).
struct ImageBytes {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> data;

    ImageBytes() = default;
    ImageBytes(int w, int h, int c) : width(w), height(h), channels(c), data(static_cast<std::size_t>(w) * h * c, 0) {}

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    std::size_t size() const { return pixel_count() * channels; }

    std::uint8_t& at(int c, int y, int x) { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }
    std::uint8_t at(int c, int y, int x) const { return data[(static_cast<std::size_t>(c) * height + y) * width + x]; }

    void validate() const {
        if (channels != 1 && channels != 3)
            throw usage_error("image must have 1 or 3 channels, got " + std::to_string(channels));
        if (width <= 0 || height <= 0) throw usage_error("image dimensions must be positive");
        if (data.size() != size())
            throw usage_error("image data length " + std::to_string(data.size()) + " does not match dims " +
                              std::to_string(width) + "x" + std::to_string(height) + "x" + std::to_string(channels));
    }

    bool same_dims(const ImageBytes& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }

    bool operator==(const ImageBytes&) const = default;
};

}  // namespace kpa
