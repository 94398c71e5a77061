#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "kpa/errors.hpp"

namespace kpa {

// (batch, channels, height, width), row-major, channel plane contiguous.
struct Shape {
    int n = 0, c = 0, h = 0, w = 0;

    std::size_t numel() const {
        return static_cast<std::size_t>(n) * c * h * w;
    }
    std::size_t plane() const { return static_cast<std::size_t>(h) * w; }

    bool operator==(const Shape&) const = default;

    std::string str() const {
        return "(" + std::to_string(n) + "," + std::to_string(c) + "," + std::to_string(h) + "," +
               std::to_string(w) + ")";
    }
};

template <typename T>
struct TensorT {
    Shape shape{};
    std::vector<T> v;

    TensorT() = default;
    explicit TensorT(Shape s) : shape(s), v(s.numel(), T(0)) {}
    TensorT(int n, int c, int h, int w) : TensorT(Shape{n, c, h, w}) {}

    void resize(Shape s) {
        shape = s;
        v.resize(s.numel());  // keeps capacity across batches
    }

    void zero() { std::fill(v.begin(), v.end(), T(0)); }

    T* data() { return v.data(); }
    const T* data() const { return v.data(); }
    std::size_t numel() const { return v.size(); }

    T& at(int n, int c, int y, int x) {
        return v[((static_cast<std::size_t>(n) * shape.c + c) * shape.h + y) * shape.w + x];
    }
    T at(int n, int c, int y, int x) const {
        return v[((static_cast<std::size_t>(n) * shape.c + c) * shape.h + y) * shape.w + x];
    }

    // pointer to the (n, c) plane
    T* plane(int n, int c) {
        return v.data() + (static_cast<std::size_t>(n) * shape.c + c) * shape.plane();
    }
    const T* plane(int n, int c) const {
        return v.data() + (static_cast<std::size_t>(n) * shape.c + c) * shape.plane();
    }

    template <typename U>
    TensorT<U> cast() const {
        TensorT<U> out(shape);
        for (std::size_t i = 0; i < v.size(); ++i) out.v[i] = static_cast<U>(v[i]);
        return out;
    }
};

using Tensor = TensorT<float>;

inline void require_same_shape(const Shape& a, const Shape& b, const char* what) {
    if (!(a == b)) throw shape_error(std::string(what) + ": shape mismatch " + a.str() + " vs " + b.str());
}

}  // namespace kpa
