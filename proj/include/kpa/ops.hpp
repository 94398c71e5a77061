#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <string>
#include <utility>
#include <vector>

#include "kpa/blas.hpp"
#include "kpa/errors.hpp"
#include "kpa/rng.hpp"
#include "kpa/tensor.hpp"

// Layer kernels: forward plus hand-derived reverse-mode rules. Convolution
// and transposed convolution run as im2col/col2im around a single GEMM per
// batch; everything else is a direct loop. Backward kernels writing an
// input-gradient take `accumulate`: false overwrites the buffer, true adds
// into it (fan-out nodes sum the contributions of their consumers).

namespace kpa::ops {

struct ConvDims {
    int n, cin, h, w, cout, k, stride, pad, oh, ow;

    std::size_t col_rows() const { return static_cast<std::size_t>(cin) * k * k; }
    std::size_t col_cols() const { return static_cast<std::size_t>(n) * oh * ow; }
};

inline ConvDims conv_dims(const Shape& in, int cout, int k, int stride, int pad) {
    ConvDims d{in.n, in.c, in.h, in.w, cout, k, stride, pad, 0, 0};
    const int num_h = in.h + 2 * pad - k;
    const int num_w = in.w + 2 * pad - k;
    if (num_h < 0 || num_w < 0 || num_h % stride != 0 || num_w % stride != 0)
        throw shape_error("conv: non-integral output size for input " + in.str() + ", k=" + std::to_string(k) +
                          ", stride=" + std::to_string(stride) + ", pad=" + std::to_string(pad));
    d.oh = num_h / stride + 1;
    d.ow = num_w / stride + 1;
    return d;
}

template <typename T>
void im2col(const T* x, const ConvDims& d, T* col) {
    const std::size_t ncol = d.col_cols();
    const std::size_t plane = static_cast<std::size_t>(d.h) * d.w;
    const std::size_t ohow = static_cast<std::size_t>(d.oh) * d.ow;
    for (int ci = 0; ci < d.cin; ++ci) {
        for (int ky = 0; ky < d.k; ++ky) {
            for (int kx = 0; kx < d.k; ++kx) {
                T* row = col + ((static_cast<std::size_t>(ci) * d.k + ky) * d.k + kx) * ncol;
                if (d.stride == 1) {
                    const int lo = std::max(0, d.pad - kx);
                    const int hi = std::min(d.ow, d.w + d.pad - kx);
                    for (int n = 0; n < d.n; ++n) {
                        const T* src_plane = x + (static_cast<std::size_t>(n) * d.cin + ci) * plane;
                        for (int oy = 0; oy < d.oh; ++oy) {
                            T* dst = row + n * ohow + static_cast<std::size_t>(oy) * d.ow;
                            const int iy = oy - d.pad + ky;
                            if (iy < 0 || iy >= d.h) {
                                std::fill(dst, dst + d.ow, T(0));
                                continue;
                            }
                            if (lo > 0) std::fill(dst, dst + lo, T(0));
                            if (hi > lo)
                                std::memcpy(dst + lo, src_plane + static_cast<std::size_t>(iy) * d.w + lo - d.pad + kx,
                                            sizeof(T) * (hi - lo));
                            if (hi < d.ow) std::fill(dst + hi, dst + d.ow, T(0));
                        }
                    }
                } else {
                    for (int n = 0; n < d.n; ++n) {
                        const T* src_plane = x + (static_cast<std::size_t>(n) * d.cin + ci) * plane;
                        for (int oy = 0; oy < d.oh; ++oy) {
                            T* dst = row + n * ohow + static_cast<std::size_t>(oy) * d.ow;
                            const int iy = oy * d.stride - d.pad + ky;
                            for (int ox = 0; ox < d.ow; ++ox) {
                                const int ix = ox * d.stride - d.pad + kx;
                                dst[ox] = (iy >= 0 && iy < d.h && ix >= 0 && ix < d.w)
                                              ? src_plane[static_cast<std::size_t>(iy) * d.w + ix]
                                              : T(0);
                            }
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im_add(const T* col, const ConvDims& d, T* dx) {
    const std::size_t ncol = d.col_cols();
    const std::size_t plane = static_cast<std::size_t>(d.h) * d.w;
    const std::size_t ohow = static_cast<std::size_t>(d.oh) * d.ow;
    for (int ci = 0; ci < d.cin; ++ci) {
        for (int ky = 0; ky < d.k; ++ky) {
            for (int kx = 0; kx < d.k; ++kx) {
                const T* row = col + ((static_cast<std::size_t>(ci) * d.k + ky) * d.k + kx) * ncol;
                for (int n = 0; n < d.n; ++n) {
                    T* dst_plane = dx + (static_cast<std::size_t>(n) * d.cin + ci) * plane;
                    for (int oy = 0; oy < d.oh; ++oy) {
                        const T* src = row + n * ohow + static_cast<std::size_t>(oy) * d.ow;
                        const int iy = oy * d.stride - d.pad + ky;
                        if (iy < 0 || iy >= d.h) continue;
                        if (d.stride == 1) {
                            const int lo = std::max(0, d.pad - kx);
                            const int hi = std::min(d.ow, d.w + d.pad - kx);
                            T* dst = dst_plane + static_cast<std::size_t>(iy) * d.w + lo - d.pad + kx;
                            for (int ox = lo; ox < hi; ++ox) *dst++ += src[ox];
                        } else {
                            for (int ox = 0; ox < d.ow; ++ox) {
                                const int ix = ox * d.stride - d.pad + kx;
                                if (ix >= 0 && ix < d.w) dst_plane[static_cast<std::size_t>(iy) * d.w + ix] += src[ox];
                            }
                        }
                    }
                }
            }
        }
    }
}

// out = weights (*) x + bias, cross-correlation semantics (no kernel flip).
// weights: (cout, cin, k, k); scratch buffers grow on demand and are reused.
template <typename T>
void conv2d_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b, int stride, int pad,
                    TensorT<T>& out, std::vector<T>& col_buf, std::vector<T>& mat_buf) {
    if (w.shape.c != x.shape.c)
        throw shape_error("conv: weight expects " + std::to_string(w.shape.c) + " input channels, got " +
                          std::to_string(x.shape.c));
    const ConvDims d = conv_dims(x.shape, w.shape.n, w.shape.h, stride, pad);
    out.resize({d.n, d.cout, d.oh, d.ow});
    col_buf.resize(d.col_rows() * d.col_cols());
    mat_buf.resize(static_cast<std::size_t>(d.cout) * d.col_cols());
    im2col(x.data(), d, col_buf.data());
    gemm(false, false, d.cout, static_cast<int>(d.col_cols()), static_cast<int>(d.col_rows()), T(1), w.data(),
         static_cast<int>(d.col_rows()), col_buf.data(), static_cast<int>(d.col_cols()), T(0), mat_buf.data(),
         static_cast<int>(d.col_cols()));
    const std::size_t ohow = static_cast<std::size_t>(d.oh) * d.ow;
    for (int co = 0; co < d.cout; ++co) {
        const T bias = b.v.empty() ? T(0) : b.v[co];
        for (int n = 0; n < d.n; ++n) {
            const T* src = mat_buf.data() + co * d.col_cols() + n * ohow;
            T* dst = out.plane(n, co);
            for (std::size_t i = 0; i < ohow; ++i) dst[i] = src[i] + bias;
        }
    }
}

template <typename T>
void conv2d_backward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& dout, int stride, int pad,
                     bool need_dx, bool accumulate, TensorT<T>& dx, TensorT<T>& dw, TensorT<T>& db,
                     std::vector<T>& col_buf, std::vector<T>& mat_buf) {
    const ConvDims d = conv_dims(x.shape, w.shape.n, w.shape.h, stride, pad);
    const std::size_t ncol = d.col_cols();
    const std::size_t ohow = static_cast<std::size_t>(d.oh) * d.ow;
    col_buf.resize(d.col_rows() * ncol);
    mat_buf.resize(static_cast<std::size_t>(d.cout) * ncol);

    // gather upstream gradient into (cout x n*oh*ow) and reduce the bias
    for (int co = 0; co < d.cout; ++co) {
        T* dst = mat_buf.data() + co * ncol;
        double bias_sum = 0.0;
        for (int n = 0; n < d.n; ++n) {
            const T* src = dout.plane(n, co);
            std::memcpy(dst + n * ohow, src, sizeof(T) * ohow);
            for (std::size_t i = 0; i < ohow; ++i) bias_sum += static_cast<double>(src[i]);
        }
        db.v[co] += static_cast<T>(bias_sum);
    }

    im2col(x.data(), d, col_buf.data());
    // dW += dOut * col^T
    gemm(false, true, d.cout, static_cast<int>(d.col_rows()), static_cast<int>(ncol), T(1), mat_buf.data(),
         static_cast<int>(ncol), col_buf.data(), static_cast<int>(ncol), T(1), dw.data(),
         static_cast<int>(d.col_rows()));

    if (!need_dx) return;
    // dcol = W^T * dOut, reusing the col buffer, then scatter back
    gemm(true, false, static_cast<int>(d.col_rows()), static_cast<int>(ncol), d.cout, T(1), w.data(),
         static_cast<int>(d.col_rows()), mat_buf.data(), static_cast<int>(ncol), T(0), col_buf.data(),
         static_cast<int>(ncol));
    dx.resize(x.shape);
    if (!accumulate) dx.zero();
    col2im_add(col_buf.data(), d, dx.data());
}

// ---- batch normalization ----

template <typename T>
struct BNCache {
    std::vector<T> mean, invstd;
};

template <typename T>
void bn_forward_train(const TensorT<T>& x, const TensorT<T>& gamma, const TensorT<T>& beta, TensorT<T>& rmean,
                      TensorT<T>& rvar, double momentum, double eps, TensorT<T>& out, BNCache<T>& cache) {
    const int C = x.shape.c;
    const std::size_t plane = x.shape.plane();
    const std::size_t count = static_cast<std::size_t>(x.shape.n) * plane;
    out.resize(x.shape);
    cache.mean.assign(C, T(0));
    cache.invstd.assign(C, T(0));
    for (int c = 0; c < C; ++c) {
        double sum = 0.0;
        for (int n = 0; n < x.shape.n; ++n) {
            const T* p = x.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) sum += static_cast<double>(p[i]);
        }
        const double mean = sum / static_cast<double>(count);
        double sq = 0.0;
        for (int n = 0; n < x.shape.n; ++n) {
            const T* p = x.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) {
                const double dv = static_cast<double>(p[i]) - mean;
                sq += dv * dv;
            }
        }
        const double var = sq / static_cast<double>(count);  // biased, used for normalization
        const double invstd = 1.0 / std::sqrt(var + eps);
        cache.mean[c] = static_cast<T>(mean);
        cache.invstd[c] = static_cast<T>(invstd);
        const T g = gamma.v[c], bb = beta.v[c];
        const T m = static_cast<T>(mean), is = static_cast<T>(invstd);
        for (int n = 0; n < x.shape.n; ++n) {
            const T* p = x.plane(n, c);
            T* q = out.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) q[i] = g * ((p[i] - m) * is) + bb;
        }
        const double unbiased = count > 1 ? var * static_cast<double>(count) / static_cast<double>(count - 1) : var;
        rmean.v[c] = static_cast<T>((1.0 - momentum) * static_cast<double>(rmean.v[c]) + momentum * mean);
        rvar.v[c] = static_cast<T>((1.0 - momentum) * static_cast<double>(rvar.v[c]) + momentum * unbiased);
    }
}

template <typename T>
void bn_forward_eval(const TensorT<T>& x, const TensorT<T>& gamma, const TensorT<T>& beta, const TensorT<T>& rmean,
                     const TensorT<T>& rvar, double eps, TensorT<T>& out) {
    const int C = x.shape.c;
    const std::size_t plane = x.shape.plane();
    out.resize(x.shape);
    for (int c = 0; c < C; ++c) {
        const T is = static_cast<T>(1.0 / std::sqrt(static_cast<double>(rvar.v[c]) + eps));
        const T g = gamma.v[c], bb = beta.v[c], m = rmean.v[c];
        for (int n = 0; n < x.shape.n; ++n) {
            const T* p = x.plane(n, c);
            T* q = out.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) q[i] = g * ((p[i] - m) * is) + bb;
        }
    }
}

template <typename T>
void bn_backward_train(const TensorT<T>& x, const TensorT<T>& gamma, const BNCache<T>& cache,
                       const TensorT<T>& dout, bool accumulate, TensorT<T>& dx, TensorT<T>& dgamma,
                       TensorT<T>& dbeta) {
    const int C = x.shape.c;
    const std::size_t plane = x.shape.plane();
    const double count = static_cast<double>(x.shape.n) * plane;
    dx.resize(x.shape);
    for (int c = 0; c < C; ++c) {
        const T m = cache.mean[c], is = cache.invstd[c];
        double s_dy = 0.0, s_dy_xhat = 0.0;
        for (int n = 0; n < x.shape.n; ++n) {
            const T* px = x.plane(n, c);
            const T* pd = dout.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) {
                const double xhat = static_cast<double>((px[i] - m) * is);
                s_dy += static_cast<double>(pd[i]);
                s_dy_xhat += static_cast<double>(pd[i]) * xhat;
            }
        }
        dgamma.v[c] += static_cast<T>(s_dy_xhat);
        dbeta.v[c] += static_cast<T>(s_dy);
        const T k1 = static_cast<T>(s_dy / count);
        const T k2 = static_cast<T>(s_dy_xhat / count);
        const T scale = gamma.v[c] * is;
        for (int n = 0; n < x.shape.n; ++n) {
            const T* px = x.plane(n, c);
            const T* pd = dout.plane(n, c);
            T* pq = dx.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) {
                const T xhat = (px[i] - m) * is;
                const T v = scale * (pd[i] - k1 - xhat * k2);
                if (accumulate)
                    pq[i] += v;
                else
                    pq[i] = v;
            }
        }
    }
}

template <typename T>
void bn_backward_eval(const TensorT<T>& x, const TensorT<T>& gamma, const TensorT<T>& rmean, const TensorT<T>& rvar,
                      double eps, const TensorT<T>& dout, bool accumulate, TensorT<T>& dx, TensorT<T>& dgamma,
                      TensorT<T>& dbeta) {
    const int C = x.shape.c;
    const std::size_t plane = x.shape.plane();
    dx.resize(x.shape);
    for (int c = 0; c < C; ++c) {
        const T is = static_cast<T>(1.0 / std::sqrt(static_cast<double>(rvar.v[c]) + eps));
        const T scale = gamma.v[c] * is;
        double s_dy = 0.0, s_dy_xhat = 0.0;
        for (int n = 0; n < x.shape.n; ++n) {
            const T* px = x.plane(n, c);
            const T* pd = dout.plane(n, c);
            T* pq = dx.plane(n, c);
            for (std::size_t i = 0; i < plane; ++i) {
                s_dy += static_cast<double>(pd[i]);
                s_dy_xhat += static_cast<double>(pd[i]) * static_cast<double>((px[i] - rmean.v[c]) * is);
                const T v = scale * pd[i];
                if (accumulate)
                    pq[i] += v;
                else
                    pq[i] = v;
            }
        }
        dgamma.v[c] += static_cast<T>(s_dy_xhat);
        dbeta.v[c] += static_cast<T>(s_dy);
    }
}

// ---- activations / pooling / dropout ----

template <typename T>
void relu_forward(const TensorT<T>& x, TensorT<T>& out) {
    out.resize(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) out.v[i] = x.v[i] > T(0) ? x.v[i] : T(0);
}

template <typename T>
void relu_backward(const TensorT<T>& x, const TensorT<T>& dout, bool accumulate, TensorT<T>& dx) {
    dx.resize(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const T v = x.v[i] > T(0) ? dout.v[i] : T(0);
        if (accumulate)
            dx.v[i] += v;
        else
            dx.v[i] = v;
    }
}

inline void require_even_pool(const Shape& s) {
    if (s.h % 2 != 0 || s.w % 2 != 0)
        throw shape_error("2x2 stride-2 pooling needs even spatial dims, got " + s.str());
}

template <typename T>
void maxpool2x2_forward(const TensorT<T>& x, TensorT<T>& out, std::vector<std::uint8_t>& argmax) {
    require_even_pool(x.shape);
    const int oh = x.shape.h / 2, ow = x.shape.w / 2;
    out.resize({x.shape.n, x.shape.c, oh, ow});
    argmax.resize(out.numel());
    std::size_t o = 0;
    for (int n = 0; n < x.shape.n; ++n) {
        for (int c = 0; c < x.shape.c; ++c) {
            const T* p = x.plane(n, c);
            for (int oy = 0; oy < oh; ++oy) {
                for (int ox = 0; ox < ow; ++ox, ++o) {
                    T best = p[(2 * oy) * x.shape.w + 2 * ox];
                    std::uint8_t sel = 0;
                    for (std::uint8_t q = 1; q < 4; ++q) {
                        const T v = p[(2 * oy + q / 2) * x.shape.w + 2 * ox + q % 2];
                        if (v > best) {
                            best = v;
                            sel = q;
                        }
                    }
                    out.v[o] = best;
                    argmax[o] = sel;
                }
            }
        }
    }
}

template <typename T>
void maxpool2x2_backward(const TensorT<T>& dout, const std::vector<std::uint8_t>& argmax, const Shape& in_shape,
                         bool accumulate, TensorT<T>& dx) {
    dx.resize(in_shape);
    if (!accumulate) dx.zero();
    const int oh = dout.shape.h, ow = dout.shape.w;
    std::size_t o = 0;
    for (int n = 0; n < in_shape.n; ++n) {
        for (int c = 0; c < in_shape.c; ++c) {
            T* p = dx.plane(n, c);
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox, ++o) {
                    const std::uint8_t q = argmax[o];
                    p[(2 * oy + q / 2) * in_shape.w + 2 * ox + q % 2] += dout.v[o];
                }
        }
    }
}

template <typename T>
void avgpool2x2_forward(const TensorT<T>& x, TensorT<T>& out) {
    require_even_pool(x.shape);
    const int oh = x.shape.h / 2, ow = x.shape.w / 2;
    out.resize({x.shape.n, x.shape.c, oh, ow});
    std::size_t o = 0;
    for (int n = 0; n < x.shape.n; ++n)
        for (int c = 0; c < x.shape.c; ++c) {
            const T* p = x.plane(n, c);
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox, ++o) {
                    const T* q = p + (2 * oy) * x.shape.w + 2 * ox;
                    out.v[o] = (q[0] + q[1] + q[x.shape.w] + q[x.shape.w + 1]) * T(0.25);
                }
        }
}

template <typename T>
void avgpool2x2_backward(const TensorT<T>& dout, const Shape& in_shape, bool accumulate, TensorT<T>& dx) {
    dx.resize(in_shape);
    if (!accumulate) dx.zero();
    const int oh = dout.shape.h, ow = dout.shape.w;
    std::size_t o = 0;
    for (int n = 0; n < in_shape.n; ++n)
        for (int c = 0; c < in_shape.c; ++c) {
            T* p = dx.plane(n, c);
            for (int oy = 0; oy < oh; ++oy)
                for (int ox = 0; ox < ow; ++ox, ++o) {
                    const T g = dout.v[o] * T(0.25);
                    T* q = p + (2 * oy) * in_shape.w + 2 * ox;
                    q[0] += g;
                    q[1] += g;
                    q[in_shape.w] += g;
                    q[in_shape.w + 1] += g;
                }
        }
}

// ---- transposed convolution, 2x2 kernel, stride 2 ----
// weights: (cin, cout, 2, 2); output doubles both spatial dims.

template <typename T>
void deconv2x2_forward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& b, TensorT<T>& out,
                       std::vector<T>& mat_buf) {
    if (w.shape.n != x.shape.c)
        throw shape_error("deconv: weight expects " + std::to_string(w.shape.n) + " input channels, got " +
                          std::to_string(x.shape.c));
    const int cin = x.shape.c, cout = w.shape.c;
    const int h = x.shape.h, wd = x.shape.w;
    const std::size_t hw = static_cast<std::size_t>(h) * wd;
    out.resize({x.shape.n, cout, 2 * h, 2 * wd});
    mat_buf.resize(static_cast<std::size_t>(cout) * 4 * hw);
    for (int n = 0; n < x.shape.n; ++n) {
        gemm(true, false, cout * 4, static_cast<int>(hw), cin, T(1), w.data(), cout * 4, x.plane(n, 0),
             static_cast<int>(hw), T(0), mat_buf.data(), static_cast<int>(hw));
        for (int co = 0; co < cout; ++co) {
            const T bias = b.v.empty() ? T(0) : b.v[co];
            T* dst = out.plane(n, co);
            for (int q = 0; q < 4; ++q) {
                const T* src = mat_buf.data() + (static_cast<std::size_t>(co) * 4 + q) * hw;
                const int dy = q / 2, dxo = q % 2;
                for (int y = 0; y < h; ++y) {
                    T* drow = dst + (2 * y + dy) * 2 * wd + dxo;
                    const T* srow = src + static_cast<std::size_t>(y) * wd;
                    for (int xx = 0; xx < wd; ++xx) drow[2 * xx] = srow[xx] + bias;
                }
            }
        }
    }
}

template <typename T>
void deconv2x2_backward(const TensorT<T>& x, const TensorT<T>& w, const TensorT<T>& dout, bool accumulate,
                        TensorT<T>& dx, TensorT<T>& dw, TensorT<T>& db, std::vector<T>& mat_buf) {
    const int cin = x.shape.c, cout = w.shape.c;
    const int h = x.shape.h, wd = x.shape.w;
    const std::size_t hw = static_cast<std::size_t>(h) * wd;
    dx.resize(x.shape);
    mat_buf.resize(static_cast<std::size_t>(cout) * 4 * hw);
    for (int n = 0; n < x.shape.n; ++n) {
        for (int co = 0; co < cout; ++co) {
            const T* src = dout.plane(n, co);
            double bias_sum = 0.0;
            for (int q = 0; q < 4; ++q) {
                T* dst = mat_buf.data() + (static_cast<std::size_t>(co) * 4 + q) * hw;
                const int dy = q / 2, dxo = q % 2;
                for (int y = 0; y < h; ++y) {
                    const T* srow = src + (2 * y + dy) * 2 * wd + dxo;
                    T* drow = dst + static_cast<std::size_t>(y) * wd;
                    for (int xx = 0; xx < wd; ++xx) {
                        drow[xx] = srow[2 * xx];
                        bias_sum += static_cast<double>(srow[2 * xx]);
                    }
                }
            }
            db.v[co] += static_cast<T>(bias_sum);
        }
        // dX_n = W * dY_n
        gemm(false, false, cin, static_cast<int>(hw), cout * 4, T(1), w.data(), cout * 4, mat_buf.data(),
             static_cast<int>(hw), accumulate ? T(1) : T(0), dx.plane(n, 0), static_cast<int>(hw));
        // dW += X_n * dY_n^T
        gemm(false, true, cin, cout * 4, static_cast<int>(hw), T(1), x.plane(n, 0), static_cast<int>(hw),
             mat_buf.data(), static_cast<int>(hw), T(1), dw.data(), cout * 4);
    }
}

// Frozen-identity Deconv2x2 executes as plain nearest-neighbor upsampling;
// its exact backward is the 2x2 window sum.
template <typename T>
void nearest_up2x_forward(const TensorT<T>& x, TensorT<T>& out) {
    out.resize({x.shape.n, x.shape.c, 2 * x.shape.h, 2 * x.shape.w});
    for (int n = 0; n < x.shape.n; ++n)
        for (int c = 0; c < x.shape.c; ++c) {
            const T* p = x.plane(n, c);
            T* q = out.plane(n, c);
            for (int y = 0; y < x.shape.h; ++y)
                for (int x2 = 0; x2 < x.shape.w; ++x2) {
                    const T v = p[y * x.shape.w + x2];
                    T* d = q + (2 * y) * 2 * x.shape.w + 2 * x2;
                    d[0] = v;
                    d[1] = v;
                    d[2 * x.shape.w] = v;
                    d[2 * x.shape.w + 1] = v;
                }
        }
}

template <typename T>
void nearest_up2x_backward(const TensorT<T>& dout, const Shape& in_shape, bool accumulate, TensorT<T>& dx) {
    dx.resize(in_shape);
    for (int n = 0; n < in_shape.n; ++n)
        for (int c = 0; c < in_shape.c; ++c) {
            const T* p = dout.plane(n, c);
            T* q = dx.plane(n, c);
            for (int y = 0; y < in_shape.h; ++y)
                for (int x2 = 0; x2 < in_shape.w; ++x2) {
                    const T* s = p + (2 * y) * 2 * in_shape.w + 2 * x2;
                    const T v = s[0] + s[1] + s[2 * in_shape.w] + s[2 * in_shape.w + 1];
                    if (accumulate)
                        q[y * in_shape.w + x2] += v;
                    else
                        q[y * in_shape.w + x2] = v;
                }
        }
}

// ---- concat over channels ----

template <typename T>
void concat_forward(const std::vector<const TensorT<T>*>& xs, TensorT<T>& out) {
    if (xs.empty()) throw usage_error("concat: no inputs");
    const Shape& first = xs.front()->shape;
    int ctotal = 0;
    for (const auto* x : xs) {
        if (x->shape.n != first.n || x->shape.h != first.h || x->shape.w != first.w)
            throw shape_error("concat: spatial/batch mismatch " + x->shape.str() + " vs " + first.str());
        ctotal += x->shape.c;
    }
    out.resize({first.n, ctotal, first.h, first.w});
    const std::size_t plane = first.plane();
    for (int n = 0; n < first.n; ++n) {
        T* dst = out.plane(n, 0);
        for (const auto* x : xs) {
            std::memcpy(dst, x->plane(n, 0), sizeof(T) * plane * x->shape.c);
            dst += plane * x->shape.c;
        }
    }
}

template <typename T>
void concat_backward_slice(const TensorT<T>& dout, int channel_offset, const Shape& in_shape, bool accumulate,
                           TensorT<T>& dx) {
    dx.resize(in_shape);
    const std::size_t plane = in_shape.plane();
    for (int n = 0; n < in_shape.n; ++n) {
        const T* src = dout.plane(n, channel_offset);
        T* dst = dx.plane(n, 0);
        const std::size_t len = plane * in_shape.c;
        if (accumulate)
            for (std::size_t i = 0; i < len; ++i) dst[i] += src[i];
        else
            std::memcpy(dst, src, sizeof(T) * len);
    }
}

// ---- dropout (inverted scaling) ----

template <typename T>
void dropout_forward(const TensorT<T>& x, double ratio, std::uint64_t stream, TensorT<T>& out,
                     std::vector<std::uint8_t>& mask) {
    out.resize(x.shape);
    mask.resize(x.numel());
    SplitMix64 rng(stream);
    const T scale = static_cast<T>(1.0 / (1.0 - ratio));
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const bool keep = rng.uniform() >= ratio;
        mask[i] = keep;
        out.v[i] = keep ? x.v[i] * scale : T(0);
    }
}

template <typename T>
void dropout_backward(const TensorT<T>& dout, const std::vector<std::uint8_t>& mask, double ratio, bool accumulate,
                      TensorT<T>& dx) {
    dx.resize(dout.shape);
    const T scale = static_cast<T>(1.0 / (1.0 - ratio));
    for (std::size_t i = 0; i < dout.numel(); ++i) {
        const T v = mask[i] ? dout.v[i] * scale : T(0);
        if (accumulate)
            dx.v[i] += v;
        else
            dx.v[i] = v;
    }
}

// ---- L1 loss ----

// mean |o - t| over all elements; gradient w.r.t. o is sign(o-t)/numel.
template <typename T>
double l1_loss(const TensorT<T>& out, const TensorT<T>& target, TensorT<T>& grad) {
    require_same_shape(out.shape, target.shape, "l1_loss");
    grad.resize(out.shape);
    const double inv = 1.0 / static_cast<double>(out.numel());
    double sum = 0.0;
    for (std::size_t i = 0; i < out.numel(); ++i) {
        const T d = out.v[i] - target.v[i];
        sum += std::abs(static_cast<double>(d));
        grad.v[i] = d > T(0) ? static_cast<T>(inv) : (d < T(0) ? static_cast<T>(-inv) : T(0));
    }
    return sum * inv;
}

template <typename T>
double l1_loss_value(const TensorT<T>& out, const TensorT<T>& target) {
    require_same_shape(out.shape, target.shape, "l1_loss");
    double sum = 0.0;
    for (std::size_t i = 0; i < out.numel(); ++i)
        sum += std::abs(static_cast<double>(out.v[i]) - static_cast<double>(target.v[i]));
    return sum / static_cast<double>(out.numel());
}

// ---- centered zero-pad / crop (28x28 <-> 32x32 plumbing) ----

template <typename T>
void pad_center(const TensorT<T>& x, int H, int W, TensorT<T>& out) {
    if (H < x.shape.h || W < x.shape.w) throw shape_error("pad_center: target smaller than input");
    const int oy = (H - x.shape.h) / 2, ox = (W - x.shape.w) / 2;
    out.resize({x.shape.n, x.shape.c, H, W});
    out.zero();
    for (int n = 0; n < x.shape.n; ++n)
        for (int c = 0; c < x.shape.c; ++c) {
            const T* src = x.plane(n, c);
            T* dst = out.plane(n, c);
            for (int y = 0; y < x.shape.h; ++y)
                std::memcpy(dst + (y + oy) * W + ox, src + static_cast<std::size_t>(y) * x.shape.w,
                            sizeof(T) * x.shape.w);
        }
}

template <typename T>
void crop_center(const TensorT<T>& x, int h, int w, TensorT<T>& out) {
    if (h > x.shape.h || w > x.shape.w) throw shape_error("crop_center: target larger than input");
    const int oy = (x.shape.h - h) / 2, ox = (x.shape.w - w) / 2;
    out.resize({x.shape.n, x.shape.c, h, w});
    for (int n = 0; n < x.shape.n; ++n)
        for (int c = 0; c < x.shape.c; ++c) {
            const T* src = x.plane(n, c);
            T* dst = out.plane(n, c);
            for (int y = 0; y < h; ++y)
                std::memcpy(dst + static_cast<std::size_t>(y) * w, src + (y + oy) * x.shape.w + ox, sizeof(T) * w);
        }
}

}  // namespace kpa::ops
