#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <vector>

#include "kpa/errors.hpp"
#include "kpa/image.hpp"

namespace kpa::metrics {

// Pearson correlation over two equally-long value sequences. Multi-channel
// images are flattened across channels before the sums. Accumulation is in
// binary64 regardless of the inputs' precision.
template <typename A, typename B>
double pearson(std::span<const A> o, std::span<const B> p) {
    if (o.size() != p.size())
        throw shape_error("pearson: length mismatch " + std::to_string(o.size()) + " vs " + std::to_string(p.size()));
    if (o.empty()) throw usage_error("pearson: empty input");
    const std::size_t n = o.size();
    double mo = 0.0, mp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mo += static_cast<double>(o[i]);
        mp += static_cast<double>(p[i]);
    }
    mo /= static_cast<double>(n);
    mp /= static_cast<double>(n);
    double cross = 0.0, so = 0.0, sp = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(o[i]) - mo;
        const double b = static_cast<double>(p[i]) - mp;
        cross += a * b;
        so += a * a;
        sp += b * b;
    }
    if (so == 0.0 || sp == 0.0)
        throw numeric_error("pearson undefined: constant image (zero deviation sum)");
    return cross / (std::sqrt(so) * std::sqrt(sp));
}

template <typename T, typename U>
double pearson(const std::vector<T>& o, const std::vector<U>& p) {
    return pearson(std::span<const T>(o), std::span<const U>(p));
}

inline double pearson(const ImageBytes& o, const ImageBytes& p) {
    if (!o.same_dims(p)) throw shape_error("pearson: image dimension mismatch");
    return pearson<std::uint8_t, std::uint8_t>(o.data, p.data);
}

struct CorrelationReport {
    std::vector<double> coefficients;  // per included pair, input order
    std::vector<std::size_t> skipped_indices;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    double mean_abs = 0.0;
    double max_abs = 0.0;

    std::size_t included() const { return coefficients.size(); }
    std::size_t skipped() const { return skipped_indices.size(); }
    bool all_skipped() const { return coefficients.empty(); }

    void finalize() {
        if (coefficients.empty()) {
            mean = min = max = mean_abs = max_abs = std::numeric_limits<double>::quiet_NaN();
            return;
        }
        double s = 0.0, sa = 0.0;
        min = coefficients.front();
        max = coefficients.front();
        max_abs = 0.0;
        for (double c : coefficients) {
            s += c;
            sa += std::abs(c);
            if (c < min) min = c;
            if (c > max) max = c;
            if (std::abs(c) > max_abs) max_abs = std::abs(c);
        }
        mean = s / static_cast<double>(coefficients.size());
        mean_abs = sa / static_cast<double>(coefficients.size());
    }

    // columns: index, coefficient, skipped-flag
    void write_csv(std::ostream& os) const {
        os << "index,coefficient,skipped\n";
        std::size_t ci = 0, si = 0;
        const std::size_t total = coefficients.size() + skipped_indices.size();
        for (std::size_t i = 0; i < total; ++i) {
            if (si < skipped_indices.size() && skipped_indices[si] == i) {
                os << i << ",,1\n";
                ++si;
            } else {
                os << i << "," << coefficients[ci++] << ",0\n";
            }
        }
    }
};

// Per-pair Pearson over aligned sequences; pairs with a constant side are
// skipped and counted instead of biasing the mean.
template <typename Seq>
CorrelationReport batch_correlation(const Seq& outputs, const Seq& targets) {
    if (outputs.size() != targets.size())
        throw usage_error("batch_correlation: sequence length mismatch");
    if (outputs.empty()) throw usage_error("batch_correlation: empty input");
    CorrelationReport rep;
    for (std::size_t i = 0; i < outputs.size(); ++i) {
        try {
            rep.coefficients.push_back(pearson(outputs[i], targets[i]));
        } catch (const numeric_error&) {
            rep.skipped_indices.push_back(i);
        }
    }
    rep.finalize();
    return rep;
}

}  // namespace kpa::metrics
