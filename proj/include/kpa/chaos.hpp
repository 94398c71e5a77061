#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "kpa/errors.hpp"

namespace kpa::chaos {

enum class MapFamily : std::uint8_t { Logistic, Sine, Chebyshev };

inline const char* family_name(MapFamily f) {
    switch (f) {
        case MapFamily::Logistic: return "logistic";
        case MapFamily::Sine: return "sine";
        case MapFamily::Chebyshev: return "chebyshev";
    }
    return "?";
}

// Key material of the cipher: one 1-D map, its control parameter, the seed
// orbit starts from, and how many transient iterates to discard.
struct ChaoticMapParams {
    MapFamily family = MapFamily::Logistic;
    double control = 0.0;   // mu (logistic), sigma (sine), theta (chebyshev)
    double seed = 0.0;      // X0
    std::size_t burn_in = 1000;

    void validate() const {
        switch (family) {
            case MapFamily::Logistic:
                if (!(seed > 0.0 && seed < 1.0))
                    throw param_error("logistic seed must lie in (0,1), got " + std::to_string(seed));
                if (!(control >= 0.0 && control <= 4.0))
                    throw param_error("logistic control must lie in [0,4], got " + std::to_string(control));
                break;
            case MapFamily::Sine:
                if (!(control > 0.0 && control <= 1.0))
                    throw param_error("sine control must lie in (0,1], got " + std::to_string(control));
                if (!(seed > 0.0 && seed < 1.0))
                    throw param_error("sine seed must lie in (0,1), got " + std::to_string(seed));
                break;
            case MapFamily::Chebyshev:
                if (!(control > 1.0))
                    throw param_error("chebyshev control must exceed 1, got " + std::to_string(control));
                if (!(seed >= -1.0 && seed <= 1.0))
                    throw param_error("chebyshev seed must lie in [-1,1], got " + std::to_string(seed));
                break;
        }
    }

    // control parameter regions where the orbits are actually chaotic
    bool in_chaotic_regime() const {
        switch (family) {
            case MapFamily::Logistic: return control > 3.5699456 && control <= 4.0;
            case MapFamily::Sine: return control > 0.867;
            case MapFamily::Chebyshev: return control > 1.0;
        }
        return false;
    }

    bool operator==(const ChaoticMapParams&) const = default;
};

struct Keystream {
    std::vector<std::uint8_t> bytes;
    ChaoticMapParams params;

    std::size_t length() const { return bytes.size(); }
};

// One iterate of the selected recurrence. All arithmetic is binary64 with
// the literal operation order below; the build disables FP contraction so
// repeated runs (and the Python reference) agree bit for bit.
inline double map_step(const ChaoticMapParams& p, double x) {
    switch (p.family) {
        case MapFamily::Logistic:
            if (!(x >= 0.0 && x <= 1.0))
                throw param_error("logistic state left [0,1]: " + std::to_string(x));
            return p.control * x * (1.0 - x);
        case MapFamily::Sine:
            if (!(x >= 0.0 && x <= 1.0))
                throw param_error("sine state left [0,1]: " + std::to_string(x));
            return p.control * std::sin(std::numbers::pi * x);
        case MapFamily::Chebyshev:
            if (!(x >= -1.0 && x <= 1.0))
                throw param_error("chebyshev state left [-1,1]: " + std::to_string(x));
            return std::cos(p.control * std::acos(x));
    }
    throw param_error("unknown map family");
}

// n orbit values following the burn-in: X_{burn_in+1} ... X_{burn_in+n}.
inline std::vector<double> orbit(const ChaoticMapParams& p, std::size_t n) {
    p.validate();
    if (n == 0) throw param_error("orbit length must be positive");
    double x = p.seed;
    for (std::size_t i = 0; i < p.burn_in; ++i) x = map_step(p, x);
    std::vector<double> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        x = map_step(p, x);
        out.push_back(x);
    }
    return out;
}

// Orbit value -> key byte. Chebyshev's [-1,1] range is first mapped onto
// [0,1]; then the 14th-decimal-depth digits are taken mod 256 so no byte is
// dominated by the orbit's coarse structure.
inline std::uint8_t quantize_byte(double x, MapFamily family) {
    double u = (family == MapFamily::Chebyshev) ? (x + 1.0) / 2.0 : x;
    double scaled = std::floor(u * 1.0e14);
    return static_cast<std::uint8_t>(static_cast<std::uint64_t>(scaled) % 256u);
}

inline Keystream keystream(const ChaoticMapParams& p, std::size_t length) {
    p.validate();
    if (length == 0) throw param_error("keystream length must be positive");
    Keystream ks;
    ks.params = p;
    ks.bytes.reserve(length);
    double x = p.seed;
    for (std::size_t i = 0; i < p.burn_in; ++i) x = map_step(p, x);
    for (std::size_t i = 0; i < length; ++i) {
        x = map_step(p, x);
        ks.bytes.push_back(quantize_byte(x, p.family));
    }
    return ks;
}

// The parameter choices used throughout the experiments.
inline ChaoticMapParams default_logistic() { return {MapFamily::Logistic, 3.601, 0.1, 1000}; }
inline ChaoticMapParams default_sine() { return {MapFamily::Sine, 0.95, 0.154, 1000}; }
inline ChaoticMapParams default_chebyshev() { return {MapFamily::Chebyshev, 5.0, 0.165, 1000}; }

}  // namespace kpa::chaos
