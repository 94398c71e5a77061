#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kpa/chaos.hpp"
#include "kpa/errors.hpp"
#include "kpa/image.hpp"
#include "kpa/metrics.hpp"

namespace kpa::cipher {

enum class Scheme : std::uint8_t { SingleLogistic, HybridRGB };

inline const char* scheme_name(Scheme s) {
    return s == Scheme::SingleLogistic ? "single_logistic" : "hybrid_rgb";
}

// Full key material. SingleLogistic keys grayscale images with one logistic
// keystream; HybridRGB keys the R, G, B planes with logistic, sine and
// chebyshev keystreams respectively.
struct CipherKey {
    Scheme scheme = Scheme::SingleLogistic;
    chaos::ChaoticMapParams logistic = chaos::default_logistic();
    chaos::ChaoticMapParams sine = chaos::default_sine();
    chaos::ChaoticMapParams chebyshev = chaos::default_chebyshev();

    void validate() const {
        if (logistic.family != chaos::MapFamily::Logistic)
            throw param_error("cipher key: logistic slot holds a different family");
        logistic.validate();
        if (scheme == Scheme::HybridRGB) {
            if (sine.family != chaos::MapFamily::Sine)
                throw param_error("cipher key: sine slot holds a different family");
            if (chebyshev.family != chaos::MapFamily::Chebyshev)
                throw param_error("cipher key: chebyshev slot holds a different family");
            sine.validate();
            chebyshev.validate();
        }
    }

    int required_channels() const { return scheme == Scheme::SingleLogistic ? 1 : 3; }

    static CipherKey single_logistic(chaos::ChaoticMapParams p = chaos::default_logistic()) {
        CipherKey k;
        k.scheme = Scheme::SingleLogistic;
        k.logistic = p;
        return k;
    }

    static CipherKey hybrid_rgb(chaos::ChaoticMapParams log = chaos::default_logistic(),
                                chaos::ChaoticMapParams sin = chaos::default_sine(),
                                chaos::ChaoticMapParams che = chaos::default_chebyshev()) {
        CipherKey k;
        k.scheme = Scheme::HybridRGB;
        k.logistic = log;
        k.sine = sin;
        k.chebyshev = che;
        return k;
    }

    bool operator==(const CipherKey&) const = default;
};

namespace detail {

inline void xor_plane(const std::uint8_t* src, std::uint8_t* dst, const std::vector<std::uint8_t>& ks) {
    for (std::size_t i = 0; i < ks.size(); ++i) dst[i] = src[i] ^ ks[i];
}

}  // namespace detail

// XOR stream cipher over a fresh per-channel keystream of length W*H.
// XOR makes decrypt the same transform as encrypt.
inline ImageBytes encrypt(const CipherKey& key, const ImageBytes& plain) {
    key.validate();
    plain.validate();
    if (plain.channels != key.required_channels())
        throw usage_error(std::string("cipher scheme ") + scheme_name(key.scheme) + " requires " +
                          std::to_string(key.required_channels()) + "-channel images, got " +
                          std::to_string(plain.channels));
    ImageBytes out = plain;
    const std::size_t plane = plain.pixel_count();
    if (key.scheme == Scheme::SingleLogistic) {
        const auto ks = chaos::keystream(key.logistic, plane);
        detail::xor_plane(plain.data.data(), out.data.data(), ks.bytes);
    } else {
        const chaos::ChaoticMapParams* maps[3] = {&key.logistic, &key.sine, &key.chebyshev};
        for (int c = 0; c < 3; ++c) {
            const auto ks = chaos::keystream(*maps[c], plane);
            detail::xor_plane(plain.data.data() + c * plane, out.data.data() + c * plane, ks.bytes);
        }
    }
    return out;
}

inline ImageBytes decrypt(const CipherKey& key, const ImageBytes& cipher) {
    return encrypt(key, cipher);  // XOR involution
}

struct AuditReport {
    std::size_t pairs = 0;
    std::size_t skipped_constant = 0;
    double mean_abs_corr = 0.0;
    double max_abs_corr = 0.0;
};

// Plaintext-vs-ciphertext correlation statistics over aligned pairs.
// Pairs where either side is constant are skipped and counted.
inline AuditReport audit_pairs(const std::vector<ImageBytes>& plains, const std::vector<ImageBytes>& ciphers) {
    if (plains.empty()) throw usage_error("correlation audit: empty image set");
    if (plains.size() != ciphers.size()) throw usage_error("correlation audit: unaligned pair sequences");
    auto rep = metrics::batch_correlation(plains, ciphers);
    AuditReport out;
    out.pairs = plains.size();
    out.skipped_constant = rep.skipped();
    out.mean_abs_corr = rep.all_skipped() ? 0.0 : rep.mean_abs;
    out.max_abs_corr = rep.all_skipped() ? 0.0 : rep.max_abs;
    return out;
}

inline AuditReport correlation_audit(const CipherKey& key, const std::vector<ImageBytes>& images) {
    if (images.empty()) throw usage_error("correlation audit: empty image set");
    std::vector<ImageBytes> ciphers;
    ciphers.reserve(images.size());
    for (const auto& img : images) ciphers.push_back(encrypt(key, img));
    return audit_pairs(images, ciphers);
}

}  // namespace kpa::cipher
