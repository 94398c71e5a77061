#include <catch2/catch_amalgamated.hpp>

#include <vector>

#include "kpa/cipher.hpp"
#include "kpa/metrics.hpp"
#include "kpa/rng.hpp"
#include "kpa/synth.hpp"

using namespace kpa;
using namespace kpa::cipher;

namespace {

ImageBytes random_image(int w, int h, int c, std::uint64_t seed) {
    ImageBytes img(w, h, c);
    SplitMix64 rng(seed);
    for (auto& b : img.data) b = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

}  // namespace

TEST_CASE("golden ciphertext: 2x2 grayscale under the default logistic key") {
    // frozen alongside the keystream vectors in tests/oracles/chaos_reference.py
    ImageBytes plain(2, 2, 1);
    plain.data = {10, 20, 30, 40};
    auto cipher = encrypt(CipherKey::single_logistic(), plain);
    CHECK(cipher.data == std::vector<std::uint8_t>{143, 64, 217, 141});
}

TEST_CASE("all-zero plaintext exposes the keystream") {
    ImageBytes zeros(2, 2, 1);
    auto cipher = encrypt(CipherKey::single_logistic(), zeros);
    auto ks = chaos::keystream(chaos::default_logistic(), 4);
    CHECK(cipher.data == ks.bytes);
}

TEST_CASE("round trip is byte-exact for both schemes") {
    auto gray_key = CipherKey::single_logistic();
    auto rgb_key = CipherKey::hybrid_rgb();
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto g = random_image(9, 7, 1, mix_seed(1, i));
        CHECK(decrypt(gray_key, encrypt(gray_key, g)) == g);
        auto c = random_image(8, 8, 3, mix_seed(2, i));
        CHECK(decrypt(rgb_key, encrypt(rgb_key, c)) == c);
    }
}

TEST_CASE("ciphertext dims equal plaintext dims") {
    auto img = random_image(13, 5, 3, 77);
    auto out = encrypt(CipherKey::hybrid_rgb(), img);
    CHECK(out.same_dims(img));
}

TEST_CASE("fixed key encrypts identically across calls") {
    auto img = random_image(16, 16, 1, 4242);
    auto key = CipherKey::single_logistic();
    CHECK(encrypt(key, img) == encrypt(key, img));
}

TEST_CASE("scheme/channel mismatches are usage errors") {
    auto gray = random_image(4, 4, 1, 5);
    auto rgb = random_image(4, 4, 3, 6);
    CHECK_THROWS_AS(encrypt(CipherKey::hybrid_rgb(), gray), usage_error);
    CHECK_THROWS_AS(encrypt(CipherKey::single_logistic(), rgb), usage_error);
    CipherKey bad = CipherKey::single_logistic();
    bad.logistic.control = 9.0;
    CHECK_THROWS_AS(encrypt(bad, gray), param_error);
}

TEST_CASE("hybrid scheme: sine params touch only the G plane") {
    auto img = random_image(8, 8, 3, 31);
    auto key_a = CipherKey::hybrid_rgb();
    auto key_b = key_a;
    key_b.sine.seed = 0.4;
    auto ca = encrypt(key_a, img);
    auto cb = encrypt(key_b, img);
    const std::size_t plane = img.pixel_count();
    // R and B planes identical, G plane differs
    CHECK(std::equal(ca.data.begin(), ca.data.begin() + plane, cb.data.begin()));
    CHECK(!std::equal(ca.data.begin() + plane, ca.data.begin() + 2 * plane, cb.data.begin() + plane));
    CHECK(std::equal(ca.data.begin() + 2 * plane, ca.data.end(), cb.data.begin() + 2 * plane));
}

TEST_CASE("decrypt with a barely wrong key yields uncorrelated output") {
    auto key = CipherKey::single_logistic();
    auto wrong = key;
    wrong.logistic.seed += 1e-10;
    auto plains = synth::stroke_corpus(120, 9001);
    std::vector<ImageBytes> garbled;
    garbled.reserve(plains.size());
    for (const auto& p : plains) garbled.push_back(decrypt(wrong, encrypt(key, p)));
    auto rep = metrics::batch_correlation(garbled, plains);
    INFO("mean |corr| = " << rep.mean_abs << " over " << rep.included() << " pairs");
    CHECK(rep.included() >= 100);
    CHECK(rep.mean_abs < 0.2);
}

TEST_CASE("correlation audit: plaintext vs ciphertext is near zero") {
    auto plains = synth::stroke_corpus(300, 77);
    auto rep = correlation_audit(CipherKey::single_logistic(), plains);
    INFO("mean |corr| = " << rep.mean_abs_corr);
    CHECK(rep.pairs == 300);
    CHECK(rep.mean_abs_corr < 0.1);
}

TEST_CASE("correlation audit: identity cipher and degenerate inputs") {
    auto plains = synth::stroke_corpus(10, 3);
    // all-zero keystream degenerate hook == comparing an image with itself
    auto rep = audit_pairs(plains, plains);
    CHECK_THAT(rep.mean_abs_corr, Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(rep.max_abs_corr, Catch::Matchers::WithinAbs(1.0, 1e-12));

    CHECK_THROWS_AS(correlation_audit(CipherKey::single_logistic(), {}), usage_error);

    // constant pair is skipped and counted
    std::vector<ImageBytes> with_const = plains;
    with_const.push_back(ImageBytes(28, 28, 1));  // all zeros
    auto rep2 = correlation_audit(CipherKey::single_logistic(), with_const);
    CHECK(rep2.skipped_constant == 1);
    CHECK(rep2.pairs == 11);
}
