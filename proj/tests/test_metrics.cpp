#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "kpa/metrics.hpp"
#include "kpa/rng.hpp"

using namespace kpa;
using kpa::metrics::batch_correlation;
using kpa::metrics::pearson;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = rng.uniform();
    return v;
}

double pearson_vec(const std::vector<double>& a, const std::vector<double>& b) {
    return pearson<double, double>(a, b);
}

}  // namespace

TEST_CASE("pearson frozen example") {
    // from tests/oracles/metrics_reference.py
    std::vector<double> o = {1, 2, 3, 4}, p = {1, 2, 3, 5};
    CHECK_THAT(pearson_vec(o, p), Catch::Matchers::WithinAbs(0.9827076298239906, 1e-15));
    std::vector<double> o2 = {0.12, 0.7, 0.33, 0.91}, p2 = {0.5, 0.62, 0.18, 0.88};
    CHECK_THAT(pearson_vec(o2, p2), Catch::Matchers::WithinAbs(0.7459807011388117, 1e-15));
}

TEST_CASE("pearson self- and affine-correlation") {
    auto v = random_values(256, 7);
    CHECK_THAT(pearson_vec(v, v), Catch::Matchers::WithinAbs(1.0, 1e-12));
    std::vector<double> pos(v.size()), neg(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        pos[i] = 2.5 * v[i] + 0.3;
        neg[i] = -1.7 * v[i] + 0.9;
    }
    CHECK_THAT(pearson_vec(pos, v), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(pearson_vec(neg, v), Catch::Matchers::WithinAbs(-1.0, 1e-12));
}

TEST_CASE("pearson rejects constant inputs") {
    std::vector<double> c(16, 0.5);
    auto v = random_values(16, 3);
    CHECK_THROWS_AS(pearson_vec(v, c), numeric_error);
    CHECK_THROWS_AS(pearson_vec(c, v), numeric_error);
}

TEST_CASE("pearson symmetry and bound properties") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto a = random_values(64, mix_seed(seed, 1));
        auto b = random_values(64, mix_seed(seed, 2));
        double ab = pearson_vec(a, b), ba = pearson_vec(b, a);
        CHECK(std::abs(ab - ba) < 1e-12);
        CHECK(std::abs(ab) <= 1.0 + 1e-12);
    }
}

TEST_CASE("pearson invariant under simultaneous positive affine rescale") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto a = random_values(64, mix_seed(seed, 11));
        auto b = random_values(64, mix_seed(seed, 12));
        std::vector<double> a2(a.size()), b2(b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            a2[i] = 37.5 * a[i] + 4.0;
            b2[i] = 37.5 * b[i] + 4.0;
        }
        CHECK(std::abs(pearson_vec(a2, b2) - pearson_vec(a, b)) < 1e-9);
    }
}

TEST_CASE("pearson flattens multi-channel images across channels") {
    ImageBytes o(2, 2, 3), p(2, 2, 3);
    SplitMix64 rng(99);
    for (auto& x : o.data) x = static_cast<std::uint8_t>(rng.below(256));
    for (auto& x : p.data) x = static_cast<std::uint8_t>(rng.below(256));
    std::vector<double> of(o.data.begin(), o.data.end()), pf(p.data.begin(), p.data.end());
    CHECK(pearson(o, p) == pearson_vec(of, pf));
}

TEST_CASE("batch_correlation mean and skip policy") {
    std::vector<std::vector<double>> outs, tgts;
    for (int i = 0; i < 10; ++i) {
        auto v = random_values(32, mix_seed(5, i));
        outs.push_back(v);
        tgts.push_back(v);
    }
    auto rep = batch_correlation(outs, tgts);
    CHECK(rep.included() == 10);
    CHECK_THAT(rep.mean, Catch::Matchers::WithinAbs(1.0, 1e-12));

    // one constant target among 10 -> 9 coefficients, skipped-count 1
    tgts[4].assign(32, 0.25);
    rep = batch_correlation(outs, tgts);
    CHECK(rep.included() == 9);
    CHECK(rep.skipped() == 1);
    CHECK(rep.skipped_indices == std::vector<std::size_t>{4});

    // all constant -> empty included set, explicit flag
    for (auto& t : tgts) t.assign(32, 1.0);
    rep = batch_correlation(outs, tgts);
    CHECK(rep.all_skipped());
    CHECK(rep.skipped() == 10);
}

TEST_CASE("report CSV lists every pair with skip flags") {
    std::vector<std::vector<double>> outs{{1, 2, 3, 4}, {1, 1, 1, 1}, {2, 1, 0, -1}};
    std::vector<std::vector<double>> tgts{{1, 2, 3, 5}, {0, 1, 2, 3}, {4, 3, 2, 1}};
    auto rep = batch_correlation(outs, tgts);
    std::ostringstream os;
    rep.write_csv(os);
    CHECK(os.str() ==
          "index,coefficient,skipped\n"
          "0,0.982708,0\n"
          "1,,1\n"
          "2,1,0\n");
}
