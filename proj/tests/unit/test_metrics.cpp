#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <utility>
#include <vector>

#include "hmsc/error.hpp"
#include "hmsc/metrics.hpp"
#include "hmsc/rng.hpp"

using namespace hmsc;

namespace {

Segmentation seg(int w, int h, std::vector<uint32_t> labels) {
    Segmentation s;
    s.width = w;
    s.height = h;
    s.labels = std::move(labels);
    return s;
}

// Definition-level oracles built straight from joint counts; the production
// code is checked against these, never the other way around.
struct JointCounts {
    std::map<std::pair<uint32_t, uint32_t>, uint64_t> joint;
    uint64_t total = 0;
};

JointCounts count_joint(const Segmentation& a, const Segmentation& b) {
    JointCounts c;
    for (size_t i = 0; i < a.labels.size(); ++i) {
        if (a.labels[i] == 0 || b.labels[i] == 0) continue;
        ++c.joint[{a.labels[i], b.labels[i]}];
        ++c.total;
    }
    return c;
}

double vi_oracle(const Segmentation& a, const Segmentation& b) {
    JointCounts c = count_joint(a, b);
    std::map<uint32_t, uint64_t> ma, mb;
    for (const auto& [ab, n] : c.joint) {
        ma[ab.first] += n;
        mb[ab.second] += n;
    }
    auto entropy = [&](const auto& counts) {
        double h = 0;
        for (const auto& [_, n] : counts) {
            double p = static_cast<double>(n) / static_cast<double>(c.total);
            h -= p * std::log(p);
        }
        return h;
    };
    double h_joint = 0;
    for (const auto& [_, n] : c.joint) {
        double p = static_cast<double>(n) / static_cast<double>(c.total);
        h_joint -= p * std::log(p);
    }
    return std::max(0.0, 2.0 * h_joint - entropy(ma) - entropy(mb));
}

double are_oracle(const Segmentation& pred, const Segmentation& truth) {
    JointCounts c = count_joint(pred, truth);
    std::map<uint32_t, uint64_t> ma, mb;
    for (const auto& [ab, n] : c.joint) {
        ma[ab.first] += n;
        mb[ab.second] += n;
    }
    double s = 0, sa = 0, sb = 0;
    for (const auto& [_, n] : c.joint) s += static_cast<double>(n) * n;
    for (const auto& [_, n] : ma) sa += static_cast<double>(n) * n;
    for (const auto& [_, n] : mb) sb += static_cast<double>(n) * n;
    double precision = s / sa, recall = s / sb;
    return 1.0 - 2.0 * precision * recall / (precision + recall);
}

Segmentation random_seg(int w, int h, uint32_t max_label, uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<uint32_t> l(static_cast<size_t>(w) * h);
    for (auto& v : l) v = static_cast<uint32_t>(rng.next_below(max_label + 1));  // 0 = unlabeled
    return seg(w, h, std::move(l));
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("identical labelings score zero") {
    Segmentation a = random_seg(16, 16, 5, 99);
    // guarantee at least one labeled pixel
    a.labels[0] = 1;
    CHECK(variation_of_information(a, a) == doctest::Approx(0.0).scale(1.0));
    CHECK(adapted_rand_error(a, a) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("splitting one region in half costs ln 2 of information") {
    int w = 20, h = 20;
    std::vector<uint32_t> halves(static_cast<size_t>(w) * h), whole(halves.size(), 1);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) halves[static_cast<size_t>(y) * w + x] = x < w / 2 ? 1 : 2;
    Segmentation a = seg(w, h, halves), b = seg(w, h, whole);

    CHECK(variation_of_information(a, b) == doctest::Approx(std::log(2.0)));
    // precision 1, recall 1/2 -> F = 2/3
    CHECK(adapted_rand_error(a, b) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("total oversegmentation is heavily penalized") {
    int w = 20, h = 20;
    std::vector<uint32_t> unique(static_cast<size_t>(w) * h), whole(unique.size(), 1);
    std::iota(unique.begin(), unique.end(), 1u);
    Segmentation over = seg(w, h, unique), truth = seg(w, h, whole);
    double n = static_cast<double>(unique.size());
    CHECK(adapted_rand_error(over, truth) == doctest::Approx(1.0 - 2.0 / (n + 1.0)));
    CHECK(adapted_rand_error(over, truth) > 0.9);
    CHECK(variation_of_information(over, truth) == doctest::Approx(std::log(n)));
}

TEST_CASE("scores ignore labels and orientation of the comparison") {
    Segmentation a = random_seg(15, 13, 4, 7);
    Segmentation b = random_seg(15, 13, 3, 8);
    a.labels[0] = b.labels[0] = 1;

    // relabel a by an order-scrambling map
    Segmentation a2 = a;
    for (auto& v : a2.labels)
        if (v != 0) v = 1000 - v * 17;
    CHECK(variation_of_information(a2, b) == doctest::Approx(variation_of_information(a, b)));
    CHECK(adapted_rand_error(a2, b) == doctest::Approx(adapted_rand_error(a, b)));

    CHECK(variation_of_information(b, a) == doctest::Approx(variation_of_information(a, b)));
    // swapping roles swaps precision and recall; the F-score is blind to that
    CHECK(adapted_rand_error(b, a) == doctest::Approx(adapted_rand_error(a, b)));
}

TEST_CASE("unlabeled pixels are excluded from the comparison") {
    // jointly labeled set is only the second half, where both are constant
    std::vector<uint32_t> a(40, 0), b(40, 1);
    for (int i = 20; i < 40; ++i) a[i] = 7;
    for (int i = 0; i < 20; ++i) b[i] = 3;
    Segmentation sa = seg(8, 5, a), sb = seg(8, 5, b);
    CHECK(variation_of_information(sa, sb) == doctest::Approx(0.0).scale(1.0));
    CHECK(adapted_rand_error(sa, sb) == doctest::Approx(0.0).scale(1.0));

    ContingencyTable t = contingency(sa, sb);
    CHECK(t.total == 20);
    REQUIRE(t.joint.size() == 1);
    CHECK(t.joint.begin()->first == std::make_pair(7u, 1u));
    CHECK(t.marg_a.at(7) == 20);
    CHECK(t.marg_b.at(1) == 20);
}

TEST_CASE("random labelings match the definition oracles") {
    for (uint64_t s = 1; s <= 12; ++s) {
        Segmentation a = random_seg(20, 20, 6, s);
        Segmentation b = random_seg(20, 20, 4, s + 100);
        a.labels[5] = b.labels[5] = 2;
        CHECK(std::abs(variation_of_information(a, b) - vi_oracle(a, b)) <= 1e-12);
        CHECK(std::abs(adapted_rand_error(a, b) - are_oracle(a, b)) <= 1e-12);
    }
}

TEST_CASE("bad inputs are rejected") {
    Segmentation a = seg(4, 4, std::vector<uint32_t>(16, 1));
    Segmentation wrong = seg(4, 5, std::vector<uint32_t>(20, 1));
    CHECK_THROWS_AS(variation_of_information(a, wrong), InvalidInput);
    CHECK_THROWS_AS(adapted_rand_error(a, wrong), InvalidInput);
    CHECK_THROWS_WITH(contingency(a, wrong), "metrics: segmentation dimensions differ");

    Segmentation zeros = seg(4, 4, std::vector<uint32_t>(16, 0));
    CHECK_THROWS_AS(variation_of_information(a, zeros), InvalidInput);
    CHECK_THROWS_WITH(contingency(a, zeros), "metrics: no jointly labeled pixels");
}

}  // TEST_SUITE
