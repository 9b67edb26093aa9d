#include <doctest.h>

#include <cmath>
#include <random>

#include "biasdyn/embed.hpp"
#include "biasdyn/error.hpp"
#include "support/oracles.hpp"

using namespace biasdyn;

namespace {

EmbeddingVector vec(std::initializer_list<double> xs) { return EmbeddingVector(std::vector<double>(xs)); }

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t dim) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<double> v(dim);
    for (auto& x : v) x = n(rng);
    return v;
}

}  // namespace

TEST_CASE("EmbeddingVector validation") {
    CHECK_THROWS_AS(EmbeddingVector({}), ValidationError);
    CHECK_THROWS_AS(vec({0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(vec({1.0, std::nan("")}), ValidationError);
    CHECK(vec({3.0, 4.0}).norm() == 5.0);
}

TEST_CASE("cosine_similarity examples") {
    CHECK(cosine_similarity(vec({1, 0}), vec({0, 1})) == 0.0);
    CHECK(cosine_similarity(vec({3, 4}), vec({3, 4})) == doctest::Approx(1.0).epsilon(1e-15));
    // oracle: 1 / sqrt(2)
    CHECK(std::abs(cosine_similarity(vec({1, 0}), vec({1, 1})) - 0.7071067811865476) < 1e-12);
    CHECK_THROWS_AS(cosine_similarity(vec({1, 0}), vec({1, 0, 0})), ValidationError);
}

TEST_CASE("cosine_similarity is clamped, symmetric and scale invariant") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    for (int k = 0; k < 2000; ++k) {
        const auto dim = static_cast<std::size_t>(1 + k % 17);
        const auto a = random_vector(rng, dim);
        const auto b = random_vector(rng, dim);
        const EmbeddingVector u(a);
        const EmbeddingVector v(b);
        const double c = cosine_similarity(u, v);
        REQUIRE(c >= -1.0);
        REQUIRE(c <= 1.0);
        REQUIRE(c == cosine_similarity(v, u));
        REQUIRE(std::abs(c - oracle::cosine(a, b)) < 1e-12);

        const double alpha = scale(rng);
        auto scaled = a;
        for (auto& x : scaled) x *= alpha;
        REQUIRE(std::abs(cosine_similarity(EmbeddingVector(scaled), v) - c) < 1e-12);
    }
}

TEST_CASE("association examples") {
    const AnchorSet anchors({vec({1, 0})}, {vec({0, 1})});
    const std::vector<EmbeddingVector> targets{vec({1, 0})};
    CHECK(association(targets, anchors) == 1.0);
    CHECK(association(targets, anchors.swapped()) == -1.0);

    const AnchorSet same({vec({1, 2}), vec({0.5, -1})}, {vec({1, 2}), vec({0.5, -1})});
    const std::vector<EmbeddingVector> t2{vec({0.3, 0.7}), vec({-2, 1})};
    CHECK(association(t2, same) == 0.0);

    CHECK_THROWS_AS(association(std::vector<EmbeddingVector>{}, anchors), ValidationError);
    const std::vector<EmbeddingVector> wrong{vec({1, 0, 0})};
    CHECK_THROWS_AS(association(wrong, anchors), ValidationError);
}

TEST_CASE("association matches the brute-force oracle and pools by target count") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 2 + trial % 6;
        auto draw_list = [&](std::size_t n) {
            std::vector<std::vector<double>> raw;
            for (std::size_t k = 0; k < n; ++k) raw.push_back(random_vector(rng, dim));
            return raw;
        };
        auto to_vectors = [](const std::vector<std::vector<double>>& raw) {
            std::vector<EmbeddingVector> out;
            for (const auto& r : raw) out.emplace_back(r);
            return out;
        };
        const auto p = draw_list(1 + trial % 3);
        const auto u = draw_list(1 + trial % 4);
        const auto a = draw_list(1 + trial % 5);
        const auto b = draw_list(1 + trial % 2);
        const AnchorSet anchors(to_vectors(p), to_vectors(u));

        const double assoc_a = association(to_vectors(a), anchors);
        REQUIRE(std::abs(assoc_a - oracle::association(a, p, u)) < 1e-12);

        auto both = a;
        both.insert(both.end(), b.begin(), b.end());
        const double assoc_b = association(to_vectors(b), anchors);
        const double pooled = association(to_vectors(both), anchors);
        const double weighted = (assoc_a * a.size() + assoc_b * b.size()) / static_cast<double>(both.size());
        REQUIRE(std::abs(pooled - weighted) < 1e-12);
    }
}

TEST_CASE("bias_score_from_association") {
    CHECK(bias_score_from_association(0.0).value() == 0.5);
    CHECK(bias_score_from_association(2.0).value() == 1.0);
    CHECK(bias_score_from_association(-2.0).value() == 0.0);
    CHECK(bias_score_from_association(1.0).value() == 0.75);
    CHECK_THROWS_AS(bias_score_from_association(2.0000001), ValidationError);
    CHECK_THROWS_AS(bias_score_from_association(std::nan("")), ValidationError);
}

TEST_CASE("modality_bias examples") {
    const AnchorSet orth({vec({1, 0})}, {vec({0, 1})});
    TargetGroupEmbeddings g{"religion", "Hindu", Modality::Text, {vec({1, 0}), vec({2, 0})}};
    CHECK(modality_bias(g, orth).value() == 0.75);

    const AnchorSet identical({vec({1, 1})}, {vec({1, 1})});
    CHECK(modality_bias(g, identical).value() == 0.5);

    const AnchorSet opposite({vec({1, 0})}, {vec({-1, 0})});
    TargetGroupEmbeddings single{"religion", "Hindu", Modality::Image, {vec({1, 0})}};
    CHECK(modality_bias(single, opposite).value() == 1.0);

    TargetGroupEmbeddings bad{"nationality", "Arab", Modality::Image, {vec({1, 0, 0})}};
    CHECK_THROWS_WITH_AS(modality_bias(bad, orth), doctest::Contains("nationality/Arab (image)"), ValidationError);
}

TEST_CASE("anchor swap complements the score") {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 500; ++k) {
        const std::size_t dim = 3 + k % 5;
        TargetGroupEmbeddings g{"c", "g", Modality::Text, {}};
        for (int n = 0; n < 1 + k % 4; ++n) g.vectors.emplace_back(random_vector(rng, dim));
        const AnchorSet anchors({EmbeddingVector(random_vector(rng, dim)), EmbeddingVector(random_vector(rng, dim))},
                                {EmbeddingVector(random_vector(rng, dim))});
        const double s = modality_bias(g, anchors).value();
        const double swapped = modality_bias(g, anchors.swapped()).value();
        REQUIRE(std::abs(swapped - (1.0 - s)) < 1e-12);
    }
}

TEST_CASE("AnchorSet requires both roles and one dimension") {
    CHECK_THROWS_WITH_AS(AnchorSet({}, {vec({1, 0})}), doctest::Contains("pleasant"), ValidationError);
    CHECK_THROWS_WITH_AS(AnchorSet({vec({1, 0})}, {}), doctest::Contains("unpleasant"), ValidationError);
    CHECK_THROWS_AS(AnchorSet({vec({1, 0})}, {vec({1, 0, 0})}), ValidationError);
}
