#include <doctest.h>

#include <algorithm>
#include <random>

#include "biasdyn/analysis.hpp"
#include "biasdyn/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace biasdyn;

namespace {

CategoryRecord rec(const std::string& g, double t, double i, double m) {
    return {"c", g, BiasScore(t), BiasScore(i), BiasScore(m)};
}

}  // namespace

TEST_CASE("classify_dataset preserves order and rejects empty input") {
    const auto out = classify_dataset({rec("a", 0.5, 0.6, 0.7), rec("b", 0.7, 0.4, 0.3)}, 0.0);
    REQUIRE(out.size() == 2);
    CHECK(out[0].record().group_name == "a");
    CHECK(out[0].interaction() == InteractionType::Amplification);
    CHECK(out[1].interaction() == InteractionType::Mitigation);
    CHECK_THROWS_WITH_AS(classify_dataset({}, 0.0), doctest::Contains("no records"), ValidationError);
    CHECK_THROWS_AS(classify_dataset({rec("a", 0.5, 0.5, 0.5)}, -1.0), ValidationError);
}

TEST_CASE("strictly-between scores are all neutral") {
    const auto out = classify_dataset({rec("a", 0.2, 0.8, 0.5), rec("b", 0.9, 0.1, 0.3), rec("c", 0.4, 0.45, 0.42)}, 0.0);
    for (const auto& c : out) CHECK(c.interaction() == InteractionType::Neutral);
}

TEST_CASE("abstract fixture splits 4 / 2 / 12") {
    const auto classified = classify_dataset(fixtures::abstract_mix(), 0.0);
    const auto mix = interaction_mix(classified);
    CHECK(mix.total == 18);
    CHECK(mix.count(InteractionType::Amplification) == 4);
    CHECK(mix.count(InteractionType::Mitigation) == 2);
    CHECK(mix.count(InteractionType::Neutral) == 12);
    CHECK(mix.proportion(InteractionType::Amplification) == 4.0 / 18.0);
    CHECK(mix.proportion(InteractionType::Mitigation) == 2.0 / 18.0);
    CHECK(mix.proportion(InteractionType::Neutral) == 12.0 / 18.0);
}

TEST_CASE("interaction_mix edge cases") {
    const auto all_neutral = classify_dataset({rec("a", 0.2, 0.8, 0.5), rec("b", 0.5, 0.5, 0.5)}, 0.0);
    const auto m = interaction_mix(all_neutral);
    CHECK(m.proportion(InteractionType::Neutral) == 1.0);
    CHECK(m.proportion(InteractionType::Amplification) == 0.0);

    const auto one = classify_dataset({rec("a", 0.5, 0.6, 0.7)}, 0.0);
    CHECK(interaction_mix(one).proportion(InteractionType::Amplification) == 1.0);
    CHECK_THROWS_AS(interaction_mix({}), ValidationError);
}

TEST_CASE("dominance narrative fixture conditional probabilities") {
    const auto classified = classify_dataset(fixtures::dominance_narrative(), 0.0);
    const auto by_interaction = conditional_table(classified, TableDirection::DominanceGivenInteraction);
    CHECK(by_interaction.p_dominance_given(InteractionType::Mitigation, Dominance::TextDominant) == 1.0);
    CHECK(by_interaction.p_dominance_given(InteractionType::Mitigation, Dominance::ImageDominant) == 0.0);
    CHECK(by_interaction.p_dominance_given(InteractionType::Neutral, Dominance::ImageDominant) == 10.0 / 13.0);
    CHECK(by_interaction.p_dominance_given(InteractionType::Amplification, Dominance::TextDominant) == 0.5);
    CHECK(by_interaction.p_dominance_given(InteractionType::Amplification, Dominance::ImageDominant) == 0.5);
    CHECK(by_interaction.tie_count() == 0);

    const auto by_dominance = conditional_table(classified, TableDirection::InteractionGivenDominance);
    // text dominant: 2 amp, 1 mit, 3 neutral; image dominant: 2 amp, 0 mit, 10 neutral
    CHECK(by_dominance.stratum_count(0) == 6);
    CHECK(by_dominance.stratum_count(1) == 12);
    CHECK(by_dominance.p_interaction_given(Dominance::TextDominant, InteractionType::Mitigation) == 1.0 / 6.0);
    CHECK(by_dominance.p_interaction_given(Dominance::ImageDominant, InteractionType::Neutral) == 10.0 / 12.0);
    CHECK_THROWS_AS(by_dominance.p_dominance_given(InteractionType::Neutral, Dominance::TextDominant), ValidationError);
    CHECK_THROWS_AS(by_dominance.p_interaction_given(Dominance::Tie, InteractionType::Neutral), ValidationError);
}

TEST_CASE("empty strata are undefined and ties are excluded") {
    // two ties and one text-dominant amplification
    const auto classified =
        classify_dataset({rec("a", 0.5, 0.5, 0.6), rec("b", 0.3, 0.3, 0.3), rec("c", 0.6, 0.5, 0.7)}, 0.0);
    const auto t = conditional_table(classified, TableDirection::InteractionGivenDominance);
    CHECK(t.tie_count() == 2);
    CHECK(t.stratum_count(0) == 1);
    CHECK(t.stratum_count(1) == 0);
    CHECK_FALSE(t.p_interaction_given(Dominance::ImageDominant, InteractionType::Neutral).has_value());
    CHECK(t.p_interaction_given(Dominance::TextDominant, InteractionType::Amplification) == 1.0);

    const auto u = conditional_table(classified, TableDirection::DominanceGivenInteraction);
    CHECK_FALSE(u.p_dominance_given(InteractionType::Mitigation, Dominance::TextDominant).has_value());

    // a wider epsilon turns the third record into a tie as well
    const auto wide = classify_dataset({rec("c", 0.6, 0.5, 0.7)}, 0.2);
    CHECK(conditional_table(wide, TableDirection::InteractionGivenDominance).tie_count() == 1);
}

TEST_CASE("interaction_means") {
    const auto one_each =
        classify_dataset({rec("a", 0.5, 0.6, 0.7), rec("m", 0.7, 0.4, 0.3), rec("n", 0.2, 0.8, 0.5)}, 0.0);
    const auto m = interaction_means(one_each);
    CHECK(m.of(InteractionType::Amplification)->s_multi == 0.7);
    CHECK(m.of(InteractionType::Mitigation)->s_text == 0.7);
    CHECK(m.of(InteractionType::Neutral)->s_image == 0.8);

    const auto two_neutral = classify_dataset({rec("a", 0.4, 0.8, 0.5), rec("b", 0.6, 0.2, 0.3)}, 0.0);
    const auto n = interaction_means(two_neutral);
    CHECK(n.of(InteractionType::Neutral)->s_text == 0.5);
    CHECK(n.count(InteractionType::Neutral) == 2);
    CHECK_FALSE(n.of(InteractionType::Mitigation).has_value());
    CHECK(n.count(InteractionType::Mitigation) == 0);
}

TEST_CASE("analysis properties over random datasets") {
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng() % 50;
        const double eps = (trial % 3 == 0) ? 0.1 : 0.0;
        auto records = oracle::random_records(rng, n);
        const auto classified = classify_dataset(records, eps);
        const auto counts = oracle::brute_counts(records, eps);

        const auto gd = conditional_table(classified, TableDirection::InteractionGivenDominance);
        const auto gi = conditional_table(classified, TableDirection::DominanceGivenInteraction);
        REQUIRE(gd.tie_count() == static_cast<std::size_t>(counts.ties));
        REQUIRE(gi.tie_count() == static_cast<std::size_t>(counts.ties));

        std::size_t conserved_gd = gd.tie_count();
        std::size_t conserved_gi = gi.tie_count();
        for (std::size_t d = 0; d < 2; ++d) conserved_gd += gd.stratum_count(d);
        for (std::size_t a = 0; a < 3; ++a) conserved_gi += gi.stratum_count(a);
        REQUIRE(conserved_gd == n);
        REQUIRE(conserved_gi == n);

        for (std::size_t a = 0; a < 3; ++a) {
            for (std::size_t d = 0; d < 2; ++d) {
                REQUIRE(gd.joint_count(d, a) == static_cast<std::size_t>(counts.joint[a][d]));
                REQUIRE(gi.joint_count(a, d) == static_cast<std::size_t>(counts.joint[a][d]));
            }
        }

        // shuffling changes nothing numeric
        auto shuffled = records;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        const auto classified2 = classify_dataset(shuffled, eps);
        const auto m1 = interaction_means(classified);
        const auto m2 = interaction_means(classified2);
        for (auto t : kInteractionTypes) {
            REQUIRE(m1.of(t).has_value() == m2.of(t).has_value());
            if (m1.of(t)) {
                REQUIRE(m1.of(t)->s_text == m2.of(t)->s_text);
                REQUIRE(m1.of(t)->s_image == m2.of(t)->s_image);
                REQUIRE(m1.of(t)->s_multi == m2.of(t)->s_multi);
            }
        }
        const auto mix1 = interaction_mix(classified);
        const auto mix2 = interaction_mix(classified2);
        REQUIRE(mix1.counts == mix2.counts);
        REQUIRE(mix1.proportions == mix2.proportions);
        const auto gd2 = conditional_table(classified2, TableDirection::InteractionGivenDominance);
        for (std::size_t d = 0; d < 2; ++d) {
            for (std::size_t a = 0; a < 3; ++a) REQUIRE(gd.probability(d, a) == gd2.probability(d, a));
        }
    }
}
