#include "biasdyn/analysis.hpp"

#include <algorithm>

#include "biasdyn/error.hpp"

namespace biasdyn {
namespace {

void require_non_empty(std::size_t n, const char* op) {
    if (n == 0) throw ValidationError(std::string(op) + ": no records");
}

std::size_t index_of(InteractionType t) { return static_cast<std::size_t>(t); }

// TextDominant -> 0, ImageDominant -> 1, Tie -> none.
std::optional<std::size_t> stratum_of(Dominance d) {
    switch (d) {
    case Dominance::TextDominant: return 0;
    case Dominance::ImageDominant: return 1;
    case Dominance::Tie: return std::nullopt;
    }
    return std::nullopt;
}

// Summing in sorted order makes the result independent of record order. The
// clamp keeps the mean inside [min, max] despite rounding in the sum.
double order_free_mean(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    double sum = 0.0;
    for (double x : v) sum += x;
    return std::clamp(sum / static_cast<double>(v.size()), v.front(), v.back());
}

}  // namespace

std::vector<ClassifiedRecord> classify_dataset(const std::vector<CategoryRecord>& records,
                                               double tie_epsilon) {
    require_non_empty(records.size(), "classify_dataset");
    validate_tie_epsilon(tie_epsilon);
    std::vector<ClassifiedRecord> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back(ClassifiedRecord::classify(r, tie_epsilon));
    return out;
}

InteractionMix interaction_mix(std::span<const ClassifiedRecord> classified) {
    require_non_empty(classified.size(), "interaction_mix");
    InteractionMix mix;
    for (const auto& c : classified) ++mix.counts[index_of(c.interaction())];
    mix.total = classified.size();
    for (std::size_t k = 0; k < 3; ++k) {
        mix.proportions[k] = static_cast<double>(mix.counts[k]) / static_cast<double>(mix.total);
    }
    return mix;
}

std::string_view to_string(TableDirection d) noexcept {
    return d == TableDirection::InteractionGivenDominance ? "interaction_given_dominance"
                                                          : "dominance_given_interaction";
}

std::optional<double> ProbabilityTable::probability(std::size_t condition, std::size_t outcome) const {
    const auto n = stratum_counts_.at(condition);
    if (n == 0) return std::nullopt;
    return static_cast<double>(joint_counts_.at(condition).at(outcome)) / static_cast<double>(n);
}

std::optional<double> ProbabilityTable::p_interaction_given(Dominance d, InteractionType t) const {
    if (direction_ != TableDirection::InteractionGivenDominance) {
        throw ValidationError("table conditions on interaction, not dominance");
    }
    const auto s = stratum_of(d);
    if (!s) throw ValidationError("tie is not a conditioning stratum");
    return probability(*s, index_of(t));
}

std::optional<double> ProbabilityTable::p_dominance_given(InteractionType t, Dominance d) const {
    if (direction_ != TableDirection::DominanceGivenInteraction) {
        throw ValidationError("table conditions on dominance, not interaction");
    }
    const auto s = stratum_of(d);
    if (!s) throw ValidationError("tie is not an outcome of this table");
    return probability(index_of(t), *s);
}

ProbabilityTable conditional_table(std::span<const ClassifiedRecord> classified,
                                   TableDirection direction) {
    require_non_empty(classified.size(), "conditional_table");

    std::vector<std::string_view> interactions;
    for (auto t : kInteractionTypes) interactions.push_back(to_string(t));
    std::vector<std::string_view> strata;
    for (auto d : kDominanceStrata) strata.push_back(to_string(d));

    ProbabilityTable table;
    table.direction_ = direction;
    const bool by_dominance = direction == TableDirection::InteractionGivenDominance;
    table.conditions_ = by_dominance ? strata : interactions;
    table.outcomes_ = by_dominance ? interactions : strata;
    table.stratum_counts_.assign(table.conditions_.size(), 0);
    table.joint_counts_.assign(table.conditions_.size(),
                               std::vector<std::size_t>(table.outcomes_.size(), 0));

    for (const auto& c : classified) {
        const auto s = stratum_of(c.dominance());
        if (!s) {
            ++table.tie_count_;
            continue;
        }
        const auto i = index_of(c.interaction());
        const auto cond = by_dominance ? *s : i;
        const auto outcome = by_dominance ? i : *s;
        ++table.stratum_counts_[cond];
        ++table.joint_counts_[cond][outcome];
    }
    return table;
}

InteractionMeans interaction_means(std::span<const ClassifiedRecord> classified) {
    require_non_empty(classified.size(), "interaction_means");
    std::array<std::array<std::vector<double>, 3>, 3> values;  // [label][modality]
    InteractionMeans out;
    for (const auto& c : classified) {
        const auto k = index_of(c.interaction());
        values[k][0].push_back(c.record().s_text.value());
        values[k][1].push_back(c.record().s_image.value());
        values[k][2].push_back(c.record().s_multi.value());
        ++out.counts[k];
    }
    for (std::size_t k = 0; k < 3; ++k) {
        if (out.counts[k] == 0) continue;
        out.means[k] = ScoreMeans{order_free_mean(values[k][0]), order_free_mean(values[k][1]),
                                  order_free_mean(values[k][2])};
    }
    return out;
}

}  // namespace biasdyn
