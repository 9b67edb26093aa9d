#pragma once
// Dataset-level analytics over classified records: interaction mix,
// dominance-conditioned probability tables and per-interaction means.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "biasdyn/core.hpp"

namespace biasdyn {

// Order-preserving; throws on empty input.
std::vector<ClassifiedRecord> classify_dataset(const std::vector<CategoryRecord>& records,
                                               double tie_epsilon);

// Indexed by InteractionType (Amplification, Mitigation, Neutral).
struct InteractionMix {
    std::array<std::size_t, 3> counts{};
    std::array<double, 3> proportions{};
    std::size_t total = 0;

    std::size_t count(InteractionType t) const { return counts[static_cast<std::size_t>(t)]; }
    double proportion(InteractionType t) const { return proportions[static_cast<std::size_t>(t)]; }
};

InteractionMix interaction_mix(std::span<const ClassifiedRecord> classified);

enum class TableDirection { InteractionGivenDominance, DominanceGivenInteraction };

std::string_view to_string(TableDirection d) noexcept;

// Conditional probabilities of outcome given condition stratum. Tie records
// never enter a stratum; they are counted in tie_count. A stratum with no
// records has undefined (nullopt) cells.
class ProbabilityTable {
public:
    TableDirection direction() const noexcept { return direction_; }
    std::size_t tie_count() const noexcept { return tie_count_; }

    // Labels of the condition strata / outcomes, in display order.
    std::span<const std::string_view> conditions() const noexcept { return conditions_; }
    std::span<const std::string_view> outcomes() const noexcept { return outcomes_; }

    std::size_t stratum_count(std::size_t condition) const { return stratum_counts_.at(condition); }
    std::size_t joint_count(std::size_t condition, std::size_t outcome) const {
        return joint_counts_.at(condition).at(outcome);
    }
    std::optional<double> probability(std::size_t condition, std::size_t outcome) const;

    // Typed lookups; the stratum is the conditioning label.
    std::optional<double> p_interaction_given(Dominance d, InteractionType t) const;
    std::optional<double> p_dominance_given(InteractionType t, Dominance d) const;

private:
    friend ProbabilityTable conditional_table(std::span<const ClassifiedRecord>, TableDirection);

    TableDirection direction_ = TableDirection::InteractionGivenDominance;
    std::vector<std::string_view> conditions_;
    std::vector<std::string_view> outcomes_;
    std::vector<std::size_t> stratum_counts_;
    std::vector<std::vector<std::size_t>> joint_counts_;
    std::size_t tie_count_ = 0;
};

ProbabilityTable conditional_table(std::span<const ClassifiedRecord> classified,
                                   TableDirection direction);

// Either direction may be absent when a caller asks for only one.
struct ProbabilityTables {
    std::optional<ProbabilityTable> given_dominance;
    std::optional<ProbabilityTable> given_interaction;
};

struct ScoreMeans {
    double s_text = 0.0;
    double s_image = 0.0;
    double s_multi = 0.0;
};

struct InteractionMeans {
    std::array<std::size_t, 3> counts{};
    std::array<std::optional<ScoreMeans>, 3> means{};

    std::size_t count(InteractionType t) const { return counts[static_cast<std::size_t>(t)]; }
    const std::optional<ScoreMeans>& of(InteractionType t) const {
        return means[static_cast<std::size_t>(t)];
    }
};

InteractionMeans interaction_means(std::span<const ClassifiedRecord> classified);

}  // namespace biasdyn
