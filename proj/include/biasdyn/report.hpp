#pragma once
// Summary documents, score export and deterministic SVG bar charts.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "biasdyn/analysis.hpp"
#include "biasdyn/core.hpp"
#include "biasdyn/sim.hpp"

namespace biasdyn {

inline constexpr std::string_view kToolVersion = "0.3.0";
inline constexpr std::string_view kUndefined = "undefined";

// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

// 64-bit FNV-1a over the raw input bytes.
std::uint64_t fingerprint(std::string_view bytes) noexcept;

struct RunMetadata {
    std::string tool_version{kToolVersion};
    std::string input_kind;  // "scores", "embeddings" or "simulation"
    std::uint64_t input_fingerprint = 0;
    // Simulation (or fusion, for embeddings) parameters that produced the data.
    std::optional<SimConfig> sim_config;
    std::optional<std::size_t> clamp_count;
    double tie_epsilon = 0.0;
    std::optional<std::string> timestamp;  // only outside deterministic mode
};

enum class SummaryFormat { Structured, Delimited };

std::string render_summary(const InteractionMix& mix, const ProbabilityTables& tables,
                           const InteractionMeans& means, const RunMetadata& meta,
                           SummaryFormat format);

// Scores file (same header load_scores expects).
std::string export_scores(const std::vector<CategoryRecord>& records);
// Scores file plus interaction and dominance columns.
std::string export_classified(const std::vector<ClassifiedRecord>& classified);

struct NamedSeries {
    std::string name;
    std::vector<double> values;
};

struct ChartSeries {
    std::string title;
    std::vector<std::string> labels;
    std::vector<NamedSeries> series;

    void validate() const;
};

struct ChartStyle {
    int width = 960;
    int height = 540;
    std::string y_label = "Score";
    std::vector<std::string> palette{"#4C72B0", "#DD8452", "#55A868"};
};

// Standalone SVG 1.1: 0.0-1.0 axis with gridlines every 0.1, one group of
// bars per label in series order. Each bar is a <rect class="bar">.
std::string render_bar_chart(const ChartSeries& series, const ChartStyle& style = {});

// Per-category text / image / multimodal scores.
ChartSeries scores_chart(const std::vector<CategoryRecord>& records);
// Mean scores per interaction type; empty types are drawn at zero and
// labelled n=0.
ChartSeries means_chart(const InteractionMeans& means);
// Dominance proportions within each interaction type.
ChartSeries dominance_chart(const ProbabilityTable& given_interaction);

}  // namespace biasdyn
