#include "biasdyn/core.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "biasdyn/error.hpp"

namespace biasdyn {

BiasScore::BiasScore(double value, std::string_view field) : value_(value) {
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(field) + " must be finite");
    }
    if (value < 0.0 || value > 1.0) {
        throw ValidationError(std::string(field) + " = " + std::to_string(value) +
                              " is outside [0, 1]");
    }
}

std::string_view to_string(InteractionType t) noexcept {
    switch (t) {
    case InteractionType::Amplification: return "amplification";
    case InteractionType::Mitigation: return "mitigation";
    case InteractionType::Neutral: return "neutral";
    }
    return "neutral";
}

std::string_view to_string(Dominance d) noexcept {
    switch (d) {
    case Dominance::TextDominant: return "text_dominant";
    case Dominance::ImageDominant: return "image_dominant";
    case Dominance::Tie: return "tie";
    }
    return "tie";
}

std::string_view display_name(InteractionType t) noexcept {
    switch (t) {
    case InteractionType::Amplification: return "Amplification";
    case InteractionType::Mitigation: return "Mitigation";
    case InteractionType::Neutral: return "Neutral";
    }
    return "Neutral";
}

std::string_view display_name(Dominance d) noexcept {
    switch (d) {
    case Dominance::TextDominant: return "Text dominant";
    case Dominance::ImageDominant: return "Image dominant";
    case Dominance::Tie: return "Tie";
    }
    return "Tie";
}

std::optional<InteractionType> parse_interaction(std::string_view s) noexcept {
    for (auto t : kInteractionTypes) {
        if (to_string(t) == s) return t;
    }
    return std::nullopt;
}

std::optional<Dominance> parse_dominance(std::string_view s) noexcept {
    for (auto d : {Dominance::TextDominant, Dominance::ImageDominant, Dominance::Tie}) {
        if (to_string(d) == s) return d;
    }
    return std::nullopt;
}

InteractionType classify_interaction(BiasScore s_text, BiasScore s_image, BiasScore s_multi) noexcept {
    const double hi = std::max(s_text.value(), s_image.value());
    const double lo = std::min(s_text.value(), s_image.value());
    const double m = s_multi.value();
    if (m > hi) return InteractionType::Amplification;
    if (m < lo) return InteractionType::Mitigation;
    return InteractionType::Neutral;
}

InteractionType classify_interaction(double s_text, double s_image, double s_multi) {
    return classify_interaction(BiasScore(s_text, "s_text"), BiasScore(s_image, "s_image"),
                                BiasScore(s_multi, "s_multi"));
}

BiasScore convex_combination(BiasScore s_text, BiasScore s_image, double w) {
    if (!std::isfinite(w) || w < 0.0 || w > 1.0) throw ValidationError("weight must lie in [0, 1]");
    const double t = s_text.value();
    const double i = s_image.value();
    return BiasScore(std::clamp(w * t + (1.0 - w) * i, std::min(t, i), std::max(t, i)));
}

double validate_tie_epsilon(double tie_epsilon) {
    if (!std::isfinite(tie_epsilon) || tie_epsilon < 0.0) {
        throw ValidationError("tie_epsilon must be finite and >= 0");
    }
    return tie_epsilon;
}

Dominance dominance(BiasScore s_text, BiasScore s_image, double tie_epsilon) {
    validate_tie_epsilon(tie_epsilon);
    const double diff = s_text.value() - s_image.value();
    if (diff > tie_epsilon) return Dominance::TextDominant;
    if (-diff > tie_epsilon) return Dominance::ImageDominant;
    return Dominance::Tie;
}

void require_unique_keys(const std::vector<CategoryRecord>& records) {
    std::set<std::pair<std::string_view, std::string_view>> seen;
    for (const auto& r : records) {
        if (!seen.emplace(r.class_name, r.group_name).second) {
            throw ValidationError("duplicate category (" + r.class_name + ", " + r.group_name + ")");
        }
    }
}

ClassifiedRecord ClassifiedRecord::classify(CategoryRecord record, double tie_epsilon) {
    const auto interaction = classify_interaction(record.s_text, record.s_image, record.s_multi);
    const auto dom = biasdyn::dominance(record.s_text, record.s_image, tie_epsilon);
    return ClassifiedRecord(std::move(record), interaction, dom);
}

}  // namespace biasdyn
