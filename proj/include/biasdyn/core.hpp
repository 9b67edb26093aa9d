#pragma once
// Domain vocabulary: bias scores, interaction / dominance labels, and the two
// decision rules everything else is built on.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace biasdyn {

// Bias magnitude of one modality for one category, always in [0, 1].
class BiasScore {
public:
    // Throws ValidationError naming `field` when value is NaN, infinite or
    // outside [0, 1].
    explicit BiasScore(double value, std::string_view field = "score");

    double value() const noexcept { return value_; }

    friend auto operator<=>(const BiasScore&, const BiasScore&) = default;

private:
    double value_;
};

enum class InteractionType { Amplification, Mitigation, Neutral };
enum class Dominance { TextDominant, ImageDominant, Tie };

inline constexpr InteractionType kInteractionTypes[] = {
    InteractionType::Amplification, InteractionType::Mitigation, InteractionType::Neutral};
inline constexpr Dominance kDominanceStrata[] = {Dominance::TextDominant, Dominance::ImageDominant};

std::string_view to_string(InteractionType t) noexcept;
std::string_view to_string(Dominance d) noexcept;
// Display form used in charts ("Amplification", "Text dominant", ...).
std::string_view display_name(InteractionType t) noexcept;
std::string_view display_name(Dominance d) noexcept;
std::optional<InteractionType> parse_interaction(std::string_view s) noexcept;
std::optional<Dominance> parse_dominance(std::string_view s) noexcept;

// Amplification iff multi > max(text, image); Mitigation iff multi < min;
// Neutral otherwise (closed band, so equality with either score is Neutral).
InteractionType classify_interaction(BiasScore s_text, BiasScore s_image, BiasScore s_multi) noexcept;

// Raw-value overload; validates each argument and names the offending field
// (s_text / s_image / s_multi) in the error.
InteractionType classify_interaction(double s_text, double s_image, double s_multi);

// w * s_text + (1 - w) * s_image, kept inside [min, max] of the two scores so
// floating-point rounding cannot move it out of the Neutral band.
// Requires w in [0, 1].
BiasScore convex_combination(BiasScore s_text, BiasScore s_image, double w);

// Throws ValidationError for a negative or non-finite tie epsilon.
double validate_tie_epsilon(double tie_epsilon);

// TextDominant iff text - image > eps, ImageDominant iff image - text > eps,
// Tie otherwise.
Dominance dominance(BiasScore s_text, BiasScore s_image, double tie_epsilon);

struct CategoryRecord {
    std::string class_name;
    std::string group_name;
    BiasScore s_text;
    BiasScore s_image;
    BiasScore s_multi;

    bool operator==(const CategoryRecord&) const = default;
};

// Throws ValidationError if any (class_name, group_name) pair repeats.
void require_unique_keys(const std::vector<CategoryRecord>& records);

// A record with its labels. Only constructible through classify(), so the
// labels always agree with the rules above.
class ClassifiedRecord {
public:
    static ClassifiedRecord classify(CategoryRecord record, double tie_epsilon);

    const CategoryRecord& record() const noexcept { return record_; }
    InteractionType interaction() const noexcept { return interaction_; }
    Dominance dominance() const noexcept { return dominance_; }

private:
    ClassifiedRecord(CategoryRecord record, InteractionType interaction, Dominance dominance)
        : record_(std::move(record)), interaction_(interaction), dominance_(dominance) {}

    CategoryRecord record_;
    InteractionType interaction_;
    Dominance dominance_;
};

}  // namespace biasdyn
