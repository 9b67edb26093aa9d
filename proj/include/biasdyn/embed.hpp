#pragma once
// Measured bias scoring: WEAT-style association between target embeddings and
// pleasant / unpleasant anchor sets, mapped affinely onto a BiasScore.

#include <span>
#include <string>
#include <vector>

#include "biasdyn/core.hpp"

namespace biasdyn {

// Dense, finite, nonzero vector of dimension >= 1. Stored as given; cosine
// normalizes internally.
class EmbeddingVector {
public:
    explicit EmbeddingVector(std::vector<double> components);

    std::size_t dimension() const noexcept { return components_.size(); }
    std::span<const double> components() const noexcept { return components_; }
    double norm() const noexcept { return norm_; }

    bool operator==(const EmbeddingVector& other) const { return components_ == other.components_; }

private:
    std::vector<double> components_;
    double norm_;
};

class AnchorSet {
public:
    // Both lists non-empty, one common dimension.
    AnchorSet(std::vector<EmbeddingVector> pleasant, std::vector<EmbeddingVector> unpleasant);

    const std::vector<EmbeddingVector>& pleasant() const noexcept { return pleasant_; }
    const std::vector<EmbeddingVector>& unpleasant() const noexcept { return unpleasant_; }
    std::size_t dimension() const noexcept { return pleasant_.front().dimension(); }

    AnchorSet swapped() const { return AnchorSet(unpleasant_, pleasant_); }

private:
    std::vector<EmbeddingVector> pleasant_;
    std::vector<EmbeddingVector> unpleasant_;
};

enum class Modality { Text, Image };

std::string_view to_string(Modality m) noexcept;

struct TargetGroupEmbeddings {
    std::string class_name;
    std::string group_name;
    Modality modality;
    std::vector<EmbeddingVector> vectors;
};

// dot(u, v) / (|u| |v|), clamped to [-1, 1]. Throws on dimension mismatch.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// Mean over targets of the mean cosine to the pleasant anchors, minus the same
// quantity for the unpleasant anchors. Result lies in [-2, 2].
double association(std::span<const EmbeddingVector> targets, const AnchorSet& anchors);

// (a + 2) / 4. Rejects non-finite a or |a| > 2.
BiasScore bias_score_from_association(double a);

// Errors carry "class/group (modality)" for context.
BiasScore modality_bias(const TargetGroupEmbeddings& group, const AnchorSet& anchors);

}  // namespace biasdyn
