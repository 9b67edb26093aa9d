#include "biasdyn/embed.hpp"

#include <algorithm>
#include <cmath>

#include "biasdyn/error.hpp"

namespace biasdyn {
namespace {

double l2_norm(std::span<const double> v) {
    double sum_sq = 0.0;
    for (double x : v) sum_sq += x * x;
    return std::sqrt(sum_sq);
}

void check_common_dimension(const std::vector<EmbeddingVector>& vs, std::size_t dim,
                            const char* what) {
    for (const auto& v : vs) {
        if (v.dimension() != dim) {
            throw ValidationError(std::string(what) + " vector has dimension " +
                                  std::to_string(v.dimension()) + ", expected " +
                                  std::to_string(dim));
        }
    }
}

double mean_cosine(const EmbeddingVector& target, const std::vector<EmbeddingVector>& anchors) {
    double sum = 0.0;
    for (const auto& a : anchors) sum += cosine_similarity(target, a);
    return sum / static_cast<double>(anchors.size());
}

}  // namespace

EmbeddingVector::EmbeddingVector(std::vector<double> components)
    : components_(std::move(components)), norm_(0.0) {
    if (components_.empty()) throw ValidationError("embedding vector must have dimension >= 1");
    for (std::size_t k = 0; k < components_.size(); ++k) {
        if (!std::isfinite(components_[k])) {
            throw ValidationError("embedding component " + std::to_string(k) + " is not finite");
        }
    }
    norm_ = l2_norm(components_);
    if (!(norm_ > 0.0) || !std::isfinite(norm_)) {
        throw ValidationError("embedding vector has zero (or overflowing) norm");
    }
}

AnchorSet::AnchorSet(std::vector<EmbeddingVector> pleasant, std::vector<EmbeddingVector> unpleasant)
    : pleasant_(std::move(pleasant)), unpleasant_(std::move(unpleasant)) {
    if (pleasant_.empty()) throw ValidationError("missing anchor role: pleasant");
    if (unpleasant_.empty()) throw ValidationError("missing anchor role: unpleasant");
    const auto dim = pleasant_.front().dimension();
    check_common_dimension(pleasant_, dim, "pleasant anchor");
    check_common_dimension(unpleasant_, dim, "unpleasant anchor");
}

std::string_view to_string(Modality m) noexcept {
    return m == Modality::Text ? "text" : "image";
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dimension() != v.dimension()) {
        throw ValidationError("dimension mismatch: " + std::to_string(u.dimension()) + " vs " +
                              std::to_string(v.dimension()));
    }
    const auto a = u.components();
    const auto b = v.components();
    double dot = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) dot += a[k] * b[k];
    // Multiplying the norms in a fixed order keeps cos(u, v) == cos(v, u) bit for bit.
    const double denom = std::min(u.norm(), v.norm()) * std::max(u.norm(), v.norm());
    return std::clamp(dot / denom, -1.0, 1.0);
}

double association(std::span<const EmbeddingVector> targets, const AnchorSet& anchors) {
    if (targets.empty()) throw ValidationError("association needs at least one target vector");
    double pleasant = 0.0;
    double unpleasant = 0.0;
    for (const auto& t : targets) {
        pleasant += mean_cosine(t, anchors.pleasant());
        unpleasant += mean_cosine(t, anchors.unpleasant());
    }
    const auto n = static_cast<double>(targets.size());
    return pleasant / n - unpleasant / n;
}

BiasScore bias_score_from_association(double a) {
    if (!std::isfinite(a) || std::abs(a) > 2.0) {
        throw ValidationError("association " + std::to_string(a) + " is outside [-2, 2]");
    }
    return BiasScore((a + 2.0) / 4.0, "association score");
}

BiasScore modality_bias(const TargetGroupEmbeddings& group, const AnchorSet& anchors) {
    try {
        return bias_score_from_association(association(group.vectors, anchors));
    } catch (const ValidationError& e) {
        throw ValidationError(group.class_name + "/" + group.group_name + " (" +
                              std::string(to_string(group.modality)) + "): " + e.what());
    }
}

}  // namespace biasdyn
