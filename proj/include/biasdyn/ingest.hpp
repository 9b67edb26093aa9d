#pragma once
// Loaders for the three input formats. Every rejection is a ParseError
// carrying the 1-based line it refers to.
//
//   scores      CSV, header `class,group,s_text,s_image,s_multi`
//   embeddings  one JSON object per line: class, group, modality, vector
//   manifest    JSON {"classes": [{"name", "groups": [{"name", text_range?, image_range?}]}]}

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "biasdyn/core.hpp"
#include "biasdyn/embed.hpp"
#include "biasdyn/sim.hpp"

namespace biasdyn {

inline constexpr std::string_view kScoresHeader = "class,group,s_text,s_image,s_multi";

std::vector<CategoryRecord> load_scores(std::istream& in);

struct EmbeddingBundle {
    AnchorSet anchors;
    // One entry per (class, group, modality), in order of first appearance.
    std::vector<TargetGroupEmbeddings> groups;
};

EmbeddingBundle load_embeddings(std::istream& in);

CategoryManifest load_manifest(std::istream& in);

// The bundled four-class, fourteen-group manifest.
std::string_view default_manifest_json() noexcept;
CategoryManifest default_manifest();

}  // namespace biasdyn
