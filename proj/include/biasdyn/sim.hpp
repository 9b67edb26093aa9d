#pragma once
// Seeded simulation of unimodal bias scores and their weighted, noisy fusion.
//
// The random stream is pinned by recurrence (SplitMix64 + Box-Muller) rather
// than by library so other implementations reproduce it bit for bit.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biasdyn/core.hpp"

namespace biasdyn {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Top 53 bits scaled into [0, 1).
    double next_uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

// Standard normal deviates via Box-Muller. Each pair consumes exactly two
// uniforms; the second deviate is cached for the next call.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) noexcept : uniform_(seed) {}

    double next_uniform() noexcept { return uniform_.next_uniform(); }
    double next_gaussian() noexcept;

private:
    SplitMix64 uniform_;
    std::optional<double> cached_;
};

struct ScoreRange {
    double lo = 0.3;
    double hi = 1.0;

    bool operator==(const ScoreRange&) const = default;
};

// Throws ValidationError unless 0 <= lo <= hi <= 1. `what` names the range.
void validate_range(const ScoreRange& r, const std::string& what);

struct SimConfig {
    std::uint64_t seed = 0;
    double w_text = 0.5;        // image weight is 1 - w_text
    double noise_sigma = 0.05;
    ScoreRange text_range{};
    ScoreRange image_range{};
    // Per-entry derived sub-seeds; entries are then independent and are
    // sampled concurrently.
    bool parallel = false;

    void validate() const;
};

struct ManifestEntry {
    std::string class_name;
    std::string group_name;
    std::optional<ScoreRange> text_range;
    std::optional<ScoreRange> image_range;
};

class CategoryManifest {
public:
    // Validates unique (class, group) pairs and every per-group range.
    explicit CategoryManifest(std::vector<ManifestEntry> entries);

    const std::vector<ManifestEntry>& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t class_count() const;

private:
    std::vector<ManifestEntry> entries_;
};

// clamp(w * text + (1 - w) * image + sigma * noise_draw, 0, 1), where the
// weighted part is convex_combination().
BiasScore fuse(BiasScore s_text, BiasScore s_image, const SimConfig& config, double noise_draw);

// Same as fuse(), reporting whether the unclamped sum left [0, 1].
BiasScore fuse(BiasScore s_text, BiasScore s_image, const SimConfig& config, double noise_draw,
               bool& clamped);

struct SimulationResult {
    std::vector<CategoryRecord> records;
    std::size_t clamp_count = 0;
};

// Per entry, in manifest order: uniform text draw, uniform image draw, one
// Gaussian deviate. The draw order is part of the output contract.
SimulationResult simulate_dataset(const CategoryManifest& manifest, const SimConfig& config);

// Seed used for entry `index` when SimConfig::parallel is set: one SplitMix64
// step from state (seed XOR index).
std::uint64_t derive_entry_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace biasdyn
