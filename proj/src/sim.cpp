#include "biasdyn/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <set>
#include <thread>

#include "biasdyn/error.hpp"

namespace biasdyn {
namespace {

double sample(GaussianSource& rng, const ScoreRange& r) {
    return std::min(r.hi, r.lo + (r.hi - r.lo) * rng.next_uniform());
}

struct EntryDraw {
    CategoryRecord record;
    bool clamped;
};

EntryDraw draw_entry(GaussianSource& rng, const ManifestEntry& entry, const SimConfig& config) {
    const ScoreRange& tr = entry.text_range.value_or(config.text_range);
    const ScoreRange& ir = entry.image_range.value_or(config.image_range);
    const BiasScore s_text(sample(rng, tr), "s_text");
    const BiasScore s_image(sample(rng, ir), "s_image");
    const double noise = rng.next_gaussian();
    bool clamped = false;
    const BiasScore s_multi = fuse(s_text, s_image, config, noise, clamped);
    return {CategoryRecord{entry.class_name, entry.group_name, s_text, s_image, s_multi}, clamped};
}

}  // namespace

double GaussianSource::next_gaussian() noexcept {
    if (cached_) {
        const double z = *cached_;
        cached_.reset();
        return z;
    }
    double u1 = uniform_.next_uniform();
    const double u2 = uniform_.next_uniform();
    if (u1 == 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    return r * std::cos(theta);
}

void validate_range(const ScoreRange& r, const std::string& what) {
    const bool finite = std::isfinite(r.lo) && std::isfinite(r.hi);
    if (!finite || r.lo < 0.0 || r.hi > 1.0) {
        throw ValidationError(what + " [" + std::to_string(r.lo) + ", " + std::to_string(r.hi) +
                              "] must lie within [0, 1]");
    }
    if (r.lo > r.hi) {
        throw ValidationError(what + " is inverted: [" + std::to_string(r.lo) + ", " +
                              std::to_string(r.hi) + "]");
    }
}

void SimConfig::validate() const {
    if (!std::isfinite(w_text) || w_text < 0.0 || w_text > 1.0) {
        throw ValidationError("w_text must lie in [0, 1]");
    }
    if (!std::isfinite(noise_sigma) || noise_sigma < 0.0) {
        throw ValidationError("noise_sigma must be finite and >= 0");
    }
    validate_range(text_range, "text_range");
    validate_range(image_range, "image_range");
}

CategoryManifest::CategoryManifest(std::vector<ManifestEntry> entries) : entries_(std::move(entries)) {
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& e : entries_) {
        if (!seen.emplace(e.class_name, e.group_name).second) {
            throw ValidationError("duplicate group \"" + e.group_name + "\" in class \"" +
                                  e.class_name + "\"");
        }
        const std::string where = e.class_name + "/" + e.group_name;
        if (e.text_range) validate_range(*e.text_range, where + " text_range");
        if (e.image_range) validate_range(*e.image_range, where + " image_range");
    }
}

std::size_t CategoryManifest::class_count() const {
    std::set<std::string_view> classes;
    for (const auto& e : entries_) classes.insert(e.class_name);
    return classes.size();
}

BiasScore fuse(BiasScore s_text, BiasScore s_image, const SimConfig& config, double noise_draw,
               bool& clamped) {
    config.validate();
    const double raw =
        convex_combination(s_text, s_image, config.w_text).value() + config.noise_sigma * noise_draw;
    if (!std::isfinite(raw)) throw ValidationError("fused score is not finite");
    const double value = std::clamp(raw, 0.0, 1.0);
    clamped = value != raw;
    return BiasScore(value, "s_multi");
}

BiasScore fuse(BiasScore s_text, BiasScore s_image, const SimConfig& config, double noise_draw) {
    bool clamped = false;
    return fuse(s_text, s_image, config, noise_draw, clamped);
}

std::uint64_t derive_entry_seed(std::uint64_t seed, std::uint64_t index) noexcept {
    return SplitMix64(seed ^ index).next_u64();
}

SimulationResult simulate_dataset(const CategoryManifest& manifest, const SimConfig& config) {
    if (manifest.empty()) throw ValidationError("empty manifest");
    config.validate();

    const auto& entries = manifest.entries();
    std::vector<EntryDraw> draws;
    draws.reserve(entries.size());

    if (!config.parallel) {
        GaussianSource rng(config.seed);
        for (const auto& entry : entries) draws.push_back(draw_entry(rng, entry, config));
    } else {
        const std::size_t workers =
            std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, entries.size());
        const std::size_t chunk = (entries.size() + workers - 1) / workers;
        std::vector<std::future<std::vector<EntryDraw>>> parts;
        for (std::size_t begin = 0; begin < entries.size(); begin += chunk) {
            const std::size_t end = std::min(entries.size(), begin + chunk);
            parts.push_back(std::async(std::launch::async, [&, begin, end] {
                std::vector<EntryDraw> out;
                for (std::size_t k = begin; k < end; ++k) {
                    GaussianSource rng(derive_entry_seed(config.seed, k));
                    out.push_back(draw_entry(rng, entries[k], config));
                }
                return out;
            }));
        }
        for (auto& p : parts) {
            for (auto& d : p.get()) draws.push_back(std::move(d));
        }
    }

    SimulationResult result;
    result.records.reserve(draws.size());
    for (auto& d : draws) {
        result.clamp_count += d.clamped ? 1 : 0;
        result.records.push_back(std::move(d.record));
    }
    return result;
}

}  // namespace biasdyn
