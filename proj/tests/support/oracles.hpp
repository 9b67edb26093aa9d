#pragma once
// Test-only reference implementations. Kept deliberately naive and separate
// from the library code paths they check.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "biasdyn/core.hpp"

namespace oracle {

// Labels as plain ints: 0 amplification, 1 mitigation, 2 neutral.
inline int brute_interaction(double t, double i, double m) {
    const double hi = t > i ? t : i;
    const double lo = t < i ? t : i;
    if (m > hi) return 0;
    if (m < lo) return 1;
    return 2;
}

// 0 text, 1 image, 2 tie.
inline int brute_dominance(double t, double i, double eps) {
    if (t - i > eps) return 0;
    if (i - t > eps) return 1;
    return 2;
}

struct Counts {
    std::array<std::array<long, 2>, 3> joint{};  // [interaction][dominance]
    long ties = 0;
};

inline Counts brute_counts(const std::vector<biasdyn::CategoryRecord>& records, double eps) {
    Counts c;
    for (std::size_t a = 0; a < 3; ++a) {
        for (std::size_t d = 0; d < 2; ++d) {
            for (const auto& r : records) {
                const int ia = brute_interaction(r.s_text.value(), r.s_image.value(), r.s_multi.value());
                const int id = brute_dominance(r.s_text.value(), r.s_image.value(), eps);
                if (ia == static_cast<int>(a) && id == static_cast<int>(d)) ++c.joint[a][d];
            }
        }
    }
    for (const auto& r : records) {
        if (brute_dominance(r.s_text.value(), r.s_image.value(), eps) == 2) ++c.ties;
    }
    return c;
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    long double dot = 0;
    long double nu = 0;
    long double nv = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        dot += static_cast<long double>(u[k]) * v[k];
        nu += static_cast<long double>(u[k]) * u[k];
        nv += static_cast<long double>(v[k]) * v[k];
    }
    return static_cast<double>(dot / std::sqrt(nu * nv));
}

// Mean over targets of mean cosine to pleasant minus the same for unpleasant.
inline double association(const std::vector<std::vector<double>>& targets,
                          const std::vector<std::vector<double>>& pleasant,
                          const std::vector<std::vector<double>>& unpleasant) {
    long double total = 0;
    for (const auto& t : targets) {
        long double p = 0;
        for (const auto& a : pleasant) p += cosine(t, a);
        long double u = 0;
        for (const auto& a : unpleasant) u += cosine(t, a);
        total += p / pleasant.size() - u / unpleasant.size();
    }
    return static_cast<double>(total / targets.size());
}

// First raw outputs of SplitMix64 for seed 0, and the first three simulated
// (s_text, s_image, s_multi) triples for seed 42 with default config, both
// produced by tests/oracles/sim_oracle.py.
inline constexpr std::uint64_t kSplitMixSeed0[3] = {0xE220A8397B1DCDAFULL, 0x6E789E6AA1B965F4ULL,
                                                    0x06C45D188009454FULL};
inline constexpr double kSeed42Triples[3][3] = {
    {0x1.a3607968a97ccp-1, 0x1.a5d2e290c0536p-2, 0x1.244fe49497247p-1},
    {0x1.4e75c42f98c9fp-2, 0x1.d0c5df9187e78p-1, 0x1.5df7ea289de80p-1},
    {0x1.cfc0ba4f2834cp-2, 0x1.b88be51ade10ap-1, 0x1.348d88fa70c55p-1},
};

// Throws on malformed XML.
inline boost::property_tree::ptree parse_xml(const std::string& text) {
    std::istringstream in(text);
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
    return tree;
}

inline void collect_bars(const boost::property_tree::ptree& node, std::vector<double>& heights) {
    for (const auto& [name, child] : node) {
        if (name == "rect" && child.get<std::string>("<xmlattr>.class", "") == "bar") {
            heights.push_back(child.get<double>("<xmlattr>.height"));
        }
        if (name != "<xmlattr>") collect_bars(child, heights);
    }
}

// Heights of every <rect class="bar"> in document order.
inline std::vector<double> bar_heights(const std::string& svg) {
    std::vector<double> heights;
    collect_bars(parse_xml(svg), heights);
    return heights;
}

inline std::vector<biasdyn::CategoryRecord> random_records(std::mt19937_64& rng, std::size_t n) {
    // Coarse grid so ties and boundary equalities actually occur.
    std::uniform_int_distribution<int> grid(0, 10);
    std::vector<biasdyn::CategoryRecord> out;
    for (std::size_t k = 0; k < n; ++k) {
        out.push_back({"class", "g" + std::to_string(k), biasdyn::BiasScore(grid(rng) / 10.0),
                       biasdyn::BiasScore(grid(rng) / 10.0), biasdyn::BiasScore(grid(rng) / 10.0)});
    }
    return out;
}

}  // namespace oracle
