#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "biasdyn/core.hpp"
#include "biasdyn/ingest.hpp"

namespace fixtures {

inline std::string path(const std::string& name) { return std::string(BIASDYN_FIXTURE_DIR) + "/" + name; }

inline std::string read(const std::string& name) {
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::vector<biasdyn::CategoryRecord> records(const std::string& name) {
    std::istringstream in(read(name));
    return biasdyn::load_scores(in);
}

// 18 records split 4 amplification / 2 mitigation / 12 neutral.
inline std::vector<biasdyn::CategoryRecord> abstract_mix() { return records("abstract_mix.csv"); }

// 18 records: 4 amplification (2 text / 2 image dominant), 1 text-dominant
// mitigation, 13 neutral of which 10 image dominant.
inline std::vector<biasdyn::CategoryRecord> dominance_narrative() { return records("dominance_narrative.csv"); }

}  // namespace fixtures
