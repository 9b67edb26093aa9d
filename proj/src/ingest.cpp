#include "biasdyn/ingest.hpp"

#include <charconv>
#include <cmath>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>
#include <tuple>

#include <json.hpp>

#include "biasdyn/error.hpp"

namespace biasdyn {
namespace {

constexpr std::string_view kDefaultManifest = R"({
  "classes": [
    {
      "name": "religion",
      "groups": [
        {"name": "Muslim"},
        {"name": "Christian"},
        {"name": "Jewish"},
        {"name": "Buddhist"},
        {"name": "Hindu"}
      ]
    },
    {
      "name": "nationality",
      "groups": [
        {"name": "American"},
        {"name": "Arab"},
        {"name": "Chinese"},
        {"name": "Mexican"}
      ]
    },
    {
      "name": "disability",
      "groups": [
        {"name": "Mental Disability"},
        {"name": "Physical Disability"},
        {"name": "Non-disabled"}
      ]
    },
    {
      "name": "sexual-orientation",
      "groups": [
        {"name": "Heterosexual"},
        {"name": "LGBT"}
      ]
    }
  ]
}
)";

bool getline_lf(std::istream& in, std::string& line) {
    if (!std::getline(in, line)) return false;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

struct Field {
    std::string_view text;
    std::size_t column;  // 1-based
};

std::vector<Field> split_csv(std::string_view line) {
    std::vector<Field> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        const auto end = comma == std::string_view::npos ? line.size() : comma;
        fields.push_back({line.substr(start, end - start), start + 1});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_score(const Field& f, std::size_t line, std::string_view name) {
    double value = 0.0;
    const char* first = f.text.data();
    const char* last = first + f.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (f.text.empty() || ec != std::errc{} || ptr != last) {
        throw ParseError(line, f.column,
                         std::string(name) + ": cannot parse \"" + std::string(f.text) + "\" as a number");
    }
    if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
        throw ParseError(line, f.column,
                         std::string(name) + " = " + std::string(f.text) + " is outside [0, 1]");
    }
    return value;
}

std::string read_all(std::istream& in) {
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::pair<std::size_t, std::size_t> line_col_at(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

// Line of every object key in a JSON text, in document order. Paired with an
// ordered_json traversal this maps semantic errors back to source lines.
std::vector<std::size_t> key_lines(std::string_view text) {
    std::vector<std::size_t> lines;
    std::size_t line = 1;
    for (std::size_t k = 0; k < text.size(); ++k) {
        const char c = text[k];
        if (c == '\n') {
            ++line;
            continue;
        }
        if (c != '"') continue;
        const std::size_t start_line = line;
        ++k;
        while (k < text.size() && text[k] != '"') {
            if (text[k] == '\\') ++k;
            ++k;
        }
        std::size_t j = k + 1;
        while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r' || text[j] == '\n')) {
            if (text[j] == '\n') ++line;
            ++j;
        }
        if (j < text.size() && text[j] == ':') lines.push_back(start_line);
        k = j - 1;
    }
    return lines;
}

class KeyCursor {
public:
    explicit KeyCursor(std::vector<std::size_t> lines) : lines_(std::move(lines)) {}

    // Advance past the next key and return its line.
    std::size_t next() {
        if (pos_ < lines_.size()) last_ = lines_[pos_++];
        return last_;
    }
    std::size_t current() const { return last_; }

private:
    std::vector<std::size_t> lines_;
    std::size_t pos_ = 0;
    std::size_t last_ = 1;
};

using ojson = nlohmann::ordered_json;

std::string require_name(const ojson& v, std::size_t line, const std::string& what) {
    if (!v.is_string() || v.get<std::string>().empty()) {
        throw ParseError(line, 0, what + " name must be a non-empty string");
    }
    return v.get<std::string>();
}

ScoreRange parse_range(const ojson& v, std::size_t line, const std::string& what) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ParseError(line, 0, what + " must be a two-element numeric array");
    }
    ScoreRange r{v[0].get<double>(), v[1].get<double>()};
    try {
        validate_range(r, what);
    } catch (const ValidationError& e) {
        throw ParseError(line, 0, e.what());
    }
    return r;
}

}  // namespace

std::vector<CategoryRecord> load_scores(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::vector<CategoryRecord> records;
    std::map<std::pair<std::string, std::string>, std::size_t> first_seen;

    while (getline_lf(in, line)) {
        ++line_no;
        if (!have_header) {
            if (line.empty()) continue;
            if (line != kScoresHeader) {
                throw ParseError(line_no, 1, "malformed header, expected \"" +
                                                 std::string(kScoresHeader) + "\"");
            }
            have_header = true;
            continue;
        }
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 5) {
            throw ParseError(line_no, 0, "expected 5 fields, found " + std::to_string(fields.size()));
        }
        if (fields[0].text.empty()) throw ParseError(line_no, fields[0].column, "empty class");
        if (fields[1].text.empty()) throw ParseError(line_no, fields[1].column, "empty group");
        CategoryRecord r{std::string(fields[0].text), std::string(fields[1].text),
                         BiasScore(parse_score(fields[2], line_no, "s_text")),
                         BiasScore(parse_score(fields[3], line_no, "s_image")),
                         BiasScore(parse_score(fields[4], line_no, "s_multi"))};
        const auto [it, fresh] = first_seen.emplace(std::pair{r.class_name, r.group_name}, line_no);
        if (!fresh) {
            throw ParseError(line_no, 0, "duplicate category (" + r.class_name + ", " + r.group_name +
                                             "), first seen on line " + std::to_string(it->second));
        }
        records.push_back(std::move(r));
    }
    if (in.bad()) throw IoError("read failure in scores stream");
    if (records.empty()) throw ParseError(std::max<std::size_t>(line_no, 1), 0, "no records");
    return records;
}

EmbeddingBundle load_embeddings(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t dim = 0;
    std::size_t dim_line = 0;
    std::vector<EmbeddingVector> pleasant;
    std::vector<EmbeddingVector> unpleasant;
    std::vector<TargetGroupEmbeddings> groups;
    std::map<std::tuple<std::string, std::string, Modality>, std::size_t> group_index;

    while (getline_lf(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(line_no, e.byte, "invalid JSON record");
        }
        if (!obj.is_object()) throw ParseError(line_no, 0, "record must be a JSON object");
        for (const char* key : {"class", "group", "modality", "vector"}) {
            if (!obj.contains(key)) throw ParseError(line_no, 0, std::string("missing key \"") + key + "\"");
        }
        for (const char* key : {"class", "group", "modality"}) {
            if (!obj[key].is_string()) throw ParseError(line_no, 0, std::string("\"") + key + "\" must be a string");
        }
        const auto cls = obj["class"].get<std::string>();
        const auto grp = obj["group"].get<std::string>();
        const auto modality = obj["modality"].get<std::string>();

        const auto& vec_json = obj["vector"];
        if (!vec_json.is_array()) throw ParseError(line_no, 0, "\"vector\" must be an array");
        std::vector<double> comps;
        comps.reserve(vec_json.size());
        for (const auto& x : vec_json) {
            if (!x.is_number()) throw ParseError(line_no, 0, "\"vector\" must contain only numbers");
            comps.push_back(x.get<double>());
        }
        std::optional<EmbeddingVector> vec;
        try {
            vec.emplace(std::move(comps));
        } catch (const ValidationError& e) {
            throw ParseError(line_no, 0, e.what());
        }
        if (dim == 0) {
            dim = vec->dimension();
            dim_line = line_no;
        } else if (vec->dimension() != dim) {
            throw ParseError(line_no, 0, "dimension mismatch: " + std::to_string(vec->dimension()) +
                                             " here vs " + std::to_string(dim) + " on line " +
                                             std::to_string(dim_line));
        }

        if (modality == "anchor_pleasant" || modality == "anchor_unpleasant") {
            if (!cls.empty() || !grp.empty()) {
                throw ParseError(line_no, 0, "anchor records must have empty class and group");
            }
            (modality == "anchor_pleasant" ? pleasant : unpleasant).push_back(std::move(*vec));
            continue;
        }
        Modality m;
        if (modality == "text") {
            m = Modality::Text;
        } else if (modality == "image") {
            m = Modality::Image;
        } else {
            throw ParseError(line_no, 0, "invalid modality \"" + modality +
                                             "\" (expected text, image, anchor_pleasant or anchor_unpleasant)");
        }
        if (cls.empty() || grp.empty()) {
            throw ParseError(line_no, 0, "target records need non-empty class and group");
        }
        const auto key = std::tuple{cls, grp, m};
        auto it = group_index.find(key);
        if (it == group_index.end()) {
            it = group_index.emplace(key, groups.size()).first;
            groups.push_back(TargetGroupEmbeddings{cls, grp, m, {}});
        }
        groups[it->second].vectors.push_back(std::move(*vec));
    }
    if (in.bad()) throw IoError("read failure in embeddings stream");

    const auto last = std::max<std::size_t>(line_no, 1);
    if (pleasant.empty()) throw ParseError(last, 0, "missing anchor role: anchor_pleasant");
    if (unpleasant.empty()) throw ParseError(last, 0, "missing anchor role: anchor_unpleasant");
    return EmbeddingBundle{AnchorSet(std::move(pleasant), std::move(unpleasant)), std::move(groups)};
}

CategoryManifest load_manifest(std::istream& in) {
    const std::string text = read_all(in);
    if (in.bad()) throw IoError("read failure in manifest stream");

    ojson doc;
    try {
        doc = ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = line_col_at(text, e.byte == 0 ? 0 : e.byte - 1);
        throw ParseError(line, col, "invalid JSON manifest");
    }
    if (!doc.is_object()) throw ParseError(1, 0, "manifest must be a JSON object");

    KeyCursor keys(key_lines(text));
    std::vector<ManifestEntry> entries;
    std::map<std::pair<std::string, std::string>, std::size_t> first_seen;
    bool have_classes = false;

    for (const auto& [top_key, classes] : doc.items()) {
        const auto top_line = keys.next();
        if (top_key != "classes") throw ParseError(top_line, 0, "unknown key \"" + top_key + "\"");
        have_classes = true;
        if (!classes.is_array()) throw ParseError(top_line, 0, "\"classes\" must be an array");

        for (const auto& cls : classes) {
            if (!cls.is_object()) throw ParseError(keys.current(), 0, "each class must be an object");
            // Groups can precede the name within the object, so resolve the
            // name first and defer group entries.
            std::optional<std::string> class_name;
            std::size_t class_line = keys.current();
            std::vector<std::pair<ManifestEntry, std::size_t>> pending;
            bool have_groups = false;

            for (const auto& [ckey, cval] : cls.items()) {
                const auto cline = keys.next();
                if (ckey == "name") {
                    class_name = require_name(cval, cline, "class");
                    class_line = cline;
                } else if (ckey == "groups") {
                    have_groups = true;
                    if (!cval.is_array()) throw ParseError(cline, 0, "\"groups\" must be an array");
                    for (const auto& grp : cval) {
                        if (!grp.is_object()) throw ParseError(keys.current(), 0, "each group must be an object");
                        ManifestEntry entry;
                        std::size_t group_line = keys.current();
                        bool named = false;
                        for (const auto& [gkey, gval] : grp.items()) {
                            const auto gline = keys.next();
                            if (gkey == "name") {
                                entry.group_name = require_name(gval, gline, "group");
                                group_line = gline;
                                named = true;
                            } else if (gkey == "text_range") {
                                entry.text_range = parse_range(gval, gline, "text_range");
                            } else if (gkey == "image_range") {
                                entry.image_range = parse_range(gval, gline, "image_range");
                            } else {
                                throw ParseError(gline, 0, "unknown group key \"" + gkey + "\"");
                            }
                        }
                        if (!named) throw ParseError(group_line, 0, "group without \"name\"");
                        pending.emplace_back(std::move(entry), group_line);
                    }
                } else {
                    throw ParseError(cline, 0, "unknown class key \"" + ckey + "\"");
                }
            }
            if (!class_name) throw ParseError(class_line, 0, "class without \"name\"");
            if (!have_groups || pending.empty()) {
                throw ParseError(class_line, 0, "class \"" + *class_name + "\" has no groups");
            }
            for (auto& [entry, gline] : pending) {
                entry.class_name = *class_name;
                const auto [it, fresh] = first_seen.emplace(std::pair{entry.class_name, entry.group_name}, gline);
                if (!fresh) {
                    throw ParseError(gline, 0, "duplicate group \"" + entry.group_name + "\" in class \"" +
                                                   entry.class_name + "\" (first on line " +
                                                   std::to_string(it->second) + ")");
                }
                entries.push_back(std::move(entry));
            }
        }
    }
    if (!have_classes) throw ParseError(1, 0, "manifest lacks a \"classes\" list");
    if (entries.empty()) throw ParseError(1, 0, "empty manifest");
    return CategoryManifest(std::move(entries));
}

std::string_view default_manifest_json() noexcept { return kDefaultManifest; }

CategoryManifest default_manifest() {
    std::istringstream in{std::string(kDefaultManifest)};
    return load_manifest(in);
}

}  // namespace biasdyn
