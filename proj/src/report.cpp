#include "biasdyn/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "biasdyn/error.hpp"
#include "biasdyn/ingest.hpp"

namespace biasdyn {
namespace {

using ojson = nlohmann::ordered_json;

std::string hex64(std::uint64_t v) {
    char buf[19];
    std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
    return buf;
}

ojson number_or_undefined(const std::optional<double>& v) {
    return v ? ojson(*v) : ojson(std::string(kUndefined));
}

ojson sim_config_json(const SimConfig& c) {
    ojson j;
    j["seed"] = c.seed;
    j["w_text"] = c.w_text;
    j["noise_sigma"] = c.noise_sigma;
    j["text_range"] = {c.text_range.lo, c.text_range.hi};
    j["image_range"] = {c.image_range.lo, c.image_range.hi};
    j["parallel"] = c.parallel;
    return j;
}

ojson metadata_json(const RunMetadata& m) {
    ojson j;
    j["tool_version"] = m.tool_version;
    j["input_kind"] = m.input_kind;
    j["input_fingerprint"] = hex64(m.input_fingerprint);
    j["tie_epsilon"] = m.tie_epsilon;
    if (m.sim_config) {
        j[m.input_kind == "simulation" ? "simulation" : "fusion"] = sim_config_json(*m.sim_config);
    }
    if (m.clamp_count) j["clamp_count"] = *m.clamp_count;
    if (m.timestamp) j["timestamp"] = *m.timestamp;
    return j;
}

std::string_view table_label(TableDirection d) {
    return d == TableDirection::InteractionGivenDominance ? "P(interaction | dominance)"
                                                          : "P(dominance | interaction)";
}

ojson table_json(const ProbabilityTable& t) {
    ojson j;
    j["label"] = table_label(t.direction());
    j["tie_count"] = t.tie_count();
    ojson strata = ojson::array();
    for (std::size_t c = 0; c < t.conditions().size(); ++c) {
        ojson s;
        s["condition"] = t.conditions()[c];
        s["count"] = t.stratum_count(c);
        ojson joint;
        ojson probs;
        for (std::size_t o = 0; o < t.outcomes().size(); ++o) {
            const std::string key(t.outcomes()[o]);
            joint[key] = t.joint_count(c, o);
            probs[key] = number_or_undefined(t.probability(c, o));
        }
        s["joint_counts"] = std::move(joint);
        s["probabilities"] = std::move(probs);
        strata.push_back(std::move(s));
    }
    j["strata"] = std::move(strata);
    return j;
}

std::string structured_summary(const InteractionMix& mix, const ProbabilityTables& tables,
                               const InteractionMeans& means, const RunMetadata& meta) {
    ojson doc;
    doc["metadata"] = metadata_json(meta);

    ojson mj;
    mj["total"] = mix.total;
    ojson counts;
    ojson props;
    for (auto t : kInteractionTypes) {
        counts[std::string(to_string(t))] = mix.count(t);
        props[std::string(to_string(t))] = mix.proportion(t);
    }
    mj["counts"] = std::move(counts);
    mj["proportions"] = std::move(props);
    doc["interaction_mix"] = std::move(mj);

    ojson cp = ojson::object();
    if (tables.given_dominance) cp[std::string(to_string(tables.given_dominance->direction()))] = table_json(*tables.given_dominance);
    if (tables.given_interaction) cp[std::string(to_string(tables.given_interaction->direction()))] = table_json(*tables.given_interaction);
    doc["conditional_probabilities"] = std::move(cp);

    ojson mn;
    for (auto t : kInteractionTypes) {
        ojson e;
        e["count"] = means.count(t);
        const auto& m = means.of(t);
        e["s_text"] = number_or_undefined(m ? std::optional(m->s_text) : std::nullopt);
        e["s_image"] = number_or_undefined(m ? std::optional(m->s_image) : std::nullopt);
        e["s_multi"] = number_or_undefined(m ? std::optional(m->s_multi) : std::nullopt);
        mn[std::string(to_string(t))] = std::move(e);
    }
    doc["interaction_means"] = std::move(mn);
    return doc.dump(2) + "\n";
}

class DelimitedWriter {
public:
    DelimitedWriter() { out_ << "section,condition,outcome,count,value\n"; }

    void row(std::string_view section, std::string_view condition, std::string_view outcome,
             std::optional<std::size_t> count, std::string_view value) {
        out_ << section << ',' << condition << ',' << outcome << ',';
        if (count) out_ << *count;
        out_ << ',' << value << '\n';
    }

    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

std::string value_or_undefined(const std::optional<double>& v) {
    return v ? format_real(*v) : std::string(kUndefined);
}

std::string delimited_summary(const InteractionMix& mix, const ProbabilityTables& tables,
                              const InteractionMeans& means, const RunMetadata& meta) {
    DelimitedWriter w;
    w.row("metadata", "", "tool_version", std::nullopt, meta.tool_version);
    w.row("metadata", "", "input_kind", std::nullopt, meta.input_kind);
    w.row("metadata", "", "input_fingerprint", std::nullopt, hex64(meta.input_fingerprint));
    w.row("metadata", "", "tie_epsilon", std::nullopt, format_real(meta.tie_epsilon));
    if (meta.sim_config) {
        const auto& c = *meta.sim_config;
        const std::string_view sec = meta.input_kind == "simulation" ? "simulation" : "fusion";
        w.row(sec, "", "seed", std::nullopt, std::to_string(c.seed));
        w.row(sec, "", "w_text", std::nullopt, format_real(c.w_text));
        w.row(sec, "", "noise_sigma", std::nullopt, format_real(c.noise_sigma));
        w.row(sec, "text_range", "lo", std::nullopt, format_real(c.text_range.lo));
        w.row(sec, "text_range", "hi", std::nullopt, format_real(c.text_range.hi));
        w.row(sec, "image_range", "lo", std::nullopt, format_real(c.image_range.lo));
        w.row(sec, "image_range", "hi", std::nullopt, format_real(c.image_range.hi));
        w.row(sec, "", "parallel", std::nullopt, c.parallel ? "true" : "false");
    }
    if (meta.clamp_count) w.row("metadata", "", "clamp_count", *meta.clamp_count, "");
    if (meta.timestamp) w.row("metadata", "", "timestamp", std::nullopt, *meta.timestamp);

    for (auto t : kInteractionTypes) {
        w.row("interaction_mix", "", to_string(t), mix.count(t), format_real(mix.proportion(t)));
    }
    for (const auto* table : {tables.given_dominance ? &*tables.given_dominance : nullptr,
                              tables.given_interaction ? &*tables.given_interaction : nullptr}) {
        if (table == nullptr) continue;
        const auto sec = to_string(table->direction());
        for (std::size_t c = 0; c < table->conditions().size(); ++c) {
            w.row(sec, table->conditions()[c], "", table->stratum_count(c), "");
            for (std::size_t o = 0; o < table->outcomes().size(); ++o) {
                w.row(sec, table->conditions()[c], table->outcomes()[o], table->joint_count(c, o),
                      value_or_undefined(table->probability(c, o)));
            }
        }
        w.row(sec, "tie", "", table->tie_count(), "");
    }
    for (auto t : kInteractionTypes) {
        const auto& m = means.of(t);
        w.row("interaction_means", to_string(t), "s_text", means.count(t),
              value_or_undefined(m ? std::optional(m->s_text) : std::nullopt));
        w.row("interaction_means", to_string(t), "s_image", means.count(t),
              value_or_undefined(m ? std::optional(m->s_image) : std::nullopt));
        w.row("interaction_means", to_string(t), "s_multi", means.count(t),
              value_or_undefined(m ? std::optional(m->s_multi) : std::nullopt));
    }
    return w.str();
}

std::string xml_escape(std::string_view s) {
    std::string o;
    o.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': o += "&amp;"; break;
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '"': o += "&quot;"; break;
        case '\'': o += "&apos;"; break;
        default: o += c; break;
        }
    }
    return o;
}

std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\n\r") != std::string_view::npos) {
        throw ValidationError("category name \"" + std::string(s) + "\" cannot be written to a scores file");
    }
    return std::string(s);
}

void write_score_row(std::ostringstream& out, const CategoryRecord& r) {
    out << csv_field(r.class_name) << ',' << csv_field(r.group_name) << ',' << format_real(r.s_text.value())
        << ',' << format_real(r.s_image.value()) << ',' << format_real(r.s_multi.value());
}

}  // namespace

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::uint64_t fingerprint(std::string_view bytes) noexcept {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string render_summary(const InteractionMix& mix, const ProbabilityTables& tables,
                           const InteractionMeans& means, const RunMetadata& meta,
                           SummaryFormat format) {
    return format == SummaryFormat::Structured ? structured_summary(mix, tables, means, meta)
                                               : delimited_summary(mix, tables, means, meta);
}

std::string export_scores(const std::vector<CategoryRecord>& records) {
    std::ostringstream out;
    out << kScoresHeader << '\n';
    for (const auto& r : records) {
        write_score_row(out, r);
        out << '\n';
    }
    return out.str();
}

std::string export_classified(const std::vector<ClassifiedRecord>& classified) {
    std::ostringstream out;
    out << kScoresHeader << ",interaction,dominance\n";
    for (const auto& c : classified) {
        write_score_row(out, c.record());
        out << ',' << to_string(c.interaction()) << ',' << to_string(c.dominance()) << '\n';
    }
    return out.str();
}

void ChartSeries::validate() const {
    if (labels.empty() || series.empty()) throw ValidationError("chart \"" + title + "\": empty series");
    for (const auto& s : series) {
        if (s.values.size() != labels.size()) {
            throw ValidationError("chart \"" + title + "\": series \"" + s.name + "\" has " +
                                  std::to_string(s.values.size()) + " values for " +
                                  std::to_string(labels.size()) + " labels");
        }
        for (double v : s.values) {
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw ValidationError("chart \"" + title + "\": value outside [0, 1] in series \"" + s.name + "\"");
            }
        }
    }
}

std::string render_bar_chart(const ChartSeries& series, const ChartStyle& style) {
    series.validate();
    if (style.palette.empty()) throw ValidationError("chart style needs at least one colour");

    const double left = 70.0;
    const double right = 20.0;
    const double top = 64.0;
    const double bottom = 120.0;
    const double plot_w = style.width - left - right;
    const double plot_h = style.height - top - bottom;
    if (plot_w <= 0.0 || plot_h <= 0.0) throw ValidationError("chart canvas too small");

    const auto n_labels = static_cast<double>(series.labels.size());
    const auto n_series = static_cast<double>(series.series.size());
    const double group_w = plot_w / n_labels;
    const double bar_w = group_w * 0.8 / n_series;
    const double base_y = top + plot_h;
    const bool rotate = series.labels.size() > 6;

    std::ostringstream o;
    o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << style.width
      << "\" height=\"" << style.height << "\" viewBox=\"0 0 " << style.width << ' ' << style.height << "\">\n";
    o << "<rect class=\"background\" x=\"0\" y=\"0\" width=\"" << style.width << "\" height=\""
      << style.height << "\" fill=\"#ffffff\"/>\n";
    o << "<text class=\"title\" x=\"" << format_real(style.width / 2.0)
      << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"18\">"
      << xml_escape(series.title) << "</text>\n";

    o << "<g class=\"axis\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (int k = 0; k <= 10; ++k) {
        const double v = k / 10.0;
        const double y = base_y - plot_h * v;
        o << "<line class=\"grid\" x1=\"" << format_real(left) << "\" y1=\"" << format_real(y) << "\" x2=\""
          << format_real(left + plot_w) << "\" y2=\"" << format_real(y)
          << "\" stroke=\"" << (k == 0 ? "#000000" : "#dddddd") << "\" stroke-width=\"1\"/>\n";
        char tick[8];
        std::snprintf(tick, sizeof tick, "%.1f", v);
        o << "<text x=\"" << format_real(left - 6) << "\" y=\"" << format_real(y + 4)
          << "\" text-anchor=\"end\">" << tick << "</text>\n";
    }
    o << "<line x1=\"" << format_real(left) << "\" y1=\"" << format_real(top) << "\" x2=\"" << format_real(left)
      << "\" y2=\"" << format_real(base_y) << "\" stroke=\"#000000\" stroke-width=\"1\"/>\n";
    o << "<text x=\"18\" y=\"" << format_real(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << format_real(top + plot_h / 2) << ")\">" << xml_escape(style.y_label) << "</text>\n";
    o << "</g>\n";

    o << "<g class=\"bars\">\n";
    for (std::size_t l = 0; l < series.labels.size(); ++l) {
        const double group_x = left + group_w * static_cast<double>(l) + group_w * 0.1;
        for (std::size_t s = 0; s < series.series.size(); ++s) {
            const double v = series.series[s].values[l];
            const double h = plot_h * v;
            const double x = group_x + bar_w * static_cast<double>(s);
            o << "<rect class=\"bar\" x=\"" << format_real(x) << "\" y=\"" << format_real(base_y - h)
              << "\" width=\"" << format_real(bar_w) << "\" height=\"" << format_real(h) << "\" fill=\""
              << style.palette[s % style.palette.size()] << "\"><title>" << xml_escape(series.labels[l])
              << " / " << xml_escape(series.series[s].name) << ": " << format_real(v) << "</title></rect>\n";
        }
    }
    o << "</g>\n";

    o << "<g class=\"labels\" font-family=\"sans-serif\" font-size=\"11\">\n";
    for (std::size_t l = 0; l < series.labels.size(); ++l) {
        const double cx = left + group_w * (static_cast<double>(l) + 0.5);
        const double y = base_y + 16;
        o << "<text x=\"" << format_real(cx) << "\" y=\"" << format_real(y) << '"';
        if (rotate) {
            o << " text-anchor=\"end\" transform=\"rotate(-35 " << format_real(cx) << ' ' << format_real(y) << ")\"";
        } else {
            o << " text-anchor=\"middle\"";
        }
        o << '>' << xml_escape(series.labels[l]) << "</text>\n";
    }
    o << "</g>\n";

    o << "<g class=\"legend\" font-family=\"sans-serif\" font-size=\"12\">\n";
    double lx = left;
    for (std::size_t s = 0; s < series.series.size(); ++s) {
        o << "<rect class=\"legend-swatch\" x=\"" << format_real(lx) << "\" y=\"40\" width=\"12\" height=\"12\" fill=\""
          << style.palette[s % style.palette.size()] << "\"/>\n";
        o << "<text x=\"" << format_real(lx + 16) << "\" y=\"50\">" << xml_escape(series.series[s].name) << "</text>\n";
        lx += 24.0 + 7.0 * static_cast<double>(series.series[s].name.size());
    }
    o << "</g>\n";
    o << "</svg>\n";
    return o.str();
}

ChartSeries scores_chart(const std::vector<CategoryRecord>& records) {
    ChartSeries c;
    c.title = "Bias scores across categories";
    c.series = {{"Text", {}}, {"Image", {}}, {"Multimodal", {}}};
    for (const auto& r : records) {
        c.labels.push_back(r.group_name);
        c.series[0].values.push_back(r.s_text.value());
        c.series[1].values.push_back(r.s_image.value());
        c.series[2].values.push_back(r.s_multi.value());
    }
    return c;
}

ChartSeries means_chart(const InteractionMeans& means) {
    ChartSeries c;
    c.title = "Average bias scores by interaction type";
    c.series = {{"Text", {}}, {"Image", {}}, {"Multimodal", {}}};
    for (auto t : kInteractionTypes) {
        c.labels.push_back(std::string(display_name(t)) + " (n=" + std::to_string(means.count(t)) + ")");
        const auto m = means.of(t).value_or(ScoreMeans{});
        c.series[0].values.push_back(m.s_text);
        c.series[1].values.push_back(m.s_image);
        c.series[2].values.push_back(m.s_multi);
    }
    return c;
}

ChartSeries dominance_chart(const ProbabilityTable& given_interaction) {
    if (given_interaction.direction() != TableDirection::DominanceGivenInteraction) {
        throw ValidationError("dominance chart needs the dominance-given-interaction table");
    }
    ChartSeries c;
    c.title = "Proportion of cases by text vs image dominance";
    for (auto d : kDominanceStrata) c.series.push_back({std::string(display_name(d)), {}});
    for (std::size_t k = 0; k < given_interaction.conditions().size(); ++k) {
        c.labels.push_back(std::string(display_name(kInteractionTypes[k])) + " (n=" +
                           std::to_string(given_interaction.stratum_count(k)) + ")");
        for (std::size_t o = 0; o < c.series.size(); ++o) {
            c.series[o].values.push_back(given_interaction.probability(k, o).value_or(0.0));
        }
    }
    return c;
}

}  // namespace biasdyn
