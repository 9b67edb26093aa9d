#include "cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "biasdyn/analysis.hpp"
#include "biasdyn/embed.hpp"
#include "biasdyn/error.hpp"
#include "biasdyn/ingest.hpp"
#include "biasdyn/report.hpp"
#include "biasdyn/sim.hpp"

namespace biasdyn::cli {
namespace {

namespace fs = std::filesystem;

struct Options {
    std::string manifest;
    std::string scores;
    std::string embeddings;
    std::uint64_t seed = 0;
    double w_text = 0.5;
    double sigma = 0.05;
    double tie_epsilon = 0.0;
    bool fuse = false;
    std::string direction = "both";
    std::string format = "structured";
    std::string out;
    bool deterministic = false;
    bool timestamps = false;
};

struct Subcommands {
    CLI::App* simulate;
    CLI::App* score;
    CLI::App* classify;
    CLI::App* analyze;
    CLI::App* chart;
    CLI::App* audit;
};

void add_simulation_options(CLI::App* sub, Options& o, bool required_manifest) {
    auto* m = sub->add_option("--manifest", o.manifest, "Category manifest JSON file, or 'default' for the bundled one");
    if (required_manifest) m->required();
    sub->add_option("--seed", o.seed, "Simulation seed (default 0)");
    sub->add_option("--w-text", o.w_text, "Fusion weight of the text score; image weight is 1 - w (default 0.5)")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--sigma", o.sigma,
                    "Std. deviation of the fusion noise (default 0.05; 0 when fusing embeddings)")
        ->check(CLI::NonNegativeNumber);
}

// Input selection shared by classify / analyze / chart / audit.
void add_input_options(CLI::App* sub, Options& o) {
    add_simulation_options(sub, o, false);
    auto* scores = sub->add_option("--scores", o.scores, "Scores CSV (class,group,s_text,s_image,s_multi)");
    auto* emb = sub->add_option("--embeddings", o.embeddings, "Embeddings JSONL file (requires --fuse)");
    auto* manifest = sub->get_option("--manifest");
    scores->excludes(emb)->excludes(manifest);
    emb->excludes(manifest);
    sub->add_flag("--fuse", o.fuse, "Compute s_multi from measured text/image scores by the fusion rule")
        ->needs(emb);
    sub->add_option("--tie-epsilon", o.tie_epsilon, "Tolerance below which |s_text - s_image| counts as a tie (default 0)")
        ->check(CLI::NonNegativeNumber);
}

void add_output_option(CLI::App* sub, Options& o, const std::string& help) {
    sub->add_option("--out", o.out, help);
}

void add_summary_options(CLI::App* sub, Options& o) {
    sub->add_option("--direction", o.direction, "Conditional tables to emit (default both)")
        ->check(CLI::IsMember({"given-dominance", "given-interaction", "both"}));
    sub->add_option("--format", o.format, "Summary format (default structured)")
        ->check(CLI::IsMember({"structured", "delimited"}));
    auto* det = sub->add_flag("--deterministic", o.deterministic, "Omit wall-clock fields (default on)");
    auto* ts = sub->add_flag("--timestamps", o.timestamps, "Record a UTC timestamp in the summary metadata");
    det->excludes(ts);
}

Subcommands build_app(CLI::App& app, Options& o) {
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Subcommands s{};
    s.simulate = app.add_subcommand("simulate", "Simulate a scores file from a manifest");
    add_simulation_options(s.simulate, o, true);
    add_output_option(s.simulate, o, "Directory for scores.csv (default: standard output)");

    s.score = app.add_subcommand("score", "Measure text/image scores from embeddings");
    s.score->add_option("--embeddings", o.embeddings, "Embeddings JSONL file")->required();
    auto* multi = s.score->add_option("--scores", o.scores, "Scores CSV supplying s_multi for each group");
    auto* fuse = s.score->add_flag("--fuse", o.fuse, "Compute s_multi with the fusion rule");
    multi->excludes(fuse);
    s.score->add_option("--seed", o.seed, "Seed for fusion noise (default 0)");
    s.score->add_option("--w-text", o.w_text, "Fusion weight of the text score (default 0.5)")
        ->check(CLI::Range(0.0, 1.0));
    s.score->add_option("--sigma", o.sigma, "Fusion noise std. deviation (default 0)")
        ->check(CLI::NonNegativeNumber);
    add_output_option(s.score, o, "Directory for scores.csv (default: standard output)");

    s.classify = app.add_subcommand("classify", "Label each record's interaction and dominance");
    add_input_options(s.classify, o);
    add_output_option(s.classify, o, "Directory for classified.csv (default: standard output)");

    s.analyze = app.add_subcommand("analyze", "Write the summary document");
    add_input_options(s.analyze, o);
    add_summary_options(s.analyze, o);
    add_output_option(s.analyze, o, "Directory for summary.json / summary.csv (default: standard output)");

    s.chart = app.add_subcommand("chart", "Write the three SVG charts");
    add_input_options(s.chart, o);
    add_output_option(s.chart, o, "Directory for the SVG files (default: current directory)");

    s.audit = app.add_subcommand("audit", "Run the full chain: scores, labels, summary and charts");
    add_input_options(s.audit, o);
    add_summary_options(s.audit, o);
    add_output_option(s.audit, o, "Directory for all outputs (default: current directory)");
    return s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string bytes{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("cannot read " + path);
    return bytes;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << bytes;
    out.flush();
    if (!out) throw IoError("write failed for " + path.string());
}

// Writes to DIR/name when a directory was given, otherwise to `out`.
void emit(const std::string& dir, const std::string& name, const std::string& bytes, std::ostream& out) {
    if (dir.empty()) {
        out << bytes;
        return;
    }
    write_file(fs::path(dir) / name, bytes);
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct Dataset {
    std::vector<CategoryRecord> records;
    RunMetadata meta;
};

SimConfig sim_config_from(const Options& o) {
    SimConfig c;
    c.seed = o.seed;
    c.w_text = o.w_text;
    c.noise_sigma = o.sigma;
    c.validate();
    return c;
}

// Pairs each group's text and image vectors into measured scores, in order
// of first appearance.
struct MeasuredGroup {
    std::string class_name;
    std::string group_name;
    std::optional<BiasScore> s_text;
    std::optional<BiasScore> s_image;
};

std::vector<MeasuredGroup> measure_groups(const EmbeddingBundle& bundle) {
    std::vector<MeasuredGroup> out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& g : bundle.groups) {
        const auto key = std::pair{g.class_name, g.group_name};
        auto it = index.find(key);
        if (it == index.end()) {
            it = index.emplace(key, out.size()).first;
            out.push_back({g.class_name, g.group_name, std::nullopt, std::nullopt});
        }
        const BiasScore s = modality_bias(g, bundle.anchors);
        (g.modality == Modality::Text ? out[it->second].s_text : out[it->second].s_image) = s;
    }
    if (out.empty()) throw ValidationError("embeddings file has no text or image target records");
    for (const auto& m : out) {
        if (!m.s_text) throw ValidationError(m.class_name + "/" + m.group_name + " has no text vectors");
        if (!m.s_image) throw ValidationError(m.class_name + "/" + m.group_name + " has no image vectors");
    }
    return out;
}

std::vector<CategoryRecord> fuse_measured(const std::vector<MeasuredGroup>& groups, const SimConfig& config) {
    GaussianSource noise(config.seed);
    std::vector<CategoryRecord> records;
    for (const auto& g : groups) {
        const BiasScore multi = fuse(*g.s_text, *g.s_image, config, noise.next_gaussian());
        records.push_back({g.class_name, g.group_name, *g.s_text, *g.s_image, multi});
    }
    return records;
}

std::vector<CategoryRecord> with_supplied_multi(const std::vector<MeasuredGroup>& groups,
                                                const std::vector<CategoryRecord>& supplied) {
    std::map<std::pair<std::string, std::string>, BiasScore> multi;
    for (const auto& r : supplied) multi.emplace(std::pair{r.class_name, r.group_name}, r.s_multi);
    std::vector<CategoryRecord> records;
    for (const auto& g : groups) {
        const auto it = multi.find({g.class_name, g.group_name});
        if (it == multi.end()) {
            throw ValidationError("no s_multi supplied for " + g.class_name + "/" + g.group_name);
        }
        records.push_back({g.class_name, g.group_name, *g.s_text, *g.s_image, it->second});
    }
    return records;
}

Dataset simulate_from(const Options& o) {
    const bool bundled = o.manifest == "default";
    const std::string bytes = bundled ? std::string(default_manifest_json()) : read_file(o.manifest);
    std::istringstream in(bytes);
    const auto manifest = load_manifest(in);
    const auto config = sim_config_from(o);
    auto result = simulate_dataset(manifest, config);
    Dataset d;
    d.records = std::move(result.records);
    d.meta.input_kind = "simulation";
    d.meta.input_fingerprint = fingerprint(bytes);
    d.meta.sim_config = config;
    d.meta.clamp_count = result.clamp_count;
    return d;
}

Dataset load_input(const Options& o, double fuse_sigma) {
    const int chosen = !o.scores.empty() + !o.embeddings.empty() + !o.manifest.empty();
    if (chosen == 0) throw ValidationError("no input: pass one of --scores, --embeddings or --manifest");
    if (chosen > 1) throw ValidationError("conflicting inputs: pass only one of --scores, --embeddings, --manifest");

    if (!o.manifest.empty()) return simulate_from(o);

    Dataset d;
    if (!o.scores.empty()) {
        const auto bytes = read_file(o.scores);
        std::istringstream in(bytes);
        d.records = load_scores(in);
        d.meta.input_kind = "scores";
        d.meta.input_fingerprint = fingerprint(bytes);
        return d;
    }
    if (!o.fuse) {
        throw ValidationError("--embeddings needs --fuse to compute s_multi "
                              "(or use 'score --scores FILE' to supply it)");
    }
    const auto bytes = read_file(o.embeddings);
    std::istringstream in(bytes);
    const auto bundle = load_embeddings(in);
    auto config = sim_config_from(o);
    config.noise_sigma = fuse_sigma;
    d.records = fuse_measured(measure_groups(bundle), config);
    d.meta.input_kind = "embeddings";
    d.meta.input_fingerprint = fingerprint(bytes);
    d.meta.sim_config = config;
    return d;
}

struct Analysis {
    std::vector<ClassifiedRecord> classified;
    InteractionMix mix;
    ProbabilityTables tables;
    InteractionMeans means;
};

Analysis analyze(const Dataset& d, const Options& o) {
    Analysis a;
    a.classified = classify_dataset(d.records, o.tie_epsilon);
    a.mix = interaction_mix(a.classified);
    a.means = interaction_means(a.classified);
    a.tables.given_dominance = conditional_table(a.classified, TableDirection::InteractionGivenDominance);
    a.tables.given_interaction = conditional_table(a.classified, TableDirection::DominanceGivenInteraction);
    return a;
}

std::string summary_for(const Analysis& a, Dataset d, const Options& o) {
    ProbabilityTables tables = a.tables;
    if (o.direction == "given-dominance") tables.given_interaction.reset();
    if (o.direction == "given-interaction") tables.given_dominance.reset();
    d.meta.tie_epsilon = o.tie_epsilon;
    if (o.timestamps) d.meta.timestamp = utc_timestamp();
    const auto fmt = o.format == "delimited" ? SummaryFormat::Delimited : SummaryFormat::Structured;
    return render_summary(a.mix, tables, a.means, d.meta, fmt);
}

std::string summary_name(const Options& o) {
    return o.format == "delimited" ? "summary.csv" : "summary.json";
}

void write_charts(const Dataset& d, const Analysis& a, const std::string& dir) {
    const fs::path base = dir.empty() ? fs::path(".") : fs::path(dir);
    write_file(base / "bias_scores.svg", render_bar_chart(scores_chart(d.records)));
    write_file(base / "interaction_means.svg", render_bar_chart(means_chart(a.means)));
    write_file(base / "dominance_proportions.svg", render_bar_chart(dominance_chart(*a.tables.given_interaction)));
}

int dispatch(const Subcommands& s, Options& o, bool sigma_given, std::ostream& out) {
    validate_tie_epsilon(o.tie_epsilon);
    const double fuse_sigma = sigma_given ? o.sigma : 0.0;

    if (s.simulate->parsed()) {
        emit(o.out, "scores.csv", export_scores(simulate_from(o).records), out);
    } else if (s.score->parsed()) {
        if (!o.fuse && o.scores.empty()) {
            throw ValidationError("score needs --fuse or --scores FILE to provide s_multi");
        }
        const auto bytes = read_file(o.embeddings);
        std::istringstream in(bytes);
        const auto groups = measure_groups(load_embeddings(in));
        std::vector<CategoryRecord> records;
        if (o.fuse) {
            auto config = sim_config_from(o);
            config.noise_sigma = fuse_sigma;
            records = fuse_measured(groups, config);
        } else {
            const auto multi_bytes = read_file(o.scores);
            std::istringstream multi_in(multi_bytes);
            records = with_supplied_multi(groups, load_scores(multi_in));
        }
        emit(o.out, "scores.csv", export_scores(records), out);
    } else if (s.classify->parsed()) {
        const auto d = load_input(o, fuse_sigma);
        emit(o.out, "classified.csv", export_classified(classify_dataset(d.records, o.tie_epsilon)), out);
    } else if (s.analyze->parsed()) {
        const auto d = load_input(o, fuse_sigma);
        emit(o.out, summary_name(o), summary_for(analyze(d, o), d, o), out);
    } else if (s.chart->parsed()) {
        const auto d = load_input(o, fuse_sigma);
        write_charts(d, analyze(d, o), o.out);
    } else if (s.audit->parsed()) {
        const auto d = load_input(o, fuse_sigma);
        const auto a = analyze(d, o);
        const std::string dir = o.out.empty() ? "." : o.out;
        write_file(fs::path(dir) / "scores.csv", export_scores(d.records));
        write_file(fs::path(dir) / "classified.csv", export_classified(a.classified));
        write_file(fs::path(dir) / summary_name(o), summary_for(a, d, o));
        write_charts(d, a, dir);
    }
    return kExitOk;
}

const char* kDescription =
    "Multimodal bias interaction audit: classify amplification / mitigation / neutral\n"
    "interactions and tabulate them against text vs image dominance.";

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{kDescription, "biasdyn"};
    Options o;
    const auto subs = build_app(app, o);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << " (run with --help for usage)\n";
        return kExitValidation;
    }

    bool sigma_given = false;
    for (auto* sub : app.get_subcommands()) {
        if (auto* opt = sub->get_option_no_throw("--sigma"); opt != nullptr && opt->count() > 0) sigma_given = true;
    }

    try {
        return dispatch(subs, o, sigma_given, out);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitIo;
    }
}

std::vector<std::string> accepted_flags(const std::string& subcommand) {
    CLI::App app{kDescription, "biasdyn"};
    Options o;
    build_app(app, o);
    CLI::App* target = subcommand.empty() ? &app : app.get_subcommand(subcommand);
    std::vector<std::string> flags;
    for (const auto* opt : target->get_options()) {
        for (const auto& name : opt->get_lnames()) flags.push_back("--" + name);
    }
    return flags;
}

std::vector<std::string> subcommands() {
    return {"simulate", "score", "classify", "analyze", "chart", "audit"};
}

}  // namespace biasdyn::cli
