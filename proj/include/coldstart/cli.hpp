#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "coldstart/bipartite.hpp"
#include "coldstart/netstats.hpp"
#include "coldstart/nullmodel.hpp"
#include "coldstart/promotion.hpp"
#include "coldstart/recsys.hpp"
#include "coldstart/synthgen.hpp"
#include "coldstart/version.hpp"

namespace coldstart::cli {

namespace fs = std::filesystem;
using nlohmann::json;

// --- small io helpers --------------------------------------------------------

// Shortest decimal representation that parses back to the same double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string file_digest(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open file for digest: " + path.string());
    std::uint64_t h = 1469598103934665603ULL;  // FNV-1a 64
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (got == 0) break;
    }
    char out[32];
    std::snprintf(out, sizeof out, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return out;
}

inline std::string iso_timestamp_utc() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Temp-file-then-rename so a failed run never leaves a partial output behind.
inline void write_file_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    fs::rename(tmp, path);
}

inline BipartiteNetwork load_network(const fs::path& path, std::size_t* duplicates = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open input file: " + path.string());
    return ingest_edge_list(in, duplicates);
}

// Every command writes a manifest describing inputs, parameters and seed so
// any output can be reproduced bit-for-bit with the same build.
class ManifestBuilder {
public:
    explicit ManifestBuilder(std::string command) : start_(std::chrono::steady_clock::now()) {
        j_["command"] = std::move(command);
        j_["version"] = kVersion;
        j_["started_at"] = iso_timestamp_utc();
        j_["input_digests"] = json::object();
        j_["outputs"] = json::array();
    }

    void set_seed(std::uint64_t seed) { j_["seed"] = seed; }
    void set_threads(unsigned threads) { j_["threads"] = threads; }
    void set_parameters(json params) { j_["parameters"] = std::move(params); }
    void add_input(const fs::path& path) { j_["input_digests"][path.string()] = file_digest(path); }
    void add_output(const std::string& name) { j_["outputs"].push_back(name); }

    void write(const fs::path& path) {
        j_["finished_at"] = iso_timestamp_utc();
        const auto elapsed = std::chrono::steady_clock::now() - start_;
        j_["wall_seconds"] =
            std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
        write_file_atomic(path, j_.dump(2) + "\n");
    }

private:
    json j_;
    std::chrono::steady_clock::time_point start_;
};

inline void write_network_files(const BipartiteNetwork& net, const fs::path& dir,
                                const std::string& stem, ManifestBuilder& manifest) {
    std::ostringstream edges, users, items;
    write_edge_list(net, edges);
    write_mapping(net, Side::user, users);
    write_mapping(net, Side::item, items);
    write_file_atomic(dir / (stem + ".edges"), edges.str());
    write_file_atomic(dir / (stem + "_users.map"), users.str());
    write_file_atomic(dir / (stem + "_items.map"), items.str());
    manifest.add_output(stem + ".edges");
    manifest.add_output(stem + "_users.map");
    manifest.add_output(stem + "_items.map");
}

inline std::string curve_csv(std::span<const std::uint32_t> k, std::span<const double> value,
                             std::span<const std::size_t> count) {
    std::ostringstream out;
    out << "k,value,count\n";
    for (std::size_t i = 0; i < k.size(); ++i)
        out << k[i] << ',' << format_double(value[i]) << ',' << count[i] << '\n';
    return out.str();
}

inline std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

// --- command options ----------------------------------------------------------

struct CommonOptions {
    std::string input;
    std::string output_dir = ".";
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 0;  // 0: hardware concurrency

    fs::path outdir() const {
        fs::path dir(output_dir);
        fs::create_directories(dir);
        return dir;
    }
    std::uint64_t resolve_seed() { return seed_given ? seed : (seed = fresh_seed()); }
};

inline PromotionStrategy make_strategy(const std::string& name, std::optional<double> tau) {
    if (name == "MaxD") return PromotionStrategy::max_degree();
    if (name == "MinD") return PromotionStrategy::min_degree();
    if (name == "PA") return PromotionStrategy::preferential();
    if (name == "RAN") return PromotionStrategy::uniform();
    if (name == "TAU") {
        if (!tau) throw std::runtime_error("strategy TAU requires --tau");
        if (!std::isfinite(*tau)) throw std::runtime_error("--tau must be finite");
        return PromotionStrategy::exponent(*tau);
    }
    throw std::runtime_error("unknown strategy \"" + name + "\" (expected MaxD|MinD|PA|RAN|TAU)");
}

inline Engine parse_engine(const std::string& name) {
    if (name == "icf") return Engine::icf;
    if (name == "ucf") return Engine::ucf;
    throw std::runtime_error("unknown engine \"" + name + "\" (expected icf|ucf)");
}

// --- commands -------------------------------------------------------------------

struct StatsOptions : CommonOptions {
    std::uint32_t fit_k_min = 1;
};

inline int cmd_stats(const StatsOptions& opt) {
    ManifestBuilder manifest("stats");
    manifest.add_input(opt.input);
    manifest.set_parameters(json{{"input", opt.input}, {"k_min", opt.fit_k_min}});

    std::size_t duplicates = 0;
    const BipartiteNetwork net = load_network(opt.input, &duplicates);
    if (duplicates > 0)
        std::cerr << "warning: collapsed " << duplicates << " duplicate edge(s)\n";

    const NetworkSummary summary = summarize(net);
    json s;
    s["users"] = summary.users;
    s["items"] = summary.items;
    s["links"] = summary.links;
    s["mean_user_degree"] = summary.mean_user_degree;
    s["mean_item_degree"] = summary.mean_item_degree;
    s["sparsity"] = summary.sparsity;
    s["duplicates_collapsed"] = duplicates;
    s["exponent_k_min"] = opt.fit_k_min;
    for (Side side : {Side::user, Side::item}) {
        const std::string key =
            side == Side::user ? "user_degree_exponent" : "item_degree_exponent";
        try {
            s[key] = powerlaw_exponent_mle(net.degrees(side), opt.fit_k_min);
        } catch (const std::exception& e) {
            s[key] = nullptr;
            s[key + "_note"] = e.what();
        }
    }
    const auto corr = edge_degree_correlation(net);
    if (corr)
        s["degree_correlation"] = *corr;
    else
        s["degree_correlation"] = nullptr;

    const fs::path dir = opt.outdir();
    write_file_atomic(dir / "summary.json", s.dump(2) + "\n");
    manifest.add_output("summary.json");

    for (Side side : {Side::user, Side::item}) {
        const std::string prefix = side == Side::user ? "user" : "item";
        const DegreeDistribution dist = degree_distribution(net, side);
        write_file_atomic(dir / (prefix + "_degree_distribution.csv"),
                          curve_csv(dist.degree, dist.probability, dist.count));
        manifest.add_output(prefix + "_degree_distribution.csv");
        const AssortativityProfile profile = knn_by_degree(net, side);
        write_file_atomic(dir / (prefix + "_nn_degree.csv"),
                          curve_csv(profile.degree, profile.mean_neighbor_degree, profile.count));
        manifest.add_output(prefix + "_nn_degree.csv");
    }
    manifest.write(dir / "stats_manifest.json");
    return 0;
}

struct GenerateOptions : CommonOptions {
    GeneratorConfig config;
    std::string target = "negative";  // none|negative|positive
};

inline int cmd_generate(GenerateOptions opt) {
    ManifestBuilder manifest("generate");
    opt.config.seed = opt.resolve_seed();
    if (opt.target == "none")
        opt.config.target.reset();
    else if (opt.target == "negative")
        opt.config.target = AssortativityTarget::negative;
    else if (opt.target == "positive")
        opt.config.target = AssortativityTarget::positive;
    else
        throw std::runtime_error("unknown --target \"" + opt.target + "\" (none|negative|positive)");

    manifest.set_seed(opt.config.seed);
    manifest.set_parameters(json{{"users", opt.config.user_count},
                                 {"items", opt.config.item_count},
                                 {"user_exponent", opt.config.user_exponent},
                                 {"item_exponent", opt.config.item_exponent},
                                 {"user_k_min", opt.config.user_k_min},
                                 {"user_k_max", opt.config.user_k_max},
                                 {"item_k_min", opt.config.item_k_min},
                                 {"item_k_max", opt.config.item_k_max},
                                 {"target", opt.target},
                                 {"target_magnitude", opt.config.target_magnitude},
                                 {"tune_budget", opt.config.tuning_swap_budget}});

    GenerationResult result = generate(opt.config);

    const fs::path dir = opt.outdir();
    write_network_files(result.network, dir, "generated", manifest);

    json report;
    report["users"] = result.network.user_count();
    report["items"] = result.network.item_count();
    report["links"] = result.network.link_count();
    report["balance_decrements"] = result.balance_decrements;
    report["tune_attempts"] = result.tune.attempts;
    report["tune_accepted"] = result.tune.accepted;
    report["correlation"] = result.correlation ? json(*result.correlation) : json(nullptr);
    report["seed"] = result.seed;
    write_file_atomic(dir / "generate_report.json", report.dump(2) + "\n");
    manifest.add_output("generate_report.json");
    manifest.write(dir / "generate_manifest.json");
    return 0;
}

struct ReshuffleOptions : CommonOptions {
    std::uint64_t attempts = 0;  // 0: default 3w
    bool attempts_given = false;
};

inline int cmd_reshuffle(ReshuffleOptions opt) {
    ManifestBuilder manifest("reshuffle");
    manifest.add_input(opt.input);
    const std::uint64_t seed = opt.resolve_seed();
    manifest.set_seed(seed);

    const BipartiteNetwork net = load_network(opt.input);
    const std::uint64_t attempts =
        opt.attempts_given ? opt.attempts : default_reshuffle_attempts(net);
    manifest.set_parameters(json{{"input", opt.input}, {"attempts", attempts}});

    auto [shuffled, report] = reshuffle(net, attempts, seed);

    const fs::path dir = opt.outdir();
    write_network_files(shuffled, dir, "reshuffled", manifest);

    json r;
    r["attempts"] = report.attempts;
    r["successful_swaps"] = report.successful_swaps;
    r["seed"] = report.seed;
    r["links"] = shuffled.link_count();
    const auto before = edge_degree_correlation(net);
    const auto after = edge_degree_correlation(shuffled);
    r["correlation_before"] = before ? json(*before) : json(nullptr);
    r["correlation_after"] = after ? json(*after) : json(nullptr);
    write_file_atomic(dir / "reshuffle_report.json", r.dump(2) + "\n");
    manifest.add_output("reshuffle_report.json");
    manifest.write(dir / "reshuffle_manifest.json");
    return 0;
}

struct RecommendOptions : CommonOptions {
    std::uint32_t list_length = 6;
    std::string engine = "icf";
    std::size_t top_k = 0;  // 0: full similarity matrix
    std::vector<std::string> users;  // external ids; empty means all users
};

inline int cmd_recommend(const RecommendOptions& opt) {
    ManifestBuilder manifest("recommend");
    manifest.add_input(opt.input);
    manifest.set_parameters(json{{"input", opt.input},
                                 {"L", opt.list_length},
                                 {"engine", opt.engine},
                                 {"top_k", opt.top_k},
                                 {"users", opt.users}});

    const Engine engine = parse_engine(opt.engine);
    if (engine == Engine::ucf && opt.top_k > 0)
        throw std::runtime_error("--top-k applies to the icf engine only");

    const BipartiteNetwork net = load_network(opt.input);

    std::vector<std::uint32_t> targets;
    if (opt.users.empty()) {
        targets.resize(net.user_count());
        std::iota(targets.begin(), targets.end(), 0u);
    } else {
        const auto& ids = net.ids(Side::user);
        std::unordered_map<std::string, std::uint32_t> index;
        for (std::uint32_t i = 0; i < ids.size(); ++i) index[ids[i]] = i;
        for (const auto& id : opt.users) {
            auto it = index.find(id);
            if (it == index.end()) throw std::runtime_error("unknown user id: " + id);
            targets.push_back(it->second);
        }
    }

    std::ostringstream csv;
    csv << "user,rank,item,score\n";
    auto emit = [&](std::uint32_t user, const std::vector<std::pair<std::uint32_t, double>>& ranked) {
        for (std::size_t t = 0; t < ranked.size() && t < opt.list_length; ++t)
            csv << user << ',' << (t + 1) << ',' << ranked[t].first << ','
                << format_double(ranked[t].second) << '\n';
    };
    auto rank_scores = [](ScoreVector sv) {
        std::stable_sort(sv.scores.begin(), sv.scores.end(),
                         [](const auto& a, const auto& b) { return a.second > b.second; });
        return sv.scores;
    };

    if (engine == Engine::icf) {
        std::size_t oversized = 0;
        ItemSimilarity sim = item_similarity(net, {}, &oversized);
        if (oversized > 0)
            std::cerr << "warning: " << oversized
                      << " basket(s) above the pair-enumeration size threshold\n";
        if (opt.top_k > 0) sim = item_similarity_topk(sim, opt.top_k);
        for (auto user : targets) emit(user, rank_scores(score_user(net, sim, user)));
    } else {
        for (auto user : targets) emit(user, rank_scores(ucf_score_user(net, user)));
    }

    const fs::path dir = opt.outdir();
    write_file_atomic(dir / "recommendations.csv", csv.str());
    manifest.add_output("recommendations.csv");
    {
        std::ostringstream users_map, items_map;
        write_mapping(net, Side::user, users_map);
        write_mapping(net, Side::item, items_map);
        write_file_atomic(dir / "recommend_users.map", users_map.str());
        write_file_atomic(dir / "recommend_items.map", items_map.str());
        manifest.add_output("recommend_users.map");
        manifest.add_output("recommend_items.map");
    }
    manifest.write(dir / "recommend_manifest.json");
    return 0;
}

inline std::string experiment_csv(std::span<const ExperimentResult> rows) {
    std::ostringstream out;
    out << "strategy,tau,R,L,mean_H,std_H,realizations,seed\n";
    for (const auto& r : rows)
        out << r.strategy.label() << ',' << format_double(r.strategy.tau_value()) << ','
            << r.strategy.links << ',' << r.list_length << ',' << format_double(r.mean_hits) << ','
            << format_double(r.std_hits) << ',' << r.realizations << ',' << r.seed << '\n';
    return out.str();
}

struct PromoteOptions : CommonOptions {
    std::string strategy = "RAN";
    std::optional<double> tau;
    std::size_t links = 1;
    std::uint32_t list_length = 6;
    std::size_t realizations = 50;
    std::string engine = "icf";
};

inline int cmd_promote(PromoteOptions opt) {
    ManifestBuilder manifest("promote");
    manifest.add_input(opt.input);
    const std::uint64_t seed = opt.resolve_seed();
    manifest.set_seed(seed);
    manifest.set_threads(resolve_thread_count(opt.threads));
    manifest.set_parameters(json{{"input", opt.input},
                                 {"strategy", opt.strategy},
                                 {"tau", opt.tau ? json(*opt.tau) : json(nullptr)},
                                 {"R", opt.links},
                                 {"L", opt.list_length},
                                 {"realizations", opt.realizations},
                                 {"engine", opt.engine}});

    const BipartiteNetwork net = load_network(opt.input);
    const PromotionStrategy strategy = make_strategy(opt.strategy, opt.tau).with_links(opt.links);
    const Engine engine = parse_engine(opt.engine);

    ExperimentResult result;
    if (engine == Engine::icf) {
        const ItemSimilarity sim = item_similarity(net);
        const UserThresholds thresholds =
            compute_thresholds(net, sim, opt.list_length, opt.threads);
        result = run_experiment(net, thresholds, strategy, opt.realizations, seed, opt.threads);
    } else {
        const UserCoNeighbors co = build_user_co_neighbors(net);
        result = run_experiment_ucf(net, co, opt.list_length, strategy, opt.realizations, seed,
                                    opt.threads);
    }

    const fs::path dir = opt.outdir();
    write_file_atomic(dir / "promotion.csv", experiment_csv({&result, 1}));
    manifest.add_output("promotion.csv");
    manifest.write(dir / "promote_manifest.json");
    return 0;
}

struct SweepOptions : CommonOptions {
    std::vector<std::string> strategies;  // named strategies; empty with no tau grid => all four
    std::vector<double> tau_grid;         // each value becomes an exponent strategy
    std::vector<std::size_t> link_grid;   // empty: default log-spaced grid capped at n
    std::uint32_t list_length = 6;
    std::size_t realizations = 50;
    std::string engine = "icf";
};

inline int cmd_sweep(SweepOptions opt) {
    ManifestBuilder manifest("sweep");
    manifest.add_input(opt.input);
    const std::uint64_t seed = opt.resolve_seed();
    manifest.set_seed(seed);
    manifest.set_threads(resolve_thread_count(opt.threads));

    const BipartiteNetwork net = load_network(opt.input);

    SweepRequest request;
    request.list_length = opt.list_length;
    request.realizations = opt.realizations;
    request.seed = seed;
    request.engine = parse_engine(opt.engine);

    if (opt.strategies.empty() && opt.tau_grid.empty())
        opt.strategies = {"MaxD", "MinD", "PA", "RAN"};
    for (const auto& name : opt.strategies)
        request.strategies.push_back(make_strategy(name, std::nullopt));
    for (double tau : opt.tau_grid) {
        if (!std::isfinite(tau)) throw std::runtime_error("--tau-grid values must be finite");
        request.strategies.push_back(PromotionStrategy::exponent(tau));
    }

    if (opt.link_grid.empty()) {
        for (auto r : default_link_grid())
            if (r <= net.user_count()) request.link_grid.push_back(r);
    } else {
        request.link_grid = opt.link_grid;  // out-of-range values rejected by sweep()
    }

    manifest.set_parameters(json{{"input", opt.input},
                                 {"strategies", opt.strategies},
                                 {"tau_grid", opt.tau_grid},
                                 {"R_grid", request.link_grid},
                                 {"L", opt.list_length},
                                 {"realizations", opt.realizations},
                                 {"engine", opt.engine}});

    const std::vector<ExperimentResult> results = sweep(net, request, opt.threads);

    const fs::path dir = opt.outdir();
    write_file_atomic(dir / "sweep.csv", experiment_csv(results));
    manifest.add_output("sweep.csv");
    manifest.write(dir / "sweep_manifest.json");
    return 0;
}

// --- entry point ---------------------------------------------------------------

inline int run(int argc, const char* const* argv) {
    CLI::App app{"cold-start item promotion toolkit for bipartite purchase networks"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "plain-text key=value defaults; sections per subcommand");
    app.require_subcommand(1);

    auto add_common = [](CLI::App* sub, CommonOptions& opt, bool with_input) {
        if (with_input)
            sub->add_option("--input", opt.input, "edge-list input file")->required();
        sub->add_option("--output-dir", opt.output_dir, "directory for outputs (created if missing)");
        auto* seed_opt = sub->add_option("--seed", opt.seed, "master RNG seed");
        sub->add_option("--threads", opt.threads, "worker threads (0 = hardware)");
        return seed_opt;
    };

    StatsOptions stats_opt;
    auto* stats = app.add_subcommand("stats", "summary scalars, degree distributions, d_nn curves");
    add_common(stats, stats_opt, true);
    stats->add_option("--kmin", stats_opt.fit_k_min, "k_min for the power-law exponent fit");

    GenerateOptions gen_opt;
    auto* generate = app.add_subcommand("generate", "synthesize a heavy-tailed bipartite network");
    auto* gen_seed = add_common(generate, gen_opt, false);
    generate->add_option("--users", gen_opt.config.user_count, "number of users");
    generate->add_option("--items", gen_opt.config.item_count, "number of items");
    generate->add_option("--user-exponent", gen_opt.config.user_exponent, "user degree exponent");
    generate->add_option("--item-exponent", gen_opt.config.item_exponent, "item degree exponent");
    generate->add_option("--user-kmin", gen_opt.config.user_k_min, "min user degree");
    generate->add_option("--user-kmax", gen_opt.config.user_k_max, "max user degree");
    generate->add_option("--item-kmin", gen_opt.config.item_k_min, "min item degree");
    generate->add_option("--item-kmax", gen_opt.config.item_k_max, "max item degree");
    generate->add_option("--target", gen_opt.target, "assortativity target: none|negative|positive");
    generate->add_option("--target-magnitude", gen_opt.config.target_magnitude,
                         "stop tuning once |correlation| reaches this (0 = use full budget)");
    generate->add_option("--tune-budget", gen_opt.config.tuning_swap_budget,
                         "tuning swap attempts (0 = 10w)");

    ReshuffleOptions resh_opt;
    auto* reshuf = app.add_subcommand("reshuffle", "degree-preserving link-crossing null model");
    auto* resh_seed = add_common(reshuf, resh_opt, true);
    auto* attempts_opt =
        reshuf->add_option("--attempts", resh_opt.attempts, "swap proposals (default 3w)");

    RecommendOptions rec_opt;
    auto* rec = app.add_subcommand("recommend", "emit top-L recommendation lists");
    add_common(rec, rec_opt, true);
    rec->add_option("--L", rec_opt.list_length, "list length");
    rec->add_option("--engine", rec_opt.engine, "icf|ucf");
    rec->add_option("--top-k", rec_opt.top_k, "prune each item to its k strongest neighbors (icf)");
    rec->add_option("--users", rec_opt.users, "external user ids (default: all users)")
        ->delimiter(',');

    PromoteOptions prom_opt;
    auto* prom = app.add_subcommand("promote", "evaluate one (strategy, R, L) promotion cell");
    auto* prom_seed = add_common(prom, prom_opt, true);
    prom->add_option("--strategy", prom_opt.strategy, "MaxD|MinD|PA|RAN|TAU");
    double prom_tau = 0.0;
    auto* prom_tau_opt = prom->add_option("--tau", prom_tau, "exponent for strategy TAU");
    prom->add_option("--R", prom_opt.links, "links the new item may establish");
    prom->add_option("--L", prom_opt.list_length, "recommendation list length");
    prom->add_option("--realizations", prom_opt.realizations, "independent realizations");
    prom->add_option("--engine", prom_opt.engine, "icf|ucf");

    SweepOptions sweep_opt;
    auto* sw = app.add_subcommand("sweep", "strategy x R grid of promotion experiments");
    auto* sweep_seed = add_common(sw, sweep_opt, true);
    sw->add_option("--strategies", sweep_opt.strategies, "comma list of MaxD|MinD|PA|RAN")
        ->delimiter(',');
    sw->add_option("--tau-grid", sweep_opt.tau_grid, "comma list of exponents (use --tau-grid=...)")
        ->delimiter(',');
    sw->add_option("--R-grid", sweep_opt.link_grid, "comma list of R values")->delimiter(',');
    sw->add_option("--L", sweep_opt.list_length, "recommendation list length");
    sw->add_option("--realizations", sweep_opt.realizations, "realizations per cell");
    sw->add_option("--engine", sweep_opt.engine, "icf|ucf");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (stats->parsed()) return cmd_stats(stats_opt);
        if (generate->parsed()) {
            gen_opt.seed_given = gen_seed->count() > 0;
            return cmd_generate(gen_opt);
        }
        if (reshuf->parsed()) {
            resh_opt.seed_given = resh_seed->count() > 0;
            resh_opt.attempts_given = attempts_opt->count() > 0;
            return cmd_reshuffle(resh_opt);
        }
        if (rec->parsed()) return cmd_recommend(rec_opt);
        if (prom->parsed()) {
            prom_opt.seed_given = prom_seed->count() > 0;
            if (prom_tau_opt->count() > 0) prom_opt.tau = prom_tau;
            return cmd_promote(prom_opt);
        }
        if (sw->parsed()) {
            sweep_opt.seed_given = sweep_seed->count() > 0;
            return cmd_sweep(sweep_opt);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

// Convenience wrapper used by the test suite.
inline int run(const std::vector<std::string>& args) {
    std::vector<std::string> full;
    full.reserve(args.size() + 1);
    full.emplace_back("coldstart");
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const auto& a : full) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace coldstart::cli
