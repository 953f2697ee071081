// Copyright 2026 The mlqaoa Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>
#include <vector>

#include "CLI11.hpp"

#include "mlqaoa/baseline.hpp"
#include "mlqaoa/errors.hpp"
#include "mlqaoa/instance.hpp"
#include "mlqaoa/qaoa.hpp"
#include "mlqaoa/rng.hpp"
#include "mlqaoa/verify.hpp"

namespace mlqaoa::cli {

namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Keys handled here; everything else goes to pipeline_config_from_json.
nlohmann::json split_cli_keys(nlohmann::json& doc) {
    static const char* const kKeys[] = {"format",          "out_dir",          "budget_seconds",
                                        "method",          "warm_start",       "suite",
                                        "num_hyperplanes", "rank2_max_sweeps", "rank2_jitter",
                                        "random_trials",   "zone_lambda"};
    nlohmann::json own = nlohmann::json::object();
    for (const char* key : kKeys) {
        if (auto it = doc.find(key); it != doc.end()) {
            own[key] = *it;
            doc.erase(it);
        }
    }
    return own;
}

template <class T>
T typed(const nlohmann::json& v, const char* key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ArgumentError(std::string("config key '") + key + "' has the wrong type");
    }
}

struct Instance {
    std::string name;
    WeightedGraph graph;
    std::optional<QuboInstance> qubo;
    std::optional<ReductionRecord> reduction;
};

std::string resolve_format(const fs::path& path, const std::string& flag) {
    std::string f = flag;
    if (f.empty()) {
        const std::string ext = path.extension().string();
        if (ext == ".mtx") f = "mtx";
        else if (ext == ".json") f = "qubo";
        else f = "gset";
    }
    if (f == "json") f = "qubo";
    if (f != "gset" && f != "mtx" && f != "qubo") {
        throw ArgumentError("unknown format '" + flag + "' (expected gset, mtx or qubo)");
    }
    return f;
}

Instance load_instance(const fs::path& path, const std::string& format_flag) {
    if (!fs::is_regular_file(path)) throw IoError("cannot read instance '" + path.string() + "'");
    const std::string format = resolve_format(path, format_flag);
    Instance inst;
    inst.name = path.filename().string();
    if (format == "gset") {
        inst.graph = load_gset(path);
    } else if (format == "mtx") {
        inst.graph = load_matrix_market(path);
    } else {
        inst.qubo = load_qubo_json(path);
        inst.reduction = qubo_to_maxcut(*inst.qubo);
        inst.graph = inst.reduction->graph;
    }
    return inst;
}

fs::path prepare_output(const RunConfig& config, const std::string& file, const fs::path& input) {
    fs::create_directories(config.out_dir);
    const fs::path out = config.out_dir / file;
    std::error_code ec;
    if (fs::exists(out) && fs::equivalent(out, input, ec)) {
        throw ArgumentError("refusing to overwrite the input file '" + input.string() + "'");
    }
    return out;
}

// QUBO inputs report x and the QUBO value; graphs report the cut.
struct Reported {
    Bits assignment;
    double objective;
};

Reported report_for(const Instance& inst, const Bits& y) {
    if (!inst.qubo) return {y, cut_value(inst.graph, y)};
    Bits x = retrieve_qubo_solution(*inst.reduction, y);
    const double value = qubo_value(*inst.qubo, x);
    const double expected = (cut_value(inst.graph, y) - inst.reduction->offset) / inst.reduction->scale;
    if (std::abs(value - expected) > 1e-6 * (1.0 + std::abs(value))) {
        throw InvariantError("QUBO value disagrees with the reduced cut");
    }
    return {std::move(x), value};
}

nlohmann::json qubo_section(const Instance& inst) {
    return {{"reduction_map", inst.reduction->map == ReductionMap::direct ? "direct" : "ising"},
            {"scale", inst.reduction->scale},
            {"offset", inst.reduction->offset},
            {"anchor", inst.reduction->anchor}};
}

// Maps a warm-start record onto the graph being solved. A QUBO solution of
// length n is lifted onto the n+1 node graph with the anchor on side 0.
Bits warm_bits(const Instance& inst, const fs::path& path) {
    const SolutionRecord rec = load_solution(path);
    Bits bits = rec.assignment;
    if (inst.qubo && bits.size() == inst.qubo->num_variables()) bits.push_back(0);
    if (bits.size() != inst.graph.num_nodes()) {
        throw ArgumentError("warm start has " + std::to_string(rec.assignment.size()) +
                            " bits, instance has " + std::to_string(inst.graph.num_nodes()) +
                            " nodes");
    }
    return bits;
}

double seconds_since(Clock::time_point t) {
    return std::chrono::duration<double>(Clock::now() - t).count();
}

int cmd_solve(const std::string& instance_path, const RunConfig& config, std::ostream& out) {
    const Instance inst = load_instance(instance_path, config.format);
    PipelineConfig pc = config.pipeline;
    if (config.budget_seconds) pc.ga.time_budget = *config.budget_seconds;
    const SolveResult result = solve(inst.graph, pc);
    const Reported rep = report_for(inst, result.assignment);

    SolutionRecord rec;
    rec.instance = inst.name;
    rec.n = rep.assignment.size();
    rec.objective = rep.objective;
    rec.assignment = rep.assignment;
    rec.runtime_seconds = result.runtime_seconds;
    rec.seed = pc.seed;
    rec.metadata = {{"kind", inst.qubo ? "qubo" : "maxcut"},
                    {"config_digest", config_digest(pc)},
                    {"variant", to_string(pc.variant)}};
    nlohmann::json report = solve_report_to_json(result, pc, inst.name);
    if (inst.qubo) {
        report["qubo"] = qubo_section(inst);
        report["qubo"]["objective"] = rep.objective;
        report["qubo"]["assignment"] = bits_to_string(rep.assignment);
    }
    save_solution(prepare_output(config, "result.json", instance_path), rec);
    write_json_file(prepare_output(config, "report.json", instance_path), report);
    out << "objective " << rep.objective << "\n"
        << "levels " << result.levels.size() << "\n"
        << "runtime_seconds " << result.runtime_seconds << "\n";
    return kSuccess;
}

int cmd_landscape(const std::string& instance_path, const RunConfig& config, std::ostream& out) {
    const Instance inst = load_instance(instance_path, config.format);
    const PipelineConfig& pc = config.pipeline;
    const Hierarchy h = build_pipeline_hierarchy(inst.graph, pc);
    std::vector<ZoneSet> zones;
    nlohmann::json levels = nlohmann::json::array();
    for (std::size_t l = 0; l < h.graphs.size(); ++l) {
        const LandscapeGrid grid = grid_search(h.graphs[l], pc.grid, pc.threads);
        zones.push_back(detect_zones(grid, config.zone_lambda));
        std::ofstream csv(prepare_output(config, "landscape_level_" + std::to_string(l) + ".csv",
                                         instance_path));
        write_landscape_csv(csv, grid, zones.back());
        if (!csv) throw IoError("failed writing landscape CSV");
        levels.push_back({{"level", l},
                          {"n", h.graphs[l].num_nodes()},
                          {"m", h.graphs[l].num_edges()},
                          {"mean", grid.mean},
                          {"stddev", grid.stddev},
                          {"zones", zones.back().points}});
    }
    nlohmann::json similarity = nlohmann::json::array();
    for (std::size_t l = 0; l + 1 < zones.size(); ++l) {
        const double s = landscape_similarity(zones[l], zones[l + 1]);
        similarity.push_back({{"fine_level", l}, {"coarse_level", l + 1}, {"similarity", s}});
        out << "similarity " << l << ' ' << l + 1 << ' ' << s << "\n";
    }
    const nlohmann::json doc = {{"instance", inst.name},
                                {"seed", pc.seed},
                                {"lambda", config.zone_lambda},
                                {"grid",
                                 {{"gamma_min", pc.grid.gamma_min},
                                  {"gamma_max", pc.grid.gamma_max},
                                  {"gamma_points", pc.grid.gamma_points},
                                  {"beta_min", pc.grid.beta_min},
                                  {"beta_max", pc.grid.beta_max},
                                  {"beta_points", pc.grid.beta_points}}},
                                {"levels", levels},
                                {"consecutive_similarity", similarity}};
    write_json_file(prepare_output(config, "landscape.json", instance_path), doc);
    out << "levels " << h.graphs.size() << "\n";
    return kSuccess;
}

int cmd_compare(const std::string& instance_path, const RunConfig& config, std::ostream& out) {
    const Instance inst = load_instance(instance_path, config.format);
    PipelineConfig pc = config.pipeline;
    if (config.budget_seconds) pc.ga.time_budget = *config.budget_seconds;
    const std::vector<VariantSeries> series = run_variant_comparison(inst.graph, pc);
    std::ofstream csv(prepare_output(config, "variants.csv", instance_path));
    write_variant_csv(csv, series);
    if (!csv) throw IoError("failed writing variants.csv");
    for (const VariantSeries& s : series) {
        out << to_string(s.variant) << ' ' << s.result.objective << "\n";
    }
    return kSuccess;
}

int cmd_baseline(const std::string& instance_path, const RunConfig& config, std::ostream& out) {
    const Instance inst = load_instance(instance_path, config.format);
    const std::uint64_t seed = config.pipeline.seed;
    if (config.warm_start && config.method != "rank2") {
        throw ArgumentError("--warm-start is only valid with --method rank2");
    }
    const auto start = Clock::now();
    Rng rng(seed);
    Bits y;
    nlohmann::json extra = nlohmann::json::object();
    if (config.method == "brute_force") {
        y = brute_force_max_cut(inst.graph).assignment;
    } else if (config.method == "random") {
        y = random_baseline(inst.graph, config.random_trials, rng).assignment;
        extra["trials"] = config.random_trials;
    } else if (config.method == "rank2") {
        Rank2Options opts;
        opts.max_sweeps = config.rank2_max_sweeps;
        opts.max_seconds = config.budget_seconds;
        opts.jitter = config.rank2_jitter;
        std::optional<Bits> warm;
        if (config.warm_start) warm = warm_bits(inst, *config.warm_start);
        std::vector<double> angles = warm ? warm_start_angles(*warm, opts.jitter, rng)
                                          : random_angles(inst.graph.num_nodes(), rng);
        const Rank2State state = rank2_local_solve(inst.graph, std::move(angles), opts);
        std::optional<std::span<const std::uint8_t>> warm_span;
        if (warm) warm_span = std::span<const std::uint8_t>(*warm);
        y = rank2_round(state, inst.graph, config.num_hyperplanes, rng, warm_span);
        extra["sweeps"] = state.sweeps;
        extra["relaxation_objective"] = state.objective;
        if (warm) extra["warm_start_objective"] = report_for(inst, *warm).objective;
    } else {
        throw ArgumentError("unknown method '" + config.method +
                            "' (expected rank2, random or brute_force)");
    }
    const Reported rep = report_for(inst, y);
    nlohmann::json report = {{"instance", inst.name},
                             {"method", config.method},
                             {"objective", rep.objective},
                             {"assignment", bits_to_string(rep.assignment)},
                             {"n", rep.assignment.size()},
                             {"seed", seed},
                             {"runtime_seconds", seconds_since(start)}};
    report.update(extra);
    if (inst.qubo) report["qubo"] = qubo_section(inst);
    write_json_file(prepare_output(config, "baseline.json", instance_path), report);
    out << "objective " << rep.objective << "\n";
    return kSuccess;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
    VerifyOptions opts;
    opts.seed = config.pipeline.seed;
    bool ok = true;
    for (const SuiteResult& r : run_verify_suites(config.suite, opts)) {
        out << r.name << " passed=" << r.passed << " failed=" << r.failed
            << " max_error=" << r.max_error << "\n";
        if (!r.ok()) {
            ok = false;
            err << r.name << " counterexample: " << r.counterexample.dump() << "\n";
        }
    }
    return ok ? kSuccess : kVerificationFailure;
}

struct Flags {
    std::string instance;
    std::optional<fs::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
    std::optional<std::string> format;
    std::optional<fs::path> out_dir;
    std::optional<double> budget_seconds;
    std::optional<std::string> variant;
    std::optional<std::size_t> levels;
    std::optional<std::string> method;
    std::optional<fs::path> warm_start;
    std::optional<std::string> suite;
};

RunConfig assemble(const Flags& f) {
    RunConfig config;
    config.pipeline.threads = 0;
    if (f.config) config = run_config_from_json(read_json_file(*f.config), config);
    if (f.seed) config.pipeline.seed = *f.seed;
    if (f.threads) config.pipeline.threads = *f.threads;
    if (f.format) config.format = *f.format;
    if (f.out_dir) config.out_dir = *f.out_dir;
    if (f.budget_seconds) config.budget_seconds = *f.budget_seconds;
    if (f.variant) config.pipeline.variant = variant_from_string(*f.variant);
    if (f.levels) config.pipeline.coarsen.max_levels = *f.levels;
    if (f.method) config.method = *f.method;
    if (f.warm_start) config.warm_start = *f.warm_start;
    if (f.suite) config.suite = *f.suite;
    config.pipeline.validate();
    return config;
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON config file (flat keys)");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
    cmd->add_option("--out-dir", f.out_dir, "Directory for output files");
}

void add_instance(CLI::App* cmd, Flags& f) {
    cmd->add_option("instance", f.instance, "Instance file (.gset, .mtx or QUBO .json)")->required();
    cmd->add_option("--format", f.format, "Instance format: gset, mtx or qubo");
    cmd->add_option("--levels", f.levels, "Maximum number of coarsening steps");
}

}  // namespace

nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json j = pipeline_config_to_json(c.pipeline);
    j["format"] = c.format;
    j["out_dir"] = c.out_dir.string();
    j["budget_seconds"] = c.budget_seconds ? nlohmann::json(*c.budget_seconds) : nullptr;
    j["method"] = c.method;
    j["warm_start"] = c.warm_start ? nlohmann::json(c.warm_start->string()) : nullptr;
    j["suite"] = c.suite;
    j["num_hyperplanes"] = c.num_hyperplanes;
    j["rank2_max_sweeps"] = c.rank2_max_sweeps;
    j["rank2_jitter"] = c.rank2_jitter;
    j["random_trials"] = c.random_trials;
    j["zone_lambda"] = c.zone_lambda;
    return j;
}

RunConfig run_config_from_json(const nlohmann::json& doc, RunConfig c) {
    if (!doc.is_object()) throw ArgumentError("config must be a JSON object");
    nlohmann::json rest = doc;
    const nlohmann::json own = split_cli_keys(rest);
    c.pipeline = pipeline_config_from_json(rest, c.pipeline);
    for (const auto& [key, v] : own.items()) {
        const char* k = key.c_str();
        if (key == "format") c.format = typed<std::string>(v, k);
        else if (key == "out_dir") c.out_dir = typed<std::string>(v, k);
        else if (key == "budget_seconds") {
            c.budget_seconds = v.is_null() ? std::nullopt : std::optional(typed<double>(v, k));
        }
        else if (key == "method") c.method = typed<std::string>(v, k);
        else if (key == "warm_start") {
            c.warm_start = v.is_null() ? std::nullopt
                                       : std::optional<fs::path>(typed<std::string>(v, k));
        }
        else if (key == "suite") c.suite = typed<std::string>(v, k);
        else if (key == "num_hyperplanes") c.num_hyperplanes = typed<std::size_t>(v, k);
        else if (key == "rank2_max_sweeps") c.rank2_max_sweeps = typed<std::size_t>(v, k);
        else if (key == "rank2_jitter") c.rank2_jitter = typed<double>(v, k);
        else if (key == "random_trials") c.random_trials = typed<std::size_t>(v, k);
        else if (key == "zone_lambda") c.zone_lambda = typed<double>(v, k);
    }
    return c;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multilevel QAOA-inspired MaxCut / QUBO solver", "mlqaoa"};
    app.require_subcommand(1);
    Flags f;

    auto* solve_cmd = app.add_subcommand("solve", "Run the multilevel solver");
    add_common(solve_cmd, f);
    add_instance(solve_cmd, f);
    solve_cmd->add_option("--budget-seconds", f.budget_seconds, "Wall-clock cap per GA run");
    solve_cmd->add_option("--variant", f.variant, "qrr_plus_ga, qrr_only or ga_only");

    auto* landscape_cmd = app.add_subcommand("landscape", "Per-level QAOA landscapes and zone similarity");
    add_common(landscape_cmd, f);
    add_instance(landscape_cmd, f);

    auto* compare_cmd = app.add_subcommand("compare", "Run all three variants under one seed");
    add_common(compare_cmd, f);
    add_instance(compare_cmd, f);
    compare_cmd->add_option("--budget-seconds", f.budget_seconds, "Wall-clock cap per GA run");

    auto* baseline_cmd = app.add_subcommand("baseline", "Classical reference solvers");
    add_common(baseline_cmd, f);
    add_instance(baseline_cmd, f);
    baseline_cmd->add_option("--method", f.method, "rank2, random or brute_force");
    baseline_cmd->add_option("--warm-start", f.warm_start, "Solution JSON to start rank2 from");
    baseline_cmd->add_option("--budget-seconds", f.budget_seconds, "Wall-clock cap for rank2");

    auto* verify_cmd = app.add_subcommand("verify", "Seeded self-checks");
    add_common(verify_cmd, f);
    verify_cmd->add_option("--suite", f.suite, "oracle, coarsen, reduction or all");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInputError;
    }

    try {
        const RunConfig config = assemble(f);
        if (solve_cmd->parsed()) return cmd_solve(f.instance, config, out);
        if (landscape_cmd->parsed()) return cmd_landscape(f.instance, config, out);
        if (compare_cmd->parsed()) return cmd_compare(f.instance, config, out);
        if (baseline_cmd->parsed()) return cmd_baseline(f.instance, config, out);
        return cmd_verify(config, out, err);
    } catch (const InvariantError& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kInputError;
    } catch (const UnsupportedFormatError& e) {
        err << "unsupported format: " << e.what() << "\n";
        return kInputError;
    } catch (const IoError& e) {
        err << "io error: " << e.what() << "\n";
        return kInputError;
    } catch (const ArgumentError& e) {
        err << "invalid argument: " << e.what() << "\n";
        return kInputError;
    } catch (const SizeError& e) {
        err << "too large: " << e.what() << "\n";
        return kInputError;
    } catch (const nlohmann::json::exception& e) {
        err << "invalid JSON: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "io error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace mlqaoa::cli
