// mrpp: simulate inhomogeneous Poisson processes, estimate intensities by
// Haar/D4 wavelet expansions, run multiscale homogeneity/innovation tests,
// apply thresholding strategies, and benchmark them.
//
// Exit codes: 0 success, 1 runtime/statistical error, 2 usage error.
// Every subcommand writes a JSON sidecar echoing its resolved configuration;
// outputs carry no timestamps, so reruns with identical flags produce
// identical bytes.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mrpp/bench.hpp"
#include "mrpp/daubechies.hpp"
#include "mrpp/errors.hpp"
#include "mrpp/event_series.hpp"
#include "mrpp/haar.hpp"
#include "mrpp/lrt.hpp"
#include "mrpp/models.hpp"
#include "mrpp/rng.hpp"
#include "mrpp/simulate.hpp"
#include "mrpp/threshold.hpp"

#ifndef MRPP_GIT_REVISION
#define MRPP_GIT_REVISION "unknown"
#endif

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw mrpp::ConfigError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw mrpp::ConfigError(path + ": " + e.what());
    }
    return j;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw mrpp::ConfigError("cannot write " + path);
    out << content;
}

void write_json_file(const std::string& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

// Shared flags describing how event data comes in.
struct EventInput {
    std::vector<std::string> text_files;
    std::string csv_file;
    double horizon = 1.0;
};

std::vector<mrpp::EventSeries> load_events(const EventInput& in) {
    std::vector<mrpp::EventSeries> series;
    if (!in.csv_file.empty()) {
        series = mrpp::read_events_csv(in.csv_file, in.horizon);
    }
    for (const auto& path : in.text_files)
        series.push_back(mrpp::read_events_text(path, in.horizon));
    if (series.empty()) throw mrpp::ConfigError("no event input: pass --events or --events-csv");
    return series;
}

void add_event_options(CLI::App* cmd, EventInput& in) {
    cmd->add_option("--events", in.text_files, "event time file(s), one time per line");
    cmd->add_option("--events-csv", in.csv_file, "CSV with realization,time columns");
    cmd->add_option("--T", in.horizon, "observation horizon [0, T)")->capture_default_str();
}

mrpp::IntensityModel load_model(const std::string& model_file, const std::string& model_inline) {
    if (!model_file.empty()) return mrpp::IntensityModel::from_json(load_json(model_file));
    if (!model_inline.empty()) {
        json j;
        try {
            j = json::parse(model_inline);
        } catch (const json::exception& e) {
            throw mrpp::ConfigError(std::string("--model-json: ") + e.what());
        }
        return mrpp::IntensityModel::from_json(j);
    }
    throw mrpp::ConfigError("no model: pass --model FILE or --model-json JSON");
}

std::string reconstruction_csv(const std::vector<double>& grid,
                               const std::vector<double>& values) {
    std::string out = "t,value\n";
    char buf[80];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.10g,%.10g\n", grid[i], values[i]);
        out += buf;
    }
    return out;
}

int cmd_simulate(const std::string& model_file, const std::string& model_inline, int M,
                 std::uint64_t seed, const std::string& out_dir, const std::string& format) {
    const auto model = load_model(model_file, model_inline);
    if (M < 1) throw mrpp::ConfigError("--M must be >= 1");
    std::filesystem::create_directories(out_dir);
    const auto series = mrpp::sample_many(model, M, seed);

    json manifest;
    manifest["model"] = model.to_json();
    manifest["M"] = M;
    manifest["seed"] = seed;
    manifest["T"] = model.horizon();
    manifest["format"] = format;
    manifest["files"] = json::array();
    if (format == "csv") {
        const std::string path = out_dir + "/events.csv";
        mrpp::write_events_csv(series, path);
        json f;
        f["path"] = "events.csv";
        std::uint64_t dig = 0;
        for (const auto& e : series) dig ^= e.digest();
        char hex[32];
        std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(dig));
        f["digest"] = hex;
        f["events"] = [&] {
            std::size_t n = 0;
            for (const auto& e : series) n += e.size();
            return n;
        }();
        manifest["files"].push_back(f);
    } else if (format == "text") {
        for (int m = 0; m < M; ++m) {
            char name[64];
            std::snprintf(name, sizeof name, "events_%03d.txt", m);
            mrpp::write_events_text(series[static_cast<std::size_t>(m)], out_dir + "/" + name);
            json f;
            f["path"] = name;
            char hex[32];
            std::snprintf(hex, sizeof hex, "%016llx",
                          static_cast<unsigned long long>(series[static_cast<std::size_t>(m)].digest()));
            f["digest"] = hex;
            f["events"] = series[static_cast<std::size_t>(m)].size();
            manifest["files"].push_back(f);
        }
    } else {
        throw mrpp::ConfigError("--format must be text or csv");
    }
    write_json_file(out_dir + "/manifest.json", manifest);
    std::printf("wrote %d realization(s) to %s\n", M, out_dir.c_str());
    return 0;
}

int cmd_test(const EventInput& input, const std::string& test_name, int level, double alpha,
             const std::string& policy_name, const std::string& out_file) {
    const auto series = load_events(input);
    const auto policy = mrpp::boundary_policy_from_string(policy_name);
    mrpp::LrtOutcome outcome;
    if (test_name == "homogeneity") {
        if (level == 0)
            throw mrpp::ConfigError(
                "vacuous test: every process is level-0 homogeneous; pick --level >= 1");
        outcome = mrpp::test_homogeneity(series, level, alpha);
    } else if (test_name == "innovation") {
        outcome = mrpp::test_innovation(series, level, alpha, policy);
    } else {
        throw mrpp::ConfigError("--test must be homogeneity or innovation");
    }
    const json j = outcome.to_json();
    std::cout << j.dump(2) << "\n";
    if (!out_file.empty()) write_json_file(out_file, j);
    return 0;
}

struct EstimateArgs {
    EventInput input;
    std::string strategy = "linear";
    std::string basis = "haar";
    int j0 = 3;
    int J = 7;
    double alpha = 0.05;
    double omega = 3.0;
    std::string policy_name = "conservative";
    bool lrtg_invert = false;
    int grid = 1000;
    std::string out_prefix;
};

int cmd_estimate(const EstimateArgs& a) {
    const auto series = load_events(a.input);
    if (a.j0 < 0 || a.J < a.j0 || a.J > 30) throw mrpp::ConfigError("need 0 <= j0 <= J <= 30");
    const auto grid = mrpp::eval_grid(a.input.horizon, a.grid);
    std::vector<double> values(grid.size());

    json config;
    config["basis"] = a.basis;
    config["strategy"] = a.strategy;
    config["j0"] = a.j0;
    config["J"] = a.J;
    config["alpha"] = a.alpha;
    config["omega"] = a.omega;
    config["boundary_policy"] = a.policy_name;
    config["lrtg_invert"] = a.lrtg_invert;
    config["grid"] = a.grid;
    config["T"] = a.input.horizon;
    config["realizations"] = series.size();

    std::string mask_csv;
    if (a.basis == "haar") {
        const auto strategy = mrpp::strategy_from_string(a.strategy);
        mrpp::ThresholdOptions opt;
        opt.alpha = a.alpha;
        opt.omega = a.omega;
        opt.policy = mrpp::boundary_policy_from_string(a.policy_name);
        opt.lrtg_invert = a.lrtg_invert;
        const auto est = mrpp::estimate_nonlinear(series, a.j0, a.J, strategy, opt);
        for (std::size_t i = 0; i < grid.size(); ++i) values[i] = est.fn.evaluate(grid[i]);
        mask_csv = "level,k,kept,diagnostic\n";
        char buf[128];
        for (int L = a.j0; L <= a.J; ++L) {
            const auto& keep = est.mask.level(L);
            const auto& diag = est.mask.diag[static_cast<std::size_t>(L - a.j0)];
            for (std::size_t k = 0; k < keep.size(); ++k) {
                std::snprintf(buf, sizeof buf, "%d,%zu,%d,%.10g\n", L, k, keep[k] ? 1 : 0,
                              diag[k]);
                mask_csv += buf;
            }
        }
        config["kept"] = est.mask.kept_count();
        config["total"] = est.mask.total_count();
    } else if (a.basis == "d4") {
        if (series.size() != 1)
            throw mrpp::ConfigError("d4 basis estimates a single realization");
        if (a.strategy == "linear") {
            const auto est = mrpp::d4_linear_estimate(series[0], a.J);
            for (std::size_t i = 0; i < grid.size(); ++i) values[i] = est.eval(grid[i]);
        } else if (a.strategy == "lrt_local") {
            const auto est = mrpp::d4_estimate_nonlinear(series[0], a.j0, a.J, a.alpha);
            for (std::size_t i = 0; i < grid.size(); ++i) values[i] = est.eval(grid[i]);
            mask_csv = "level,k,kept,beta,var\n";
            char buf[160];
            const auto& det = est.details();
            for (std::size_t li = 0; li < det.size(); ++li) {
                const auto& lvl = det[li];
                for (int k = lvl.k_min(); k <= lvl.k_max(); ++k) {
                    std::snprintf(buf, sizeof buf, "%d,%d,%d,%.10g,%.10g\n", lvl.level, k,
                                  est.keep()[li][static_cast<std::size_t>(k + 1)] ? 1 : 0,
                                  lvl.beta_at(k), lvl.var_at(k));
                    mask_csv += buf;
                }
            }
        } else {
            throw mrpp::ConfigError("d4 basis supports --strategy linear or lrt_local");
        }
    } else {
        throw mrpp::ConfigError("--basis must be haar or d4");
    }

    write_text(a.out_prefix + ".reconstruction.csv", reconstruction_csv(grid, values));
    if (!mask_csv.empty()) write_text(a.out_prefix + ".mask.csv", mask_csv);
    write_json_file(a.out_prefix + ".config.json", config);
    std::printf("wrote %s.reconstruction.csv\n", a.out_prefix.c_str());
    return 0;
}

int cmd_wavelet_table(int depth, const std::string& out_file) {
    const auto& phi = mrpp::d4_phi(depth);
    const auto& psi = mrpp::d4_psi(depth);
    std::string csv = "x,phi,psi\n";
    char buf[96];
    const auto n = phi.values().size();
    for (std::size_t i = 0; i < n; ++i) {
        const double x = 3.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g\n", x, phi.values()[i],
                      psi.values()[i]);
        csv += buf;
    }
    write_text(out_file, csv);
    std::printf("wrote %s\n", out_file.c_str());
    return 0;
}

int cmd_bench(const std::string& scenario_file, int n_override, bool full_scale, int jobs,
              std::uint64_t seed_override, bool has_seed_override, const std::string& out_dir) {
    const json root = load_json(scenario_file);
    if (!root.contains("scenarios") || !root.at("scenarios").is_array())
        throw mrpp::ConfigError(scenario_file + ": expected {\"scenarios\": [...]}");
    std::filesystem::create_directories(out_dir);

    std::vector<mrpp::ScenarioReport> reports;
    std::vector<std::pair<std::string, std::string>> curve_files;
    for (const auto& js : root.at("scenarios")) {
        const std::string type = js.contains("type") ? js.at("type").get<std::string>() : "rmise";
        if (type == "rmise") {
            auto sc = mrpp::scenario_from_json(js);
            if (full_scale) sc.n = 10000;
            else if (n_override > 0) sc.n = n_override;
            if (has_seed_override) sc.seed = seed_override;
            std::fprintf(stderr, "running scenario %s (n=%d)...\n", sc.name.c_str(), sc.n);
            reports.push_back(mrpp::run_scenario(sc, jobs));
            if (!reports.back().mass_ok)
                std::fprintf(stderr, "warning: %s min cell mass %.2f < %.0f\n", sc.name.c_str(),
                             reports.back().min_mass, mrpp::kMassThreshold);
        } else if (type == "size_power") {
            const std::string name = js.at("name").get<std::string>();
            const auto test = mrpp::curve_test_from_string(js.at("test").get<std::string>());
            const int level = js.at("level").get<int>();
            const double alpha = js.contains("alpha") ? js.at("alpha").get<double>() : 0.05;
            int n = js.contains("n") ? js.at("n").get<int>() : 1000;
            if (full_scale) n = 10000;
            else if (n_override > 0) n = n_override;
            const int M = js.contains("M") ? js.at("M").get<int>() : 1;
            std::uint64_t seed = js.contains("seed") ? js.at("seed").get<std::uint64_t>()
                                                     : std::uint64_t{20240901};
            if (has_seed_override) seed = seed_override;
            const auto policy = mrpp::boundary_policy_from_string(
                js.contains("boundary_policy") ? js.at("boundary_policy").get<std::string>()
                                               : "conservative");
            std::vector<double> sweep;
            if (js.contains("lambda0")) sweep = js.at("lambda0").get<std::vector<double>>();
            else sweep = mrpp::default_lambda0_sweep();
            const json model_spec = js.at("model");
            const std::string rate_key = model_spec.contains("A0") ? "A0" : "lambda0";
            auto factory = [&](double lambda0) {
                json m = model_spec;
                m[rate_key] = lambda0;
                return mrpp::IntensityModel::from_json(m);
            };
            std::fprintf(stderr, "running size/power curve %s (n=%d)...\n", name.c_str(), n);
            const auto points = mrpp::size_power_curve(factory, test, level, alpha, sweep, n, M,
                                                       seed, policy, jobs);
            const std::string fname = "size_power_" + name + ".csv";
            write_text(out_dir + "/" + fname, mrpp::size_power_csv(points));
            curve_files.emplace_back(name, fname);
        } else {
            throw mrpp::ConfigError("unknown scenario type: " + type);
        }
    }

    if (!reports.empty()) write_text(out_dir + "/table.csv", mrpp::bench_csv(reports));
    json extra;
    extra["git_revision"] = MRPP_GIT_REVISION;
    extra["scenario_file"] = scenario_file;
    extra["jobs"] = jobs;
    extra["full_scale"] = full_scale;
    extra["curves"] = json::array();
    for (const auto& [name, fname] : curve_files)
        extra["curves"].push_back(json{{"name", name}, {"file", fname}});
    write_json_file(out_dir + "/table.json", mrpp::bench_json(reports, extra));
    std::printf("wrote %s/table.csv and %s/table.json\n", out_dir.c_str(), out_dir.c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multiresolution analysis of temporal point processes"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "sample Poisson process realizations");
    std::string sim_model_file, sim_model_inline, sim_out = "sim_out", sim_format = "text";
    int sim_M = 1;
    std::uint64_t sim_seed = 20240901;
    sim->add_option("--model", sim_model_file, "model JSON file");
    sim->add_option("--model-json", sim_model_inline, "model JSON inline");
    sim->add_option("--M", sim_M, "number of realizations")->capture_default_str();
    sim->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    sim->add_option("--out", sim_out, "output directory")->capture_default_str();
    sim->add_option("--format", sim_format, "text|csv")->capture_default_str();

    // test
    auto* tst = app.add_subcommand("test", "multiscale homogeneity/innovation LRT");
    EventInput tst_input;
    std::string tst_name = "homogeneity", tst_policy = "conservative", tst_out;
    int tst_level = 1;
    double tst_alpha = 0.05;
    add_event_options(tst, tst_input);
    tst->add_option("--test", tst_name, "homogeneity|innovation")->capture_default_str();
    tst->add_option("--level", tst_level, "dyadic level (J or L)")->capture_default_str();
    tst->add_option("--alpha", tst_alpha, "significance level")->capture_default_str();
    tst->add_option("--boundary-policy", tst_policy, "conservative|intermediate|max_likelihood")
        ->capture_default_str();
    tst->add_option("--out", tst_out, "also write verdict JSON here");

    // estimate / threshold (same machinery, two entry points)
    EstimateArgs est;
    auto add_estimate_options = [&](CLI::App* cmd) {
        add_event_options(cmd, est.input);
        cmd->add_option("--strategy", est.strategy,
                        "linear|dm_local|lrt_local|lrt_intermediate|lrt_global")
            ->capture_default_str();
        cmd->add_option("--basis", est.basis, "haar|d4")->capture_default_str();
        cmd->add_option("--j0", est.j0, "coarsest detail level")->capture_default_str();
        cmd->add_option("--J", est.J, "finest detail level")->capture_default_str();
        cmd->add_option("--alpha", est.alpha, "significance level")->capture_default_str();
        cmd->add_option("--omega", est.omega, "hard-threshold multiplier")->capture_default_str();
        cmd->add_option("--boundary-policy", est.policy_name,
                        "conservative|intermediate|max_likelihood")
            ->capture_default_str();
        cmd->add_flag("--lrtg-invert", est.lrtg_invert,
                      "global strategy keeps (rather than zeroes) levels with detected innovation");
        cmd->add_option("--grid", est.grid, "reconstruction grid size")->capture_default_str();
        cmd->add_option("--out", est.out_prefix, "output path prefix")->required();
    };
    auto* esti = app.add_subcommand("estimate", "wavelet intensity estimate");
    add_estimate_options(esti);
    auto* thr = app.add_subcommand("threshold", "thresholded estimate (alias of estimate)");
    add_estimate_options(thr);

    // wavelet-table
    auto* wav = app.add_subcommand("wavelet-table", "export D4 scaling/detail function tables");
    int wav_depth = mrpp::kD4DefaultDepth;
    std::string wav_out = "d4_table.csv";
    wav->add_option("--depth", wav_depth, "cascade refinement depth")->capture_default_str();
    wav->add_option("--out", wav_out, "output CSV path")->capture_default_str();

    // bench
    auto* ben = app.add_subcommand("bench", "Monte Carlo strategy comparison");
    std::string ben_scenario, ben_out = "bench_out";
    int ben_n = 0, ben_jobs = 1;
    bool ben_full = false;
    std::uint64_t ben_seed = 0;
    ben->add_option("--scenario", ben_scenario, "scenario JSON file")->required();
    ben->add_option("--n", ben_n, "override simulation count");
    ben->add_flag("--full-scale", ben_full, "n=10000 across all scenarios");
    ben->add_option("--jobs", ben_jobs, "worker threads")->capture_default_str();
    auto* seed_opt = ben->add_option("--seed", ben_seed, "override scenario seeds");
    ben->add_option("--out", ben_out, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
        if (sim->parsed())
            return cmd_simulate(sim_model_file, sim_model_inline, sim_M, sim_seed, sim_out,
                                sim_format);
        if (tst->parsed())
            return cmd_test(tst_input, tst_name, tst_level, tst_alpha, tst_policy, tst_out);
        if (esti->parsed() || thr->parsed()) return cmd_estimate(est);
        if (wav->parsed()) return cmd_wavelet_table(wav_depth, wav_out);
        if (ben->parsed())
            return cmd_bench(ben_scenario, ben_n, ben_full, ben_jobs, ben_seed,
                             !seed_opt->empty(), ben_out);
        return 2;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints the usage message
        return 2;
    } catch (const mrpp::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const mrpp::StatError& e) {
        std::fprintf(stderr, "statistical error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
