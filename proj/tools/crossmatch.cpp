// Command-line front end: divergence estimates, the cross-match test,
// exact discrete formulas, Bayes bounds and the simulation experiments.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crossmatch/dataset.hpp"
#include "crossmatch/divergence.hpp"
#include "crossmatch/error.hpp"
#include "crossmatch/estimate.hpp"
#include "crossmatch/metric.hpp"
#include "crossmatch/simulate.hpp"
#include "crossmatch/stats.hpp"

namespace cm = crossmatch;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cm::DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// FNV-1a, 64 bit.
std::string digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + out;
}

std::uint64_t fresh_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct InputOptions {
    std::string path;
    std::string label_col = "-1";
    std::string positive_class;
    std::string delimiter = ",";
    std::string header = "auto";
    bool zscore = false;
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
    cmd->add_option("--input", in.path, "CSV file with features and a 0/1 label column")->required();
    cmd->add_option("--label-col", in.label_col, "label column: zero-based index (negative counts from the end) or header name");
    cmd->add_option("--positive-class", in.positive_class, "label value mapped to class 1; all others map to 0");
    cmd->add_option("--delimiter", in.delimiter, "field delimiter");
    cmd->add_option("--header", in.header, "header row")->check(CLI::IsMember({"auto", "yes", "no"}));
    cmd->add_flag("--zscore", in.zscore, "standardize each feature column");
}

struct LoadedInput {
    cm::LabeledDataset data;
    std::string digest;
};

LoadedInput load_input(const InputOptions& in) {
    if (in.delimiter.size() != 1) throw cm::UsageError("--delimiter must be a single character");
    cm::CsvOptions opts;
    opts.delimiter = in.delimiter.front();
    opts.header = in.header == "yes" ? cm::HeaderMode::present
                  : in.header == "no" ? cm::HeaderMode::absent
                                      : cm::HeaderMode::automatic;
    try {
        std::size_t used = 0;
        const long index = std::stol(in.label_col, &used);
        if (used != in.label_col.size()) throw std::invalid_argument("name");
        opts.label_column = index;
    } catch (const std::exception&) {
        opts.label_column = in.label_col;
    }
    if (!in.positive_class.empty()) opts.positive_class = in.positive_class;
    const std::string bytes = read_file(in.path);
    std::istringstream stream(bytes);
    auto ds = cm::parse_csv(stream, opts);
    if (in.zscore) ds = cm::zscore(ds);
    return {std::move(ds), digest(bytes)};
}

ordered_json header_json(const std::string& command) {
    ordered_json j;
    j["tool"] = "crossmatch";
    j["version"] = CROSSMATCH_VERSION;
    j["command"] = command;
    return j;
}

ordered_json input_json(const InputOptions& in, const LoadedInput& loaded) {
    const auto counts = cm::class_counts(loaded.data);
    return {{"path", in.path},  {"digest", loaded.digest},     {"N", loaded.data.size()},
            {"dim", loaded.data.dim()}, {"m", counts.m}, {"n", counts.n},
            {"zscore", in.zscore}};
}

ordered_json report_json(const cm::DivergenceReport& r) {
    return {{"kind", std::string(cm::to_string(r.kind))},
            {"statistic", r.statistic},
            {"m", r.m},
            {"n", r.n},
            {"estimate_raw", r.estimate_raw},
            {"estimate", r.estimate},
            {"c0", r.priors.c0},
            {"c1", r.priors.c1},
            {"u_c", r.u_c},
            {"bayes_lower", r.bayes_lower},
            {"bayes_upper", r.bayes_upper}};
}

void emit(const ordered_json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw cm::DataError("cannot write '" + out_path + "'");
    out << text;
}

std::vector<double> json_vector(const nlohmann::json& value, std::size_t dim, const char* what) {
    if (value.is_number()) return std::vector<double>(dim, value.get<double>());
    if (!value.is_array()) throw cm::UsageError(std::string(what) + " must be a number or an array");
    auto v = value.get<std::vector<double>>();
    if (v.size() != dim) throw cm::UsageError(std::string(what) + " must have length dim");
    return v;
}

cm::Covariance json_covariance(const nlohmann::json& cfg, std::size_t dim) {
    if (!cfg.contains("covariance") || cfg["covariance"] == "identity") return cm::Covariance::identity();
    const auto& c = cfg["covariance"];
    if (c.contains("diagonal")) return cm::Covariance::diagonal(json_vector(c["diagonal"], dim, "diagonal"));
    if (c.contains("full")) {
        std::vector<double> flat;
        for (const auto& row : c["full"]) {
            const auto r = row.get<std::vector<double>>();
            if (r.size() != dim) throw cm::UsageError("full covariance rows must have length dim");
            flat.insert(flat.end(), r.begin(), r.end());
        }
        if (flat.size() != dim * dim) throw cm::UsageError("full covariance must be dim x dim");
        return cm::Covariance::full(std::move(flat));
    }
    throw cm::UsageError("covariance must be \"identity\", {\"diagonal\": [...]} or {\"full\": [[...]]}");
}

cm::GaussianSpec json_spec(const nlohmann::json& cfg) {
    cm::GaussianSpec spec;
    spec.dim = cfg.value("dim", std::size_t{2});
    spec.mean0 = json_vector(cfg.value("mean0", nlohmann::json(0.0)), spec.dim, "mean0");
    spec.mean1 = json_vector(cfg.value("mean1", nlohmann::json(1.0)), spec.dim, "mean1");
    spec.covariance = json_covariance(cfg, spec.dim);
    spec.c0 = cfg.value("c0", 0.5);
    spec.c1 = 1.0 - spec.c0;
    return spec;
}

int run_estimate(const InputOptions& in, const std::string& method, std::optional<double> c0,
                 std::optional<std::uint64_t> seed, const std::string& out) {
    const auto loaded = load_input(in);
    std::optional<cm::Priors> priors;
    if (c0) priors = cm::Priors::from_c0(*c0);

    auto j = header_json("estimate");
    j["input"] = input_json(in, loaded);
    j["seed"] = seed.value_or(fresh_seed());
    j["method"] = method;
    j["reports"] = ordered_json::array();
    if (method == "both") {
        const auto both = cm::estimate_both(loaded.data, priors);
        j["reports"].push_back(report_json(both.owm));
        j["reports"].push_back(report_json(both.fr));
    } else if (method == "owm") {
        j["reports"].push_back(report_json(cm::estimate_crossmatch(loaded.data, priors)));
    } else {
        j["reports"].push_back(report_json(cm::estimate_fr(loaded.data, priors)));
    }
    emit(j, out);
    return kOk;
}

int run_test(const InputOptions& in, std::size_t trials, std::optional<std::uint64_t> seed, const std::string& out) {
    const auto loaded = load_input(in);
    const std::uint64_t used_seed = seed.value_or(fresh_seed());
    const auto report = cm::cross_match_test(cm::pairwise_distances(loaded.data), loaded.data.labels(), trials, used_seed);

    auto j = header_json("test");
    j["input"] = input_json(in, loaded);
    j["seed"] = used_seed;
    j["method"] = "owm";
    j["trials"] = trials;
    j["statistic"] = report.statistic;
    j["m"] = report.m;
    j["n"] = report.n;
    j["null_mean"] = report.null ? ordered_json(report.null->mean) : ordered_json(nullptr);
    j["null_var"] = report.null ? ordered_json(report.null->variance) : ordered_json(nullptr);
    j["p_value"] = *report.p_value;
    emit(j, out);
    return kOk;
}

int run_discrete(const std::string& spec_path, const std::string& out) {
    const std::string bytes = read_file(spec_path);
    nlohmann::json cfg;
    try {
        cfg = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::exception& e) {
        throw cm::DataError(std::string("invalid JSON in '") + spec_path + "': " + e.what());
    }
    const double c0 = cfg.at("c0").get<double>();
    const double c1 = cfg.contains("c1") ? cfg["c1"].get<double>() : 1.0 - c0;
    const cm::DiscretePair dp(c0, c1, cfg.at("p0").get<std::vector<double>>(), cfg.at("p1").get<std::vector<double>>());

    const double h = cm::discrete_affinity(dp);
    const auto bounds = cm::bayes_bounds(std::clamp(h, 0.0, 1.0));
    auto j = header_json("discrete");
    j["input"] = {{"path", spec_path}, {"digest", digest(bytes)}, {"bins", dp.bins()}};
    j["seed"] = nullptr;
    j["method"] = "exact";
    j["c0"] = dp.c0();
    j["c1"] = dp.c1();
    j["bayes_error"] = cm::discrete_bayes_error(dp);
    j["hp_divergence"] = cm::discrete_hp_divergence(dp);
    j["affinity"] = h;
    j["bayes_lower"] = bounds.lower;
    j["bayes_upper"] = bounds.upper;
    emit(j, out);
    return kOk;
}

int run_bounds(std::optional<double> divergence, std::optional<double> u, double c0, const std::string& out) {
    if (divergence.has_value() == u.has_value()) throw cm::UsageError("give exactly one of --divergence and --u");
    auto j = header_json("bounds");
    j["seed"] = nullptr;
    j["method"] = "closed-form";
    double affinity = 0.0;
    if (divergence) {
        if (*divergence < 0.0 || *divergence > 1.0) throw cm::UsageError("--divergence must lie in [0,1]");
        const auto priors = cm::Priors::from_c0(c0);
        priors.validate();
        affinity = cm::affinity_from_divergence(*divergence, priors);
        j["divergence"] = *divergence;
        j["c0"] = priors.c0;
        j["c1"] = priors.c1;
    } else {
        affinity = *u;
    }
    const auto b = cm::bayes_bounds(affinity);
    j["u_c"] = affinity;
    j["bayes_lower"] = b.lower;
    j["bayes_upper"] = b.upper;
    emit(j, out);
    return kOk;
}

int run_simulate(const std::string& experiment, const std::string& config_path, const std::string& out_path,
                 const std::string& svg_path, std::optional<std::uint64_t> seed, std::optional<std::size_t> trials) {
    nlohmann::json cfg = nlohmann::json::object();
    if (!config_path.empty()) {
        try {
            cfg = nlohmann::json::parse(read_file(config_path));
        } catch (const nlohmann::json::exception& e) {
            throw cm::DataError(std::string("invalid JSON config: ") + e.what());
        }
    }
    cm::ExperimentOptions opts;
    opts.trials = trials.value_or(cfg.value("trials", std::size_t{50}));
    opts.seed = seed ? *seed : cfg.contains("seed") ? cfg["seed"].get<std::uint64_t>() : fresh_seed();
    opts.oracle_samples = cfg.value("oracle_samples", std::size_t{1'000'000});

    cm::ExperimentResult result;
    std::string x_label;
    if (experiment == "samplesize") {
        const auto sizes = cfg.value("sizes", std::vector<std::size_t>{100, 200, 400, 600, 800, 1000});
        result = cm::experiment_sample_size(json_spec(cfg), sizes, opts);
        x_label = "sample size N";
    } else if (experiment == "dimension") {
        cm::DimensionTemplate tmpl;
        tmpl.mean0 = cfg.value("mean0", 0.0);
        tmpl.mean1 = cfg.value("mean1", 0.5);
        tmpl.c0 = cfg.value("c0", 0.5);
        const auto dims = cfg.value("dims", std::vector<std::size_t>{2, 4, 6, 8});
        result = cm::experiment_dimension(tmpl, dims, cfg.value("N", std::size_t{1000}), opts);
        x_label = "dimension d";
    } else {
        const auto sizes = cfg.value("sizes", std::vector<std::size_t>{100, 200, 400, 600, 800, 1000});
        result = cm::experiment_assumption1(json_spec(cfg), sizes, opts);
        x_label = "sample size N";
    }
    if (result.single_trial) std::cerr << "warning: a single trial was run; standard deviations are reported as 0\n";

    if (out_path.empty()) {
        cm::write_results_csv(std::cout, result);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw cm::DataError("cannot write '" + out_path + "'");
        cm::write_results_csv(out, result);
    }
    if (!svg_path.empty()) {
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) throw cm::DataError("cannot write '" + svg_path + "'");
        cm::write_results_svg(svg, result, x_label);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Henze-Penrose divergence and Bayes error bounds from graph two-sample statistics"};
    app.set_version_flag("--version", CROSSMATCH_VERSION);
    app.require_subcommand(1);

    InputOptions est_in;
    std::string est_method = "owm";
    std::optional<double> est_c0;
    std::optional<std::uint64_t> est_seed;
    std::string est_out;
    auto* estimate = app.add_subcommand("estimate", "estimate HP divergence and Bayes error bounds");
    add_input_flags(estimate, est_in);
    estimate->add_option("--method", est_method, "owm (cross-match), fr (Friedman-Rafsky) or both")
        ->check(CLI::IsMember({"owm", "fr", "both"}));
    estimate->add_option("--c0", est_c0, "known prior of class 0 (default: n/N)");
    estimate->add_option("--seed", est_seed, "seed recorded in the report");
    estimate->add_option("--out", est_out, "write JSON here instead of stdout");

    InputOptions test_in;
    std::size_t test_trials = 10000;
    std::optional<std::uint64_t> test_seed;
    std::string test_out;
    auto* test = app.add_subcommand("test", "cross-match permutation test");
    add_input_flags(test, test_in);
    test->add_option("--trials", test_trials, "random relabelings (>= 100)");
    test->add_option("--seed", test_seed, "random seed (default: drawn and recorded)");
    test->add_option("--out", test_out, "write JSON here instead of stdout");

    std::string discrete_spec;
    std::string discrete_out;
    auto* discrete = app.add_subcommand("discrete", "exact formulas for a discrete two-class model");
    discrete->add_option("--spec", discrete_spec, "JSON {c0, [c1], p0: [...], p1: [...]}")->required();
    discrete->add_option("--out", discrete_out, "write JSON here instead of stdout");

    std::optional<double> bounds_div;
    std::optional<double> bounds_u;
    double bounds_c0 = 0.5;
    std::string bounds_out;
    auto* bounds = app.add_subcommand("bounds", "Bayes error bounds from a divergence or affinity");
    bounds->add_option("--divergence", bounds_div, "HP divergence in [0,1]");
    bounds->add_option("--u", bounds_u, "affinity u_c in [0,1]");
    bounds->add_option("--c0", bounds_c0, "prior of class 0");
    bounds->add_option("--out", bounds_out, "write JSON here instead of stdout");

    std::string sim_experiment;
    std::string sim_config;
    std::string sim_out;
    std::string sim_svg;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::size_t> sim_trials;
    auto* simulate = app.add_subcommand("simulate", "Gaussian simulation experiments");
    simulate->add_option("--experiment", sim_experiment, "samplesize, dimension or assumption1")
        ->required()
        ->check(CLI::IsMember({"samplesize", "dimension", "assumption1"}));
    simulate->add_option("--config", sim_config, "JSON experiment configuration");
    simulate->add_option("--out", sim_out, "results CSV (default stdout)");
    simulate->add_option("--svg", sim_svg, "optional SVG plot");
    simulate->add_option("--seed", sim_seed, "overrides the config seed");
    simulate->add_option("--trials", sim_trials, "overrides the config trial count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*estimate) return run_estimate(est_in, est_method, est_c0, est_seed, est_out);
        if (*test) return run_test(test_in, test_trials, test_seed, test_out);
        if (*discrete) return run_discrete(discrete_spec, discrete_out);
        if (*bounds) return run_bounds(bounds_div, bounds_u, bounds_c0, bounds_out);
        if (*simulate) return run_simulate(sim_experiment, sim_config, sim_out, sim_svg, sim_seed, sim_trials);
    } catch (const cm::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const cm::DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kData;
    } catch (const cm::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "numeric error: " << e.what() << '\n';
        return kNumeric;
    }
    return kUsage;
}
