// dyadlab: batch experiments over the toy prefix machine.
//
// Exit codes: 0 success, 2 configuration error, 3 budget error,
// 4 verdict failure (an acceptance gate did not hold).

#include "dyadlab/checkers.hpp"
#include "dyadlab/config.hpp"
#include "dyadlab/dimension.hpp"
#include "dyadlab/domination.hpp"
#include "dyadlab/staged.hpp"
#include "dyadlab/table_io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace fs = std::filesystem;
using namespace dyadlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kConfig = 2, kBudget = 3, kVerdict = 4;

const std::vector<std::string> kConfigKeys = {"machine", "n",       "L",         "T",        "guard",
                                              "r_min",   "r_max",   "r0",        "slope_tol", "gap_tol",
                                              "epsilon", "machine_c", "registry", "seed",      "table", "out"};

// The suites `report` expects to find in the output directory.
const std::vector<std::string> kSuites = {"table", "kdim", "measure", "dominate", "counterexample", "ballcube",
                                          "axioms"};

struct Context {
    cli::RunConfig config;
    std::optional<tpm::ComplexityTable> table;
    std::optional<measures::Support> support;
    std::optional<measures::Registry> registry;

    const tpm::ComplexityTable& load_table() {
        if (!table) table = tpm::load_table(config.table);
        return *table;
    }
    const measures::Support& load_support() {
        if (!support) support = measures::Support::from_table(load_table(), config.n);
        if (support->empty()) throw BudgetError("the table holds no points of dimension " + std::to_string(config.n));
        return *support;
    }
    const measures::Registry& load_registry() {
        if (!registry) {
            const auto& s = load_support();
            if (config.registry.empty()) {
                registry = measures::Registry::defaults(s);
            } else {
                std::ifstream in(config.registry);
                if (!in) throw ConfigError("cannot read registry " + config.registry);
                try {
                    registry = measures::Registry::from_json(json::parse(in), s);
                } catch (const json::exception& e) {
                    throw ConfigError(std::string("malformed registry: ") + e.what());
                }
            }
        }
        return *registry;
    }
    measures::MeasurePtr measure(const std::string& name) {
        const auto& s = load_support();
        if (name == "theta") return std::make_shared<measures::MixtureTheta>(load_registry(), s, measures::kMaxCoverSet, 64);
        return measures::make_measure(name, s);
    }

    json stamp() {
        json j = {{"config", config.to_json()}, {"machine", tpm::kMachineVersion}, {"encoding", geo::kEncodingVersion}};
        if (table)
            j["table"] = {{"L", table->max_length()}, {"T", table->budget()}, {"machine", table->machine_version()},
                          {"entries", table->size()}};
        return j;
    }

    void write(const std::string& name, const std::string& body) {
        fs::create_directories(config.out);
        std::ofstream(fs::path(config.out) / name) << body;
    }

    // Prints the document and stores it as <out>/<name>.json.
    void emit(const std::string& name, const std::string& command, json body) {
        json doc = stamp();
        doc["command"] = command;
        doc["result"] = std::move(body);
        write(name + ".json", doc.dump(2) + "\n");
        std::cout << doc.dump(2) << '\n';
    }
};

std::string rational_text(const Rational& q) {
    std::ostringstream out;
    out << q.get_str() << " (" << std::setprecision(17) << to_double(q) << ")";
    return out.str();
}

int table_build(Context& ctx) {
    auto table = tpm::build_table(ctx.config.L, ctx.config.T);
    tpm::save_table(table, ctx.config.table);
    ctx.table = std::move(table);
    ctx.emit("table", "table build",
             {{"path", ctx.config.table}, {"entries", ctx.table->size()}, {"programs", ctx.table->program_count()},
              {"kraft_sum", ctx.table->kraft_sum().get_str()}, {"kraft_ok", ctx.table->kraft_sum() <= 1}});
    return kOk;
}

int kdim(Context& ctx, const std::string& point) {
    ctx.load_table();
    const auto x = cli::parse_point(point, ctx.config.n);
    geo::ComplexityCache cache;
    const auto profile = dim::k_profile(x, ctx.config.range(), ctx.config.guard, cache);
    const auto slopes = dim::estimate_slopes(profile, ctx.config.r0);
    ctx.write("kdim.csv", profile.to_csv());
    ctx.emit("kdim", "kdim", {{"profile", profile.to_json()}, {"slopes", slopes.to_json()}});
    return kOk;
}

int measure_eval(Context& ctx, const std::string& name, const std::string& set) {
    auto mu = ctx.measure(name);
    const auto query = cli::parse_set(set, ctx.config.n);
    const Rational v = (*mu)(query);
    ctx.emit("measure", "measure eval",
             {{"measure", mu->name()}, {"set", set}, {"value", v.get_str()}, {"decimal", to_double(v)},
              {"text", rational_text(v)}});
    return kOk;
}

int dominate(Context& ctx, const std::string& mu_name, const std::string& nu_name, const std::string& family,
             const std::string& scale, bool full) {
    auto mu = ctx.measure(mu_name);
    auto nu = ctx.measure(nu_name);
    if (!scale.empty()) {
        Rational f;
        if (f.set_str(scale, 10) != 0 || sgn(f) <= 0) throw ConfigError("bad scale factor '" + scale + "'");
        f.canonicalize();
        nu = std::make_shared<measures::Scaled>(nu, f);
    }
    dom::SamplerConfig sampler;
    sampler.seed = ctx.config.require_seed();
    std::vector<dom::DominationReport> reports;
    if (family == "cubes" || family == "both")
        reports.push_back(dom::dominate_on_cubes(*mu, *nu, ctx.config.range(), sampler, ctx.config.thresholds()));
    if (family == "balls" || family == "both")
        reports.push_back(dom::dominate_on_balls(*mu, *nu, ctx.config.range(), sampler, ctx.config.thresholds()));
    if (reports.empty()) throw ConfigError("family must be cubes, balls or both");

    json body = json::array();
    bool all = true;
    for (const auto& rep : reports) {
        json j = rep.to_json();
        if (!full) j.erase("records");
        body.push_back(j);
        ctx.write("dominate_" + mu_name + "_" + nu_name + "_" + std::string(dom::to_string(rep.family)) + ".csv",
                  rep.to_csv());
        all = all && rep.verdict == dom::Verdict::dominates;
    }
    ctx.emit("dominate_" + mu_name + "_" + nu_name, "dominate", body);
    return all ? kOk : kVerdict;
}

int counterexample(Context& ctx, const std::vector<unsigned>& alphas) {
    const auto& s = ctx.load_support();
    json rows = json::array();
    std::string csv = "alpha,size,kappa,nu,ratio,gamma\n";
    bool ok = true;
    std::optional<double> prev;
    for (unsigned a : alphas) {
        try {
            auto rec = dom::kappa_not_global_counterexample(a, s, ctx.config.machine_c);
            ok = ok && rec.kappa <= pow2(-static_cast<long>(a)) && (!prev || rec.ratio <= *prev);
            prev = rec.ratio;
            rows.push_back(rec.to_json());
            csv += std::to_string(a) + "," + std::to_string(rec.size) + "," + rec.kappa.get_str() + "," +
                   rec.nu.get_str() + "," + std::to_string(rec.ratio) + "," + std::to_string(rec.gamma) + "\n";
        } catch (const BudgetError& e) {
            rows.push_back({{"alpha", a}, {"error", e.what()}});
        }
    }
    ctx.write("counterexample.csv", csv);
    ctx.emit("counterexample", "counterexample", {{"records", rows}, {"trend_ok", ok}});
    return ok ? kOk : kVerdict;
}

int ballcube(Context& ctx, std::size_t samples, unsigned r_max, long bound, bool full) {
    geo::ComplexityCache cache;
    auto rep = dom::ball_cube_bound_check(r_max, samples, ctx.config.require_seed(), ctx.config.guard, ctx.config.n,
                                          cache);
    json body = rep.to_json(full);
    body["r_max"] = r_max;
    body["bound"] = bound;
    body["k_enc"] = json::array();
    for (unsigned r = 0; r <= r_max; ++r) body["k_enc"].push_back(dom::k_enc(r));
    ctx.emit("ballcube", "ballcube", body);
    return rep.constant <= bound && rep.witness_failures == 0 && rep.inscribed_violations == 0 ? kOk : kVerdict;
}

int axioms(Context& ctx, std::vector<std::string> names, std::size_t count, std::size_t finiteness) {
    if (names.empty()) names = {"kappa", "nu", "m", "theta"};
    const auto& s = ctx.load_support();
    const auto families = measures::sample_families(s, count, ctx.config.require_seed());
    json body = json::array();
    bool ok = true;
    for (const auto& name : names) {
        auto mu = ctx.measure(name);
        auto rep = measures::check_outer_measure_axioms(*mu, families);
        auto trace = measures::check_strong_finiteness(*mu, finiteness);
        ok = ok && rep.passed();
        ctx.write("axioms_" + name + ".txt", rep.to_text());
        json fin = trace.to_json();
        fin.erase("partial_sums");
        body.push_back({{"axioms", rep.to_json()}, {"strong_finiteness", fin}});
    }
    ctx.emit("axioms", "axioms", body);
    return ok ? kOk : kVerdict;
}

int report(Context& ctx) {
    const fs::path out(ctx.config.out);
    const fs::path bundle = out / "bundle";
    fs::create_directories(bundle);
    std::vector<std::string> files;
    if (fs::exists(out))
        for (const auto& e : fs::directory_iterator(out))
            if (e.is_regular_file() && e.path().filename() != "index.json") files.push_back(e.path().filename().string());
    std::sort(files.begin(), files.end());
    json present = json::array(), missing = json::array();
    for (const auto& suite : kSuites) {
        bool found = std::any_of(files.begin(), files.end(), [&](const std::string& f) { return f.rfind(suite, 0) == 0; });
        (found ? present : missing).push_back(suite);
    }
    for (const auto& f : files) fs::copy_file(out / f, bundle / f, fs::copy_options::overwrite_existing);
    json index = ctx.stamp();
    index["command"] = "report";
    index["files"] = files;
    index["suites_present"] = present;
    index["suites_missing"] = missing;
    std::ofstream(bundle / "index.json") << index.dump(2) << '\n';
    std::cout << index.dump(2) << '\n';
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dyadlab: algorithmic dimensions and optimal outer measures on a toy prefix machine"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::map<std::string, std::string> overrides;
    app.add_option("--config", config_path, "key = value configuration file");
    for (const auto& key : kConfigKeys) app.add_option("--" + key, overrides[key], "override config key '" + key + "'");

    auto* table = app.add_subcommand("table", "complexity tables");
    table->require_subcommand(1);
    auto* build = table->add_subcommand("build", "enumerate programs and persist the table");

    std::string point;
    auto* kdim_cmd = app.add_subcommand("kdim", "K_r profile and slope estimates of a point");
    kdim_cmd->add_option("--point", point, "1/3 | random:SEED | periodic:PREFIX:PERIOD")->required();

    std::string measure_name, set_spec;
    auto* measure = app.add_subcommand("measure", "outer measures");
    measure->require_subcommand(1);
    auto* eval = measure->add_subcommand("eval", "evaluate a measure on a set");
    eval->add_option("--measure", measure_name, "kappa, nu, m, theta, zero, example, kappa_even")->required();
    eval->add_option("--set", set_spec, "empty | all | points:.. | cofinite:.. | cube:R:A | ball:R:P")->required();

    std::string mu, nu, family = "both", scale;
    bool full = false;
    auto* dominate_cmd = app.add_subcommand("dominate", "sampled domination of nu by mu");
    dominate_cmd->add_option("--mu", mu)->required();
    dominate_cmd->add_option("--nu", nu)->required();
    dominate_cmd->add_option("--family", family, "cubes, balls or both");
    dominate_cmd->add_option("--scale-nu", scale, "positive rational multiplier applied to nu");
    dominate_cmd->add_flag("--full", full, "include per-r records");

    std::vector<unsigned> alphas = {4, 6, 8, 10, 12};
    auto* counter = app.add_subcommand("counterexample", "kappa is not globally optimal");
    counter->add_option("--alphas", alphas)->delimiter(',');

    std::size_t samples = 500;
    unsigned bc_rmax = 10;
    long bound = 64;
    auto* ballcube_cmd = app.add_subcommand("ballcube", "ball/cube complexity bound");
    ballcube_cmd->add_option("--samples", samples);
    ballcube_cmd->add_option("--r-max", bc_rmax);
    ballcube_cmd->add_option("--bound", bound);
    ballcube_cmd->add_flag("--full", full);

    std::vector<std::string> axiom_measures;
    std::size_t families = 200, finiteness = 64;
    auto* axioms_cmd = app.add_subcommand("axioms", "outer-measure axioms and strong finiteness");
    axioms_cmd->add_option("--measure", axiom_measures)->delimiter(',');
    axioms_cmd->add_option("--families", families);
    axioms_cmd->add_option("--finiteness", finiteness);

    auto* report_cmd = app.add_subcommand("report", "bundle the outputs in <out>/bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        Context ctx;
        if (!config_path.empty()) ctx.config = cli::RunConfig::load(config_path);
        for (const auto& key : kConfigKeys)
            if (app.count("--" + key)) ctx.config.set(key, overrides[key]);
        ctx.config.validate();

        if (build->parsed()) return table_build(ctx);
        if (kdim_cmd->parsed()) return kdim(ctx, point);
        if (eval->parsed()) return measure_eval(ctx, measure_name, set_spec);
        if (dominate_cmd->parsed()) return dominate(ctx, mu, nu, family, scale, full);
        if (counter->parsed()) return counterexample(ctx, alphas);
        if (ballcube_cmd->parsed()) return ballcube(ctx, samples, bc_rmax, bound, full);
        if (axioms_cmd->parsed()) return axioms(ctx, axiom_measures, families, finiteness);
        if (report_cmd->parsed()) return report(ctx);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return kBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const dim::InsufficientData& e) {
        std::cerr << "budget error: " << e.what() << '\n';
        return kBudget;
    }
    return kConfig;
}
