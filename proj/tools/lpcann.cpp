// Command-line front end: gen, fit, l0, densify, sweep, landscape.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lpcann/errors.hpp"
#include "report.hpp"

namespace fs = std::filesystem;
using namespace lpcann;
using namespace lpcann::cli;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char* end = nullptr;
        const double v = std::strtod(item.c_str(), &end);
        if (item.empty() || end != item.c_str() + item.size()) throw UsageError("bad number '" + item + "'");
        out.push_back(v);
    }
    return out;
}

GridRange parse_range(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError("range must look like lo:hi");
    const auto lo = parse_list(text.substr(0, colon)), hi = parse_list(text.substr(colon + 1));
    if (lo.size() != 1 || hi.size() != 1) throw UsageError("range must look like lo:hi");
    return {lo[0], hi[0]};
}

/// Relative paths land under LPCANN_OUTPUT_DIR when it is set.
fs::path output_path(const std::string& path) {
    fs::path p(path);
    if (const char* dir = std::getenv("LPCANN_OUTPUT_DIR"); dir && *dir && p.is_relative()) {
        fs::create_directories(dir);
        p = fs::path(dir) / p;
    }
    return p;
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file_atomic(output_path(path), content);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json report_header(const std::string& command, const std::vector<std::string>& argv, const std::string& started) {
    json argv_json = argv;
    return {{"schema_version", 1},
            {"command", command},
            {"argv", argv_json},
            {"timestamps", {{"started", started}, {"finished", nullptr}}}};
}

void finish(json& report) { report["timestamps"]["finished"] = utc_timestamp(); }

Dataset load(const std::string& path) { return read_csv(path); }

ParamVector params_from_flags(ModelFamily family, const std::vector<double>& w, const std::vector<double>& e) {
    ParamVector p = ParamVector::zeros(family);
    if (family == ModelFamily::MooneyRivlin) {
        if (w.size() != 2) throw UsageError("mr expects --weights w1,w5");
        p = ParamVector::mooney_rivlin(w[0], w[1]);
    } else {
        if (w.size() != kTerms) throw UsageError("expected eight comma-separated weights");
        std::copy(w.begin(), w.end(), p.amplitudes.begin());
    }
    if (!e.empty()) {
        if (family != ModelFamily::Invariant8 || e.size() != kExponents)
            throw UsageError("--exponents takes four values and applies to inv8 only");
        std::copy(e.begin(), e.end(), p.exponents.begin());
    }
    validate(p);
    return p;
}

/// One-term weights either as eight numbers or from an `l0 --k 1` report.
std::array<double, kTerms> load_weight_norms(const std::string& spec) {
    std::array<double, kTerms> out{};
    if (!fs::exists(spec)) {
        const auto v = parse_list(spec);
        if (v.size() != kTerms) throw UsageError("--normalize-weights needs eight values or an l0 report");
        std::copy(v.begin(), v.end(), out.begin());
        return out;
    }
    std::ifstream in(spec);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("weight-norm report: ") + e.what(), 0);
    }
    std::array<bool, kTerms> seen{};
    for (const json& row : j.at("result").at("rows")) {
        if (row.at("terms").get<int>() != 1 || row.at("fit").is_null()) continue;
        const int term = row.at("mask").at(0).get<int>() - 1;
        out[term] = row.at("fit").at("params").at("amplitudes").at(term).get<double>();
        seen[term] = true;
    }
    for (int k = 0; k < kTerms; ++k)
        if (!seen[k] || !(out[k] > 0.0))
            throw SchemaError("weight-norm report lacks a positive one-term weight for term " + std::to_string(k + 1));
    return out;
}

Normalization normalization_from(const std::string& s) {
    if (s == "max") return Normalization::MaxStress;
    if (s == "none") return Normalization::None;
    throw UsageError("--normalization must be max or none");
}

Reduction reduction_from(const std::string& s) {
    if (s == "mean") return Reduction::Mean;
    if (s == "sum") return Reduction::Sum;
    throw UsageError("--reduction must be mean or sum");
}

struct Common {
    std::string data;
    std::string family = "inv8";
    std::uint64_t seed = kDefaultSeed;
    std::string out;
    std::string normalization = "max";
    int epochs = AdamConfig{}.max_epochs;
    double lr = AdamConfig{}.learning_rate;
    unsigned threads = 0;

    AdamConfig adam() const {
        AdamConfig c;
        c.max_epochs = epochs;
        c.learning_rate = lr;
        c.seed = seed;
        return c;
    }
};

void add_common(CLI::App* cmd, Common& c, bool needs_data = true) {
    auto* d = cmd->add_option("--data", c.data, "CSV dataset (mode,control,stress_kpa)");
    if (needs_data) d->required();
    cmd->add_option("--family", c.family, "inv8, str8 or mr")->capture_default_str();
    cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
    cmd->add_option("--out", c.out, "output file (default stdout)");
    cmd->add_option("--normalization", c.normalization, "max or none")->capture_default_str();
    cmd->add_option("--epochs", c.epochs, "Adam epochs per fit")->capture_default_str();
    cmd->add_option("--lr", c.lr, "Adam learning rate")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker threads (0: all cores)");
}

json common_config(const Common& c) {
    return {{"data", c.data},
            {"family", c.family},
            {"seed", c.seed},
            {"normalization", c.normalization},
            {"adam", to_json(c.adam())}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse hyperelastic model discovery"};
    app.require_subcommand(1);
    const std::vector<std::string> args(argv, argv + argc);
    const std::string started = utc_timestamp();

    // gen
    auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
    std::string gen_family = "mr", gen_weights = "1,1", gen_exponents, gen_ranges = "2,0.5,0.5", gen_out;
    int gen_increments = 10;
    double gen_noise = 0.0;
    std::uint64_t gen_seed = kDefaultSeed;
    gen->add_option("--family", gen_family, "inv8, str8 or mr")->capture_default_str();
    gen->add_option("--weights", gen_weights, "amplitudes (mr: w1,w5)")->capture_default_str();
    gen->add_option("--exponents", gen_exponents, "inv8 exponents w12,w14,w16,w18");
    gen->add_option("--ranges", gen_ranges, "tension max, compression min, shear max")->capture_default_str();
    gen->add_option("--increments", gen_increments, "increments per protocol")->capture_default_str();
    gen->add_option("--noise", gen_noise, "Gaussian noise stddev in kPa")->capture_default_str();
    gen->add_option("--seed", gen_seed, "noise seed")->capture_default_str();
    gen->add_option("--out", gen_out, "output CSV")->required();

    // fit
    auto* fitc = app.add_subcommand("fit", "fit a model with Lp regularization");
    Common fc;
    double fit_p = 1.0, fit_alpha = 0.0;
    int fit_runs = 1;
    std::string fit_norms, fit_init = "uniform", fit_mask;
    add_common(fitc, fc);
    fitc->add_option("--p", fit_p, "penalty power")->capture_default_str();
    fitc->add_option("--alpha", fit_alpha, "penalty parameter")->capture_default_str();
    fitc->add_option("--runs", fit_runs, "independent restarts")->capture_default_str();
    fitc->add_option("--normalize-weights", fit_norms, "l0 report or eight one-term weights");
    fitc->add_option("--init", fit_init, "uniform or l0")->capture_default_str();
    fitc->add_option("--mask", fit_mask, "active terms, e.g. 1,5 (default all)");

    // l0
    auto* l0 = app.add_subcommand("l0", "fit and rank every k-term model");
    Common lc;
    int l0_k = 1, l0_restarts = 4;
    double l0_alpha = 0.0, l0_bold = 0.05;
    std::string l0_csv;
    add_common(l0, lc);
    l0->add_option("--k", l0_k, "terms per model")->capture_default_str();
    l0->add_option("--alpha", l0_alpha, "L0 penalty parameter")->capture_default_str();
    l0->add_option("--restarts", l0_restarts, "restarts per mask")->capture_default_str();
    l0->add_option("--bold-tol", l0_bold, "relative band flagged best-in-class")->capture_default_str();
    l0->add_option("--csv", l0_csv, "also write the ranked table as CSV");

    // densify
    auto* dens = app.add_subcommand("densify", "grow a model one term at a time");
    Common dc;
    double dens_alpha = 0.0, dens_tol = 1e-4;
    int dens_restarts = 4;
    bool dens_cold = false;
    add_common(dens, dc);
    dens->add_option("--alpha", dens_alpha, "L0 penalty parameter")->capture_default_str();
    dens->add_option("--tol", dens_tol, "minimum penalized-loss improvement")->capture_default_str();
    dens->add_option("--restarts", dens_restarts, "restarts per candidate")->capture_default_str();
    dens->add_flag("--cold", dens_cold, "do not warm-start candidates");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "grid over penalty powers and parameters");
    Common sc;
    std::string sweep_p = "0.5,1,2", sweep_alpha = "0,0.001,0.01,0.1", sweep_norms, sweep_csv_path, sweep_svg_path;
    int sweep_runs = 10;
    std::string sweep_init = "uniform";
    add_common(sweep, sc);
    sweep->add_option("--p", sweep_p, "powers")->capture_default_str();
    sweep->add_option("--alpha", sweep_alpha, "penalty parameters")->capture_default_str();
    sweep->add_option("--runs", sweep_runs, "restarts per cell")->capture_default_str();
    sweep->add_option("--normalize-weights", sweep_norms, "l0 report or eight one-term weights");
    sweep->add_option("--init", sweep_init, "uniform or l0")->capture_default_str();
    sweep->add_option("--csv", sweep_csv_path, "cell table as CSV");
    sweep->add_option("--svg", sweep_svg_path, "bar plot of mean weights");

    // landscape
    auto* land = app.add_subcommand("landscape", "total loss on a two-weight grid");
    Common gc;
    gc.family = "mr";
    std::string land_pair = "1,5", land_range = "0:2", land_range_j, land_exponents, land_reduction = "mean";
    std::string land_csv, land_svg;
    int land_res = 101;
    double land_p = 1.0, land_alpha = 0.0;
    bool land_calibrate = false;
    add_common(land, gc);
    land->add_option("--pair", land_pair, "two term numbers")->capture_default_str();
    land->add_option("--range", land_range, "lo:hi for both weights")->capture_default_str();
    land->add_option("--range-j", land_range_j, "lo:hi for the second weight");
    land->add_option("--res", land_res, "grid points per axis")->capture_default_str();
    land->add_option("--p", land_p, "penalty power")->capture_default_str();
    land->add_option("--alpha", land_alpha, "penalty parameter")->capture_default_str();
    land->add_flag("--calibrate", land_calibrate, "choose alpha so loss and penalty match at the upper corner");
    land->add_option("--exponents", land_exponents, "frozen inv8 exponents (default 0.25 each)");
    land->add_option("--reduction", land_reduction, "mean or sum over points")->capture_default_str();
    land->add_option("--csv", land_csv, "grid as CSV");
    land->add_option("--svg", land_svg, "heat map");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*gen) {
            const ModelFamily family = family_from_string(gen_family);
            const ParamVector truth =
                params_from_flags(family, parse_list(gen_weights), gen_exponents.empty() ? std::vector<double>{}
                                                                                         : parse_list(gen_exponents));
            const auto r = parse_list(gen_ranges);
            if (r.size() != 3) throw UsageError("--ranges takes three values");
            SyntheticProtocol proto{r[0], r[1], r[2], gen_increments, gen_noise, gen_seed};
            emit(gen_out, format_csv(generate_synthetic(truth, proto)));
            return 0;
        }

        if (*fitc) {
            const Dataset data = load(fc.data);
            const ModelFamily family = family_from_string(fc.family);
            PenaltyConfig pen{fit_p, fit_alpha};
            if (!fit_norms.empty()) pen.weight_norms = load_weight_norms(fit_norms);
            const TermMask mask = fit_mask.empty() ? TermMask::all() : TermMask::parse(fit_mask);
            const FitProblem problem{family, mask, normalization_from(fc.normalization), Reduction::Mean, pen};
            RestartOptions ro;
            ro.n_runs = fit_runs;
            ro.threads = fc.threads;
            if (fit_init == "l0") {
                ro.init = InitStrategy::L0Informed;
                if (!pen.weight_norms) throw UsageError("--init l0 needs --normalize-weights");
                ro.one_term_weights = pen.weight_norms;
            } else if (fit_init != "uniform") {
                throw UsageError("--init must be uniform or l0");
            }
            const RestartEnsemble ens = multi_restart_fit(problem, data, fc.adam(), ro);
            json report = report_header("fit", args, started);
            report["config"] = common_config(fc);
            report["config"]["penalty"] = to_json(pen);
            report["config"]["runs"] = fit_runs;
            report["config"]["init"] = fit_init;
            report["config"]["mask"] = mask.to_string();
            json runs = json::array();
            for (const RunOutcome& r : ens.runs)
                runs.push_back(r.result ? json{{"seed", r.seed}, {"fit", to_json(*r.result)}}
                                        : json{{"seed", r.seed}, {"fit", nullptr}, {"error", r.error}});
            const FitResult* best = ens.best();
            report["result"] = {{"runs", runs},
                                {"summary", to_json(ens.summary)},
                                {"best", best ? to_json(*best) : json(nullptr)}};
            if (best) report["curves"] = stress_curves(best->params, data);
            finish(report);
            emit(fc.out, dump(report));
            if (!best) throw NumericFailure("every run failed: " + ens.runs.front().error);
            return 0;
        }

        if (*l0) {
            const Dataset data = load(lc.data);
            const ModelFamily family = family_from_string(lc.family);
            EnumerateOptions eo{normalization_from(lc.normalization), Reduction::Mean, lc.adam(), l0_restarts,
                                lc.threads};
            if (l0_k > 2) std::cerr << "warning: k=" << l0_k << " fits every " << l0_k << "-term mask\n";
            const auto rows = enumerate_best_in_class(family, data, l0_k, l0_alpha, eo);
            json report = report_header("l0", args, started);
            report["config"] = common_config(lc);
            report["config"]["k"] = l0_k;
            report["config"]["alpha"] = l0_alpha;
            report["config"]["restarts"] = l0_restarts;
            report["config"]["bold_tol"] = l0_bold;
            json jrows = json::array();
            const double best = rows.empty() ? 0.0 : rows.front().penalized_loss(l0_alpha);
            for (const SubsetReport& r : rows) {
                json row = to_json(r, family, l0_alpha);
                row["best_in_class"] = !r.failed() && r.penalized_loss(l0_alpha) <= best * (1.0 + l0_bold);
                jrows.push_back(row);
            }
            report["result"] = {{"rows", jrows}};
            if (!rows.empty() && rows.front().fitted)
                report["curves"] = stress_curves(rows.front().fitted->params, data);
            finish(report);
            emit(lc.out, dump(report));
            if (!l0_csv.empty()) emit(l0_csv, subset_csv(rows, family, l0_alpha, l0_bold));
            if (rows.empty() || rows.front().failed()) throw NumericFailure("no mask could be fitted");
            return 0;
        }

        if (*dens) {
            const Dataset data = load(dc.data);
            const ModelFamily family = family_from_string(dc.family);
            DensifyOptions opt;
            opt.fit = EnumerateOptions{normalization_from(dc.normalization), Reduction::Mean, dc.adam(),
                                       dens_restarts, dc.threads};
            opt.warm_start = !dens_cold;
            const auto traj = greedy_densify(family, data, dens_alpha, dens_tol, opt);
            json report = report_header("densify", args, started);
            report["config"] = common_config(dc);
            report["config"]["alpha"] = dens_alpha;
            report["config"]["tol"] = dens_tol;
            report["config"]["restarts"] = dens_restarts;
            report["config"]["warm_start"] = !dens_cold;
            json steps = json::array();
            for (const DensifyStep& s : traj) {
                json cands = json::array();
                for (const SubsetReport& c : s.candidates) cands.push_back(to_json(c, family, dens_alpha));
                steps.push_back({{"incumbent", to_json(s.incumbent, family, dens_alpha)}, {"candidates", cands}});
            }
            report["result"] = {{"steps", steps}};
            report["curves"] = stress_curves(traj.back().incumbent.fitted->params, data);
            finish(report);
            emit(dc.out, dump(report));
            return 0;
        }

        if (*sweep) {
            const Dataset data = load(sc.data);
            const ModelFamily family = family_from_string(sc.family);
            SweepOptions so;
            so.normalization = normalization_from(sc.normalization);
            so.adam = sc.adam();
            so.threads = sc.threads;
            if (!sweep_norms.empty()) so.weight_norms = load_weight_norms(sweep_norms);
            if (sweep_init == "l0") {
                if (!so.weight_norms) throw UsageError("--init l0 needs --normalize-weights");
                so.init = InitStrategy::L0Informed;
            } else if (sweep_init != "uniform") {
                throw UsageError("--init must be uniform or l0");
            }
            const auto cells = lp_sweep(family, data, parse_list(sweep_p), parse_list(sweep_alpha), sweep_runs,
                                        sc.seed, so);
            json report = report_header("sweep", args, started);
            report["config"] = common_config(sc);
            report["config"]["powers"] = parse_list(sweep_p);
            report["config"]["alphas"] = parse_list(sweep_alpha);
            report["config"]["runs"] = sweep_runs;
            report["config"]["init"] = sweep_init;
            report["config"]["weight_norms"] = so.weight_norms ? json(*so.weight_norms) : json(nullptr);
            json jcells = json::array();
            for (const SweepCell& c : cells) jcells.push_back(to_json(c));
            report["result"] = {{"cells", jcells}};
            finish(report);
            emit(sc.out, dump(report));
            if (!sweep_csv_path.empty()) emit(sweep_csv_path, sweep_csv(cells));
            if (!sweep_svg_path.empty()) emit(sweep_svg_path, sweep_svg(cells, family));
            return 0;
        }

        if (*land) {
            const Dataset data = load(gc.data);
            const ModelFamily family = family_from_string(gc.family);
            const auto pair = parse_list(land_pair);
            if (pair.size() != 2) throw UsageError("--pair takes two term numbers");
            const int ti = static_cast<int>(pair[0]) - 1, tj = static_cast<int>(pair[1]) - 1;
            const GridRange ri = parse_range(land_range);
            const GridRange rj = land_range_j.empty() ? ri : parse_range(land_range_j);
            std::optional<std::array<double, kExponents>> expo;
            if (!land_exponents.empty()) {
                const auto e = parse_list(land_exponents);
                if (e.size() != kExponents) throw UsageError("--exponents takes four values");
                expo.emplace();
                std::copy(e.begin(), e.end(), expo->begin());
            }
            const Normalization norm = normalization_from(gc.normalization);
            const Reduction red = reduction_from(land_reduction);
            double alpha = land_alpha;
            if (land_calibrate) {
                ParamVector corner = ParamVector::zeros(family);
                if (family == ModelFamily::Invariant8) corner.exponents = expo.value_or(default_landscape_exponents());
                if (ti < 0 || tj < 0 || ti >= kTerms || tj >= kTerms) throw UsageError("term numbers are 1..8");
                corner.amplitudes[ti] = ri.hi;
                corner.amplitudes[tj] = rj.hi;
                alpha = calibrate_alpha(corner, data, land_p, norm, red);
            }
            const PenaltyConfig pen{land_p, alpha};
            const LandscapeGrid g = loss_landscape_grid(family, {ti, tj}, data, ri, rj, land_res, pen, expo, norm, red);
            json report = report_header("landscape", args, started);
            report["config"] = common_config(gc);
            report["config"]["pair"] = {ti + 1, tj + 1};
            report["config"]["range_i"] = {ri.lo, ri.hi};
            report["config"]["range_j"] = {rj.lo, rj.hi};
            report["config"]["resolution"] = land_res;
            report["config"]["penalty"] = to_json(pen);
            report["config"]["calibrated"] = land_calibrate;
            report["config"]["reduction"] = to_string(red);
            report["config"]["exponents"] = g.exponents;
            report["result"] = {{"argmin", {{"w_i", g.weight_i(g.argmin_i)},
                                            {"w_j", g.weight_j(g.argmin_j)},
                                            {"index", {g.argmin_i, g.argmin_j}},
                                            {"loss", g.min_value()}}},
                                {"grid_csv", land_csv.empty() ? json(nullptr) : json(land_csv)}};
            finish(report);
            emit(gc.out, dump(report));
            if (!land_csv.empty()) emit(land_csv, landscape_csv(g));
            if (!land_svg.empty()) emit(land_svg, landscape_svg(g));
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const SchemaError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const DivergenceError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const OverflowError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const NumericFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const json::exception& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
