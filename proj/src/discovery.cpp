#include "lpcann/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lpcann/errors.hpp"

namespace lpcann {

double SubsetReport::data_loss() const {
    return fitted ? fitted->loss.data() : std::numeric_limits<double>::infinity();
}

double SubsetReport::penalized_loss(double alpha) const { return data_loss() + alpha * mask.count(); }

int SubsetReport::exponential_terms(ModelFamily family) const {
    int n = 0;
    for (int k = 0; k < kTerms; ++k)
        if (mask.active(k) && is_exponential_term(family, k)) ++n;
    return n;
}

std::vector<TermMask> masks_of_size(ModelFamily family, int k) {
    if (k < 1 || k > kTerms) throw ConfigError("subset size must lie in [1, 8]");
    const std::uint8_t allowed = family_terms(family).bits();
    std::vector<TermMask> out;
    for (unsigned bits = 1; bits < 256; ++bits) {
        const TermMask m(static_cast<std::uint8_t>(bits));
        if ((bits & ~allowed) == 0 && m.count() == k) out.push_back(m);
    }
    return out;
}

SubsetReport fit_subset(ModelFamily family, TermMask mask, const Dataset& dataset, const EnumerateOptions& options,
                        const std::optional<ParamVector>& warm_start) {
    if (options.restarts < 1) throw ConfigError("restarts must be >= 1");
    SubsetReport report;
    report.mask = mask;
    const FitProblem problem{family, mask, options.normalization, options.reduction, PenaltyConfig{1.0, 0.0}};
    const std::uint64_t mask_seed = derive_seed(options.adam.seed, mask.bits());
    for (int r = 0; r < options.restarts; ++r) {
        AdamConfig cfg = options.adam;
        cfg.seed = derive_seed(mask_seed, static_cast<std::uint64_t>(r));
        std::optional<ParamVector> start;
        if (r == 0 && warm_start) start = warm_start;
        try {
            FitResult f = fit(problem, dataset, cfg, start);
            if (!report.fitted || f.loss.data() < report.fitted->loss.data()) report.fitted = std::move(f);
        } catch (const DivergenceError& e) {
            report.error = e.what();
        } catch (const OverflowError& e) {
            report.error = e.what();
        }
    }
    if (report.fitted) report.error.clear();
    return report;
}

namespace {

bool lexicographic_less(TermMask a, TermMask b) {
    std::vector<int> ta, tb;
    for (int k = 0; k < kTerms; ++k) {
        if (a.active(k)) ta.push_back(k);
        if (b.active(k)) tb.push_back(k);
    }
    return ta < tb;
}

}  // namespace

void rank_reports(std::vector<SubsetReport>& reports, ModelFamily family, double alpha) {
    std::stable_sort(reports.begin(), reports.end(), [&](const SubsetReport& a, const SubsetReport& b) {
        if (a.failed() != b.failed()) return b.failed();
        const double la = a.penalized_loss(alpha), lb = b.penalized_loss(alpha);
        if (la != lb) return la < lb;
        const int ea = a.exponential_terms(family), eb = b.exponential_terms(family);
        if (ea != eb) return ea < eb;
        return lexicographic_less(a.mask, b.mask);
    });
}

std::vector<SubsetReport> enumerate_best_in_class(ModelFamily family, const Dataset& dataset, int k, double alpha,
                                                  const EnumerateOptions& options) {
    if (!(alpha >= 0.0)) throw ConfigError("alpha must be >= 0");
    options.adam.validate();
    const std::vector<TermMask> masks = masks_of_size(family, k);
    std::vector<SubsetReport> reports(masks.size());
    parallel_for(masks.size(), options.threads, [&](std::size_t i) {
        EnumerateOptions serial = options;
        reports[i] = fit_subset(family, masks[i], dataset, serial);
    });
    rank_reports(reports, family, alpha);
    return reports;
}

double l0_crossover(const SubsetReport& best_k1, const SubsetReport& best_k2) {
    const int extra = best_k2.mask.count() - best_k1.mask.count();
    const double gap = best_k1.data_loss() - best_k2.data_loss();
    return extra > 0 ? gap / extra : gap;
}

int l0_select(const SubsetReport& best_k1, const SubsetReport& best_k2, double alpha) {
    return best_k2.penalized_loss(alpha) < best_k1.penalized_loss(alpha) ? best_k2.mask.count()
                                                                          : best_k1.mask.count();
}

std::vector<DensifyStep> greedy_densify(ModelFamily family, const Dataset& dataset, double alpha,
                                        double improvement_tol, const DensifyOptions& options) {
    if (!(improvement_tol > 0.0)) throw ConfigError("improvement tolerance must be positive");
    std::vector<DensifyStep> trajectory;
    std::vector<SubsetReport> singles = enumerate_best_in_class(family, dataset, 1, alpha, options.fit);
    if (singles.empty() || singles.front().failed()) throw DivergenceError("no one-term model could be fitted", {}, 0);
    trajectory.push_back({singles.front(), singles});

    const TermMask allowed = family_terms(family);
    for (;;) {
        const SubsetReport& incumbent = trajectory.back().incumbent;
        std::vector<TermMask> extensions;
        for (int k = 0; k < kTerms; ++k)
            if (allowed.active(k) && !incumbent.mask.active(k)) {
                TermMask m = incumbent.mask;
                m.set(k);
                extensions.push_back(m);
            }
        if (extensions.empty()) break;
        std::optional<ParamVector> warm;
        if (options.warm_start) warm = incumbent.fitted->params;
        std::vector<SubsetReport> candidates(extensions.size());
        parallel_for(extensions.size(), options.fit.threads, [&](std::size_t i) {
            candidates[i] = fit_subset(family, extensions[i], dataset, options.fit, warm);
        });
        rank_reports(candidates, family, alpha);
        const SubsetReport& best = candidates.front();
        const bool improved =
            !best.failed() && incumbent.penalized_loss(alpha) - best.penalized_loss(alpha) >= improvement_tol;
        trajectory.back().candidates = candidates;
        if (!improved) break;
        trajectory.push_back({best, {}});
    }
    return trajectory;
}

std::vector<SweepCell> lp_sweep(ModelFamily family, const Dataset& dataset, const std::vector<double>& powers,
                                const std::vector<double>& alphas, int n_runs, std::uint64_t master_seed,
                                const SweepOptions& options) {
    for (double p : powers)
        if (!(p > 0.0)) throw ConfigError("sweep powers must be positive");
    for (double a : alphas)
        if (!(a >= 0.0)) throw ConfigError("sweep alphas must be >= 0");
    std::vector<SweepCell> cells;
    std::uint64_t index = 0;
    for (double p : powers)
        for (double alpha : alphas) {
            FitProblem problem{family, TermMask::all(), options.normalization, Reduction::Mean,
                               PenaltyConfig{p, alpha, options.weight_norms}};
            AdamConfig adam = options.adam;
            adam.seed = derive_seed(master_seed, index++);
            RestartOptions ro;
            ro.n_runs = n_runs;
            ro.init = options.init;
            ro.one_term_weights = options.weight_norms;
            ro.threads = options.threads;
            RestartEnsemble ens = multi_restart_fit(problem, dataset, adam, ro);

            SweepCell cell;
            cell.p = p;
            cell.alpha = alpha;
            cell.n_runs = n_runs;
            cell.weights = ens.summary;
            cell.failed_runs = n_runs - ens.summary.succeeded;
            for (int m = 0; m < 4; ++m) {
                std::vector<double> xs;
                for (const auto& run : ens.runs) {
                    if (!run.result) continue;
                    const ModeR2& r2 = run.result->r2;
                    const std::optional<double> v = m == 0   ? r2.tension
                                                    : m == 1 ? r2.compression
                                                    : m == 2 ? r2.shear
                                                             : r2.pooled();
                    if (v) xs.push_back(*v);
                }
                if (xs.empty()) continue;
                double sum = 0.0;
                for (double x : xs) sum += x;
                const double mean = sum / static_cast<double>(xs.size());
                double ss = 0.0;
                for (double x : xs) ss += (x - mean) * (x - mean);
                cell.r2_mean[m] = mean;
                cell.r2_std[m] = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
            }
            if (options.keep_runs) cell.runs = std::move(ens.runs);
            cells.push_back(std::move(cell));
        }
    return cells;
}

double calibrate_alpha(const ParamVector& corner, const Dataset& dataset, double p, Normalization normalization,
                       Reduction reduction) {
    const double norm = penalty(corner, PenaltyConfig{p, 1.0});
    if (!(norm > 0.0)) throw ConfigError("penalty norm vanishes at the calibration corner");
    return data_loss(corner, dataset, normalization, reduction).total / norm;
}

double LandscapeGrid::weight_i(std::size_t a) const {
    return range_i.lo + (range_i.hi - range_i.lo) * static_cast<double>(a) / (resolution - 1);
}

double LandscapeGrid::weight_j(std::size_t b) const {
    return range_j.lo + (range_j.hi - range_j.lo) * static_cast<double>(b) / (resolution - 1);
}

std::array<double, kExponents> default_landscape_exponents() { return {0.25, 0.25, 0.25, 0.25}; }

LandscapeGrid loss_landscape_grid(ModelFamily family, std::pair<int, int> terms, const Dataset& dataset,
                                  GridRange range_i, GridRange range_j, int resolution, const PenaltyConfig& penalty,
                                  const std::optional<std::array<double, kExponents>>& frozen_exponents,
                                  Normalization normalization, Reduction reduction) {
    if (resolution < 2) throw ConfigError("landscape resolution must be >= 2");
    const auto [ti, tj] = terms;
    const TermMask allowed = family_terms(family);
    if (ti == tj || ti < 0 || tj < 0 || ti >= kTerms || tj >= kTerms || !allowed.active(ti) || !allowed.active(tj))
        throw ConfigError("landscape needs two distinct terms of the family");
    if (!(range_i.hi > range_i.lo) || !(range_j.hi > range_j.lo)) throw ConfigError("empty landscape range");
    penalty.validate();

    LandscapeGrid grid;
    grid.family = family;
    grid.term_i = ti;
    grid.term_j = tj;
    grid.range_i = range_i;
    grid.range_j = range_j;
    grid.resolution = resolution;
    grid.penalty = penalty;
    grid.exponents = frozen_exponents.value_or(default_landscape_exponents());
    const std::size_t n = static_cast<std::size_t>(resolution);
    grid.values.assign(n * n, 0.0);

    const Objective objective(dataset, normalization, reduction);
    ParamVector base = ParamVector::zeros(family);
    if (family == ModelFamily::Invariant8) base.exponents = grid.exponents;
    parallel_for(n, 0, [&](std::size_t a) {
        ParamVector x = base;
        x.amplitudes[ti] = grid.weight_i(a);
        for (std::size_t b = 0; b < n; ++b) {
            x.amplitudes[tj] = grid.weight_j(b);
            double v;
            try {
                v = objective.evaluate(x, penalty).total;
            } catch (const OverflowError&) {
                v = std::numeric_limits<double>::infinity();
            }
            grid.values[a * n + b] = std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
        }
    });
    std::size_t best = 0;
    for (std::size_t c = 1; c < grid.values.size(); ++c)
        if (grid.values[c] < grid.values[best]) best = c;
    grid.argmin_i = best / n;
    grid.argmin_j = best % n;
    return grid;
}

}  // namespace lpcann
