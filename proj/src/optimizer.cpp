#include "lpcann/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "lpcann/errors.hpp"

namespace lpcann {

void AdamConfig::validate() const {
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
        throw ConfigError("Adam betas must lie in (0, 1)");
    if (!(eps > 0.0)) throw ConfigError("Adam eps must be positive");
    if (max_epochs < 0) throw ConfigError("max_epochs must be >= 0");
    if (convergence_window < 1) throw ConfigError("convergence window must be >= 1");
    if (!(convergence_tol >= 0.0)) throw ConfigError("convergence tolerance must be >= 0");
}

const char* to_string(InitStrategy s) { return s == InitStrategy::Uniform ? "uniform" : "l0"; }

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

TermMask effective_mask(ModelFamily family, TermMask mask) {
    return TermMask(static_cast<std::uint8_t>(mask.bits() & family_terms(family).bits()));
}

void tidy_exponents(ParamVector& p, TermMask mask) {
    for (int j = 0; j < kExponents; ++j) {
        const int term = 2 * j + 1;
        if (p.family != ModelFamily::Invariant8 || !mask.active(term)) p.exponents[j] = 1.0;
    }
}

}  // namespace

ParamVector random_initial(ModelFamily family, TermMask mask, std::uint64_t seed) {
    mask = effective_mask(family, mask);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(0.0, 1.0);
    std::uniform_real_distribution<double> expo(0.1, 2.0);
    ParamVector p = ParamVector::zeros(family);
    for (int k = 0; k < kTerms; ++k) {
        const double v = amp(rng);
        p.amplitudes[k] = mask.active(k) ? v : 0.0;
    }
    for (int j = 0; j < kExponents; ++j) p.exponents[j] = expo(rng);
    tidy_exponents(p, mask);
    return p;
}

ParamVector l0_initial(ModelFamily family, TermMask mask, const std::array<double, kTerms>& one_term_weights,
                       std::uint64_t seed) {
    ParamVector p = random_initial(family, mask, seed);
    mask = effective_mask(family, mask);
    for (int k = 0; k < kTerms; ++k) p.amplitudes[k] = mask.active(k) ? std::max(0.0, one_term_weights[k]) : 0.0;
    return p;
}

FitResult fit(const FitProblem& problem, const Dataset& dataset, const AdamConfig& adam,
              const std::optional<ParamVector>& initial) {
    adam.validate();
    problem.penalty.validate();
    if (dataset.empty()) throw ConfigError("cannot fit an empty dataset");
    const TermMask mask = effective_mask(problem.family, problem.mask);
    const PenaltyConfig& pen = problem.penalty;
    const Objective objective(dataset, problem.normalization, problem.reduction);

    ParamVector x = initial ? *initial : random_initial(problem.family, mask, adam.seed);
    x.family = problem.family;
    for (int k = 0; k < kTerms; ++k)
        x.amplitudes[k] = mask.active(k) && std::isfinite(x.amplitudes[k]) ? std::max(0.0, x.amplitudes[k]) : 0.0;
    for (double& e : x.exponents) e = std::isfinite(e) ? std::max(0.0, e) : 1.0;
    tidy_exponents(x, mask);

    std::array<bool, kExponents> exponent_free{};
    if (problem.family == ModelFamily::Invariant8)
        for (int j = 0; j < kExponents; ++j) exponent_free[j] = mask.active(2 * j + 1);

    std::array<double, kTerms> m_a{}, v_a{};
    std::array<double, kExponents> m_e{}, v_e{};
    const PenaltyConfig no_penalty{pen.p, 0.0, pen.weight_norms, pen.epsilon_smooth};

    FitResult result;
    result.mask = mask;
    result.seed = adam.seed;
    ParamVector best = x;
    LossBreakdown best_loss;
    double best_total = std::numeric_limits<double>::infinity();
    std::vector<double> history;
    history.reserve(static_cast<std::size_t>(adam.max_epochs) + 1);

    int epoch = 0;
    for (;; ++epoch) {
        ParamGradient g;
        LossBreakdown loss;
        try {
            loss = objective.evaluate(x, no_penalty, &g, mask);
        } catch (const OverflowError& e) {
            throw DivergenceError(std::string("overflow during fit: ") + e.what(), best, epoch);
        }
        loss.penalty = penalty(x, pen);
        loss.total = loss.data() + loss.penalty;
        if (!std::isfinite(loss.total)) throw DivergenceError("loss became non-finite", best, epoch);
        if (epoch == 0) result.initial_loss = loss.total;
        if (loss.total < best_total) {
            best_total = loss.total;
            best_loss = loss;
            best = x;
        }
        history.push_back(loss.total);
        const int w = adam.convergence_window;
        if (epoch >= w) {
            const double prev = history[static_cast<std::size_t>(epoch - w)];
            const double scale = std::max(std::abs(prev), std::numeric_limits<double>::min());
            if (std::abs(prev - loss.total) <= adam.convergence_tol * scale) {
                result.converged = true;
                break;
            }
        }
        if (epoch >= adam.max_epochs) break;

        const ParamGradient pg = penalty_gradient(x, pen);
        const double t = epoch + 1;
        const double c1 = 1.0 - std::pow(adam.beta1, t);
        const double c2 = 1.0 - std::pow(adam.beta2, t);
        auto step = [&](double& value, double grad, double& m, double& v) {
            m = adam.beta1 * m + (1.0 - adam.beta1) * grad;
            v = adam.beta2 * v + (1.0 - adam.beta2) * grad * grad;
            value -= adam.learning_rate * (m / c1) / (std::sqrt(v / c2) + adam.eps);
            if (!(value > 0.0)) value = 0.0;
        };
        for (int k = 0; k < kTerms; ++k) {
            if (!mask.active(k)) continue;
            double grad = g.amplitudes[k] + pg.amplitudes[k];
            if (x.amplitudes[k] == 0.0 && pen.alpha > 0.0 && pen.p > 0.0 && pen.p <= 1.0) {
                const double bound = pen.p == 1.0 ? pen.alpha / pen.norm(k) : pg.amplitudes[k];
                if (-g.amplitudes[k] <= bound) {
                    m_a[k] = v_a[k] = 0.0;
                    continue;
                }
                grad = g.amplitudes[k] + bound;
            }
            step(x.amplitudes[k], grad, m_a[k], v_a[k]);
        }
        for (int j = 0; j < kExponents; ++j)
            if (exponent_free[j]) step(x.exponents[j], g.exponents[j], m_e[j], v_e[j]);
    }

    result.params = best;
    result.loss = best_loss;
    result.epochs_run = epoch;
    result.r2 = r_squared(best, dataset);
    result.active_terms = count_active_terms(best, pen.weight_norms);
    return result;
}

FitResult fit(ModelFamily family, TermMask mask, const Dataset& dataset, Normalization normalization,
              const PenaltyConfig& penalty, const AdamConfig& adam) {
    return fit(FitProblem{family, mask, normalization, Reduction::Mean, penalty}, dataset, adam);
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) job(i);
        });
    for (auto& th : pool) th.join();
}

WeightStats summarize(const std::vector<RunOutcome>& runs) {
    WeightStats s;
    std::vector<const FitResult*> ok;
    for (const auto& r : runs)
        if (r.result) ok.push_back(&*r.result);
    s.succeeded = static_cast<int>(ok.size());
    if (ok.empty()) return s;
    const double n = static_cast<double>(ok.size());
    auto stats = [&](auto get, double& mean, double& sd) {
        double sum = 0.0;
        for (const FitResult* r : ok) sum += get(*r);
        mean = sum / n;
        double ss = 0.0;
        for (const FitResult* r : ok) ss += (get(*r) - mean) * (get(*r) - mean);
        sd = ok.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    };
    for (int k = 0; k < kTerms; ++k)
        stats([k](const FitResult& r) { return r.params.amplitudes[k]; }, s.amplitude_mean[k], s.amplitude_std[k]);
    for (int j = 0; j < kExponents; ++j)
        stats([j](const FitResult& r) { return r.params.exponents[j]; }, s.exponent_mean[j], s.exponent_std[j]);
    stats([](const FitResult& r) { return static_cast<double>(r.active_terms); }, s.active_mean, s.active_std);
    return s;
}

const FitResult* RestartEnsemble::best() const {
    const FitResult* out = nullptr;
    for (const auto& r : runs)
        if (r.result && (!out || r.result->loss.total < out->loss.total)) out = &*r.result;
    return out;
}

RestartEnsemble multi_restart_fit(const FitProblem& problem, const Dataset& dataset, const AdamConfig& adam,
                                  const RestartOptions& options) {
    if (options.n_runs < 1) throw ConfigError("n_runs must be >= 1");
    if (options.init == InitStrategy::L0Informed && !options.one_term_weights)
        throw ConfigError("L0-informed initialization needs one-term weights");
    adam.validate();
    problem.penalty.validate();

    RestartEnsemble out;
    out.runs.resize(static_cast<std::size_t>(options.n_runs));
    parallel_for(out.runs.size(), options.threads, [&](std::size_t i) {
        RunOutcome& run = out.runs[i];
        run.seed = derive_seed(adam.seed, i);
        AdamConfig cfg = adam;
        cfg.seed = run.seed;
        try {
            std::optional<ParamVector> start;
            if (options.init == InitStrategy::L0Informed)
                start = l0_initial(problem.family, problem.mask, *options.one_term_weights, run.seed);
            run.result = fit(problem, dataset, cfg, start);
        } catch (const std::exception& e) {
            run.error = e.what();
        }
    });
    out.summary = summarize(out.runs);
    return out;
}

}  // namespace lpcann
