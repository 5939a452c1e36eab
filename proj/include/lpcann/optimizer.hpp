#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpcann/dataio.hpp"
#include "lpcann/material_models.hpp"
#include "lpcann/objective.hpp"

namespace lpcann {

inline constexpr std::uint64_t kDefaultSeed = 42;

struct AdamConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    int max_epochs = 20000;
    double convergence_tol = 1e-9;  // relative loss change over the window
    int convergence_window = 100;
    std::uint64_t seed = kDefaultSeed;

    void validate() const;
};

enum class InitStrategy { Uniform, L0Informed };

const char* to_string(InitStrategy s);

struct FitResult {
    ParamVector params;
    TermMask mask;
    LossBreakdown loss;
    ModeR2 r2;
    int active_terms = 0;
    int epochs_run = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double initial_loss = 0.0;
};

/// Loss became non-finite or a term overflowed; carries the last finite state.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, ParamVector last_finite, int epoch)
        : std::runtime_error(what), last_finite_(last_finite), epoch_(epoch) {}

    const ParamVector& last_finite() const { return last_finite_; }
    int epoch() const { return epoch_; }

private:
    ParamVector last_finite_;
    int epoch_;
};

struct FitProblem {
    ModelFamily family = ModelFamily::Invariant8;
    TermMask mask = TermMask::all();
    Normalization normalization = Normalization::MaxStress;
    Reduction reduction = Reduction::Mean;
    PenaltyConfig penalty;
};

/// splitmix64 mix of a master seed and a stream index.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Random start: amplitudes in [0,1], exponents in [0.1,2], masked slots zero.
ParamVector random_initial(ModelFamily family, TermMask mask, std::uint64_t seed);

/// Start at the one-term weights; exponents are drawn as in random_initial.
ParamVector l0_initial(ModelFamily family, TermMask mask, const std::array<double, kTerms>& one_term_weights,
                       std::uint64_t seed);

/// Full-batch projected Adam. Returns the best iterate seen. When `initial`
/// is empty the start is drawn from adam.seed.
FitResult fit(const FitProblem& problem, const Dataset& dataset, const AdamConfig& adam,
              const std::optional<ParamVector>& initial = std::nullopt);

FitResult fit(ModelFamily family, TermMask mask, const Dataset& dataset, Normalization normalization,
              const PenaltyConfig& penalty, const AdamConfig& adam);

struct RunOutcome {
    std::uint64_t seed = 0;
    std::optional<FitResult> result;
    std::string error;
};

struct WeightStats {
    std::array<double, kTerms> amplitude_mean{};
    std::array<double, kTerms> amplitude_std{};
    std::array<double, kExponents> exponent_mean{};
    std::array<double, kExponents> exponent_std{};
    double active_mean = 0.0;
    double active_std = 0.0;
    int succeeded = 0;
};

struct RestartEnsemble {
    std::vector<RunOutcome> runs;  // in run-index order
    WeightStats summary;

    /// Lowest total loss among successful runs.
    const FitResult* best() const;
};

struct RestartOptions {
    int n_runs = 1;
    InitStrategy init = InitStrategy::Uniform;
    std::optional<std::array<double, kTerms>> one_term_weights;  // for L0Informed
    unsigned threads = 0;                                          // 0: hardware concurrency
};

/// Independent fits with seeds derive_seed(adam.seed, run). Failed runs are
/// recorded, not rethrown. Results do not depend on thread scheduling.
RestartEnsemble multi_restart_fit(const FitProblem& problem, const Dataset& dataset, const AdamConfig& adam,
                                  const RestartOptions& options);

WeightStats summarize(const std::vector<RunOutcome>& runs);

/// Run `job(i)` for i in [0, n) on up to `threads` workers.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& job);

}  // namespace lpcann
