#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpcann/dataio.hpp"
#include "lpcann/material_models.hpp"
#include "lpcann/objective.hpp"
#include "lpcann/optimizer.hpp"

namespace lpcann {

struct SubsetReport {
    TermMask mask;
    std::optional<FitResult> fitted;
    std::string error;  // non-empty when every restart failed

    bool failed() const { return !fitted; }
    double data_loss() const;
    /// Data loss plus alpha times the number of terms in the mask.
    double penalized_loss(double alpha) const;
    int exponential_terms(ModelFamily family) const;
};

struct EnumerateOptions {
    Normalization normalization = Normalization::MaxStress;
    Reduction reduction = Reduction::Mean;
    AdamConfig adam;  // adam.seed is the master seed
    int restarts = 4;
    unsigned threads = 0;
};

/// All masks with exactly k terms of the family, in ascending bit order.
std::vector<TermMask> masks_of_size(ModelFamily family, int k);

/// Fits one mask: `restarts` unpenalized fits seeded from
/// derive_seed(master, mask bits), keeping the lowest data loss.
SubsetReport fit_subset(ModelFamily family, TermMask mask, const Dataset& dataset, const EnumerateOptions& options,
                        const std::optional<ParamVector>& warm_start = std::nullopt);

/// Orders reports by penalized loss, then fewer exponential terms, then mask order. Failed fits go last.
void rank_reports(std::vector<SubsetReport>& reports, ModelFamily family, double alpha);

/// Fits every k-term mask without penalty and ranks by data loss + alpha*k.
std::vector<SubsetReport> enumerate_best_in_class(ModelFamily family, const Dataset& dataset, int k, double alpha,
                                                  const EnumerateOptions& options = {});

/// Alpha below which the two-term model wins.
double l0_crossover(const SubsetReport& best_k1, const SubsetReport& best_k2);

/// Number of terms chosen at the given alpha (ties keep the smaller model).
int l0_select(const SubsetReport& best_k1, const SubsetReport& best_k2, double alpha);

struct DensifyOptions {
    EnumerateOptions fit;
    bool warm_start = true;
};

struct DensifyStep {
    SubsetReport incumbent;
    std::vector<SubsetReport> candidates;  // extensions tried to reach the next step
};

/// Starts from the best one-term model and adds one term at a time while the
/// penalized loss improves by at least improvement_tol.
std::vector<DensifyStep> greedy_densify(ModelFamily family, const Dataset& dataset, double alpha,
                                        double improvement_tol, const DensifyOptions& options = {});

struct SweepCell {
    double p = 0.0;
    double alpha = 0.0;
    int n_runs = 0;
    int failed_runs = 0;
    WeightStats weights;
    std::array<double, 4> r2_mean{};  // tension, compression, shear, pooled
    std::array<double, 4> r2_std{};
    std::vector<RunOutcome> runs;
};

struct SweepOptions {
    Normalization normalization = Normalization::MaxStress;
    AdamConfig adam;
    std::optional<std::array<double, kTerms>> weight_norms;
    InitStrategy init = InitStrategy::Uniform;
    unsigned threads = 0;
    bool keep_runs = false;
};

/// Cell (p, alpha) runs multi_restart_fit with master seed derive_seed(master_seed, cell index).
std::vector<SweepCell> lp_sweep(ModelFamily family, const Dataset& dataset, const std::vector<double>& powers,
                                const std::vector<double>& alphas, int n_runs, std::uint64_t master_seed,
                                const SweepOptions& options = {});

/// Alpha that makes the penalty equal to the data loss at the corner point.
double calibrate_alpha(const ParamVector& corner, const Dataset& dataset, double p,
                       Normalization normalization = Normalization::MaxStress, Reduction reduction = Reduction::Mean);

struct GridRange {
    double lo = 0.0;
    double hi = 2.0;
};

struct LandscapeGrid {
    ModelFamily family = ModelFamily::Invariant8;
    int term_i = 0;  // 0-based slots
    int term_j = 4;
    GridRange range_i;
    GridRange range_j;
    int resolution = 0;
    PenaltyConfig penalty;
    std::array<double, kExponents> exponents{};
    std::vector<double> values;  // values[a * resolution + b] at (w_i[a], w_j[b])
    std::size_t argmin_i = 0;
    std::size_t argmin_j = 0;

    double weight_i(std::size_t a) const;
    double weight_j(std::size_t b) const;
    double at(std::size_t a, std::size_t b) const { return values[a * resolution + b]; }
    double min_value() const { return at(argmin_i, argmin_j); }
};

/// Exponents used when none are given: 0.25 in every exponential slot.
std::array<double, kExponents> default_landscape_exponents();

/// Dense total-loss grid over two amplitudes with everything else zero.
/// Overflowing cells hold +inf.
LandscapeGrid loss_landscape_grid(ModelFamily family, std::pair<int, int> terms, const Dataset& dataset,
                                  GridRange range_i, GridRange range_j, int resolution, const PenaltyConfig& penalty,
                                  const std::optional<std::array<double, kExponents>>& frozen_exponents = std::nullopt,
                                  Normalization normalization = Normalization::MaxStress,
                                  Reduction reduction = Reduction::Mean);

}  // namespace lpcann
