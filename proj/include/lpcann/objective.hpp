#pragma once

#include <array>
#include <optional>
#include <vector>

#include "lpcann/dataio.hpp"
#include "lpcann/material_models.hpp"

namespace lpcann {

/// Amplitudes at or below this (after optional normalization) count as zero.
inline constexpr double kZeroThreshold = 1e-4;

enum class Normalization { None, MaxStress };

/// How squared residuals within one protocol are combined. Mean is the
/// standard training loss; Sum reproduces landscape figures that add the
/// squared normalized residuals without dividing by the point count.
enum class Reduction { Mean, Sum };

const char* to_string(Normalization n);
const char* to_string(Reduction r);

struct PenaltyConfig {
    double p = 1.0;
    double alpha = 0.0;
    std::optional<std::array<double, kTerms>> weight_norms;
    double epsilon_smooth = 1e-8;

    /// Throws ConfigError for negative alpha or p, or non-positive norms.
    void validate() const;
    double norm(int term) const { return weight_norms ? (*weight_norms)[term] : 1.0; }
};

struct LossBreakdown {
    double data_tension = 0.0;
    double data_compression = 0.0;
    double data_shear = 0.0;
    double penalty = 0.0;
    double total = 0.0;

    double data() const { return data_tension + data_compression + data_shear; }
};

/// Dataset prepared for repeated loss evaluation.
class Objective {
public:
    Objective(const Dataset& dataset, Normalization normalization, Reduction reduction = Reduction::Mean);

    LossBreakdown data_loss(const ParamVector& params) const;

    /// Data loss plus penalty; fills `gradient` when non-null. Gradient slots
    /// of terms outside `terms` stay zero.
    LossBreakdown evaluate(const ParamVector& params, const PenaltyConfig& config,
                           ParamGradient* gradient = nullptr, TermMask terms = TermMask::all()) const;

    /// Gradient of the data term only.
    ParamGradient data_gradient(const ParamVector& params) const;

private:
    struct Sample {
        LoadMode mode;
        double control;
        double target;
        double weight;  // scale applied to the squared residual
    };
    std::vector<Sample> samples_;

    LossBreakdown accumulate(const ParamVector& params, ParamGradient* gradient, TermMask terms) const;
};

LossBreakdown data_loss(const ParamVector& params, const Dataset& dataset, Normalization normalization,
                        Reduction reduction = Reduction::Mean);

/// alpha * sum |w_i / nu_i|^p over the eight amplitudes; p == 0 counts
/// amplitudes above kZeroThreshold.
double penalty(const ParamVector& params, const PenaltyConfig& config);

/// Penalty gradient with respect to the amplitudes (exponents are not penalized).
ParamGradient penalty_gradient(const ParamVector& params, const PenaltyConfig& config);

LossBreakdown total_loss(const ParamVector& params, const Dataset& dataset, Normalization normalization,
                         const PenaltyConfig& config, Reduction reduction = Reduction::Mean);

ParamGradient loss_gradient(const ParamVector& params, const Dataset& dataset, Normalization normalization,
                            const PenaltyConfig& config, Reduction reduction = Reduction::Mean);

/// Amplitudes whose normalized magnitude exceeds kZeroThreshold.
int count_active_terms(const ParamVector& params,
                       const std::optional<std::array<double, kTerms>>& weight_norms = std::nullopt);

}  // namespace lpcann
