#include "lpcann/objective.hpp"

#include <cmath>
#include <string>

#include "lpcann/errors.hpp"

namespace lpcann {

const char* to_string(Normalization n) { return n == Normalization::None ? "none" : "max-stress"; }
const char* to_string(Reduction r) { return r == Reduction::Mean ? "mean" : "sum"; }

void PenaltyConfig::validate() const {
    if (!std::isfinite(alpha) || alpha < 0.0) throw ConfigError("penalty parameter alpha must be >= 0");
    if (!std::isfinite(p) || p < 0.0) throw ConfigError("penalty power p must be >= 0");
    if (!(epsilon_smooth > 0.0)) throw ConfigError("epsilon_smooth must be positive");
    if (weight_norms)
        for (double v : *weight_norms)
            if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("weight norms must be positive");
}

Objective::Objective(const Dataset& dataset, Normalization normalization, Reduction reduction) {
    const std::pair<LoadMode, double> divisors[] = {
        {LoadMode::UniaxialTension, dataset.max_tension_stress()},
        {LoadMode::UniaxialCompression, dataset.min_compression_stress()},
        {LoadMode::SimpleShear, dataset.max_shear_stress()},
    };
    for (const auto& [mode, divisor] : divisors) {
        const auto& pts = dataset.points(mode);
        if (pts.empty()) continue;
        double scale = reduction == Reduction::Mean ? 1.0 / static_cast<double>(pts.size()) : 1.0;
        if (normalization == Normalization::MaxStress) {
            if (divisor == 0.0 || !std::isfinite(divisor))
                throw ConfigError(std::string("zero normalization stress for ") + to_string(mode) + " data");
            scale /= divisor * divisor;
        }
        for (const auto& p : pts) samples_.push_back({mode, p.control, p.stress, scale});
    }
}

LossBreakdown Objective::accumulate(const ParamVector& params, ParamGradient* gradient, TermMask terms) const {
    LossBreakdown out;
    for (const auto& s : samples_) {
        double term;
        if (gradient) {
            StressEvaluation ev = lpcann::evaluate(params, s.mode, s.control, terms);
            const double r = ev.stress.total - s.target;
            term = s.weight * r * r;
            ev.gradient *= 2.0 * s.weight * r;
            *gradient += ev.gradient;
        } else {
            const double r = stress(params, s.mode, s.control).total - s.target;
            term = s.weight * r * r;
        }
        switch (s.mode) {
            case LoadMode::UniaxialTension: out.data_tension += term; break;
            case LoadMode::UniaxialCompression: out.data_compression += term; break;
            case LoadMode::SimpleShear: out.data_shear += term; break;
        }
    }
    out.total = out.data_tension + out.data_compression + out.data_shear;
    return out;
}

LossBreakdown Objective::data_loss(const ParamVector& params) const { return accumulate(params, nullptr, TermMask::all()); }

ParamGradient Objective::data_gradient(const ParamVector& params) const {
    ParamGradient g;
    accumulate(params, &g, TermMask::all());
    return g;
}

LossBreakdown Objective::evaluate(const ParamVector& params, const PenaltyConfig& config,
                                  ParamGradient* gradient, TermMask terms) const {
    LossBreakdown out = accumulate(params, gradient, terms);
    out.penalty = penalty(params, config);
    out.total = out.data_tension + out.data_compression + out.data_shear + out.penalty;
    if (gradient) {
        ParamGradient pg = penalty_gradient(params, config);
        for (int k = 0; k < kTerms; ++k)
            if (!terms.active(k)) pg.amplitudes[k] = 0.0;
        *gradient += pg;
    }
    return out;
}

LossBreakdown data_loss(const ParamVector& params, const Dataset& dataset, Normalization normalization,
                        Reduction reduction) {
    return Objective(dataset, normalization, reduction).data_loss(params);
}

double penalty(const ParamVector& params, const PenaltyConfig& config) {
    if (config.alpha == 0.0) return 0.0;
    double sum = 0.0;
    for (int k = 0; k < kTerms; ++k) {
        const double w = std::abs(params.amplitudes[k]) / config.norm(k);
        if (config.p == 0.0)
            sum += w > kZeroThreshold ? 1.0 : 0.0;
        else if (w != 0.0)
            sum += std::pow(w, config.p);
    }
    return config.alpha * sum;
}

ParamGradient penalty_gradient(const ParamVector& params, const PenaltyConfig& config) {
    ParamGradient g;
    if (config.alpha == 0.0 || config.p == 0.0) return g;
    for (int k = 0; k < kTerms; ++k) {
        const double nu = config.norm(k);
        const double w = params.amplitudes[k];
        const double sign = w < 0.0 ? -1.0 : 1.0;
        double slope;
        if (config.p < 1.0) {
            // smoothed |w| + eps keeps the slope finite at zero
            slope = config.p * std::pow(std::abs(w) / nu + config.epsilon_smooth, config.p - 1.0);
        } else if (config.p == 1.0) {
            slope = w == 0.0 ? 0.0 : 1.0;
        } else {
            slope = config.p * std::pow(std::abs(w) / nu, config.p - 1.0);
        }
        g.amplitudes[k] = config.alpha * sign * slope / nu;
    }
    return g;
}

LossBreakdown total_loss(const ParamVector& params, const Dataset& dataset, Normalization normalization,
                         const PenaltyConfig& config, Reduction reduction) {
    return Objective(dataset, normalization, reduction).evaluate(params, config);
}

ParamGradient loss_gradient(const ParamVector& params, const Dataset& dataset, Normalization normalization,
                            const PenaltyConfig& config, Reduction reduction) {
    ParamGradient g;
    Objective(dataset, normalization, reduction).evaluate(params, config, &g);
    return g;
}

int count_active_terms(const ParamVector& params, const std::optional<std::array<double, kTerms>>& weight_norms) {
    int n = 0;
    for (int k = 0; k < kTerms; ++k) {
        const double nu = weight_norms ? (*weight_norms)[k] : 1.0;
        if (std::abs(params.amplitudes[k]) / nu > kZeroThreshold) ++n;
    }
    return n;
}

}  // namespace lpcann
