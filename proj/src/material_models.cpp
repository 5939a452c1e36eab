#include "lpcann/material_models.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "lpcann/errors.hpp"

namespace lpcann {

const char* to_string(ModelFamily family) {
    switch (family) {
        case ModelFamily::Invariant8: return "inv8";
        case ModelFamily::Stretch8: return "str8";
        case ModelFamily::MooneyRivlin: return "mr";
    }
    return "unknown";
}

ModelFamily family_from_string(const std::string& name) {
    if (name == "inv8" || name == "invariant8") return ModelFamily::Invariant8;
    if (name == "str8" || name == "stretch8") return ModelFamily::Stretch8;
    if (name == "mr" || name == "mooney-rivlin") return ModelFamily::MooneyRivlin;
    throw ConfigError("unknown model family '" + name + "' (expected inv8, str8 or mr)");
}

TermMask TermMask::from_terms(std::initializer_list<int> terms) {
    TermMask m;
    for (int t : terms) {
        if (t < 1 || t > kTerms) throw ConfigError("term number out of range: " + std::to_string(t));
        m.set(t - 1);
    }
    return m;
}

void TermMask::set(int term, bool on) {
    if (on)
        bits_ = static_cast<std::uint8_t>(bits_ | (1u << term));
    else
        bits_ = static_cast<std::uint8_t>(bits_ & ~(1u << term));
}

int TermMask::count() const { return std::popcount(bits_); }

std::string TermMask::to_string() const {
    std::string out;
    for (int k = 0; k < kTerms; ++k) {
        if (!active(k)) continue;
        if (!out.empty()) out += ',';
        out += std::to_string(k + 1);
    }
    return out;
}

TermMask TermMask::parse(const std::string& text) {
    TermMask m;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        int t = 0;
        try {
            t = std::stoi(item);
        } catch (const std::exception&) {
            throw ConfigError("bad term number '" + item + "'");
        }
        if (t < 1 || t > kTerms) throw ConfigError("term number out of range: " + item);
        m.set(t - 1);
    }
    return m;
}

TermMask family_terms(ModelFamily family) {
    return family == ModelFamily::MooneyRivlin ? TermMask::from_terms({1, 5}) : TermMask::all();
}

ParamVector ParamVector::mooney_rivlin(double w1, double w5) {
    ParamVector p = zeros(ModelFamily::MooneyRivlin);
    p.amplitudes[0] = w1;
    p.amplitudes[4] = w5;
    return p;
}

ParamVector ParamVector::zeros(ModelFamily family) {
    ParamVector p;
    p.family = family;
    return p;
}

void validate(const ParamVector& params) {
    const TermMask allowed = family_terms(params.family);
    for (int k = 0; k < kTerms; ++k) {
        const double a = params.amplitudes[k];
        if (!std::isfinite(a) || a < 0.0)
            throw ConfigError("amplitude " + std::to_string(k + 1) + " must be finite and non-negative");
        if (!allowed.active(k) && a != 0.0)
            throw ConfigError("amplitude " + std::to_string(k + 1) + " is not part of family " +
                              to_string(params.family));
    }
    if (params.family == ModelFamily::Invariant8) {
        for (double e : params.exponents)
            if (!std::isfinite(e) || e < 0.0) throw ConfigError("exponents must be finite and non-negative");
    }
}

ParamGradient& ParamGradient::operator+=(const ParamGradient& other) {
    for (int k = 0; k < kTerms; ++k) amplitudes[k] += other.amplitudes[k];
    for (int k = 0; k < kExponents; ++k) exponents[k] += other.exponents[k];
    return *this;
}

ParamGradient& ParamGradient::operator*=(double s) {
    for (double& a : amplitudes) a *= s;
    for (double& e : exponents) e *= s;
    return *this;
}

namespace {

double checked_exp(int term, double argument) {
    if (argument > kMaxExpArgument) throw OverflowError(term, argument);
    return std::exp(argument);
}

// Derivative of one invariant term with respect to its invariant, for unit
// outer amplitude, together with the derivative of that quantity with respect
// to the inner exponent. x = I - 3.
struct TermSlope {
    double value;       // d psi_k / dI per unit amplitude
    double d_exponent;  // d value / d exponent, times amplitude applied later
};

TermSlope invariant_term_slope(int term, double x, double exponent) {
    switch (term % 4) {
        case 0: return {1.0, 0.0};
        case 1: {
            const double E = checked_exp(term, exponent * x);
            return {exponent * E, (1.0 + exponent * x) * E};
        }
        case 2: return {2.0 * x, 0.0};
        default: {
            const double E = checked_exp(term, exponent * x * x);
            return {2.0 * exponent * x * E, 2.0 * x * (1.0 + exponent * x * x) * E};
        }
    }
}

double invariant_term_energy(int term, double x, double exponent) {
    switch (term % 4) {
        case 0: return x;
        case 1: return checked_exp(term, exponent * x) - 1.0;
        case 2: return x * x;
        default: return checked_exp(term, exponent * x * x) - 1.0;
    }
}

// Unit-amplitude stress of an Ogden term with exponent alpha.
double stretch_term_uniaxial(double alpha, double lambda) {
    return alpha * (std::pow(lambda, alpha) - std::pow(lambda, -0.5 * alpha)) / lambda;
}

double stretch_term_shear(double alpha, double stretch) {
    return alpha * (std::pow(stretch, alpha + 1.0) - std::pow(stretch, 1.0 - alpha)) /
           (1.0 + stretch * stretch);
}

void check_control(LoadMode mode, double control) {
    if (mode == LoadMode::SimpleShear) {
        if (!std::isfinite(control)) throw DomainError("shear amount must be finite");
    } else if (!std::isfinite(control) || control <= 0.0) {
        throw DomainError("uniaxial stretch must be positive and finite");
    }
}

}  // namespace

double energy(const ParamVector& params, const DeformationState& state) {
    const TermMask terms = family_terms(params.family);
    double psi = 0.0;
    if (params.family == ModelFamily::Stretch8) {
        for (int k = 0; k < kTerms; ++k) {
            const double alpha = kStretchExponents[k];
            const double s = std::pow(state.lambda1, alpha) + std::pow(state.lambda2, alpha) +
                             std::pow(state.lambda3, alpha) - 3.0;
            psi += params.amplitudes[k] * s;
        }
        return psi;
    }
    const double x1 = state.I1 - 3.0;
    const double x2 = state.I2 - 3.0;
    for (int k = 0; k < kTerms; ++k) {
        if (!terms.active(k) || params.amplitudes[k] == 0.0) continue;
        const double x = k < 4 ? x1 : x2;
        const double e = is_exponential_term(params.family, k) ? params.exponent_of(k) : 0.0;
        psi += params.amplitudes[k] * invariant_term_energy(k, x, e);
    }
    return psi;
}

StressEvaluation evaluate(const ParamVector& params, LoadMode mode, double control) {
    return evaluate(params, mode, control, family_terms(params.family));
}

StressEvaluation evaluate(const ParamVector& params, LoadMode mode, double control, TermMask terms) {
    check_control(mode, control);
    terms = TermMask(static_cast<std::uint8_t>(terms.bits() & family_terms(params.family).bits()));
    StressEvaluation out;
    auto& per_term = out.stress.per_term;
    auto& grad = out.gradient;

    if (params.family == ModelFamily::Stretch8) {
        const double stretch = mode == LoadMode::SimpleShear ? shear_stretch(control) : control;
        for (int k = 0; k < kTerms; ++k) {
            if (!terms.active(k)) continue;
            const double alpha = kStretchExponents[k];
            const double shape = mode == LoadMode::SimpleShear ? stretch_term_shear(alpha, stretch)
                                                               : stretch_term_uniaxial(alpha, stretch);
            grad.amplitudes[k] = shape;
            per_term[k] = params.amplitudes[k] * shape;
        }
    } else {
        double x1, x2, factor1, factor2;
        if (mode == LoadMode::SimpleShear) {
            x1 = x2 = control * control;
            factor1 = factor2 = 2.0 * control;
        } else {
            const double l = control;
            x1 = l * l + 2.0 / l - 3.0;
            x2 = 2.0 * l + 1.0 / (l * l) - 3.0;
            factor1 = 2.0 * (l - 1.0 / (l * l));
            factor2 = factor1 / l;
        }
        for (int k = 0; k < kTerms; ++k) {
            if (!terms.active(k)) continue;
            const bool first = k < 4;
            const double x = first ? x1 : x2;
            const double factor = first ? factor1 : factor2;
            const bool expo = is_exponential_term(params.family, k);
            const double e = expo ? params.exponent_of(k) : 0.0;
            const TermSlope slope = invariant_term_slope(k, x, e);
            grad.amplitudes[k] = slope.value * factor;
            per_term[k] = params.amplitudes[k] * grad.amplitudes[k];
            if (expo) grad.exponents[exponent_slot(k)] = params.amplitudes[k] * slope.d_exponent * factor;
        }
    }
    for (double v : per_term) out.stress.total += v;
    return out;
}

StressResult stress(const ParamVector& params, LoadMode mode, double control) {
    TermMask nonzero;
    for (int k = 0; k < kTerms; ++k) nonzero.set(k, params.amplitudes[k] != 0.0);
    return evaluate(params, mode, control, nonzero).stress;
}

StressResult stress_uniaxial(const ParamVector& params, double lambda) {
    return stress(params, lambda < 1.0 ? LoadMode::UniaxialCompression : LoadMode::UniaxialTension, lambda);
}

StressResult stress_shear(const ParamVector& params, double gamma) {
    return stress(params, LoadMode::SimpleShear, gamma);
}

ParamGradient stress_gradient(const ParamVector& params, LoadMode mode, double control) {
    return evaluate(params, mode, control).gradient;
}

std::array<double, kTerms> ogden_shear_moduli(const ParamVector& params) {
    std::array<double, kTerms> mu{};
    if (params.family != ModelFamily::Stretch8) return mu;
    for (int k = 0; k < kTerms; ++k) mu[k] = kStretchExponents[k] * params.amplitudes[k];
    return mu;
}

std::string term_label(ModelFamily family, int term) {
    if (family == ModelFamily::Stretch8) {
        const int a = static_cast<int>(kStretchExponents[term]);
        return "[l^" + std::string(a > 0 ? "+" : "") + std::to_string(a) + " - 3]";
    }
    const std::string inv = term < 4 ? "I1" : "I2";
    switch (term % 4) {
        case 0: return "[" + inv + "-3]";
        case 1: return "exp([" + inv + "-3])";
        case 2: return "[" + inv + "-3]^2";
        default: return "exp([" + inv + "-3]^2)";
    }
}

}  // namespace lpcann
