#include "report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <sstream>

namespace lpcann::cli {

namespace {

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json term_list(TermMask m) {
    json out = json::array();
    for (int k = 0; k < kTerms; ++k)
        if (m.active(k)) out.push_back(k + 1);
    return out;
}

const char* kModeNames[] = {"tension", "compression", "shear"};

}  // namespace

json to_json(const ParamVector& p) {
    json j{{"family", to_string(p.family)}, {"amplitudes", p.amplitudes}};
    if (p.family == ModelFamily::Invariant8) j["exponents"] = p.exponents;
    return j;
}

json to_json(const LossBreakdown& l) {
    return {{"data_tension", number(l.data_tension)},
            {"data_compression", number(l.data_compression)},
            {"data_shear", number(l.data_shear)},
            {"penalty", number(l.penalty)},
            {"total", number(l.total)}};
}

json to_json(const ModeR2& r2) {
    return {{"tension", optional_number(r2.tension)},
            {"compression", optional_number(r2.compression)},
            {"shear", optional_number(r2.shear)},
            {"pooled", optional_number(r2.pooled())}};
}

json to_json(const PenaltyConfig& c) {
    json j{{"p", c.p}, {"alpha", c.alpha}, {"epsilon_smooth", c.epsilon_smooth}};
    j["weight_norms"] = c.weight_norms ? json(*c.weight_norms) : json(nullptr);
    return j;
}

json to_json(const AdamConfig& c) {
    return {{"learning_rate", c.learning_rate},   {"beta1", c.beta1},
            {"beta2", c.beta2},                   {"eps", c.eps},
            {"max_epochs", c.max_epochs},         {"convergence_tol", c.convergence_tol},
            {"convergence_window", c.convergence_window}, {"seed", c.seed}};
}

json to_json(const FitResult& r) {
    return {{"params", to_json(r.params)},   {"mask", term_list(r.mask)},
            {"loss", to_json(r.loss)},       {"r2", to_json(r.r2)},
            {"active_terms", r.active_terms}, {"epochs_run", r.epochs_run},
            {"converged", r.converged},      {"seed", r.seed}};
}

json to_json(const SubsetReport& r, ModelFamily family, double alpha) {
    json j{{"mask", term_list(r.mask)},
           {"terms", r.mask.count()},
           {"exponential_terms", r.exponential_terms(family)},
           {"failed", r.failed()},
           {"data_loss", number(r.data_loss())},
           {"penalized_loss", number(r.penalized_loss(alpha))}};
    j["fit"] = r.fitted ? to_json(*r.fitted) : json(nullptr);
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

json to_json(const WeightStats& s) {
    return {{"amplitude_mean", s.amplitude_mean}, {"amplitude_std", s.amplitude_std},
            {"exponent_mean", s.exponent_mean},   {"exponent_std", s.exponent_std},
            {"active_mean", s.active_mean},       {"active_std", s.active_std},
            {"succeeded", s.succeeded}};
}

json to_json(const SweepCell& c) {
    json r2_mean, r2_std;
    const char* keys[] = {"tension", "compression", "shear", "pooled"};
    for (int m = 0; m < 4; ++m) {
        r2_mean[keys[m]] = c.r2_mean[m];
        r2_std[keys[m]] = c.r2_std[m];
    }
    return {{"p", c.p},
            {"alpha", c.alpha},
            {"n_runs", c.n_runs},
            {"failed_runs", c.failed_runs},
            {"weights", to_json(c.weights)},
            {"r2_mean", r2_mean},
            {"r2_std", r2_std}};
}

json stress_curves(const ParamVector& p, const Dataset& d) {
    json out = json::object();
    const LoadMode modes[] = {LoadMode::UniaxialTension, LoadMode::UniaxialCompression, LoadMode::SimpleShear};
    for (int m = 0; m < 3; ++m) {
        json c{{"control", json::array()}, {"measured", json::array()}, {"model", json::array()},
               {"per_term", json::array()}};
        for (const DataPoint& pt : d.points(modes[m])) {
            c["control"].push_back(pt.control);
            c["measured"].push_back(pt.stress);
            try {
                const StressResult s = stress(p, modes[m], pt.control);
                c["model"].push_back(number(s.total));
                c["per_term"].push_back(s.per_term);
            } catch (const std::exception&) {
                c["model"].push_back(nullptr);
                c["per_term"].push_back(nullptr);
            }
        }
        out[kModeNames[m]] = c;
    }
    json labels = json::array();
    for (int k = 0; k < kTerms; ++k) labels.push_back(term_label(p.family, k));
    out["term_labels"] = labels;
    return out;
}

std::string utc_timestamp() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string sweep_csv(const std::vector<SweepCell>& cells) {
    std::ostringstream out;
    out << "p,alpha,n_runs,failed_runs,active_mean,active_std,r2_mean,r2_std";
    for (int k = 1; k <= kTerms; ++k) out << ",w" << k << "_mean,w" << k << "_std";
    out << '\n';
    for (const SweepCell& c : cells) {
        out << format_double(c.p) << ',' << format_double(c.alpha) << ',' << c.n_runs << ',' << c.failed_runs << ','
            << format_double(c.weights.active_mean) << ',' << format_double(c.weights.active_std) << ','
            << format_double(c.r2_mean[3]) << ',' << format_double(c.r2_std[3]);
        for (int k = 0; k < kTerms; ++k)
            out << ',' << format_double(c.weights.amplitude_mean[k]) << ','
                << format_double(c.weights.amplitude_std[k]);
        out << '\n';
    }
    return out.str();
}

std::string subset_csv(const std::vector<SubsetReport>& rows, ModelFamily family, double alpha, double bold_tol) {
    std::ostringstream out;
    out << "rank,mask,data_loss,penalized_loss,best_in_class";
    for (int k = 1; k <= kTerms; ++k) out << ",w" << k;
    for (int j = 1; j <= kExponents; ++j) out << ",e" << 2 * j;
    out << '\n';
    const double best = rows.empty() ? 0.0 : rows.front().penalized_loss(alpha);
    int rank = 0;
    for (const SubsetReport& r : rows) {
        const bool bold = !r.failed() && r.penalized_loss(alpha) <= best * (1.0 + bold_tol);
        out << ++rank << ",\"" << r.mask.to_string() << "\"," << format_double(r.data_loss()) << ','
            << format_double(r.penalized_loss(alpha)) << ',' << (bold ? 1 : 0);
        for (int k = 0; k < kTerms; ++k) out << ',' << (r.fitted ? format_double(r.fitted->params.amplitudes[k]) : "");
        for (int j = 0; j < kExponents; ++j) {
            const bool used = r.fitted && family == ModelFamily::Invariant8 && r.mask.active(2 * j + 1);
            out << ',' << (used ? format_double(r.fitted->params.exponents[j]) : "");
        }
        out << '\n';
    }
    return out.str();
}

std::string landscape_csv(const LandscapeGrid& g) {
    std::ostringstream out;
    out << "w" << g.term_i + 1 << ",w" << g.term_j + 1 << ",loss\n";
    for (int a = 0; a < g.resolution; ++a)
        for (int b = 0; b < g.resolution; ++b) {
            const double v = g.at(a, b);
            out << format_double(g.weight_i(a)) << ',' << format_double(g.weight_j(b)) << ','
                << (std::isfinite(v) ? format_double(v) : "inf") << '\n';
        }
    return out.str();
}

namespace {

std::string color(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int r = static_cast<int>(255 * std::clamp(1.5 * t, 0.0, 1.0));
    const int g = static_cast<int>(255 * std::clamp(1.5 - std::abs(2.0 * t - 1.0) * 1.5, 0.0, 1.0));
    const int b = static_cast<int>(255 * std::clamp(1.5 * (1.0 - t), 0.0, 1.0));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string landscape_svg(const LandscapeGrid& g) {
    const int size = 400, margin = 40;
    const double cell = static_cast<double>(size) / g.resolution;
    double lo = g.min_value(), hi = lo;
    for (double v : g.values)
        if (std::isfinite(v)) hi = std::max(hi, v);
    const double span = std::log1p(hi - lo) > 0 ? std::log1p(hi - lo) : 1.0;
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin << "\" height=\""
        << size + 2 * margin << "\">\n";
    for (int a = 0; a < g.resolution; ++a)
        for (int b = 0; b < g.resolution; ++b) {
            const double v = g.at(a, b);
            const std::string fill = std::isfinite(v) ? color(std::log1p(v - lo) / span) : "#ffffff";
            out << "<rect x=\"" << margin + a * cell << "\" y=\"" << margin + size - (b + 1) * cell
                << "\" width=\"" << cell + 0.5 << "\" height=\"" << cell + 0.5 << "\" fill=\"" << fill << "\"/>\n";
        }
    out << "<circle cx=\"" << margin + (g.argmin_i + 0.5) * cell << "\" cy=\""
        << margin + size - (g.argmin_j + 0.5) * cell << "\" r=\"5\" fill=\"white\" stroke=\"black\"/>\n";
    out << "<text x=\"" << margin + size / 2 << "\" y=\"" << size + 2 * margin - 10 << "\">w" << g.term_i + 1
        << "</text>\n<text x=\"5\" y=\"" << margin + size / 2 << "\">w" << g.term_j + 1 << "</text>\n</svg>\n";
    return out.str();
}

std::string sweep_svg(const std::vector<SweepCell>& cells, ModelFamily family) {
    const int panel_w = 220, panel_h = 160, margin = 30;
    const int cols = static_cast<int>(std::max<std::size_t>(1, cells.size()));
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << cols * (panel_w + margin) + margin
        << "\" height=\"" << panel_h + 3 * margin << "\">\n";
    for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
        const SweepCell& cell = cells[c];
        double top = 1e-12;
        for (int k = 0; k < kTerms; ++k)
            top = std::max(top, cell.weights.amplitude_mean[k] + cell.weights.amplitude_std[k]);
        const double x0 = margin + c * (panel_w + margin), y0 = margin + panel_h;
        const double bw = panel_w / static_cast<double>(kTerms);
        for (int k = 0; k < kTerms; ++k) {
            const double h = panel_h * cell.weights.amplitude_mean[k] / top;
            const double s = panel_h * cell.weights.amplitude_std[k] / top;
            const double cx = x0 + (k + 0.5) * bw;
            out << "<rect x=\"" << x0 + k * bw + 2 << "\" y=\"" << y0 - h << "\" width=\"" << bw - 4
                << "\" height=\"" << h << "\" fill=\"" << color(k / 7.0) << "\"/>\n";
            out << "<line x1=\"" << cx << "\" x2=\"" << cx << "\" y1=\"" << y0 - h - s << "\" y2=\"" << y0 - h + s
                << "\" stroke=\"black\"/>\n";
        }
        out << "<text x=\"" << x0 << "\" y=\"" << y0 + 20 << "\" font-size=\"11\">" << to_string(family)
            << " p=" << format_double(cell.p) << " alpha=" << format_double(cell.alpha)
            << " terms=" << format_double(std::round(cell.weights.active_mean * 100) / 100) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

}  // namespace lpcann::cli
