#include "lpcann/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "lpcann/errors.hpp"

namespace lpcann {

namespace {

constexpr LoadMode kModes[] = {LoadMode::UniaxialTension, LoadMode::UniaxialCompression,
                               LoadMode::SimpleShear};

double extreme(const std::vector<DataPoint>& pts, bool want_max) {
    if (pts.empty()) return 0.0;
    double v = pts.front().stress;
    for (const auto& p : pts) v = want_max ? std::max(v, p.stress) : std::min(v, p.stress);
    return v;
}

std::vector<double> linspace(double a, double b, int increments) {
    std::vector<double> out(static_cast<std::size_t>(increments) + 1);
    for (int i = 0; i <= increments; ++i) out[i] = a + (b - a) * static_cast<double>(i) / increments;
    return out;
}

bool parse_number(std::string_view text, double& out) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) return false;
    if (text.front() == '+') text.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

const std::vector<DataPoint>& Dataset::points(LoadMode mode) const {
    switch (mode) {
        case LoadMode::UniaxialTension: return tension;
        case LoadMode::UniaxialCompression: return compression;
        default: return shear;
    }
}

std::vector<DataPoint>& Dataset::points(LoadMode mode) {
    return const_cast<std::vector<DataPoint>&>(std::as_const(*this).points(mode));
}

double Dataset::max_tension_stress() const { return extreme(tension, true); }
double Dataset::min_compression_stress() const { return extreme(compression, false); }
double Dataset::max_shear_stress() const { return extreme(shear, true); }

void Dataset::check() const {
    for (LoadMode mode : kModes) {
        for (const auto& p : points(mode)) {
            if (!std::isfinite(p.control) || !std::isfinite(p.stress))
                throw SchemaError(std::string("non-finite value in ") + to_string(mode) + " data");
            if (mode == LoadMode::UniaxialTension && p.control < 1.0)
                throw SchemaError("tension stretch below 1: " + format_double(p.control));
            if (mode == LoadMode::UniaxialCompression && (p.control > 1.0 || p.control <= 0.0))
                throw SchemaError("compression stretch outside (0, 1]: " + format_double(p.control));
        }
    }
}

Dataset generate_synthetic(const ParamVector& params, const SyntheticProtocol& protocol) {
    if (protocol.increments < 1) throw ConfigError("increments must be at least 1");
    if (!(protocol.tension_max >= 1.0) || !(protocol.compression_min > 0.0 && protocol.compression_min <= 1.0) ||
        !(protocol.shear_max >= 0.0))
        throw ConfigError("synthetic ranges must satisfy tension_max >= 1, 0 < compression_min <= 1, shear_max >= 0");

    Dataset d;
    d.provenance = std::string("synthetic ") + to_string(params.family);
    std::mt19937_64 rng(protocol.noise_seed);
    std::normal_distribution<double> noise(0.0, protocol.noise_stddev > 0 ? protocol.noise_stddev : 1.0);
    auto sample = [&](LoadMode mode, double control) {
        double s = stress(params, mode, control).total;
        if (protocol.noise_stddev > 0.0) s += noise(rng);
        return DataPoint{control, s};
    };
    for (double l : linspace(1.0, protocol.tension_max, protocol.increments))
        d.tension.push_back(sample(LoadMode::UniaxialTension, l));
    for (double l : linspace(1.0, protocol.compression_min, protocol.increments))
        d.compression.push_back(sample(LoadMode::UniaxialCompression, l));
    for (double g : linspace(0.0, protocol.shear_max, protocol.increments))
        d.shear.push_back(sample(LoadMode::SimpleShear, g));
    return d;
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) throw std::runtime_error("cannot format number");
    return std::string(buf, ptr);
}

Dataset parse_csv(const std::string& text, const std::string& provenance) {
    Dataset d;
    d.provenance = provenance;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != "mode,control,stress_kpa")
                throw ParseError("expected header 'mode,control,stress_kpa'", lineno);
            header_seen = true;
            continue;
        }
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw ParseError("expected three comma-separated fields", lineno);
        const std::string mode = line.substr(0, c1);
        DataPoint p;
        if (!parse_number(std::string_view(line).substr(c1 + 1, c2 - c1 - 1), p.control))
            throw ParseError("bad control value", lineno);
        if (!parse_number(std::string_view(line).substr(c2 + 1), p.stress))
            throw ParseError("bad stress value", lineno);
        if (mode == "tension")
            d.tension.push_back(p);
        else if (mode == "compression")
            d.compression.push_back(p);
        else if (mode == "shear")
            d.shear.push_back(p);
        else
            throw SchemaError("line " + std::to_string(lineno) + ": unknown mode tag '" + mode + "'");
    }
    if (!header_seen) throw ParseError("empty file", 0);
    d.check();
    return d;
}

Dataset read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string(), 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_csv(ss.str(), path.filename().string());
}

std::string format_csv(const Dataset& dataset) {
    std::string out = "mode,control,stress_kpa\n";
    for (LoadMode mode : kModes)
        for (const auto& p : dataset.points(mode))
            out += std::string(to_string(mode)) + ',' + format_double(p.control) + ',' + format_double(p.stress) + '\n';
    return out;
}

void write_csv(const Dataset& dataset, const std::filesystem::path& path) {
    write_file_atomic(path, format_csv(dataset));
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

nlohmann::json to_json(const Dataset& dataset) {
    auto curve = [](const std::vector<DataPoint>& pts) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : pts) arr.push_back({p.control, p.stress});
        return arr;
    };
    return {{"provenance", dataset.provenance},
            {"tension", curve(dataset.tension)},
            {"compression", curve(dataset.compression)},
            {"shear", curve(dataset.shear)},
            {"max_tension_stress", dataset.max_tension_stress()},
            {"min_compression_stress", dataset.min_compression_stress()},
            {"max_shear_stress", dataset.max_shear_stress()}};
}

Dataset dataset_from_json(const nlohmann::json& j) {
    Dataset d;
    d.provenance = j.value("provenance", "");
    auto curve = [&](const char* key, std::vector<DataPoint>& pts) {
        for (const auto& row : j.at(key)) pts.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
    };
    curve("tension", d.tension);
    curve("compression", d.compression);
    curve("shear", d.shear);
    d.check();
    return d;
}

std::optional<double> ModeR2::get(LoadMode mode) const {
    switch (mode) {
        case LoadMode::UniaxialTension: return tension;
        case LoadMode::UniaxialCompression: return compression;
        default: return shear;
    }
}

std::optional<double> ModeR2::pooled() const {
    double sum = 0.0;
    int n = 0;
    for (const auto& v : {tension, compression, shear})
        if (v) {
            sum += *v;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / n;
}

namespace {

std::optional<double> r2_one(const std::vector<double>& model, const std::vector<DataPoint>& data) {
    if (data.size() < 2 || model.size() != data.size()) return std::nullopt;
    double mean = 0.0;
    for (const auto& p : data) mean += p.stress;
    mean /= static_cast<double>(data.size());
    double ss_tot = 0.0, ss_res = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        ss_tot += (data[i].stress - mean) * (data[i].stress - mean);
        ss_res += (data[i].stress - model[i]) * (data[i].stress - model[i]);
    }
    if (ss_tot == 0.0) return std::nullopt;
    return 1.0 - ss_res / ss_tot;
}

}  // namespace

ModeR2 r_squared(const ModelStresses& model, const Dataset& dataset) {
    return {r2_one(model.tension, dataset.tension), r2_one(model.compression, dataset.compression),
            r2_one(model.shear, dataset.shear)};
}

ModelStresses predict(const ParamVector& params, const Dataset& dataset) {
    ModelStresses m;
    for (const auto& p : dataset.tension) m.tension.push_back(stress(params, LoadMode::UniaxialTension, p.control).total);
    for (const auto& p : dataset.compression)
        m.compression.push_back(stress(params, LoadMode::UniaxialCompression, p.control).total);
    for (const auto& p : dataset.shear) m.shear.push_back(stress(params, LoadMode::SimpleShear, p.control).total);
    return m;
}

ModeR2 r_squared(const ParamVector& params, const Dataset& dataset) {
    return r_squared(predict(params, dataset), dataset);
}

}  // namespace lpcann
