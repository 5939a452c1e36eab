#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lpcann/kinematics.hpp"
#include "lpcann/material_models.hpp"

namespace lpcann {

struct DataPoint {
    double control = 0.0;  // stretch or shear amount
    double stress = 0.0;   // kPa

    friend bool operator==(const DataPoint&, const DataPoint&) = default;
};

/// Tension / compression / shear stress curves. Compression stresses are
/// stored signed (negative).
struct Dataset {
    std::vector<DataPoint> tension;
    std::vector<DataPoint> compression;
    std::vector<DataPoint> shear;
    std::string provenance;

    const std::vector<DataPoint>& points(LoadMode mode) const;
    std::vector<DataPoint>& points(LoadMode mode);

    double max_tension_stress() const;
    double min_compression_stress() const;
    double max_shear_stress() const;

    std::size_t size() const { return tension.size() + compression.size() + shear.size(); }
    bool empty() const { return size() == 0; }

    /// Throws SchemaError when a point violates the protocol ranges or is non-finite.
    void check() const;

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct SyntheticProtocol {
    double tension_max = 2.0;
    double compression_min = 0.5;
    double shear_max = 0.5;
    int increments = 10;
    double noise_stddev = 0.0;  // kPa, Gaussian, off by default
    std::uint64_t noise_seed = 42;
};

/// Forward-simulated stresses on equidistant control grids.
Dataset generate_synthetic(const ParamVector& params, const SyntheticProtocol& protocol = {});

/// CSV with header `mode,control,stress_kpa`.
Dataset read_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text, const std::string& provenance = {});
std::string format_csv(const Dataset& dataset);
void write_csv(const Dataset& dataset, const std::filesystem::path& path);

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

nlohmann::json to_json(const Dataset& dataset);
Dataset dataset_from_json(const nlohmann::json& j);

/// Write through a sibling temp file and rename over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

struct ModeR2 {
    std::optional<double> tension;
    std::optional<double> compression;
    std::optional<double> shear;

    std::optional<double> get(LoadMode mode) const;
    /// Mean over the available modes.
    std::optional<double> pooled() const;
};

struct ModelStresses {
    std::vector<double> tension;
    std::vector<double> compression;
    std::vector<double> shear;
};

/// Per-protocol 1 - SS_res / SS_tot. Absent where the protocol has fewer than
/// two points or constant measured stress.
ModeR2 r_squared(const ModelStresses& model, const Dataset& dataset);
ModeR2 r_squared(const ParamVector& params, const Dataset& dataset);

/// Model stress at every dataset control value.
ModelStresses predict(const ParamVector& params, const Dataset& dataset);

}  // namespace lpcann
