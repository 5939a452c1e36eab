#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "lpcann/dataio.hpp"
#include "lpcann/errors.hpp"
#include "lpcann/objective.hpp"

using namespace lpcann;

namespace {

bool same_points(const Dataset& a, const Dataset& b) {
    return a.tension == b.tension && a.compression == b.compression && a.shear == b.shear;
}

std::filesystem::path temp_file(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("lpcann_test_" + name);
}

}  // namespace

TEST(Synthetic, DefaultProtocolShape) {
    const Dataset d = generate_synthetic(ParamVector::mooney_rivlin(1, 1));
    ASSERT_EQ(d.tension.size(), 11u);
    ASSERT_EQ(d.compression.size(), 11u);
    ASSERT_EQ(d.shear.size(), 11u);
    EXPECT_EQ(d.tension.front().control, 1.0);
    EXPECT_EQ(d.tension.front().stress, 0.0);
    EXPECT_EQ(d.tension.back().control, 2.0);
    EXPECT_NEAR(d.tension.back().stress, 5.25, 1e-13);
    EXPECT_EQ(d.compression.back().control, 0.5);
    EXPECT_EQ(d.shear.back().control, 0.5);
    for (int i = 0; i <= 10; ++i) {
        EXPECT_NEAR(d.tension[i].control, 1.0 + 0.1 * i, 1e-15);
        EXPECT_NEAR(d.compression[i].control, 1.0 - 0.05 * i, 1e-15);
        EXPECT_NEAR(d.shear[i].control, 0.05 * i, 1e-15);
    }
}

TEST(Synthetic, NormalizationStatsMatchExtrema) {
    const Dataset d = generate_synthetic(ParamVector::mooney_rivlin(1, 1));
    EXPECT_EQ(d.max_tension_stress(), d.tension.back().stress);
    EXPECT_EQ(d.min_compression_stress(), d.compression.back().stress);
    EXPECT_LT(d.min_compression_stress(), 0.0);
    EXPECT_EQ(d.max_shear_stress(), d.shear.back().stress);
}

TEST(Synthetic, ExactParamsGiveZeroLoss) {
    const ParamVector truth = ParamVector::mooney_rivlin(1, 1);
    const LossBreakdown l = data_loss(truth, generate_synthetic(truth), Normalization::MaxStress);
    EXPECT_EQ(l.data_tension, 0.0);
    EXPECT_EQ(l.data_compression, 0.0);
    EXPECT_EQ(l.data_shear, 0.0);
}

TEST(Synthetic, NoiseIsOptionalAndSeeded) {
    SyntheticProtocol noisy;
    noisy.noise_stddev = 0.01;
    const ParamVector p = ParamVector::mooney_rivlin(1, 1);
    const Dataset a = generate_synthetic(p, noisy), b = generate_synthetic(p, noisy);
    EXPECT_TRUE(same_points(a, b));
    EXPECT_FALSE(same_points(a, generate_synthetic(p)));
}

TEST(Csv, RoundTripRandomDatasets) {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<int> n(0, 20);
    for (int trial = 0; trial < 100; ++trial) {
        Dataset d;
        for (int i = n(rng); i > 0; --i) d.tension.push_back({1.0 + u(rng), 10 * u(rng)});
        for (int i = n(rng); i > 0; --i) d.compression.push_back({1.0 - 0.9 * u(rng), -10 * u(rng) * 1e-7});
        for (int i = n(rng); i > 0; --i) d.shear.push_back({u(rng), u(rng) * 1e5});
        const Dataset back = parse_csv(format_csv(d));
        ASSERT_TRUE(same_points(d, back)) << "trial " << trial;
    }
}

TEST(Csv, WriteThenReadFile) {
    const Dataset d = generate_synthetic(ParamVector::mooney_rivlin(0.3, 1.7));
    const auto path = temp_file("roundtrip.csv");
    write_csv(d, path);
    EXPECT_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    const Dataset back = read_csv(path);
    EXPECT_TRUE(same_points(d, back));
    std::filesystem::remove(path);
}

TEST(Csv, ToleratesCrLfAndBlankLines) {
    const Dataset d = parse_csv("mode,control,stress_kpa\r\ntension,1.1,0.5\r\n\r\nshear,0.1,0.2\r\n");
    EXPECT_EQ(d.tension.size(), 1u);
    EXPECT_EQ(d.compression.size(), 0u);
    EXPECT_EQ(d.shear.size(), 1u);
}

TEST(Csv, EmptyShearSectionContributesNothing) {
    const Dataset d = parse_csv("mode,control,stress_kpa\ntension,1.5,2.0\ncompression,0.8,-1.0\n");
    EXPECT_TRUE(d.shear.empty());
    const LossBreakdown l = data_loss(ParamVector::mooney_rivlin(1, 1), d, Normalization::MaxStress);
    EXPECT_EQ(l.data_shear, 0.0);
}

TEST(Csv, MalformedRowReportsLine) {
    try {
        parse_csv("mode,control,stress_kpa\ntension,1.1,0.5\ntension,abc,0.5\n");
        FAIL() << "expected parse error";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(parse_csv("mode,control,stress_kpa\ntension,1.1\n"), ParseError);
    EXPECT_THROW(parse_csv("wrong,header\n"), ParseError);
}

TEST(Csv, UnknownModeIsSchemaError) {
    EXPECT_THROW(parse_csv("mode,control,stress_kpa\nbiaxial,1.1,0.5\n"), SchemaError);
    EXPECT_THROW(parse_csv("mode,control,stress_kpa\ntension,0.9,0.5\n"), SchemaError);
    EXPECT_THROW(parse_csv("mode,control,stress_kpa\ncompression,1.2,-0.5\n"), SchemaError);
}

TEST(Csv, MissingFileFails) { EXPECT_THROW(read_csv(temp_file("does_not_exist.csv")), ParseError); }

TEST(Json, DatasetRoundTrip) {
    const Dataset d = generate_synthetic(ParamVector::mooney_rivlin(1, 1));
    const Dataset back = dataset_from_json(to_json(d));
    EXPECT_EQ(d, back);
}

TEST(RSquared, PerfectFitIsOne) {
    const ParamVector p = ParamVector::mooney_rivlin(1, 1);
    const ModeR2 r2 = r_squared(p, generate_synthetic(p));
    EXPECT_DOUBLE_EQ(*r2.tension, 1.0);
    EXPECT_DOUBLE_EQ(*r2.compression, 1.0);
    EXPECT_DOUBLE_EQ(*r2.shear, 1.0);
    EXPECT_DOUBLE_EQ(*r2.pooled(), 1.0);
}

TEST(RSquared, MeanModelIsZero) {
    const Dataset d = generate_synthetic(ParamVector::mooney_rivlin(1, 1));
    ModelStresses m;
    for (LoadMode mode : {LoadMode::UniaxialTension, LoadMode::UniaxialCompression, LoadMode::SimpleShear}) {
        double mean = 0.0;
        for (const auto& p : d.points(mode)) mean += p.stress;
        mean /= static_cast<double>(d.points(mode).size());
        auto& dst = mode == LoadMode::UniaxialTension       ? m.tension
                    : mode == LoadMode::UniaxialCompression ? m.compression
                                                            : m.shear;
        dst.assign(d.points(mode).size(), mean);
    }
    const ModeR2 r2 = r_squared(m, d);
    EXPECT_NEAR(*r2.tension, 0.0, 1e-14);
    EXPECT_NEAR(*r2.compression, 0.0, 1e-14);
    EXPECT_NEAR(*r2.shear, 0.0, 1e-14);
}

TEST(RSquared, NeoHookeCannotMatchMooneyRivlinData) {
    const Dataset d = generate_synthetic(ParamVector::mooney_rivlin(1, 1));
    const ModeR2 r2 = r_squared(ParamVector::mooney_rivlin(2, 0), d);
    EXPECT_TRUE(*r2.tension < 1.0 || *r2.compression < 1.0 || *r2.shear < 1.0);
}

TEST(RSquared, ConstantProtocolIsAbsent) {
    Dataset d;
    d.tension = {{1.0, 0.0}, {1.1, 0.0}};
    d.shear = {{0.0, 0.0}, {0.1, 0.2}};
    const ModeR2 r2 = r_squared(ParamVector::mooney_rivlin(1, 1), d);
    EXPECT_FALSE(r2.tension.has_value());
    EXPECT_FALSE(r2.compression.has_value());
    EXPECT_TRUE(r2.shear.has_value());
}
