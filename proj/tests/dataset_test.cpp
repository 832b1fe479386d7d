#include <gtest/gtest.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>

#include "mort/dataset.hpp"
#include "test_support.hpp"

using namespace mort;

namespace {

class ManifestTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = std::filesystem::temp_directory_path() /
               ("mort_manifest_" + std::to_string(::getpid()));
        std::filesystem::create_directories(dir_);
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    std::string write(const char* name, const std::string& content) {
        const std::string p = (dir_ / name).string();
        std::ofstream(p) << content;
        return p;
    }

    std::filesystem::path dir_;
};

TEST_F(ManifestTest, EmptyFileRejected) {
    const std::string p = write("empty.tsv", "");
    try {
        load_manifest(p);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
        EXPECT_NE(std::string(e.what()).find("no rows"), std::string::npos);
    }
}

TEST_F(ManifestTest, ThreeRowsSingleType) {
    const std::string p = write("ok.tsv",
                                "#mort-manifest v1 K=1\n"
                                "img/a.pgm\tcat\t0\n"
                                "img/b.pgm\tcat\t0\n"
                                "img/c.pgm\tdog\t0\tpolicy=enclosure;tau=90\n");
    const manifest m = load_manifest(p);
    EXPECT_EQ(m.k, 1);
    ASSERT_EQ(m.rows.size(), 3u);
    EXPECT_EQ(m.rows[2].policy_params, "policy=enclosure;tau=90");
    EXPECT_EQ(m.resolve(m.rows[0]), dir_ / "img/a.pgm");
    const auto samples = group_samples(m);
    ASSERT_EQ(samples.size(), 3u);
    EXPECT_EQ(samples[0].sample_id, "img/a.pgm");
    EXPECT_EQ(samples[2].label, "dog");
}

TEST_F(ManifestTest, TypeIndexOutOfRange) {
    const std::string p = write("range.tsv",
                                "#mort-manifest v1 K=2\n"
                                "a.pgm\tcat\t0\n"
                                "b.pgm\tcat\t2\n");
    try {
        load_manifest(p);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
        EXPECT_NE(std::string(e.what()).find("type_index out of range"), std::string::npos);
    }
}

TEST_F(ManifestTest, OutOfOrderTypesRejected) {
    const std::string p = write("order.tsv",
                                "#mort-manifest v1 K=2\n"
                                "a.pgm\tcat\t0\n"
                                "b.pgm\tcat\t1\n"
                                "c.pgm\tdog\t1\n");
    try {
        load_manifest(p);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
    }
}

TEST_F(ManifestTest, IncompleteSampleRejected) {
    const std::string p = write("incomplete.tsv",
                                "#mort-manifest v1 K=2\n"
                                "a.pgm\tcat\t0\n");
    try {
        load_manifest(p);
        FAIL() << "expected parse_error";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::parse_error);
    }
}

TEST_F(ManifestTest, MissingFile) {
    try {
        load_manifest((dir_ / "absent.tsv").string());
        FAIL() << "expected missing_file";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::missing_file);
    }
}

TEST_F(ManifestTest, GroupsMultiTypeSamples) {
    const std::string p = write("k2.tsv",
                                "#mort-manifest v1 K=2\n"
                                "a0.pgm\tcat\t0\n"
                                "a1.pgm\tcat\t1\n"
                                "b0.pgm\tdog\t0\n"
                                "b1.pgm\tdog\t1\n");
    const manifest m = load_manifest(p);
    const auto samples = group_samples(m);
    ASSERT_EQ(samples.size(), 2u);
    EXPECT_EQ(samples[0].rows.size(), 2u);
    EXPECT_EQ(samples[0].sample_id, "a0.pgm");
    EXPECT_EQ(samples[1].rows[1]->image_path, "b1.pgm");
}

TEST(SynthShape, Deterministic) {
    synth_spec spec;
    spec.rng_seed = 99;
    spec.canvas = 96;
    spec.n_interior_patches = 3;
    const auto [m1, s1] = synth_shape(spec);
    const auto [m2, s2] = synth_shape(spec);
    EXPECT_TRUE(m1 == m2);
    EXPECT_TRUE(s1 == s2);
}

TEST(SynthShape, ZeroPatchesMeansDarkSource) {
    synth_spec spec;
    spec.rng_seed = 4;
    spec.canvas = 80;
    spec.n_interior_patches = 0;
    const auto [mask, src] = synth_shape(spec);
    for (uint8_t v : src) EXPECT_EQ(v, 0);
    const auto labels =
        segment_patches(filled_support(mask), src, {patch_policy_kind::threshold, 128});
    for (patch_kind k : labels.kinds) EXPECT_EQ(k, patch_kind::complementary);
}

// Component-count oracle: one outer component, requested number of interior
// regions.
TEST(SynthShape, ComponentCountsMatchSpec) {
    synth_spec spec;
    spec.rng_seed = 123;
    spec.canvas = 256;
    spec.n_interior_patches = 4;
    const auto [mask, src] = synth_shape(spec);

    const int outer = testsup::count_components_4(mask.width, mask.height,
                                                  [&](int x, int y) { return mask.is_set(x, y); });
    EXPECT_EQ(outer, 1);
    const int bright = testsup::count_components_4(
        mask.width, mask.height, [&](int x, int y) { return src.at(x, y) >= 128; });
    EXPECT_EQ(bright, 4);
    // bright regions strictly inside the mask
    for (int y = 0; y < mask.height; ++y)
        for (int x = 0; x < mask.width; ++x)
            if (src.at(x, y) >= 128) ASSERT_TRUE(mask.is_set(x, y));
}

TEST(SynthShape, InfeasibleSpecsRejected) {
    synth_spec spec;
    spec.rng_seed = 1;
    spec.canvas = 32; // below the 64-pixel minimum
    try {
        synth_shape(spec);
        FAIL() << "expected spec_infeasible";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::spec_infeasible);
    }
    spec.canvas = 64;
    spec.n_interior_patches = 200; // cannot be placed disjointly
    try {
        synth_shape(spec);
        FAIL() << "expected spec_infeasible";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::spec_infeasible);
    }
}

TEST(SynthShape, FamiliesDiffer) {
    synth_spec spec;
    spec.rng_seed = 5;
    spec.canvas = 96;
    spec.n_interior_patches = 0;
    spec.family = contour_family::blob;
    const auto [blob, bs] = synth_shape(spec);
    spec.family = contour_family::leafoid;
    const auto [leaf, ls] = synth_shape(spec);
    EXPECT_FALSE(blob == leaf);
}

TEST(TransformMask, TranslateRoundTripBitExact) {
    auto [mask, src] = testsup::make_shape(31, 96, 2);
    const auto [moved, msrc] = transform_mask(mask, src, geo_op::translate(5, -3));
    const auto [back, bsrc] = transform_mask(moved, msrc, geo_op::translate(-5, 3));
    EXPECT_TRUE(mask == back);
    EXPECT_TRUE(src == bsrc);
}

TEST(TransformMask, QuarterTurnsCompose) {
    auto [mask, src] = testsup::make_shape(37, 80, 3);
    binary_mask cur = mask;
    gray_grid cur_src = src;
    for (int i = 0; i < 4; ++i) {
        auto [next, nsrc] = transform_mask(cur, cur_src, geo_op::rotate(90));
        cur = std::move(next);
        cur_src = std::move(nsrc);
    }
    EXPECT_TRUE(cur == mask);
    EXPECT_TRUE(cur_src == src);
}

TEST(TransformMask, IntegerUpscaleQuadruplesArea) {
    auto [mask, src] = testsup::make_shape(41, 80, 2);
    const auto [scaled, ssrc] = transform_mask(mask, src, geo_op::scale(2.0));
    EXPECT_EQ(scaled.foreground_count, 4 * mask.foreground_count);
    EXPECT_EQ(scaled.width, 2 * mask.width);
}

TEST(TransformMask, ArbitraryRotationPreservesRoughArea) {
    auto [mask, src] = testsup::make_shape(43, 96, 2);
    const auto [rot, rsrc] = transform_mask(mask, src, geo_op::rotate(37.0));
    const double ratio =
        static_cast<double>(rot.foreground_count) / static_cast<double>(mask.foreground_count);
    EXPECT_GT(ratio, 0.95);
    EXPECT_LT(ratio, 1.05);
}

} // namespace
