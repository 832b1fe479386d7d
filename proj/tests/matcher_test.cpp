#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <initializer_list>

#include "mort/matcher.hpp"
#include "mort/rng.hpp"

using namespace mort;

namespace {

mort_descriptor descriptor_from(std::initializer_list<double> values, int rows, int cols,
                                bool interior_only = false) {
    mort_descriptor d;
    d.m = cols;
    d.n = cols * 2;
    d.psi_interior = matrix(rows, cols, 0.0);
    d.psi_complementary = matrix(rows, cols, 0.0);
    auto it = values.begin();
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) d.psi_interior.at(r, c) = *it++;
    if (!interior_only)
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) d.psi_complementary.at(r, c) = *it++;
    return d;
}

descriptor_set random_set(uint64_t seed, const std::string& label, const std::string& id,
                          int k = 1, int rows = 8, int cols = 10) {
    descriptor_set s;
    s.label = label;
    s.sample_id = id;
    rng_stream stream(seed, 23);
    for (int p = 0; p < k; ++p) {
        mort_descriptor d;
        d.m = cols;
        d.n = cols * 4;
        d.psi_interior = matrix(rows, cols, 0.0);
        d.psi_complementary = matrix(rows, cols, 0.0);
        for (int r = 0; r < rows; ++r)
            for (int c = 0; c < cols; ++c) {
                d.psi_interior.at(r, c) = stream.uniform(0.0, 10.0);
                d.psi_complementary.at(r, c) = stream.uniform(0.0, 10.0);
            }
        s.pairs.push_back(std::move(d));
    }
    return s;
}

TEST(DescriptorDistance, HandComputedExample) {
    descriptor_set a, b;
    a.pairs.push_back(descriptor_from({1, 2, 3, 4, 7, 7, 7, 7}, 2, 2));
    b.pairs.push_back(descriptor_from({0, 2, 3, 6, 7, 7, 7, 7}, 2, 2));
    EXPECT_DOUBLE_EQ(descriptor_distance(a, b), 3.0);
}

TEST(DescriptorDistance, IdentityAndSymmetry) {
    const descriptor_set a = random_set(1, "x", "a");
    const descriptor_set b = random_set(2, "y", "b");
    EXPECT_EQ(descriptor_distance(a, a), 0.0);
    EXPECT_EQ(descriptor_distance(a, b), descriptor_distance(b, a));
    EXPECT_GT(descriptor_distance(a, b), 0.0);
}

TEST(DescriptorDistance, PairCountAndDimensionErrors) {
    descriptor_set a = random_set(1, "x", "a", 2);
    descriptor_set b = random_set(2, "y", "b", 1);
    try {
        descriptor_distance(a, b);
        FAIL() << "expected pair_count_mismatch";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::pair_count_mismatch);
    }
    descriptor_set c = random_set(3, "z", "c", 2, 8, 10);
    descriptor_set d = random_set(4, "w", "d", 2, 8, 9);
    try {
        descriptor_distance(c, d);
        FAIL() << "expected dimension_mismatch";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::dimension_mismatch);
    }
}

TEST(Classify1nn, ExactCopyWinsAtZero) {
    std::vector<descriptor_set> entries;
    entries.push_back(random_set(1, "a", "s1"));
    entries.push_back(random_set(2, "b", "s2"));
    entries.push_back(random_set(3, "c", "s3"));
    const gallery g = gallery::from_entries(entries);
    const match_result r = classify_1nn(entries[1], g);
    EXPECT_EQ(r.label, "b");
    EXPECT_EQ(r.distance, 0.0);
}

TEST(Classify1nn, TieBreaksOnLabel) {
    descriptor_set query = random_set(5, "q", "query");
    descriptor_set ga = query, gb = query;
    ga.label = "b";
    ga.sample_id = "1";
    gb.label = "a";
    gb.sample_id = "2";
    const gallery g = gallery::from_entries({ga, gb});
    EXPECT_EQ(classify_1nn(query, g).label, "a");
}

TEST(Classify1nn, InvariantUnderGalleryPermutation) {
    const descriptor_set query = random_set(9, "q", "query");
    std::vector<descriptor_set> entries;
    for (uint64_t i = 0; i < 6; ++i)
        entries.push_back(random_set(20 + i, "c" + std::to_string(i % 3), "s" + std::to_string(i)));
    const match_result fwd = classify_1nn(query, gallery::from_entries(entries));
    std::reverse(entries.begin(), entries.end());
    const match_result rev = classify_1nn(query, gallery::from_entries(entries));
    EXPECT_EQ(fwd.label, rev.label);
    EXPECT_EQ(fwd.distance, rev.distance);
}

TEST(Classify1nn, HandComputedArgmin) {
    // three gallery entries at hand-computed distances 5.0 / 2.5 / 7.1
    descriptor_set query;
    query.pairs.push_back(descriptor_from({0, 0, 0, 0}, 2, 2, true));
    auto entry = [&](double mass, const char* label) {
        descriptor_set s;
        s.label = label;
        s.sample_id = label;
        s.pairs.push_back(descriptor_from({mass, 0, 0, 0}, 2, 2, true));
        return s;
    };
    const gallery g =
        gallery::from_entries({entry(5.0, "far"), entry(2.5, "near"), entry(7.1, "farther")});
    const match_result r = classify_1nn(query, g);
    EXPECT_EQ(r.label, "near");
    EXPECT_DOUBLE_EQ(r.distance, 2.5);
}

TEST(Classify1nn, EmptyGallery) {
    const descriptor_set query = random_set(1, "q", "q");
    try {
        classify_1nn(query, gallery{});
        FAIL() << "expected empty_gallery";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::empty_gallery);
    }
}

// Metric properties on random triples.
TEST(DescriptorDistance, MetricPropertiesOnRandomTriples) {
    for (uint64_t i = 0; i < 200; ++i) {
        const descriptor_set a = random_set(3 * i, "a", "a");
        const descriptor_set b = random_set(3 * i + 1, "b", "b");
        const descriptor_set c = random_set(3 * i + 2, "c", "c");
        const double ab = descriptor_distance(a, b);
        const double bc = descriptor_distance(b, c);
        const double ac = descriptor_distance(a, c);
        ASSERT_GE(ab, 0.0);
        ASSERT_EQ(ab, descriptor_distance(b, a));
        ASSERT_LE(ac, ab + bc + 1e-12 * (ab + bc));
    }
}

std::vector<descriptor_set> toy_dataset(int classes, int per_class, uint64_t seed) {
    std::vector<descriptor_set> samples;
    for (int c = 0; c < classes; ++c)
        for (int s = 0; s < per_class; ++s) {
            descriptor_set d = random_set(seed + 100 * c + s, "class" + std::to_string(c),
                                          "c" + std::to_string(c) + "_s" + std::to_string(s));
            samples.push_back(std::move(d));
        }
    return samples;
}

TEST(Evaluate, SameSeedSameAccuracies) {
    const auto samples = toy_dataset(4, 5, 7);
    const eval_report r1 = evaluate(samples, 2, 25, 42);
    const eval_report r2 = evaluate(samples, 2, 25, 42);
    EXPECT_EQ(r1.accuracy_per_rep, r2.accuracy_per_rep);
    EXPECT_EQ(r1.accuracy_mean, r2.accuracy_mean);
}

TEST(Evaluate, ThreadCountDoesNotChangeAccuracies) {
    const auto samples = toy_dataset(4, 5, 11);
    const eval_report r1 = evaluate(samples, 2, 40, 9, 1);
    const eval_report r4 = evaluate(samples, 2, 40, 9, 4);
    EXPECT_EQ(r1.accuracy_per_rep, r4.accuracy_per_rep);
}

TEST(Evaluate, DifferentSeedsDiffer) {
    const auto samples = toy_dataset(4, 6, 13);
    const eval_report r1 = evaluate(samples, 2, 30, 1);
    const eval_report r2 = evaluate(samples, 2, 30, 2);
    EXPECT_NE(r1.accuracy_per_rep, r2.accuracy_per_rep);
}

TEST(Evaluate, DuplicateDescriptorsClassifyPerfectly) {
    // every sample of a class is identical: each query has a zero-distance
    // model entry of its own class
    std::vector<descriptor_set> samples;
    for (int c = 0; c < 3; ++c) {
        const descriptor_set proto = random_set(500 + c, "class" + std::to_string(c), "proto");
        for (int s = 0; s < 4; ++s) {
            descriptor_set copy = proto;
            copy.sample_id = "c" + std::to_string(c) + "_s" + std::to_string(s);
            samples.push_back(std::move(copy));
        }
    }
    const eval_report r = evaluate(samples, 2, 10, 3);
    EXPECT_DOUBLE_EQ(r.accuracy_mean, 1.0);
    for (double a : r.accuracy_per_rep) EXPECT_DOUBLE_EQ(a, 1.0);
}

TEST(Evaluate, InsufficientSamples) {
    const auto samples = toy_dataset(3, 2, 17);
    try {
        evaluate(samples, 2, 5, 1);
        FAIL() << "expected insufficient_samples";
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::insufficient_samples);
    }
}

TEST(Evaluate, ReportShape) {
    const auto samples = toy_dataset(3, 4, 19);
    const eval_report r = evaluate(samples, 1, 12, 5);
    EXPECT_EQ(r.repetitions, 12);
    EXPECT_EQ(static_cast<int>(r.accuracy_per_rep.size()), 12);
    EXPECT_EQ(r.seed, 5u);
    EXPECT_EQ(r.class_count, 3);
    EXPECT_EQ(r.sample_count, 12);
    for (double a : r.accuracy_per_rep) {
        EXPECT_GE(a, 0.0);
        EXPECT_LE(a, 1.0);
    }
    EXPECT_GT(r.match_time_mean_ms, 0.0);
    EXPECT_GT(r.match_time_median_ms, 0.0);
}

} // namespace
