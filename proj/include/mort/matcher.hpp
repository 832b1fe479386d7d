#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mort/error.hpp"
#include "mort/parallel.hpp"
#include "mort/rng.hpp"
#include "mort/transform.hpp"

namespace mort {

/// One labeled sample: K descriptor pairs. Pair k of one set is only ever
/// compared against pair k of another.
struct descriptor_set {
    std::vector<mort_descriptor> pairs;
    std::string label;
    std::string sample_id;
};

struct gallery {
    std::vector<descriptor_set> entries;
    std::vector<std::string> class_list; // sorted distinct labels

    static gallery from_entries(std::vector<descriptor_set> entries) {
        gallery g;
        std::set<std::string> labels;
        for (const auto& e : entries) labels.insert(e.label);
        g.class_list.assign(labels.begin(), labels.end());
        g.entries = std::move(entries);
        return g;
    }
};

namespace detail {

inline void check_pair_dims(const mort_descriptor& a, const mort_descriptor& b) {
    if (a.psi_interior.rows() != b.psi_interior.rows() ||
        a.psi_interior.cols() != b.psi_interior.cols() ||
        a.psi_complementary.rows() != b.psi_complementary.rows() ||
        a.psi_complementary.cols() != b.psi_complementary.cols())
        raise(errc::dimension_mismatch, "descriptor matrices have different dimensions");
}

inline double l1_diff(const matrix& a, const matrix& b) {
    const auto& ca = a.cells();
    const auto& cb = b.cells();
    double sum = 0.0;
    for (size_t i = 0; i < ca.size(); ++i) sum += std::abs(ca[i] - cb[i]);
    return sum;
}

} // namespace detail

/// L1 distance between two descriptor sets: the entrywise absolute
/// differences of the interior and complementary matrices, summed over all K
/// pairs (pair k against pair k).
inline double descriptor_distance(const descriptor_set& a, const descriptor_set& b) {
    if (a.pairs.size() != b.pairs.size())
        raise(errc::pair_count_mismatch, "descriptor sets have different pair counts");
    double sum = 0.0;
    for (size_t k = 0; k < a.pairs.size(); ++k) {
        detail::check_pair_dims(a.pairs[k], b.pairs[k]);
        sum += detail::l1_diff(a.pairs[k].psi_interior, b.pairs[k].psi_interior);
        sum += detail::l1_diff(a.pairs[k].psi_complementary, b.pairs[k].psi_complementary);
    }
    return sum;
}

struct match_result {
    std::string label;
    double distance = 0.0;
};

namespace detail {

/// Tie rule for 1NN: smaller distance first, then lexicographically smaller
/// label, then smaller sample_id. Makes results independent of entry order.
inline bool closer(double d, const descriptor_set& e, double best_d, const descriptor_set* best) {
    if (best == nullptr || d < best_d) return true;
    if (d > best_d) return false;
    if (e.label != best->label) return e.label < best->label;
    return e.sample_id < best->sample_id;
}

inline match_result nearest_neighbor(const descriptor_set& query,
                                     const std::vector<const descriptor_set*>& entries) {
    if (entries.empty()) raise(errc::empty_gallery, "gallery has no entries");
    const descriptor_set* best = nullptr;
    double best_dist = 0.0;
    for (const descriptor_set* e : entries) {
        const double d = descriptor_distance(query, *e);
        if (closer(d, *e, best_dist, best)) {
            best = e;
            best_dist = d;
        }
    }
    return {best->label, best_dist};
}

} // namespace detail

inline match_result classify_1nn(const descriptor_set& query, const gallery& g) {
    std::vector<const descriptor_set*> entries;
    entries.reserve(g.entries.size());
    for (const auto& e : g.entries) entries.push_back(&e);
    return detail::nearest_neighbor(query, entries);
}

/// Log-scale histogram of per-call durations. Bucket resolution is about
/// 0.6% relative, enough to read a stable median without storing every
/// sample.
class timing_histogram {
public:
    static constexpr int bucket_count = 2048;
    static constexpr double buckets_per_octave = 128.0;

    void record(int64_t ns) {
        if (ns < 0) ns = 0;
        int b = static_cast<int>(buckets_per_octave * std::log2(static_cast<double>(ns) + 1.0));
        b = std::clamp(b, 0, bucket_count - 1);
        ++counts_[b];
        total_ns_ += ns;
        ++samples_;
    }

    void merge(const timing_histogram& other) {
        for (int i = 0; i < bucket_count; ++i) counts_[i] += other.counts_[i];
        total_ns_ += other.total_ns_;
        samples_ += other.samples_;
    }

    int64_t samples() const { return samples_; }

    double mean_ms() const {
        return samples_ == 0 ? 0.0
                             : static_cast<double>(total_ns_) / static_cast<double>(samples_) / 1e6;
    }

    double median_ms() const {
        if (samples_ == 0) return 0.0;
        int64_t half = (samples_ + 1) / 2, seen = 0;
        for (int i = 0; i < bucket_count; ++i) {
            seen += counts_[i];
            if (seen >= half) {
                // geometric bucket midpoint
                const double lo = std::exp2(i / buckets_per_octave) - 1.0;
                const double hi = std::exp2((i + 1) / buckets_per_octave) - 1.0;
                return (lo + hi) / 2.0 / 1e6;
            }
        }
        return 0.0;
    }

private:
    std::vector<int64_t> counts_ = std::vector<int64_t>(bucket_count, 0);
    int64_t total_ns_ = 0;
    int64_t samples_ = 0;
};

/// Accuracy statistics from repeated-split 1NN evaluation.
struct eval_report {
    double accuracy_mean = 0.0;
    std::vector<double> accuracy_per_rep;
    double match_time_median_ms = 0.0;
    double match_time_mean_ms = 0.0;
    int repetitions = 0;
    uint64_t seed = 0;
    int model_per_class = 0;
    int sample_count = 0;
    int class_count = 0;
};

/// Repeated-split 1NN evaluation. Each repetition draws model_per_class
/// samples per class uniformly without replacement from a counter-based
/// stream keyed by (seed, repetition), classifies the remaining samples
/// against that model set, and records the accuracy. Per-repetition streams
/// are independent, so distributing repetitions across threads cannot change
/// any accuracy value. descriptor_distance calls are timed individually.
inline eval_report evaluate(const std::vector<descriptor_set>& samples, int model_per_class,
                            int repetitions, uint64_t seed, int threads = 1) {
    if (repetitions < 1) raise(errc::insufficient_samples, "repetitions must be >= 1");

    std::map<std::string, std::vector<int>> by_class;
    for (int i = 0; i < static_cast<int>(samples.size()); ++i)
        by_class[samples[i].label].push_back(i);
    for (const auto& [label, idx] : by_class)
        if (static_cast<int>(idx.size()) <= model_per_class)
            raise(errc::insufficient_samples,
                  "class '" + label + "' needs more than " + std::to_string(model_per_class) +
                      " samples");

    eval_report report;
    report.repetitions = repetitions;
    report.seed = seed;
    report.model_per_class = model_per_class;
    report.sample_count = static_cast<int>(samples.size());
    report.class_count = static_cast<int>(by_class.size());
    report.accuracy_per_rep.assign(repetitions, 0.0);

    const int nthreads = std::max(1, threads);
    std::vector<timing_histogram> timings(nthreads);

    parallel_for_workers(repetitions, nthreads, [&](int worker, int rep) {
        timing_histogram& timing = timings[worker];

        rng_stream stream(seed, static_cast<uint64_t>(rep));
        std::vector<const descriptor_set*> model;
        std::vector<int> queries;
        for (const auto& [label, idx] : by_class) {
            std::vector<int> pool = idx;
            for (int j = 0; j < model_per_class; ++j) {
                const uint64_t pick =
                    static_cast<uint64_t>(j) + stream.bounded(pool.size() - static_cast<size_t>(j));
                std::swap(pool[j], pool[pick]);
            }
            for (int j = 0; j < static_cast<int>(pool.size()); ++j) {
                if (j < model_per_class)
                    model.push_back(&samples[pool[j]]);
                else
                    queries.push_back(pool[j]);
            }
        }
        std::sort(queries.begin(), queries.end());

        int correct = 0;
        for (int qi : queries) {
            const descriptor_set& query = samples[qi];
            const descriptor_set* best = nullptr;
            double best_dist = 0.0;
            for (const descriptor_set* e : model) {
                const auto t0 = std::chrono::steady_clock::now();
                const double d = descriptor_distance(query, *e);
                const auto t1 = std::chrono::steady_clock::now();
                timing.record(
                    std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
                if (detail::closer(d, *e, best_dist, best)) {
                    best = e;
                    best_dist = d;
                }
            }
            if (best->label == query.label) ++correct;
        }
        report.accuracy_per_rep[rep] =
            queries.empty() ? 0.0 : static_cast<double>(correct) / queries.size();
    });

    double acc_sum = 0.0;
    for (double a : report.accuracy_per_rep) acc_sum += a;
    report.accuracy_mean = acc_sum / repetitions;

    timing_histogram merged;
    for (const auto& t : timings) merged.merge(t);
    report.match_time_mean_ms = merged.mean_ms();
    report.match_time_median_ms = merged.median_ms();
    return report;
}

} // namespace mort
