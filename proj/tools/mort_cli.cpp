// mort: batch CLI for the Multi-Orientation Region Transform pipeline.
//
// Subcommands:
//   extract     images -> MORTDESC descriptor files
//   classify    1NN classification of a query manifest against a gallery
//   bench       repeated-split 1NN evaluation with match timing
//   invariance  rotation/translation/scale audit of one image
//   synth       generate a synthetic patchy-shape dataset
//
// Exit codes: 0 success, 1 validation failure, 2 I/O failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "mort/mort.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

struct run_config {
    int points = 128;
    int orders = 10;
    int threshold = 128;
    int tau = -1; // patch threshold; -1 = follow --threshold
    std::string policy = "threshold";
    bool normalize_area = true;
    uint64_t seed = 42;
    int reps = 1000;
    int model_per_class = 3;

    int effective_tau() const { return tau >= 0 ? tau : threshold; }
};

int env_threads() {
    const char* v = std::getenv("MORT_THREADS");
    if (v == nullptr || *v == '\0') return mort::resolve_threads(0);
    return mort::resolve_threads(std::atoi(v));
}

void add_pipeline_flags(CLI::App* cmd, run_config& cfg) {
    cmd->add_option("--points", cfg.points, "contour samples N (power of two)")
        ->check(CLI::Range(4, 4096));
    cmd->add_option("--orders", cfg.orders, "descriptor orders M");
    cmd->add_option("--threshold", cfg.threshold, "binarization threshold")
        ->check(CLI::Range(0, 255));
    cmd->add_option("--tau", cfg.tau, "patch threshold (defaults to --threshold)")
        ->check(CLI::Range(0, 255));
    cmd->add_option("--policy", cfg.policy, "patch policy: threshold | enclosure")
        ->check(CLI::IsMember({"threshold", "enclosure"}));
    cmd->add_option("--normalize-area", cfg.normalize_area,
                    "divide coefficients by shape area (scale invariance)");
    cmd->add_option("--seed", cfg.seed, "random seed");
}

mort::patch_policy row_policy(const run_config& cfg, const std::string& params) {
    mort::patch_policy policy;
    policy.kind = cfg.policy == "enclosure" ? mort::patch_policy_kind::enclosure
                                            : mort::patch_policy_kind::threshold;
    policy.tau = cfg.effective_tau();
    if (params.empty()) return policy;
    size_t start = 0;
    while (start < params.size()) {
        size_t end = params.find(';', start);
        if (end == std::string::npos) end = params.size();
        const std::string kv = params.substr(start, end - start);
        const size_t eq = kv.find('=');
        if (eq == std::string::npos)
            mort::raise(mort::errc::parse_error, "bad policy parameter '" + kv + "'");
        const std::string key = kv.substr(0, eq), value = kv.substr(eq + 1);
        if (key == "policy") {
            if (value == "threshold")
                policy.kind = mort::patch_policy_kind::threshold;
            else if (value == "enclosure")
                policy.kind = mort::patch_policy_kind::enclosure;
            else
                mort::raise(mort::errc::parse_error, "bad policy '" + value + "'");
        } else if (key == "tau") {
            policy.tau = std::atoi(value.c_str());
            if (policy.tau < 0 || policy.tau > 255)
                mort::raise(mort::errc::parse_error, "tau out of range: " + value);
        } else {
            mort::raise(mort::errc::parse_error, "unknown policy parameter '" + key + "'");
        }
        start = end + 1;
    }
    return policy;
}

mort::descriptor_set extract_sample(const mort::manifest& man, const mort::manifest_sample& sample,
                                    const run_config& cfg) {
    mort::descriptor_set set;
    set.label = sample.label;
    set.sample_id = sample.sample_id;
    for (const mort::manifest_row* row : sample.rows) {
        const mort::gray_grid gray = mort::read_image(man.resolve(*row).string());
        const mort::binary_mask mask = mort::binarize(gray, cfg.threshold);
        set.pairs.push_back(mort::extract_descriptor(mask, gray, row_policy(cfg, row->policy_params),
                                                     cfg.points, cfg.orders, cfg.normalize_area));
    }
    return set;
}

struct sample_error {
    std::string sample_id;
    std::string what;
    bool io = false;
};

/// Extract all samples of a manifest, parallel across samples. Failures are
/// collected per sample in manifest order.
std::vector<mort::descriptor_set> extract_all(const mort::manifest& man, const run_config& cfg,
                                              std::vector<sample_error>& errors) {
    const auto samples = mort::group_samples(man);
    std::vector<mort::descriptor_set> sets(samples.size());
    std::vector<sample_error> errs(samples.size());
    std::vector<uint8_t> failed(samples.size(), 0);
    mort::parallel_for(static_cast<int>(samples.size()), env_threads(), [&](int i) {
        try {
            sets[i] = extract_sample(man, samples[i], cfg);
        } catch (const mort::error& e) {
            failed[i] = 1;
            errs[i] = {samples[i].sample_id, e.what(),
                       e.code() == mort::errc::missing_file || e.code() == mort::errc::io_error};
        }
    });
    std::vector<mort::descriptor_set> ok;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (failed[i])
            errors.push_back(errs[i]);
        else
            ok.push_back(std::move(sets[i]));
    }
    return ok;
}

int exit_code_for(const mort::error& e) {
    switch (e.code()) {
        case mort::errc::missing_file:
        case mort::errc::io_error: return 2;
        default: return 1;
    }
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) mort::raise(mort::errc::io_error, path + ": cannot open for writing");
    os << content;
    if (!os) mort::raise(mort::errc::io_error, path + ": write failed");
}

void emit_report(const std::string& out_path, const ordered_json& doc) {
    const std::string text = doc.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text(out_path, text);
}

std::string sanitize_id(const std::string& id) {
    std::string s = fs::path(id).stem().string();
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    return s;
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

int cmd_extract(const std::string& manifest_path, const std::string& out_dir,
                const std::string& dump_labels, const run_config& cfg) {
    const mort::manifest man = mort::load_manifest(manifest_path);
    const auto samples = mort::group_samples(man);
    fs::create_directories(out_dir);

    // reject output-name collisions up front
    {
        std::vector<std::string> names;
        for (const auto& s : samples) names.push_back(sanitize_id(s.sample_id));
        std::vector<std::string> sorted = names;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            mort::raise(mort::errc::parse_error,
                        "sample ids collide after sanitization; rename inputs");
    }

    std::vector<sample_error> errors(samples.size());
    std::vector<uint8_t> failed(samples.size(), 0);
    mort::parallel_for(static_cast<int>(samples.size()), env_threads(), [&](int i) {
        const auto& sample = samples[i];
        try {
            const mort::descriptor_set set = extract_sample(man, sample, cfg);
            const std::string out =
                (fs::path(out_dir) / (sanitize_id(sample.sample_id) + ".mortdesc")).string();
            mort::write_descriptor_file(out, set.pairs);
            if (!dump_labels.empty()) {
                // debug export of the first row's label map
                const mort::manifest_row& row = *sample.rows.front();
                const mort::gray_grid gray = mort::read_image(man.resolve(row).string());
                auto [cropped, source] =
                    mort::crop_to_foreground(mort::binarize(gray, cfg.threshold), gray);
                const mort::binary_mask support = mort::filled_support(cropped);
                const auto labels = mort::segment_patches(
                    support, source, row_policy(cfg, row.policy_params));
                fs::create_directories(dump_labels);
                const std::string stem = sanitize_id(sample.sample_id);
                mort::export_label_map((fs::path(dump_labels) / (stem + "_labels.pgm")).string(),
                                       (fs::path(dump_labels) / (stem + "_labels.txt")).string(),
                                       labels);
            }
        } catch (const mort::error& e) {
            failed[i] = 1;
            errors[i] = {sample.sample_id, e.what(),
                         e.code() == mort::errc::missing_file || e.code() == mort::errc::io_error};
        }
    });

    bool any_io = false;
    int nfail = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        if (!failed[i]) continue;
        ++nfail;
        any_io |= errors[i].io;
        std::cerr << "error: " << errors[i].sample_id << ": " << errors[i].what << "\n";
    }
    if (nfail > 0) {
        std::cerr << nfail << " of " << samples.size() << " samples failed\n";
        return any_io ? 2 : 1;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// classify
// ---------------------------------------------------------------------------

int cmd_classify(const std::string& gallery_path, const std::string& query_path,
                 const std::string& out_path, const run_config& cfg) {
    const mort::manifest gman = mort::load_manifest(gallery_path);
    const mort::manifest qman = mort::load_manifest(query_path);

    std::vector<sample_error> errors;
    const auto gallery_sets = extract_all(gman, cfg, errors);
    const auto query_sets = extract_all(qman, cfg, errors);
    if (!errors.empty()) {
        bool any_io = false;
        for (const auto& e : errors) {
            any_io |= e.io;
            std::cerr << "error: " << e.sample_id << ": " << e.what << "\n";
        }
        return any_io ? 2 : 1;
    }

    const mort::gallery g = mort::gallery::from_entries(gallery_sets);
    ordered_json queries = ordered_json::array();
    int correct = 0;
    for (const auto& q : query_sets) {
        const mort::match_result r = mort::classify_1nn(q, g);
        correct += (r.label == q.label);
        queries.push_back(ordered_json{{"sample_id", q.sample_id},
                                       {"label", q.label},
                                       {"predicted", r.label},
                                       {"distance", r.distance}});
    }
    ordered_json doc;
    doc["accuracy"] =
        query_sets.empty() ? 0.0 : static_cast<double>(correct) / query_sets.size();
    doc["gallery_count"] = g.entries.size();
    doc["query_count"] = query_sets.size();
    doc["queries"] = std::move(queries);
    emit_report(out_path, doc);
    return 0;
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

int cmd_bench(const std::string& manifest_path, const std::string& out_path,
              const std::string& csv_path, bool no_timing, const run_config& cfg) {
    const mort::manifest man = mort::load_manifest(manifest_path);
    std::vector<sample_error> errors;
    const auto sets = extract_all(man, cfg, errors);
    if (!errors.empty()) {
        bool any_io = false;
        for (const auto& e : errors) {
            any_io |= e.io;
            std::cerr << "error: " << e.sample_id << ": " << e.what << "\n";
        }
        return any_io ? 2 : 1;
    }

    const mort::eval_report report =
        mort::evaluate(sets, cfg.model_per_class, cfg.reps, cfg.seed, env_threads());

    ordered_json doc;
    doc["accuracy_mean"] = report.accuracy_mean;
    doc["accuracy_per_rep"] = report.accuracy_per_rep;
    if (!no_timing) {
        doc["match_time_mean_ms"] = report.match_time_mean_ms;
        doc["match_time_median_ms"] = report.match_time_median_ms;
    }
    doc["repetitions"] = report.repetitions;
    doc["seed"] = report.seed;
    doc["config"] = ordered_json{{"manifest", manifest_path},
                                 {"points", cfg.points},
                                 {"orders", cfg.orders},
                                 {"threshold", cfg.threshold},
                                 {"tau", cfg.effective_tau()},
                                 {"policy", cfg.policy},
                                 {"normalize_area", cfg.normalize_area},
                                 {"model_per_class", cfg.model_per_class},
                                 {"k", man.k},
                                 {"classes", report.class_count},
                                 {"samples", report.sample_count}};
    emit_report(out_path, doc);

    if (!csv_path.empty()) {
        std::string csv = "rep,accuracy\n";
        char buf[64];
        for (size_t i = 0; i < report.accuracy_per_rep.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, report.accuracy_per_rep[i]);
            csv += buf;
        }
        write_text(csv_path, csv);
    }
    return 0;
}

// ---------------------------------------------------------------------------
// invariance
// ---------------------------------------------------------------------------

struct audit_check {
    std::string name;
    double deviation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

double rel_l1(const mort::mort_descriptor& ref, const mort::mort_descriptor& other) {
    double diff = 0.0, mass = 0.0;
    const auto acc = [&](const mort::matrix& a, const mort::matrix& b) {
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c) {
                diff += std::abs(a.at(r, c) - b.at(r, c));
                mass += std::abs(a.at(r, c));
            }
    };
    acc(ref.psi_interior, other.psi_interior);
    acc(ref.psi_complementary, other.psi_complementary);
    return mass > 0.0 ? diff / mass : diff;
}

int cmd_invariance(const std::string& image_path, const std::string& out_path,
                   const run_config& cfg) {
    const mort::gray_grid gray = mort::read_image(image_path);
    const mort::binary_mask mask = mort::binarize(gray, cfg.threshold);
    const mort::patch_policy policy = row_policy(cfg, "");
    const int threads = env_threads();

    const mort::mort_matrices base_mt =
        mort::extract_matrices(mask, gray, policy, cfg.points, threads);
    const mort::mort_descriptor base =
        mort::extract_descriptor(mask, gray, policy, cfg.points, cfg.orders, true, threads);

    std::vector<audit_check> checks;

    // integer translations: coefficient matrices must be bit-identical
    for (const auto [dx, dy] : {std::pair{7, 13}, std::pair{-5, 3}, std::pair{12, -9}}) {
        auto [tm, ts] = mort::transform_mask(mask, gray, mort::geo_op::translate(dx, dy));
        const mort::mort_matrices mt = mort::extract_matrices(tm, ts, policy, cfg.points, threads);
        double dev = 0.0;
        if (!(mt == base_mt)) {
            for (size_t i = 0; i < base_mt.mt_interior.cells().size(); ++i)
                dev = std::max(dev, std::abs(base_mt.mt_interior.cells()[i] -
                                             mt.mt_interior.cells()[i]));
            for (size_t i = 0; i < base_mt.mt_complementary.cells().size(); ++i)
                dev = std::max(dev, std::abs(base_mt.mt_complementary.cells()[i] -
                                             mt.mt_complementary.cells()[i]));
            if (dev == 0.0) dev = 1.0; // structural mismatch
        }
        checks.push_back({"translate(" + std::to_string(dx) + "," + std::to_string(dy) + ")", dev,
                          0.0, dev <= 0.0});
    }

    // exact quarter-turn rotations
    for (const int deg : {90, 180, 270}) {
        auto [rm, rs] = mort::transform_mask(mask, gray, mort::geo_op::rotate(deg));
        const mort::mort_descriptor d =
            mort::extract_descriptor(rm, rs, policy, cfg.points, cfg.orders, true, threads);
        const double dev = rel_l1(base, d);
        checks.push_back({"rotate(" + std::to_string(deg) + ")", dev, 1e-6, dev < 1e-6});
    }

    // arbitrary rotations with nearest-neighbor resampling
    for (const int deg : {17, 37, 143}) {
        auto [rm, rs] = mort::transform_mask(mask, gray, mort::geo_op::rotate(deg));
        const mort::mort_descriptor d =
            mort::extract_descriptor(rm, rs, policy, cfg.points, cfg.orders, true, threads);
        const double dev = rel_l1(base, d);
        checks.push_back({"rotate(" + std::to_string(deg) + ")", dev, 0.05, dev < 0.05});
    }

    // integer upscale: raw entries above 1 scale by gamma^2, normalized
    // descriptors agree
    {
        auto [sm, ss] = mort::transform_mask(mask, gray, mort::geo_op::scale(2.0));
        const mort::mort_matrices mt = mort::extract_matrices(sm, ss, policy, cfg.points, threads);
        double worst = 0.0;
        const auto scan = [&](const mort::matrix& a, const mort::matrix& b) {
            for (int r = 0; r < a.rows(); ++r)
                for (int c = 0; c < a.cols(); ++c)
                    if (a.at(r, c) > 1.0)
                        worst = std::max(worst, std::abs(b.at(r, c) / a.at(r, c) - 4.0) / 4.0);
        };
        scan(base_mt.mt_interior, mt.mt_interior);
        scan(base_mt.mt_complementary, mt.mt_complementary);
        checks.push_back({"scale(2) raw gamma^2", worst, 0.05, worst < 0.05});

        const mort::mort_descriptor d =
            mort::extract_descriptor(sm, ss, policy, cfg.points, cfg.orders, true, threads);
        const double dev = rel_l1(base, d);
        checks.push_back({"scale(2) normalized descriptor", dev, 0.05, dev < 0.05});
    }

    // row-0 structure
    {
        double dev = 0.0;
        for (int i = 1; i < base_mt.n; ++i) {
            dev = std::max(dev, std::abs(base_mt.mt_interior.at(0, i) - base_mt.mt_interior.at(0, 0)));
            dev = std::max(dev, std::abs(base_mt.mt_complementary.at(0, i) -
                                         base_mt.mt_complementary.at(0, 0)));
        }
        checks.push_back({"row0 constant", dev, 0.0, dev <= 0.0});

        const double ref = std::max(base_mt.mt_interior.at(0, 0), base_mt.mt_complementary.at(0, 0)) /
                           static_cast<double>(base_mt.area);
        double desc_row0 = 0.0;
        for (int k = 0; k < base.m; ++k) {
            desc_row0 = std::max(desc_row0, base.psi_interior.at(0, k));
            desc_row0 = std::max(desc_row0, base.psi_complementary.at(0, k));
        }
        const double rel = ref > 0.0 ? desc_row0 / ref : desc_row0;
        checks.push_back({"row0 descriptor residual", rel, 1e-9, rel <= 1e-9});
    }

    bool all_pass = true;
    ordered_json jchecks = ordered_json::array();
    for (const auto& c : checks) {
        all_pass &= c.pass;
        jchecks.push_back(ordered_json{{"name", c.name},
                                       {"deviation", c.deviation},
                                       {"tolerance", c.tolerance},
                                       {"pass", c.pass}});
    }
    ordered_json doc;
    doc["image"] = image_path;
    doc["points"] = cfg.points;
    doc["orders"] = cfg.orders;
    doc["checks"] = std::move(jchecks);
    doc["pass"] = all_pass;
    emit_report(out_path, doc);
    return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

int cmd_synth(const std::string& out_dir, int classes, int per_class, const std::string& family,
              int canvas, int patches, uint64_t seed, const std::string& style) {
    fs::create_directories(out_dir);
    const bool vein = style == "vein";

    std::string manifest_text = "#mort-manifest v1 K=1\n";
    for (int c = 0; c < classes; ++c) {
        mort::rng_stream class_stream(seed, 1000 + static_cast<uint64_t>(c));
        mort::synth_spec spec;
        spec.rng_seed = class_stream.next();
        spec.canvas = canvas;
        spec.n_interior_patches = patches;
        spec.family = family == "mixed" ? static_cast<mort::contour_family>(c % 3)
                                        : mort::family_from_name(family);
        const auto [base_mask, base_src] = mort::synth_shape(spec);

        for (int s = 0; s < per_class; ++s) {
            mort::rng_stream sample_stream(seed, 77000 + static_cast<uint64_t>(c) * 997 + s);
            mort::binary_mask mask = base_mask;
            mort::gray_grid src = base_src;
            if (s > 0) {
                // intra-class variation: random rotation plus a small shift
                const double angle = sample_stream.uniform(0.0, 360.0);
                auto [rm, rs] = mort::transform_mask(mask, src, mort::geo_op::rotate(angle));
                const int dx = static_cast<int>(sample_stream.bounded(9)) - 4;
                const int dy = static_cast<int>(sample_stream.bounded(9)) - 4;
                auto [tm, ts] = mort::transform_mask(rm, rs, mort::geo_op::translate(dx, dy));
                mask = std::move(tm);
                src = std::move(ts);
            }

            mort::gray_grid img(mask.width, mask.height, 0);
            if (vein) {
                // body at 100, outer contour line and patch outlines at 255;
                // pair with --threshold <=100 and per-row enclosure params
                const mort::binary_mask support = mort::filled_support(mask);
                for (int y = 0; y < mask.height; ++y)
                    for (int x = 0; x < mask.width; ++x) {
                        if (!support.is_set(x, y)) continue;
                        img.at(x, y) = 100;
                        if (mort::detail::on_support_boundary(support, x, y)) img.at(x, y) = 255;
                    }
                // ellipse outlines: bright pixels with a dark 4-neighbor
                for (int y = 0; y < mask.height; ++y)
                    for (int x = 0; x < mask.width; ++x) {
                        if (src.at(x, y) < 128) continue;
                        bool edge = false;
                        constexpr int ddx[4] = {1, -1, 0, 0};
                        constexpr int ddy[4] = {0, 0, 1, -1};
                        for (int k = 0; k < 4; ++k) {
                            const int nx = x + ddx[k], ny = y + ddy[k];
                            if (!src.in_bounds(nx, ny) || src.at(nx, ny) < 128) edge = true;
                        }
                        if (edge) img.at(x, y) = 255;
                    }
            } else {
                // spots style: bright membrane with dark elliptical spots
                const mort::binary_mask support = mort::filled_support(mask);
                for (int y = 0; y < mask.height; ++y)
                    for (int x = 0; x < mask.width; ++x) {
                        if (!support.is_set(x, y)) continue;
                        img.at(x, y) = src.at(x, y) >= 128 ? 60 : 200;
                    }
            }

            char name[64];
            std::snprintf(name, sizeof name, "class%02d_s%02d.pgm", c, s);
            mort::write_pgm((fs::path(out_dir) / name).string(), img);
            manifest_text += std::string(name) + "\tclass" + std::to_string(c) + "\t0";
            if (vein) manifest_text += "\tpolicy=enclosure;tau=128";
            manifest_text += "\n";
        }
    }
    write_text((fs::path(out_dir) / "manifest.tsv").string(), manifest_text);
    std::cout << "wrote " << classes * per_class << " images to " << out_dir << "\n";
    if (vein)
        std::cout << "use with: --threshold 80 (rows carry policy=enclosure;tau=128)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-Orientation Region Transform toolkit"};
    app.require_subcommand(1);
    run_config cfg;

    // extract
    auto* extract = app.add_subcommand("extract", "compute MORTDESC files for a manifest");
    std::string ex_manifest, ex_out, ex_dump_labels;
    extract->add_option("--manifest", ex_manifest, "dataset manifest")->required();
    extract->add_option("--out", ex_out, "output directory")->required();
    extract->add_option("--dump-labels", ex_dump_labels, "debug: export patch label maps here");
    add_pipeline_flags(extract, cfg);

    // classify
    auto* classify = app.add_subcommand("classify", "1NN classification of queries vs gallery");
    std::string cl_gallery, cl_query, cl_out;
    classify->add_option("--gallery", cl_gallery, "gallery manifest")->required();
    classify->add_option("--query", cl_query, "query manifest")->required();
    classify->add_option("--out", cl_out, "report path (stdout when omitted)");
    add_pipeline_flags(classify, cfg);

    // bench
    auto* bench = app.add_subcommand("bench", "repeated-split 1NN evaluation");
    std::string be_manifest, be_out, be_csv;
    bool be_no_timing = false;
    bench->add_option("--manifest", be_manifest, "dataset manifest")->required();
    bench->add_option("--out", be_out, "report path (stdout when omitted)");
    bench->add_option("--csv", be_csv, "per-repetition accuracy CSV");
    bench->add_option("--reps", cfg.reps, "repetitions")->check(CLI::PositiveNumber);
    bench->add_option("--model-per-class", cfg.model_per_class, "model samples per class")
        ->check(CLI::PositiveNumber);
    bench->add_flag("--no-timing", be_no_timing,
                    "omit wall-clock timing fields for byte-reproducible output");
    add_pipeline_flags(bench, cfg);

    // invariance
    auto* invariance = app.add_subcommand("invariance", "rotation/translation/scale audit");
    std::string in_image, in_out;
    invariance->add_option("--image", in_image, "input image")->required();
    invariance->add_option("--out", in_out, "report path (stdout when omitted)");
    add_pipeline_flags(invariance, cfg);

    // synth
    auto* synth = app.add_subcommand("synth", "generate a synthetic patchy dataset");
    std::string sy_out, sy_family = "mixed", sy_style = "spots";
    int sy_classes = 10, sy_per_class = 8, sy_canvas = 128, sy_patches = 3;
    synth->add_option("--out", sy_out, "output directory")->required();
    synth->add_option("--classes", sy_classes, "class count")->check(CLI::PositiveNumber);
    synth->add_option("--samples-per-class", sy_per_class, "samples per class")
        ->check(CLI::PositiveNumber);
    synth->add_option("--family", sy_family, "blob | leafoid | wingoid | mixed")
        ->check(CLI::IsMember({"blob", "leafoid", "wingoid", "mixed"}));
    synth->add_option("--canvas", sy_canvas, "canvas size in pixels")->check(CLI::Range(64, 4096));
    synth->add_option("--patches", sy_patches, "interior patches per shape")
        ->check(CLI::Range(0, 64));
    synth->add_option("--seed", cfg.seed, "random seed");
    synth->add_option("--style", sy_style, "image style: spots | vein")
        ->check(CLI::IsMember({"spots", "vein"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(extract))
            return cmd_extract(ex_manifest, ex_out, ex_dump_labels, cfg);
        if (app.got_subcommand(classify)) return cmd_classify(cl_gallery, cl_query, cl_out, cfg);
        if (app.got_subcommand(bench))
            return cmd_bench(be_manifest, be_out, be_csv, be_no_timing, cfg);
        if (app.got_subcommand(invariance)) return cmd_invariance(in_image, in_out, cfg);
        if (app.got_subcommand(synth))
            return cmd_synth(sy_out, sy_classes, sy_per_class, sy_family, sy_canvas, sy_patches,
                             cfg.seed, sy_style);
    } catch (const mort::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
