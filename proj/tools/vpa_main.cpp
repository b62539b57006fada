#include "vpa/cohort.hpp"
#include "vpa/error.hpp"
#include "vpa/features.hpp"
#include "vpa/ml.hpp"
#include "vpa/periods.hpp"
#include "vpa/pitch.hpp"
#include "vpa/signal.hpp"
#include "vpa/synth.hpp"
#include "vpa/vibrato.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using nlohmann::json;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("VPA_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw vpa::Error("cli", "cannot open '" + path + "' for writing");
    return out;
}

void emit_json(const json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        auto out = open_out(path);
        out << j.dump(2) << "\n";
    }
}

int feature_index(const std::string& name) {
    for (int i = 0; i < vpa::kFeatureCount; ++i) {
        std::string want = vpa::kFeatureNames[i];
        if (name.size() == want.size() &&
            std::equal(name.begin(), name.end(), want.begin(), [](char a, char b) {
                return std::toupper(static_cast<unsigned char>(a)) == std::toupper(static_cast<unsigned char>(b));
            }))
            return i;
    }
    throw vpa::Error("cli", "unknown feature '" + name + "'");
}

std::vector<int> parse_subset(const std::string& spec) {
    std::vector<int> subset;
    std::string token;
    std::stringstream ss(spec);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        subset.push_back(feature_index(token));
    }
    if (subset.empty()) throw vpa::Error("cli", "empty feature subset");
    return subset;
}

struct InputFlags {
    std::string path;
    double trim_head_s = 0.0, trim_tail_s = 0.0;

    void attach(CLI::App* app) {
        app->add_option("-i,--input", path, "input WAV file")->required();
        app->add_option("--trim-head", trim_head_s, "seconds removed from the start");
        app->add_option("--trim-tail", trim_tail_s, "seconds removed from the end");
    }
    vpa::Waveform load() const {
        vpa::Waveform w = vpa::load_wav(path);
        if (trim_head_s != 0.0 || trim_tail_s != 0.0)
            w = vpa::trim_edges(w, trim_head_s, trim_tail_s);
        return w;
    }
};

struct F0Flags {
    vpa::F0Config cfg;

    void attach(CLI::App* app) {
        app->add_option("--f-min", cfg.f_min_hz, "pitch search floor, Hz (default 50)");
        app->add_option("--f-max", cfg.f_max_hz, "pitch search ceiling, Hz (default 400)");
        app->add_option("--hop", cfg.hop_s, "contour hop, seconds (default 0.005)");
        app->add_option("--frame", cfg.frame_s, "analysis frame, seconds (default 0.040)");
        app->add_option("--voicing-threshold", cfg.voicing_threshold,
                        "normalized-correlation voicing threshold (default 0.5)");
    }
};

struct SegFlags {
    vpa::SegmentationConfig cfg;

    void attach(CLI::App* app) {
        app->add_option("--refine-frac", cfg.refine_window_frac,
                        "boundary search window as a fraction of the nominal period (default 0.15)");
        app->add_option("--min-cycles", cfg.min_cycles, "minimum usable cycles (default 30)");
    }
};

struct PviFlags {
    vpa::PviConfig cfg;

    void attach(CLI::App* app) {
        app->add_option("--band-lo", cfg.band_lo_hz, "modulation band floor, Hz (default 9)");
        app->add_option("--band-hi", cfg.band_hi_hz, "modulation band ceiling, Hz (default 14)");
        app->add_option("--welch-win", cfg.welch_win_s, "Welch window, seconds (default 1)");
        app->add_option("--welch-overlap", cfg.welch_overlap, "Welch overlap fraction (default 0.95)");
    }
};

json report_summary(const vpa::EvalReport& r) {
    return {{"r_avg", r.r_avg},
            {"acc", {{"mean", r.acc_mean}, {"sd", r.acc_sd}}},
            {"sens", {{"mean", r.sens_mean}, {"sd", r.sens_sd}}},
            {"spec", {{"mean", r.spec_mean}, {"sd", r.spec_sd}}},
            {"undefined", {{"sens", r.undefined_sens}, {"spec", r.undefined_spec}}}};
}

void print_report_table(std::ostream& os, const std::string& head,
                        const vpa::EvalReport& r) {
    char line[160];
    std::snprintf(line, sizeof line, "%-24s %7.2f  %6.2f±%-5.2f %6.2f±%-5.2f %6.2f±%-5.2f",
                  head.c_str(), r.r_avg, r.acc_mean, r.acc_sd, r.sens_mean, r.sens_sd,
                  r.spec_mean, r.spec_sd);
    os << line << "\n";
}

std::string subset_names(const std::vector<int>& subset) {
    std::string s;
    for (size_t i = 0; i < subset.size(); ++i) {
        if (i) s += ",";
        s += vpa::kFeatureNames[subset[i]];
    }
    return s;
}

// --- subcommand bodies -----------------------------------------------------

struct SynthCmd {
    vpa::SynthSpec spec;
    std::string out_path, truth_path;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("synth", "generate a synthetic sustained vowel");
        app->add_option("--f0", spec.f0_hz, "fundamental frequency, Hz (default 120)");
        app->add_option("--duration", spec.duration_s, "seconds (default 4)");
        app->add_option("--rate", spec.sample_rate, "sample rate, Hz (default 44100)");
        app->add_option("--jitter", spec.jitter_pct, "cycle-length noise sd, percent");
        app->add_option("--shimmer", spec.shimmer_pct, "cycle-amplitude noise sd, percent");
        app->add_option("--vibrato-rate", spec.vibrato_rate_hz, "modulation rate, Hz");
        app->add_option("--vibrato-depth", spec.vibrato_depth, "modulation depth, fraction of f0");
        app->add_option(
            "--snr",
            [this](const CLI::results_t& res) {
                try {
                    spec.noise_snr_db = std::stod(res[0]);
                } catch (const std::exception&) {
                    return false;
                }
                return true;
            },
            "additive noise level, dB SNR (omit for a clean signal)");
        app->add_option("--harmonics", spec.harmonics, "partial count (default 6)");
        app->add_option("--seed", spec.seed, "RNG seed (default $VPA_SEED or 0)");
        app->add_option("-o,--out", out_path, "output WAV path")->required();
        app->add_option("--truth-out", truth_path, "ground-truth CSV path");
    }

    void run() const {
        const vpa::SynthResult r = vpa::synth_voice(spec);
        vpa::write_wav(out_path, r.wave);
        if (!truth_path.empty()) {
            auto out = open_out(truth_path);
            out << "cycle_index,boundary_sample,period_samples,amplitude\n";
            for (Eigen::Index i = 0; i < r.periods.size(); ++i)
                out << i << ',' << r.boundaries[i] << ',' << r.periods[i] << ','
                    << num(r.amplitudes[i]) << "\n";
        }
    }
};

struct F0Cmd {
    InputFlags input;
    F0Flags f0;
    std::string out_path;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("f0", "estimate the fundamental-frequency contour");
        input.attach(app);
        f0.attach(app);
        app->add_option("-o,--out", out_path, "output CSV path (default stdout)");
    }

    void run() const {
        const vpa::F0Contour c = vpa::estimate_f0(input.load(), f0.cfg);
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!out_path.empty()) {
            file = open_out(out_path);
            os = &file;
        }
        *os << "time_s,f0_hz\n";
        for (Eigen::Index m = 0; m < c.values_hz.size(); ++m)
            *os << num(c.start_s + static_cast<double>(m) * c.hop_s) << ','
                << num(c.values_hz[m]) << "\n";
    }
};

struct SegmentCmd {
    InputFlags input;
    F0Flags f0;
    SegFlags seg;
    std::string method = "wm-pc";
    std::string out_path;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("segment", "extract fundamental-period cycles");
        input.attach(app);
        f0.attach(app);
        seg.attach(app);
        app->add_option("--method", method, "wm-pc (phase-constrained) or wm (chained baseline)")
            ->check(CLI::IsMember({"wm-pc", "wm"}));
        app->add_option("-o,--out", out_path, "output CSV path (default stdout)");
    }

    void run() const {
        const vpa::Waveform w = input.load();
        const vpa::F0Contour c = vpa::estimate_f0(w, f0.cfg);
        const vpa::CycleSegmentation s = method == "wm"
                                             ? vpa::segment_wm(w, c, seg.cfg)
                                             : vpa::segment_wm_pc(w, c, seg.cfg);
        std::ofstream file;
        std::ostream* os = &std::cout;
        if (!out_path.empty()) {
            file = open_out(out_path);
            os = &file;
        }
        *os << "boundary_sample,period_samples,amplitude\n";
        for (Eigen::Index i = 0; i < s.periods.size(); ++i)
            *os << s.boundaries[i] << ',' << s.periods[i] << ',' << num(s.amplitudes[i])
                << "\n";
    }
};

struct ExtractCmd {
    InputFlags input;
    F0Flags f0;
    SegFlags seg;
    PviFlags pvi;
    std::string out_path, id, label = "HC", sex = "M";
    double age = 0.0;
    bool classical_rap = false;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("extract", "compute the 8 features of one recording");
        input.attach(app);
        f0.attach(app);
        seg.attach(app);
        pvi.attach(app);
        app->add_option("-o,--out", out_path, "output features CSV")->required();
        app->add_option("--id", id, "speaker id (default: input file stem)");
        app->add_option("--label", label, "HC or ALS (default HC)");
        app->add_option("--age", age, "speaker age, years");
        app->add_option("--sex", sex, "M or F (default M)");
        app->add_flag("--classical-rap", classical_rap,
                      "use the textbook 3-cycle normalization instead of the default");
    }

    void run() const {
        vpa::ExtractConfig cfg{f0.cfg, seg.cfg, pvi.cfg,
                               classical_rap ? vpa::RapVariant::Classical
                                             : vpa::RapVariant::AsPrinted};
        vpa::FeatureVector r;
        r.features = vpa::extract_features(input.load(), cfg);
        r.id = id;
        if (r.id.empty()) {
            std::string stem = input.path;
            if (const auto slash = stem.find_last_of("/\\"); slash != std::string::npos)
                stem = stem.substr(slash + 1);
            if (const auto dot = stem.rfind('.'); dot != std::string::npos)
                stem = stem.substr(0, dot);
            r.id = stem.empty() ? "sample" : stem;
        }
        std::string l = label;
        for (char& ch : l) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        if (l == "ALS")
            r.label = vpa::Label::ALS;
        else if (l == "HC")
            r.label = vpa::Label::HC;
        else
            throw vpa::Error("cli", "label must be HC or ALS");
        if (sex == "M" || sex == "m")
            r.sex = vpa::Sex::M;
        else if (sex == "F" || sex == "f")
            r.sex = vpa::Sex::F;
        else
            throw vpa::Error("cli", "sex must be M or F");
        r.age = age;
        vpa::Dataset d;
        d.rows.push_back(std::move(r));
        vpa::write_csv(d, out_path);
    }
};

struct PviCmd {
    InputFlags input;
    F0Flags f0;
    PviFlags pvi;
    std::string out_path, spectrum_path;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("pvi", "compute the pathological vibrato index");
        input.attach(app);
        f0.attach(app);
        pvi.attach(app);
        app->add_option("-o,--out", out_path, "output JSON path (default stdout)");
        app->add_option("--spectrum-out", spectrum_path, "amplitude-spectrum CSV path");
    }

    void run() const {
        const vpa::F0Contour c = vpa::estimate_f0(input.load(), f0.cfg);
        const vpa::PviResult r = vpa::compute_pvi(c, pvi.cfg);
        emit_json({{"pvi", r.pvi},
                   {"band_lo_hz", pvi.cfg.band_lo_hz},
                   {"band_hi_hz", pvi.cfg.band_hi_hz},
                   {"n_segments", r.spectrum.n_segments}},
                  out_path);
        if (!spectrum_path.empty()) {
            auto out = open_out(spectrum_path);
            out << "freq_hz,amplitude\n";
            for (Eigen::Index k = 0; k < r.spectrum.freqs_hz.size(); ++k)
                out << num(r.spectrum.freqs_hz[k]) << ',' << num(r.spectrum.amplitudes[k])
                    << "\n";
        }
    }
};

struct StatsCmd {
    std::string features_path, feature = "S1", out_path, kde_path;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("stats", "per-group summary of one feature");
        app->add_option("-f,--features", features_path, "features CSV")->required();
        app->add_option("--feature", feature, "feature name (default S1)");
        app->add_option("-o,--out", out_path, "output JSON path (default stdout)");
        app->add_option("--kde-out", kde_path, "density-grid CSV path");
    }

    static json group_json(const vpa::GroupSummary& g) {
        return {{"n", g.n},         {"mean", g.mean},     {"sd", g.sd},
                {"median", g.median}, {"q1", g.q1},       {"q3", g.q3},
                {"min", g.min},     {"max", g.max},       {"kde_bandwidth", g.bandwidth}};
    }

    void run() const {
        const vpa::Dataset d = vpa::read_csv(features_path);
        const int idx = feature_index(feature);
        const vpa::GroupStats s = vpa::group_stats(d, idx);
        emit_json({{"feature", vpa::kFeatureNames[idx]},
                   {"hc", group_json(s.hc)},
                   {"als", group_json(s.als)}},
                  out_path);
        if (!kde_path.empty()) {
            auto out = open_out(kde_path);
            out << "value,hc_density,als_density\n";
            for (Eigen::Index i = 0; i < s.hc.kde_grid.size(); ++i)
                out << num(s.hc.kde_grid[i]) << ',' << num(s.hc.kde_density[i]) << ','
                    << num(s.als.kde_density[i]) << "\n";
        }
    }
};

struct ClassifyCmd {
    std::string features_path, model = "lda", subset_spec, out_path;
    vpa::CvConfig cv;
    bool no_stratify = false;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("classify", "repeated cross-validated evaluation");
        app->add_option("-f,--features", features_path, "features CSV")->required();
        app->add_option("--model", model, "lda or knn")->check(CLI::IsMember({"lda", "knn"}));
        app->add_option("--subset", subset_spec, "comma-separated feature names (default: all)");
        app->add_option("--folds", cv.folds, "fold count (default 7)");
        app->add_option("--repeats", cv.repetitions, "repetition count (default 40)");
        app->add_option("--seed", cv.seed, "base RNG seed (default $VPA_SEED or 0)");
        app->add_option("--knn-k", cv.knn_k, "neighbors per class (default 3)");
        app->add_flag("--no-stratify", no_stratify, "plain random folds instead of stratified");
        app->add_option("-o,--out", out_path, "output JSON path (default stdout)");
    }

    void run() {
        const vpa::Dataset d = vpa::read_csv(features_path);
        cv.stratified = !no_stratify;
        std::vector<int> subset;
        if (subset_spec.empty())
            for (int f = 0; f < vpa::kFeatureCount; ++f) subset.push_back(f);
        else
            subset = parse_subset(subset_spec);
        const vpa::ModelKind kind =
            model == "knn" ? vpa::ModelKind::Knn : vpa::ModelKind::Lda;
        const vpa::EvalReport r = vpa::cross_validate(d, kind, subset, cv);

        json j = report_summary(r);
        j["model"] = model;
        j["subset"] = json::array();
        for (int f : subset) j["subset"].push_back(vpa::kFeatureNames[f]);
        j["folds"] = cv.folds;
        j["repetitions"] = cv.repetitions;
        j["seed"] = cv.seed;
        j["stratified"] = cv.stratified;
        j["per_repetition"] = json::array();
        for (const vpa::Confusion& c : r.per_repetition)
            j["per_repetition"].push_back(
                {{"tp", c.tp}, {"tn", c.tn}, {"fp", c.fp}, {"fn", c.fn}});
        emit_json(j, out_path);

        std::cerr << "model [subset]             R_avg   Acc          Sens         Spec\n";
        print_report_table(std::cerr, model + " [" + subset_names(subset) + "]", r);
    }
};

struct SearchCmd {
    std::string features_path, model = "lda", out_path;
    vpa::CvConfig cv;
    bool no_stratify = false;
    int top = 10;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("search", "exhaustive feature-subset search");
        app->add_option("-f,--features", features_path, "features CSV")->required();
        app->add_option("--model", model, "lda or knn")->check(CLI::IsMember({"lda", "knn"}));
        app->add_option("--folds", cv.folds, "fold count (default 7)");
        app->add_option("--repeats", cv.repetitions, "repetition count (default 40)");
        app->add_option("--seed", cv.seed, "base RNG seed (default $VPA_SEED or 0)");
        app->add_option("--knn-k", cv.knn_k, "neighbors per class (default 3)");
        app->add_flag("--no-stratify", no_stratify, "plain random folds instead of stratified");
        app->add_option("--top", top, "table rows to print (default 10)");
        app->add_option("-o,--out", out_path, "output JSON path (default stdout)");
    }

    void run() {
        const vpa::Dataset d = vpa::read_csv(features_path);
        cv.stratified = !no_stratify;
        const vpa::ModelKind kind =
            model == "knn" ? vpa::ModelKind::Knn : vpa::ModelKind::Lda;
        const auto results = vpa::subset_search(d, kind, cv);

        json j = json::array();
        for (size_t i = 0; i < results.size(); ++i) {
            json entry = report_summary(results[i].report);
            entry["rank"] = i + 1;
            entry["subset"] = json::array();
            for (int f : results[i].features) entry["subset"].push_back(vpa::kFeatureNames[f]);
            j.push_back(std::move(entry));
        }
        emit_json(j, out_path);

        std::cerr << "rank subset                  R_avg   Acc          Sens         Spec\n";
        for (size_t i = 0; i < results.size() && static_cast<int>(i) < top; ++i) {
            char head[64];
            std::snprintf(head, sizeof head, "%-4zu %s", i + 1,
                          subset_names(results[i].features).c_str());
            print_report_table(std::cerr, head, results[i].report);
        }
    }
};

struct AgeCorrectCmd {
    std::string features_path, out_path;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("age-correct",
                                  "remove the healthy-group age trend from every feature");
        app->add_option("-f,--features", features_path, "features CSV")->required();
        app->add_option("-o,--out", out_path, "corrected CSV path")->required();
    }

    void run() const { vpa::write_csv(vpa::age_correct(vpa::read_csv(features_path)), out_path); }
};

struct CohortCmd {
    vpa::CohortSpec spec;
    std::string out_path, informative;
    std::uint64_t seed = 0;
    CLI::App* app = nullptr;

    void attach(CLI::App& root) {
        app = root.add_subcommand("cohort", "generate a synthetic screening cohort CSV");
        app->add_option("--n-hc", spec.n_healthy, "healthy speakers (default 39)");
        app->add_option("--n-als", spec.n_als, "ALS speakers (default 15)");
        app->add_option("--separation", spec.separation,
                        "class mean gap in within-class SDs (default 0)");
        app->add_option("--informative", informative,
                        "features carrying the separation (default: all)");
        app->add_option("--seed", seed, "RNG seed (default $VPA_SEED or 0)");
        app->add_option("-o,--out", out_path, "output CSV path")->required();
    }

    void run() {
        if (!informative.empty()) {
            spec.informative_mask = 0;
            for (int f : parse_subset(informative)) spec.informative_mask |= 1u << f;
        }
        vpa::write_csv(vpa::make_cohort(spec, seed), out_path);
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App root{"sustained-vowel voice analysis toolkit"};
    root.require_subcommand(1);

    SynthCmd synth;
    F0Cmd f0;
    SegmentCmd segment;
    ExtractCmd extract;
    PviCmd pvi;
    StatsCmd stats;
    ClassifyCmd classify;
    SearchCmd search;
    AgeCorrectCmd age_correct;
    CohortCmd cohort;

    synth.spec.seed = default_seed();
    classify.cv.seed = default_seed();
    search.cv.seed = default_seed();
    cohort.seed = default_seed();

    synth.attach(root);
    f0.attach(root);
    segment.attach(root);
    extract.attach(root);
    pvi.attach(root);
    stats.attach(root);
    classify.attach(root);
    search.attach(root);
    age_correct.attach(root);
    cohort.attach(root);

    try {
        root.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return root.exit(e);
        root.exit(e);
        return 2;
    }

    try {
        if (synth.app->parsed()) synth.run();
        if (f0.app->parsed()) f0.run();
        if (segment.app->parsed()) segment.run();
        if (extract.app->parsed()) extract.run();
        if (pvi.app->parsed()) pvi.run();
        if (stats.app->parsed()) stats.run();
        if (classify.app->parsed()) classify.run();
        if (search.app->parsed()) search.run();
        if (age_correct.app->parsed()) age_correct.run();
        if (cohort.app->parsed()) cohort.run();
    } catch (const vpa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
