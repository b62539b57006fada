#include "vpa/features.hpp"

#include "vpa/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace vpa {

namespace {

constexpr const char* kStage = "features";
constexpr const char* kCsvHeader = "id,label,age,sex,J1,J3,J5,S1,S3,S5,S11,PVI";

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

double parse_number(const std::string& s, int line_no) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw Error(kStage, "row " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
}

std::string format_number(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Quartile by linear interpolation of order statistics.
double quantile(const std::vector<double>& sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

GroupSummary summarize(const std::vector<double>& values) {
    GroupSummary g;
    g.n = static_cast<int>(values.size());
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(g.n);
    g.mean = 0.0;
    for (double v : values) g.mean += v;
    g.mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - g.mean) * (v - g.mean);
    g.sd = g.n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    g.min = sorted.front();
    g.max = sorted.back();
    g.median = quantile(sorted, 0.5);
    g.q1 = quantile(sorted, 0.25);
    g.q3 = quantile(sorted, 0.75);

    const double iqr = g.q3 - g.q1;
    double h = 0.9 * std::min(g.sd, iqr / 1.34) * std::pow(n, -0.2);
    if (h <= 0.0) h = 0.9 * g.sd * std::pow(n, -0.2);
    if (h <= 0.0) h = std::max(1e-6, 1e-3 * std::max(1.0, std::abs(g.mean)));
    g.bandwidth = h;
    return g;
}

void kde_on_grid(GroupSummary& g, const std::vector<double>& values,
                 const Eigen::VectorXd& grid) {
    g.kde_grid = grid;
    g.kde_density = Eigen::VectorXd::Zero(grid.size());
    const double norm =
        1.0 / (static_cast<double>(values.size()) * g.bandwidth * std::sqrt(2.0 * std::numbers::pi));
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
        double acc = 0.0;
        for (double v : values) {
            const double z = (grid[i] - v) / g.bandwidth;
            acc += std::exp(-0.5 * z * z);
        }
        g.kde_density[i] = acc * norm;
    }
}

}  // namespace

const char* to_string(Label l) { return l == Label::ALS ? "ALS" : "HC"; }
const char* to_string(Sex s) { return s == Sex::M ? "M" : "F"; }

Eigen::VectorXd extract_features(const Waveform& w, const ExtractConfig& cfg) {
    const F0Contour contour = estimate_f0(w, cfg.f0);
    const CycleSegmentation seg = segment_wm_pc(w, contour, cfg.seg);
    const PerturbationReport p =
        perturbation_report(seg.periods, seg.amplitudes, cfg.rap);
    const PviResult v = compute_pvi(contour, cfg.pvi);
    Eigen::VectorXd f(kFeatureCount);
    f << p.j_loc, p.j_rap, p.j_ppq5, p.s_loc, p.s_apq3, p.s_apq5, p.s_apq11, v.pvi;
    return f;
}

Dataset age_correct(const Dataset& d) {
    std::vector<const FeatureVector*> hc;
    for (const FeatureVector& r : d.rows)
        if (r.label == Label::HC) hc.push_back(&r);
    if (hc.size() < 2) throw Error(kStage, "need at least 2 healthy samples for age correction");

    double age_mean = 0.0;
    for (const auto* r : hc) age_mean += r->age;
    age_mean /= static_cast<double>(hc.size());
    double age_var = 0.0;
    for (const auto* r : hc) age_var += (r->age - age_mean) * (r->age - age_mean);
    if (age_var <= 0.0) throw Error(kStage, "healthy group has constant age");

    Dataset out = d;
    const int dim = d.rows.empty() ? 0 : static_cast<int>(d.rows.front().features.size());
    for (int f = 0; f < dim; ++f) {
        double cov = 0.0;
        for (const auto* r : hc) cov += (r->age - age_mean) * r->features[f];
        const double beta = cov / age_var;
        for (FeatureVector& r : out.rows) r.features[f] -= beta * (r.age - age_mean);
    }
    out.provenance = "age-corrected";
    return out;
}

void write_csv(const Dataset& d, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(kStage, "cannot open '" + path + "' for writing");
    out << kCsvHeader << "\n";
    for (const FeatureVector& r : d.rows) {
        if (r.features.size() != kFeatureCount)
            throw Error(kStage, "sample '" + r.id + "' does not have 8 features");
        out << r.id << ',' << to_string(r.label) << ',' << format_number(r.age) << ','
            << to_string(r.sex);
        for (Eigen::Index f = 0; f < r.features.size(); ++f)
            out << ',' << format_number(r.features[f]);
        out << "\n";
    }
    if (!out) throw Error(kStage, "write failed for '" + path + "'");
}

Dataset read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(kStage, "cannot open file '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(kStage, "empty file '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw Error(kStage, "unexpected header; want '" + std::string(kCsvHeader) + "'");

    Dataset d;
    std::set<std::string> seen;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        std::string col;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (!line.empty() && line.back() == ',') cols.push_back("");
        if (cols.size() != 4 + kFeatureCount)
            throw Error(kStage, "row " + std::to_string(line_no) + ": expected " +
                                    std::to_string(4 + kFeatureCount) + " columns, got " +
                                    std::to_string(cols.size()));

        FeatureVector r;
        r.id = cols[0];
        if (r.id.empty()) throw Error(kStage, "row " + std::to_string(line_no) + ": empty id");
        if (!seen.insert(r.id).second)
            throw Error(kStage, "row " + std::to_string(line_no) + ": duplicate id '" + r.id + "'");
        const std::string label = lower(cols[1]);
        if (label == "als")
            r.label = Label::ALS;
        else if (label == "hc")
            r.label = Label::HC;
        else
            throw Error(kStage, "row " + std::to_string(line_no) + ": unknown label '" + cols[1] + "'");
        r.age = parse_number(cols[2], line_no);
        const std::string sex = lower(cols[3]);
        if (sex == "m")
            r.sex = Sex::M;
        else if (sex == "f")
            r.sex = Sex::F;
        else
            throw Error(kStage, "row " + std::to_string(line_no) + ": unknown sex '" + cols[3] + "'");
        r.features.resize(kFeatureCount);
        for (int f = 0; f < kFeatureCount; ++f)
            r.features[f] = parse_number(cols[4 + f], line_no);
        d.rows.push_back(std::move(r));
    }
    return d;
}

GroupStats group_stats(const Dataset& d, int feature_index) {
    if (feature_index < 0 || feature_index >= kFeatureCount)
        throw Error(kStage, "feature index out of range");
    std::vector<double> hc, als;
    for (const FeatureVector& r : d.rows) {
        if (static_cast<int>(r.features.size()) <= feature_index)
            throw Error(kStage, "sample '" + r.id + "' lacks feature " +
                                    std::to_string(feature_index));
        (r.label == Label::HC ? hc : als).push_back(r.features[feature_index]);
    }
    if (hc.empty() || als.empty()) throw Error(kStage, "both groups must be non-empty");

    GroupStats s{summarize(hc), summarize(als)};
    const double h = std::max(s.hc.bandwidth, s.als.bandwidth);
    const double lo = std::min(s.hc.min, s.als.min) - 3.0 * h;
    const double hi = std::max(s.hc.max, s.als.max) + 3.0 * h;
    const Eigen::VectorXd grid = Eigen::VectorXd::LinSpaced(200, lo, hi);
    kde_on_grid(s.hc, hc, grid);
    kde_on_grid(s.als, als, grid);
    return s;
}

}  // namespace vpa
