#include "iscat/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include <json.hpp>

#include "iscat/errors.hpp"

namespace iscat {

namespace {

using nlohmann::json;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kDenseSamples = 4096;

// Radial function of `shape` about `center` sampled on the uniform dense
// grid. When the centers coincide this is plain evaluation; otherwise the
// boundary is swept, converted to polar about the new center and
// reinterpolated (valid while the boundary stays star-shaped about it).
std::vector<double> radial_about(const TrigShape& shape, const Vec2& center) {
    std::vector<double> out(kDenseSamples);
    const Vec2 offset = shape.center() - center;
    if (offset.norm() < 1e-13) {
        for (int i = 0; i < kDenseSamples; ++i) {
            out[i] = shape.radial().evaluate(kTwoPi * i / kDenseSamples);
        }
        return out;
    }
    // sweep the boundary, record (angle, radius) about the new center
    const int sweep = 4 * kDenseSamples;
    std::vector<double> ang(sweep), rad(sweep);
    for (int i = 0; i < sweep; ++i) {
        const double t = kTwoPi * i / sweep;
        const double r = shape.radial().evaluate(t);
        const Vec2 p = offset + Vec2{r * std::cos(t), r * std::sin(t)};
        ang[i] = std::atan2(p.y, p.x);
        rad[i] = p.norm();
    }
    // unwrap to a monotone angle sequence starting at ang[0]
    for (int i = 1; i < sweep; ++i) {
        while (ang[i] < ang[i - 1]) ang[i] += kTwoPi;
    }
    if (ang[sweep - 1] - ang[0] > kTwoPi + 1e-9) {
        throw DomainError("radial_about: boundary not star-shaped about requested center");
    }
    for (int i = 0; i < kDenseSamples; ++i) {
        double phi = kTwoPi * i / kDenseSamples;
        while (phi < ang[0]) phi += kTwoPi;
        auto it = std::lower_bound(ang.begin(), ang.end(), phi);
        std::size_t hi = std::min<std::size_t>(it - ang.begin(), sweep - 1);
        std::size_t lo = hi == 0 ? sweep - 1 : hi - 1;
        double a0 = ang[lo], a1 = ang[hi];
        if (hi == 0) a0 -= kTwoPi;
        const double w = (a1 > a0) ? (phi - a0) / (a1 - a0) : 0.0;
        out[i] = (1.0 - w) * rad[lo] + w * rad[hi];
    }
    return out;
}

double restricted_relative_error(const TrigShape& truth, const TrigShape& rec,
                                 const Vec2* theta) {
    // coefficient-space fast path for the unrestricted metric
    if (theta == nullptr && (truth.center() - rec.center()).norm() < 1e-13) {
        return l2_norm(truth.radial() - rec.radial()) / l2_norm(truth.radial());
    }
    const std::vector<double> rt = radial_about(truth, truth.center());
    std::vector<double> rr;
    try {
        rr = radial_about(rec, truth.center());
    } catch (const DomainError&) {
        // badly distorted iterates may not be star-shaped about the truth
        // center; fall back to comparing the radial functions in their own
        // parameterizations (center offset then counts as shape error only
        // approximately)
        rr.resize(kDenseSamples);
        for (int i = 0; i < kDenseSamples; ++i) {
            rr[i] = rec.radial().evaluate(kTwoPi * i / kDenseSamples);
        }
    }
    double num = 0.0, den = 0.0;
    for (int i = 0; i < kDenseSamples; ++i) {
        const double t = kTwoPi * i / kDenseSamples;
        if (theta != nullptr) {
            const Vec2 radial{std::cos(t), std::sin(t)};
            if (radial.dot(*theta) >= 0.0) continue;
        }
        const double d = rt[i] - rr[i];
        num += d * d;
        den += rt[i] * rt[i];
    }
    if (den == 0.0) throw DomainError("shape error: empty restriction");
    return std::sqrt(num / den);
}

} // namespace

double shape_relative_error(const TrigShape& truth, const TrigShape& reconstructed) {
    return restricted_relative_error(truth, reconstructed, nullptr);
}

double shape_relative_error_illuminated(const TrigShape& truth,
                                        const TrigShape& reconstructed,
                                        const Vec2& theta) {
    return restricted_relative_error(truth, reconstructed, &theta);
}

void write_report(const ReconstructionTrace& trace, const Dataset& data,
                  const std::string& out_dir) {
    if (trace.rows.empty()) throw DomainError("write_report: empty trace");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);

    {
        std::ofstream out(out_dir + "/iterations.tsv");
        if (!out) throw IoError("write_report: cannot write iterations.tsv");
        out << "n\tk\tj\tresidual_norm\tstep_norm\tsigma_min\n";
        out.precision(12);
        for (const TraceRow& row : trace.rows) {
            out << row.freq_index << '\t' << row.k << '\t' << row.iter << '\t'
                << row.residual_norm << '\t' << row.step_norm << '\t'
                << row.sigma_min << '\n';
        }
    }
    {
        std::ofstream out(out_dir + "/sigma.tsv");
        if (!out) throw IoError("write_report: cannot write sigma.tsv");
        out << "n\tk\tsigma_min\n";
        out.precision(12);
        int last_n = -1;
        for (const TraceRow& row : trace.rows) {
            if (row.freq_index != last_n) {
                out << row.freq_index << '\t' << row.k << '\t' << row.sigma_min << '\n';
                last_n = row.freq_index;
            }
        }
    }
    {
        std::ofstream out(out_dir + "/errors.tsv");
        if (!out) throw IoError("write_report: cannot write errors.tsv");
        out.precision(12);
        if (data.truth) {
            out << "n\tk\terror_rel\terror_observable\terror_illuminated\n";
            for (const ShapeRecord& rec : trace.shapes) {
                const TrigShape truncated(data.truth->center(),
                                          project(data.truth->radial(), rec.shape.degree()));
                out << rec.freq_index << '\t' << rec.k << '\t'
                    << shape_relative_error(*data.truth, rec.shape) << '\t'
                    << shape_relative_error(truncated, rec.shape) << '\t'
                    << shape_relative_error_illuminated(*data.truth, rec.shape, data.theta)
                    << '\n';
            }
        } else {
            out << "n\tk\n";
            for (const ShapeRecord& rec : trace.shapes) {
                out << rec.freq_index << '\t' << rec.k << '\n';
            }
        }
    }
}

void save_trace(const ReconstructionTrace& trace, const std::string& path) {
    json doc;
    json rows = json::array();
    for (const TraceRow& row : trace.rows) {
        rows.push_back({{"n", row.freq_index},
                        {"k", row.k},
                        {"j", row.iter},
                        {"residual_norm", row.residual_norm},
                        {"step_norm", row.step_norm},
                        {"sigma_min", row.sigma_min}});
    }
    doc["rows"] = rows;
    json shapes = json::array();
    for (const ShapeRecord& rec : trace.shapes) {
        json r;
        r["n"] = rec.freq_index;
        r["k"] = rec.k;
        r["shape"] = json::parse(shape_to_json(rec.shape));
        shapes.push_back(std::move(r));
    }
    doc["shapes"] = shapes;
    std::ofstream out(path);
    if (!out) throw IoError("save_trace: cannot open " + path);
    out << doc.dump(1) << "\n";
}

ReconstructionTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_trace: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(std::string("load_trace: ") + e.what());
    }
    try {
        ReconstructionTrace trace;
        for (const auto& row : doc.at("rows")) {
            trace.rows.push_back(TraceRow{row.at("n").get<int>(), row.at("k").get<double>(),
                                          row.at("j").get<int>(),
                                          row.at("residual_norm").get<double>(),
                                          row.at("step_norm").get<double>(),
                                          row.at("sigma_min").get<double>()});
        }
        for (const auto& rec : doc.at("shapes")) {
            trace.shapes.push_back(ShapeRecord{rec.at("n").get<int>(),
                                               rec.at("k").get<double>(),
                                               shape_from_json(rec.at("shape").dump())});
        }
        return trace;
    } catch (const json::exception& e) {
        throw IoError(std::string("load_trace: malformed document: ") + e.what());
    }
}

} // namespace iscat
