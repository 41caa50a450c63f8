#include "iscat/dataset.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <json.hpp>

#include "iscat/errors.hpp"

namespace iscat {

using nlohmann::json;

double PortableNormal::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // u1 in (0,1], u2 in [0,1); 53-bit ladder keeps the mapping exact
    const double u1 = ((engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (engine_() >> 11) * 0x1.0p-53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

Dataset simulate(const TrigShape& truth, const FrequencyGrid& grid, const Vec2& theta,
                 int observation_count, double noise_level, std::uint64_t seed,
                 int n_quad) {
    if (noise_level < 0.0 || noise_level >= 1.0) {
        throw DomainError("simulate: noise level must lie in [0, 1)");
    }
    Dataset data{grid, theta, uniform_directions(observation_count),
                 noise_level, seed, "mt19937_64-boxmuller", n_quad, truth, {}, {}};

    PortableNormal rng(seed);
    for (int n = 0; n <= grid.num_steps; ++n) {
        const double k = grid.wavenumber(n);
        FarFieldPattern clean =
            solve_scattering(truth, IncidentWave(k, theta), data.obs_dirs, n_quad);
        if (noise_level == 0.0) {
            data.noisy.push_back(clean);
            data.clean.push_back(std::move(clean));
            continue;
        }
        std::vector<Complex> g(clean.values.size());
        double g_norm = 0.0, u_norm = 0.0;
        for (std::size_t p = 0; p < g.size(); ++p) {
            g[p] = Complex(rng.next(), rng.next());
            g_norm += std::norm(g[p]);
            u_norm += std::norm(clean.values[p]);
        }
        const double scale = noise_level * std::sqrt(u_norm / g_norm);
        std::vector<Complex> noisy_vals = clean.values;
        for (std::size_t p = 0; p < g.size(); ++p) noisy_vals[p] += scale * g[p];
        data.noisy.emplace_back(k, data.obs_dirs, std::move(noisy_vals));
        data.clean.push_back(std::move(clean));
    }
    return data;
}

namespace {

json complex_list(const std::vector<Complex>& values) {
    json out = json::array();
    for (const Complex& v : values) out.push_back({v.real(), v.imag()});
    return out;
}

std::vector<Complex> complex_list_from(const json& arr) {
    std::vector<Complex> out;
    out.reserve(arr.size());
    for (const auto& item : arr) {
        out.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
    }
    return out;
}

json shape_record(const TrigShape& shape) {
    json rec;
    rec["center"] = {shape.center().x, shape.center().y};
    rec["a0"] = shape.radial().a0();
    json cc = json::array(), ss = json::array();
    for (int m = 1; m <= shape.degree(); ++m) {
        cc.push_back(shape.radial().cos_coeff(m));
        ss.push_back(shape.radial().sin_coeff(m));
    }
    rec["cos"] = cc;
    rec["sin"] = ss;
    return rec;
}

TrigShape shape_from_record(const json& rec) {
    const Vec2 center{rec.at("center").at(0).get<double>(),
                      rec.at("center").at(1).get<double>()};
    std::vector<double> cc = rec.value("cos", std::vector<double>{});
    std::vector<double> ss = rec.value("sin", std::vector<double>{});
    return TrigShape(center, TrigCoefficients(rec.at("a0").get<double>(),
                                              std::move(cc), std::move(ss)));
}

} // namespace

std::string shape_to_json(const TrigShape& shape) { return shape_record(shape).dump(2); }

TrigShape shape_from_json(const std::string& text) {
    try {
        return shape_from_record(json::parse(text));
    } catch (const json::exception& e) {
        throw IoError(std::string("shape_from_json: ") + e.what());
    }
}

void save_shape(const TrigShape& shape, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("save_shape: cannot open " + path);
    out << shape_to_json(shape) << "\n";
}

TrigShape load_shape(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_shape: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return shape_from_json(text);
}

void save_dataset(const Dataset& data, const std::string& path) {
    json doc;
    json meta;
    meta["grid"] = {{"k_low", data.grid.k_low},
                    {"k_high", data.grid.k_high},
                    {"num_steps", data.grid.num_steps}};
    meta["theta"] = {data.theta.x, data.theta.y};
    json dirs = json::array();
    for (const Vec2& d : data.obs_dirs) dirs.push_back({d.x, d.y});
    meta["obs_dirs"] = dirs;
    meta["noise_level"] = data.noise_level;
    meta["rng_seed"] = data.rng_seed;
    meta["rng_algorithm"] = data.rng_algorithm;
    meta["n_quad"] = data.n_quad;
    if (data.truth) meta["truth"] = shape_record(*data.truth);
    doc["metadata"] = meta;

    json patterns = json::array();
    for (std::size_t n = 0; n < data.noisy.size(); ++n) {
        json rec;
        rec["k"] = data.noisy[n].k;
        rec["values"] = complex_list(data.noisy[n].values);
        if (n < data.clean.size()) {
            rec["clean_values"] = complex_list(data.clean[n].values);
        }
        patterns.push_back(std::move(rec));
    }
    doc["patterns"] = patterns;

    std::ofstream out(path);
    if (!out) throw IoError("save_dataset: cannot open " + path);
    out << doc.dump(1) << "\n";
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("load_dataset: cannot open " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw IoError(std::string("load_dataset: ") + e.what());
    }
    try {
        const json& meta = doc.at("metadata");
        const FrequencyGrid grid(meta.at("grid").at("k_low").get<double>(),
                                 meta.at("grid").at("k_high").get<double>(),
                                 meta.at("grid").at("num_steps").get<int>());
        Dataset data{grid,
                     Vec2{meta.at("theta").at(0).get<double>(),
                          meta.at("theta").at(1).get<double>()},
                     {},
                     meta.at("noise_level").get<double>(),
                     meta.at("rng_seed").get<std::uint64_t>(),
                     meta.value("rng_algorithm", std::string("mt19937_64-boxmuller")),
                     meta.value("n_quad", 128),
                     std::nullopt,
                     {},
                     {}};
        for (const auto& d : meta.at("obs_dirs")) {
            data.obs_dirs.push_back({d.at(0).get<double>(), d.at(1).get<double>()});
        }
        if (meta.contains("truth")) data.truth = shape_from_record(meta.at("truth"));

        const json& patterns = doc.at("patterns");
        if (static_cast<int>(patterns.size()) != grid.point_count()) {
            throw IoError("load_dataset: one pattern per grid point required");
        }
        for (int n = 0; n < grid.point_count(); ++n) {
            const json& rec = patterns.at(n);
            const double k = rec.at("k").get<double>();
            data.noisy.emplace_back(k, data.obs_dirs, complex_list_from(rec.at("values")));
            if (rec.contains("clean_values")) {
                data.clean.emplace_back(k, data.obs_dirs,
                                        complex_list_from(rec.at("clean_values")));
            }
        }
        return data;
    } catch (const json::exception& e) {
        throw IoError(std::string("load_dataset: malformed document: ") + e.what());
    }
}

} // namespace iscat
