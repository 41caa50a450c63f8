#ifndef ISCAT_DATASET_HPP
#define ISCAT_DATASET_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "iscat/forward.hpp"
#include "iscat/newton.hpp"

namespace iscat {

/// Simulated multifrequency measurement set: one far-field pattern per grid
/// point, noisy values plus the clean copies, with the metadata needed to
/// reproduce it bit for bit.
struct Dataset {
    FrequencyGrid grid;
    Vec2 theta;
    std::vector<Vec2> obs_dirs;
    double noise_level = 0.0;
    std::uint64_t rng_seed = 0;
    std::string rng_algorithm = "mt19937_64-boxmuller";
    int n_quad = 128;
    std::optional<TrigShape> truth;

    std::vector<FarFieldPattern> noisy;
    std::vector<FarFieldPattern> clean;
};

/// Reproducible standard normal deviates: mt19937_64 bits mapped to (0,1]
/// doubles through a fixed 53-bit ladder, then Box-Muller. The dataset
/// metadata names this generator so files are reproducible across builds.
class PortableNormal {
public:
    explicit PortableNormal(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Forward-solves the truth shape on the grid and adds seeded complex
/// Gaussian noise scaled so the relative L2 perturbation per frequency is
/// exactly noise_level.
Dataset simulate(const TrigShape& truth, const FrequencyGrid& grid, const Vec2& theta,
                 int observation_count, double noise_level, std::uint64_t seed,
                 int n_quad = 128);

void save_dataset(const Dataset& data, const std::string& path);
Dataset load_dataset(const std::string& path);

/// Shape record {center: [x, y], a0, cos: [...], sin: [...]} as JSON text.
std::string shape_to_json(const TrigShape& shape);
TrigShape shape_from_json(const std::string& text);
void save_shape(const TrigShape& shape, const std::string& path);
TrigShape load_shape(const std::string& path);

} // namespace iscat

#endif // ISCAT_DATASET_HPP
