#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hurstnn/series.hpp"

namespace hurstnn::synth {

// Seeded normal deviates on top of mt19937_64. The uniform-to-normal
// transform is done here rather than by std::normal_distribution, whose
// algorithm differs between standard libraries, so a seed yields the
// same stream everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform();
    // Standard normal via the Box-Muller transform.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// splitmix64 mixing of a base seed and a stream number, for per-index seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

enum class Kind { random_walk, fgn };

struct GeneratorSpec {
    Kind kind = Kind::random_walk;
    double mean = 0.0;  // per-step drift
    double std = 1.0;
    double hurst = 0.5;  // fgn only
    std::size_t length = 0;
    std::uint64_t seed = 0;
    std::string index_id = "synthetic";
    Date first_date = Date{std::chrono::year{2000}, std::chrono::month{1}, std::chrono::day{4}};
};

inline constexpr std::size_t kMinLength = 16;

// Throws ParameterError for out-of-range generator parameters.
void validate(const GeneratorSpec& spec);

// iid N(mean, std^2) returns stamped with business days from first_date.
ReturnSeries gaussian_random_walk(const GeneratorSpec& spec);

enum class FgnMethod { circulant_embedding, hosking };

// Autocovariance of unit-variance fGn: ((k+1)^2H - 2k^2H + |k-1|^2H) / 2.
double fgn_autocovariance(double hurst, std::size_t lag);

struct FgnSample {
    std::vector<double> values;  // zero mean, unit variance
    FgnMethod method = FgnMethod::circulant_embedding;
};

// Exact fGn draws. Circulant embedding (Davies-Harte) is tried first unless
// `force_hosking`; a negative embedding eigenvalue switches to the exact
// Durbin-Levinson recursion, which is reported in `method`.
FgnSample fgn_samples(double hurst, std::size_t length, Rng& rng, bool force_hosking = false);

// mean + std * fGn(H) returns, deterministic in spec.seed.
ReturnSeries fractional_gaussian_noise(const GeneratorSpec& spec);
ReturnSeries fractional_gaussian_noise(const GeneratorSpec& spec, FgnMethod& method_used);

// Random walk matched to the sample mean, sample std and length of
// `source`, keeping its dates. This is the null model for a real index.
ReturnSeries random_walk_surrogate(const ReturnSeries& source, std::uint64_t seed);

}  // namespace hurstnn::synth
