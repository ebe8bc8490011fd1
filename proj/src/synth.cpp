#include "hurstnn/synth.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <memory>
#include <mutex>
#include <numbers>

#include "hurstnn/errors.hpp"

namespace hurstnn::synth {

namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

template <typename T>
struct FftwDeleter {
    void operator()(T* p) const noexcept { fftw_free(p); }
};
template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <typename T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan plan) : plan_(plan) {}
    ~Plan() {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

Plan make_r2c(int n, double* in, fftw_complex* out) {
    std::lock_guard lock(fftw_planner_mutex());
    return Plan(fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE));
}

Plan make_c2r(int n, fftw_complex* in, double* out) {
    std::lock_guard lock(fftw_planner_mutex());
    return Plan(fftw_plan_dft_c2r_1d(n, in, out, FFTW_ESTIMATE));
}

// Davies-Harte. Returns false when the embedding is not non-negative definite.
bool circulant_embedding(double hurst, std::size_t length, Rng& rng, std::vector<double>& out) {
    const std::size_t n = length;
    const std::size_t m = 2 * n;
    const std::size_t half = m / 2 + 1;

    auto row = fftw_buffer<double>(m);
    auto spectrum = fftw_buffer<fftw_complex>(half);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(hurst, k);
    for (std::size_t k = n + 1; k < m; ++k) row[k] = row[m - k];
    {
        Plan plan = make_r2c(static_cast<int>(m), row.get(), spectrum.get());
        plan.execute();
    }

    std::vector<double> eigen(half);
    for (std::size_t k = 0; k < half; ++k) {
        double lambda = spectrum[k][0];
        // Round-off can leave tiny negative values for exact zeros.
        if (lambda < 0.0 && lambda > -1e-10) lambda = 0.0;
        if (lambda < 0.0) return false;
        eigen[k] = lambda;
    }

    auto weights = fftw_buffer<fftw_complex>(half);
    const double md = static_cast<double>(m);
    weights[0][0] = std::sqrt(eigen[0] / md) * rng.normal();
    weights[0][1] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        const double a = std::sqrt(eigen[k] / (2.0 * md));
        weights[k][0] = a * rng.normal();
        weights[k][1] = a * rng.normal();
    }
    weights[n][0] = std::sqrt(eigen[n] / md) * rng.normal();
    weights[n][1] = 0.0;

    auto samples = fftw_buffer<double>(m);
    {
        Plan plan = make_c2r(static_cast<int>(m), weights.get(), samples.get());
        plan.execute();
    }
    out.assign(samples.get(), samples.get() + n);
    return true;
}

// Durbin-Levinson recursion on the exact autocovariance, O(n^2).
std::vector<double> hosking(double hurst, std::size_t length, Rng& rng) {
    std::vector<double> gamma(length);
    for (std::size_t k = 0; k < length; ++k) gamma[k] = fgn_autocovariance(hurst, k);

    std::vector<double> x(length);
    std::vector<double> phi(length, 0.0), prev(length, 0.0);
    double variance = gamma[0];
    x[0] = std::sqrt(variance) * rng.normal();
    for (std::size_t t = 1; t < length; ++t) {
        double num = gamma[t];
        for (std::size_t j = 1; j < t; ++j) num -= prev[j] * gamma[t - j];
        const double reflection = num / variance;
        phi[t] = reflection;
        for (std::size_t j = 1; j < t; ++j) phi[j] = prev[j] - reflection * prev[t - j];
        variance *= 1.0 - reflection * reflection;

        double mean = 0.0;
        for (std::size_t j = 1; j <= t; ++j) mean += phi[j] * x[t - j];
        x[t] = mean + std::sqrt(variance) * rng.normal();
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(t) + 1, prev.begin());
    }
    return x;
}

}  // namespace

double Rng::uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform()));
    const double angle = 2.0 * std::numbers::pi * uniform();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

void validate(const GeneratorSpec& spec) {
    if (!(spec.std > 0.0) || !std::isfinite(spec.std)) throw ParameterError("generator std must be positive");
    if (!std::isfinite(spec.mean)) throw ParameterError("generator mean must be finite");
    if (spec.length < kMinLength)
        throw ParameterError("generator length must be at least " + std::to_string(kMinLength));
    if (spec.kind == Kind::fgn && !(spec.hurst > 0.0 && spec.hurst < 1.0))
        throw ParameterError("fGn requires 0 < H < 1");
}

ReturnSeries gaussian_random_walk(const GeneratorSpec& spec) {
    validate(spec);
    if (spec.kind != Kind::random_walk) throw ParameterError("spec kind is not random-walk");
    Rng rng(spec.seed);
    std::vector<double> r(spec.length);
    for (double& v : r) v = spec.mean + spec.std * rng.normal();
    return ReturnSeries(spec.index_id, business_days(spec.first_date, spec.length), std::move(r));
}

double fgn_autocovariance(double hurst, std::size_t lag) {
    const double k = static_cast<double>(lag);
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) + std::pow(std::abs(k - 1.0), h2));
}

FgnSample fgn_samples(double hurst, std::size_t length, Rng& rng, bool force_hosking) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("fGn requires 0 < H < 1");
    if (length == 0) throw ParameterError("fGn length must be positive");
    FgnSample sample;
    if (!force_hosking && circulant_embedding(hurst, length, rng, sample.values)) {
        sample.method = FgnMethod::circulant_embedding;
        return sample;
    }
    sample.values = hosking(hurst, length, rng);
    sample.method = FgnMethod::hosking;
    return sample;
}

ReturnSeries fractional_gaussian_noise(const GeneratorSpec& spec, FgnMethod& method_used) {
    validate(spec);
    if (spec.kind != Kind::fgn) throw ParameterError("spec kind is not fgn");
    Rng rng(spec.seed);
    FgnSample sample = fgn_samples(spec.hurst, spec.length, rng);
    method_used = sample.method;
    for (double& v : sample.values) v = spec.mean + spec.std * v;
    return ReturnSeries(spec.index_id, business_days(spec.first_date, spec.length), std::move(sample.values));
}

ReturnSeries fractional_gaussian_noise(const GeneratorSpec& spec) {
    FgnMethod ignored{};
    return fractional_gaussian_noise(spec, ignored);
}

ReturnSeries random_walk_surrogate(const ReturnSeries& source, std::uint64_t seed) {
    const auto& x = source.returns();
    if (x.size() < kMinLength)
        throw ParameterError("surrogate source '" + source.index_id() + "' shorter than " +
                             std::to_string(kMinLength));
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(x.size() - 1));
    if (!(sd > 0.0)) throw ParameterError("surrogate source '" + source.index_id() + "' has zero variance");

    Rng rng(seed);
    std::vector<double> r(x.size());
    for (double& v : r) v = mean + sd * rng.normal();
    return ReturnSeries(source.index_id(), source.dates(), std::move(r));
}

}  // namespace hurstnn::synth
