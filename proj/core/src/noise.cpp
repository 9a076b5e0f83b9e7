#include "cmtest/noise.hpp"

#include "cmtest/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace cmtest {

namespace {

constexpr std::uint64_t kSelectStream = 1;
constexpr std::uint64_t kDrawStream = 2;
constexpr std::uint64_t kPairStream = 3;
constexpr std::uint64_t kPermStream = 4;

std::uint64_t splitmix(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

double grad(std::uint8_t hash, double x, double y)
{
    switch (hash & 7) {
    case 0: return x + y;
    case 1: return -x + y;
    case 2: return x - y;
    case 3: return -x - y;
    case 4: return x;
    case 5: return -x;
    case 6: return y;
    default: return -y;
    }
}

} // namespace

std::string_view to_string(NoiseMode mode)
{
    switch (mode) {
    case NoiseMode::MaxScaled: return "max_scaled";
    case NoiseMode::MinScaled: return "min_scaled";
    case NoiseMode::RangeScaled: return "range_scaled";
    case NoiseMode::Replacement: return "replacement";
    }
    return "?";
}

std::string_view to_string(Distribution dist)
{
    switch (dist) {
    case Distribution::Uniform: return "uniform";
    case Distribution::Normal: return "normal";
    case Distribution::Beta: return "beta";
    case Distribution::BetaLeft: return "beta_left";
    case Distribution::BetaRight: return "beta_right";
    }
    return "?";
}

std::string_view to_string(NoiseSource source)
{
    return source == NoiseSource::Perlin ? "perlin" : "random";
}

NoiseMode parse_noise_mode(std::string_view text)
{
    const std::string s = lower(text);
    for (NoiseMode m : {NoiseMode::MaxScaled, NoiseMode::MinScaled, NoiseMode::RangeScaled, NoiseMode::Replacement})
        if (s == to_string(m)) return m;
    throw ValidationError("unknown noise mode '" + std::string(text) +
                          "' (expected max_scaled, min_scaled, range_scaled or replacement)");
}

Distribution parse_distribution(std::string_view text)
{
    const std::string s = lower(text);
    for (Distribution d : {Distribution::Uniform, Distribution::Normal, Distribution::Beta, Distribution::BetaLeft,
                           Distribution::BetaRight})
        if (s == to_string(d)) return d;
    throw ValidationError("unknown distribution '" + std::string(text) +
                          "' (expected uniform, normal, beta, beta_left or beta_right)");
}

NoiseSource parse_noise_source(std::string_view text)
{
    const std::string s = lower(text);
    if (s == "random") return NoiseSource::Random;
    if (s == "perlin") return NoiseSource::Perlin;
    throw ValidationError("unknown noise source '" + std::string(text) + "' (expected random or perlin)");
}

std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t stream)
{
    return splitmix(splitmix(splitmix(seed) ^ stream) ^ index);
}

double hashed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream)
{
    return static_cast<double>(counter_hash(seed, index, stream) >> 11) * 0x1.0p-53;
}

double beta_transform(double r)
{
    const double s = std::sin(r * std::numbers::pi / 2.0);
    return s * s;
}

double beta_left_transform(double r)
{
    const double b = beta_transform(r);
    return 2.0 * std::min(b, 1.0 - b);
}

double beta_right_transform(double r) { return 1.0 - beta_left_transform(r); }

double sample_distribution(Distribution dist, std::uint64_t seed, std::uint64_t pixel_index)
{
    const double r = hashed_uniform(seed, pixel_index, kDrawStream);
    switch (dist) {
    case Distribution::Uniform: return r;
    case Distribution::Normal: {
        const double u1 = 1.0 - r; // (0, 1]
        const double u2 = hashed_uniform(seed, pixel_index, kPairStream);
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
    case Distribution::Beta: return beta_transform(r);
    case Distribution::BetaLeft: return beta_left_transform(r);
    case Distribution::BetaRight: return beta_right_transform(r);
    }
    return r;
}

double unit_draw(Distribution dist, std::uint64_t seed, std::uint64_t pixel_index)
{
    const double v = sample_distribution(dist, seed, pixel_index);
    if (dist == Distribution::Normal) return std::clamp(0.5 + v / 6.0, 0.0, 1.0);
    return v;
}

PerlinNoise::PerlinNoise(std::uint64_t seed)
{
    std::array<std::uint8_t, 256> p{};
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = static_cast<std::uint8_t>(i);
    for (std::size_t i = p.size() - 1; i > 0; --i) {
        const std::size_t j = counter_hash(seed, i, kPermStream) % (i + 1);
        std::swap(p[i], p[j]);
    }
    for (std::size_t i = 0; i < perm_.size(); ++i) perm_[i] = p[i & 255];
}

double PerlinNoise::operator()(double x, double y) const
{
    const double fx = std::floor(x);
    const double fy = std::floor(y);
    const int xi = static_cast<int>(static_cast<long long>(fx) & 255);
    const int yi = static_cast<int>(static_cast<long long>(fy) & 255);
    const double dx = x - fx;
    const double dy = y - fy;
    const double u = fade(dx);
    const double v = fade(dy);

    const int a = perm_[xi] + yi;
    const int b = perm_[xi + 1] + yi;
    const double n00 = grad(perm_[a], dx, dy);
    const double n10 = grad(perm_[b], dx - 1.0, dy);
    const double n01 = grad(perm_[a + 1], dx, dy - 1.0);
    const double n11 = grad(perm_[b + 1], dx - 1.0, dy - 1.0);

    const double nx0 = n00 + u * (n10 - n00);
    const double nx1 = n01 + u * (n11 - n01);
    return nx0 + v * (nx1 - nx0);
}

double perlin2(double x, double y, std::uint64_t seed) { return PerlinNoise(seed)(x, y); }

ScalarField apply_noise(const ScalarField& field, std::pair<double, double> range, const NoiseOptions& opts)
{
    const auto [m, M] = range;
    if (!(m < M)) throw ValidationError("noise: field range must satisfy m < M");
    if (!(opts.proportion >= 0.0 && opts.proportion <= 1.0))
        throw ValidationError("noise: proportion must lie in [0,1]");
    const bool replacement = opts.mode == NoiseMode::Replacement;
    if (replacement) {
        if (!opts.replacement_range)
            throw ValidationError("noise: replacement mode requires a replacement range [n_m, n_M]");
        if (!(opts.replacement_range->first < opts.replacement_range->second))
            throw ValidationError("noise: replacement range must satisfy n_m < n_M");
    } else if (!(opts.amplitude > 0.0 && opts.amplitude <= 1.0)) {
        throw ValidationError("noise: amplitude must lie in (0,1]");
    }
    if (opts.source == NoiseSource::Perlin && !(opts.perlin_cells > 0.0))
        throw ValidationError("noise: perlin lattice cell count must be > 0");

    ScalarField out = field;
    const std::size_t w = field.width();
    const std::size_t h = field.height();

    // Perlin samples in [-1, 1], rescaled so the largest magnitude maps to 1.
    std::vector<double> perlin;
    double perlin_peak = 0.0;
    if (opts.source == NoiseSource::Perlin) {
        perlin.resize(w * h);
        const PerlinNoise noise(opts.seed);
        const double scale = opts.perlin_cells / static_cast<double>(std::max(w, h));
        parallel_for(h, [&](std::size_t j) {
            for (std::size_t i = 0; i < w; ++i)
                perlin[j * w + i] = noise((static_cast<double>(i) + 0.5) * scale, (static_cast<double>(j) + 0.5) * scale);
        });
        for (double p : perlin) perlin_peak = std::max(perlin_peak, std::abs(p));
    }

    const auto [n_lo, n_hi] = opts.replacement_range.value_or(std::pair{0.0, 1.0});
    auto values = out.values();
    parallel_for(h, [&](std::size_t j) {
        for (std::size_t i = 0; i < w; ++i) {
            const std::size_t k = j * w + i;
            if (!(hashed_uniform(opts.seed, k, kSelectStream) < opts.proportion)) continue;

            // Signed unit draw in [-1, 1].
            double s = 0.0;
            if (opts.source == NoiseSource::Perlin)
                s = perlin_peak > 0.0 ? perlin[k] / perlin_peak : 0.0;
            else
                s = 2.0 * unit_draw(opts.distribution, opts.seed, k) - 1.0;

            const double v = values[k];
            double result = v;
            switch (opts.mode) {
            case NoiseMode::MaxScaled: result = v + opts.amplitude * s * (v - m) / (M - m); break;
            case NoiseMode::MinScaled: result = v + opts.amplitude * s * (M - v) / (M - m); break;
            case NoiseMode::RangeScaled: result = v + opts.amplitude * s * (M - m); break;
            case NoiseMode::Replacement: result = n_lo + (s + 1.0) / 2.0 * (n_hi - n_lo); break;
            }
            if (!replacement && opts.clipping) result = std::clamp(result, m, M);
            values[k] = result;
        }
    });
    if (replacement) {
        std::pair<double, double> hint{n_lo, n_hi};
        if (opts.proportion < 1.0) {
            const auto [lo, hi] = field.value_range();
            hint = {std::min(lo, n_lo), std::max(hi, n_hi)};
        }
        out.set_value_range_hint(hint);
    }
    return out;
}

} // namespace cmtest
