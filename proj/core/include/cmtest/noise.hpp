#pragma once

#include "cmtest/scalar_field.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

namespace cmtest {

enum class NoiseMode { MaxScaled, MinScaled, RangeScaled, Replacement };
enum class Distribution { Uniform, Normal, Beta, BetaLeft, BetaRight };
enum class NoiseSource { Random, Perlin };

struct NoiseOptions {
    NoiseMode mode = NoiseMode::MaxScaled;
    /// Peak noise magnitude for the scaled modes, in (0, 1].
    double amplitude = 0.25;
    /// [n_m, n_M] for Replacement.
    std::optional<std::pair<double, double>> replacement_range;
    /// Clamp results to the field range (scaled modes only).
    bool clipping = true;
    /// Fraction of pixels that receive noise.
    double proportion = 1.0;
    Distribution distribution = Distribution::Uniform;
    NoiseSource source = NoiseSource::Random;
    std::uint64_t seed = 0;
    /// Perlin lattice cells across the larger field dimension.
    double perlin_cells = 8.0;
};

std::string_view to_string(NoiseMode mode);
std::string_view to_string(Distribution dist);
std::string_view to_string(NoiseSource source);
NoiseMode parse_noise_mode(std::string_view text);
Distribution parse_distribution(std::string_view text);
NoiseSource parse_noise_source(std::string_view text);

/// Stateless 64-bit hash of (seed, index, stream).
std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);
/// Uniform in [0, 1) derived from counter_hash.
double hashed_uniform(std::uint64_t seed, std::uint64_t index, std::uint64_t stream);

/// Arcsine-law transform sin(r*pi/2)^2 of a uniform r.
double beta_transform(double r);
/// One-sided variants: the beta sample folded at the median 0.5 and
/// stretched back to [0,1], concentrating mass at 0 (left) or 1 (right).
double beta_left_transform(double r);
double beta_right_transform(double r);

/// Raw draw for a pixel: UNIFORM and the beta variants in [0,1], NORMAL a
/// standard normal (Box-Muller on two hashed uniforms, second output
/// discarded).
double sample_distribution(Distribution dist, std::uint64_t seed, std::uint64_t pixel_index);

/// Draw mapped into [0,1]. NORMAL becomes clamp(0.5 + z/6, 0, 1), so
/// +-3 sigma spans the unit interval.
double unit_draw(Distribution dist, std::uint64_t seed, std::uint64_t pixel_index);

/// Improved (quintic fade) 2D gradient noise with a seeded permutation.
class PerlinNoise {
public:
    explicit PerlinNoise(std::uint64_t seed);
    /// In [-1, 1]; exactly 0 at integer lattice points.
    double operator()(double x, double y) const;

private:
    std::array<std::uint8_t, 512> perm_{};
};

double perlin2(double x, double y, std::uint64_t seed);

/// Adds noise to `field` whose nominal value range is `range` = (m, M):
///   MaxScaled:   v + noise * (v - m) / (M - m)
///   MinScaled:   v + noise * (M - v) / (M - m)
///   RangeScaled: v + noise * (M - m)
///   Replacement: a value drawn in [n_m, n_M]
/// Only pixels selected by a seeded hash (fraction `proportion`) change.
ScalarField apply_noise(const ScalarField& field, std::pair<double, double> range, const NoiseOptions& opts);

} // namespace cmtest
