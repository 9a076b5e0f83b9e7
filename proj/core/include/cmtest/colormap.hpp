#pragma once

#include "cmtest/color.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cmtest {

/// A colormap key. Twin keys carry distinct colors on each side of their
/// position and produce a discontinuity there.
struct ColormapKey {
    double position = 0.0;
    Color left;
    Color right;

    static ColormapKey single(double position, const Color& color) { return {position, color, color}; }
    static ColormapKey twin(double position, const Color& left, const Color& right)
    {
        return {position, left, right};
    }

    bool is_twin() const { return !(left == right); }

    friend bool operator==(const ColormapKey&, const ColormapKey&) = default;
};

/// Continuous colormap: piecewise-linear in one interpolation space,
/// right-continuous at twin keys, clamped outside the key range.
class ColormapSpec {
public:
    /// Throws ValidationError for fewer than two keys, non-finite or
    /// non-increasing positions, or an XYZ interpolation space.
    explicit ColormapSpec(std::vector<ColormapKey> keys,
                          ColorSpace interpolation_space = ColorSpace::LAB,
                          Color nan_color = Color::srgb(0.5, 0.5, 0.5));

    const std::vector<ColormapKey>& keys() const { return keys_; }
    ColorSpace interpolation_space() const { return space_; }
    const Color& nan_color() const { return nan_color_; }
    std::pair<double, double> range() const { return {keys_.front().position, keys_.back().position}; }

    /// Color for a data value, expressed in interpolation_space().
    Color sample(double value) const;

    /// Same keys and colors over another interpolation space.
    ColormapSpec with_interpolation_space(ColorSpace space) const;

    friend bool operator==(const ColormapSpec& a, const ColormapSpec& b)
    {
        return a.keys_ == b.keys_ && a.space_ == b.space_ && a.nan_color_ == b.nan_color_;
    }

private:
    std::vector<ColormapKey> keys_;
    ColorSpace space_;
    Color nan_color_;
    std::vector<double> positions_;
    std::vector<Color> left_;  // key colors in space_
    std::vector<Color> right_;
    Color nan_native_;
};

/// Two-key map from LAB(0,0,0) to LAB(100,0,0) over [lo, hi]. Color
/// differences under LAB_EUCLIDEAN are exactly proportional to value
/// differences.
ColormapSpec grayscale_uniform(double lo, double hi);

struct ParsedColormap {
    ColormapSpec spec;
    std::optional<std::string> name;
    /// Non-fatal findings, e.g. ignored unknown top-level fields.
    std::vector<std::string> warnings;
};

/// Parses a colormap document (see docs/colormap-format.md). Throws
/// ValidationError with a descriptive message on malformed input.
ParsedColormap parse_colormap(std::string_view json_text);

/// Canonical JSON text. Key colors are written as sRGB.
std::string serialize_colormap(const ColormapSpec& spec,
                               const std::optional<std::string>& name = std::nullopt);

} // namespace cmtest
