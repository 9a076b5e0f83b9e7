#pragma once

#include <string_view>

namespace cmtest {

enum class ColorSpace { SRGB, XYZ, LAB, DIN99 };

/// A color triplet tagged with its space.
///
/// Native ranges: sRGB components in [0,1]; XYZ scaled so the D65 white has
/// Y = 100; LAB with L in [0,100]; DIN99 in its own L99/a99/b99 units.
struct Color {
    ColorSpace space = ColorSpace::SRGB;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    /// sRGB color with components clamped to [0,1].
    static Color srgb(double r, double g, double b);
    static Color xyz(double x, double y, double z) { return {ColorSpace::XYZ, x, y, z}; }
    static Color lab(double l, double a, double b) { return {ColorSpace::LAB, l, a, b}; }
    static Color din99(double l, double a, double b) { return {ColorSpace::DIN99, l, a, b}; }

    bool finite() const;

    friend bool operator==(const Color&, const Color&) = default;
};

struct ConversionResult {
    Color color;
    /// Set when the target is sRGB and a component left [0,1]. The color
    /// itself is returned unclamped.
    bool out_of_gamut = false;
};

/// D65 / 2 degree observer conversions along sRGB <-> XYZ <-> LAB <-> DIN99.
ConversionResult convert_checked(const Color& color, ColorSpace target);
Color convert(const Color& color, ColorSpace target);

/// Clamps an sRGB color into [0,1]; other spaces are converted first.
Color to_displayable_srgb(const Color& color);

enum class DifferenceMetric { LabEuclidean, Din99Euclidean, De94, Ciede2000 };

/// CIE94 weighting. Defaults are the graphic-arts set.
struct De94Params {
    double kL = 1.0;
    double K1 = 0.045;
    double K2 = 0.015;
};

/// Space a metric operates in (LAB for everything except DIN99_EUCLIDEAN).
ColorSpace metric_space(DifferenceMetric metric);

/// Color difference; operands are converted into the metric's space.
/// DE94 treats `a` as the reference color. Throws ValidationError on
/// non-finite components.
double delta_e(DifferenceMetric metric, const Color& a, const Color& b,
               const De94Params& de94 = {});

/// Same as delta_e, but both operands must already be in metric_space(metric).
/// No validation; meant for per-pixel loops.
double delta_e_native(DifferenceMetric metric, const Color& a, const Color& b,
                      const De94Params& de94 = {});

double ciede2000(const Color& lab1, const Color& lab2);
double de94(const Color& reference, const Color& sample, const De94Params& params = {});

std::string_view to_string(ColorSpace space);
std::string_view to_string(DifferenceMetric metric);
/// Case-insensitive; accepts "srgb", "xyz", "lab", "din99".
ColorSpace parse_color_space(std::string_view text);
/// Accepts "lab", "din99", "de94", "ciede2000" (and "lab_euclidean" etc.).
DifferenceMetric parse_metric(std::string_view text);

} // namespace cmtest
