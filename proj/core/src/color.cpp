#include "cmtest/color.hpp"

#include "cmtest/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

namespace cmtest {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Linear sRGB -> XYZ (Y of white = 1).
constexpr Mat3 kRgbToXyz{{
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
}};

constexpr Vec3 mul(const Mat3& m, const Vec3& v)
{
    return {m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2]};
}

constexpr Mat3 inverse(const Mat3& m)
{
    const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
    const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
    const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
    const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
    const double s = 1.0 / det;
    return {{
        {c00 * s, (m[0][2] * m[2][1] - m[0][1] * m[2][2]) * s, (m[0][1] * m[1][2] - m[0][2] * m[1][1]) * s},
        {c01 * s, (m[0][0] * m[2][2] - m[0][2] * m[2][0]) * s, (m[0][2] * m[1][0] - m[0][0] * m[1][2]) * s},
        {c02 * s, (m[0][1] * m[2][0] - m[0][0] * m[2][1]) * s, (m[0][0] * m[1][1] - m[0][1] * m[1][0]) * s},
    }};
}

constexpr Mat3 kXyzToRgb = inverse(kRgbToXyz);

// White point (scaled to Y = 100) is the image of sRGB white so that
// (1,1,1) lands on LAB(100,0,0) exactly.
constexpr Vec3 kWhite = [] {
    const Vec3 w = mul(kRgbToXyz, Vec3{1.0, 1.0, 1.0});
    return Vec3{w[0] * 100.0, w[1] * 100.0, w[2] * 100.0};
}();

constexpr double kLabDelta = 6.0 / 29.0;

double srgb_decode(double v)
{
    const double a = std::abs(v);
    const double lin = a <= 0.04045 ? a / 12.92 : std::pow((a + 0.055) / 1.055, 2.4);
    return std::copysign(lin, v);
}

double srgb_encode(double v)
{
    const double a = std::abs(v);
    const double enc = a <= 0.0031308 ? a * 12.92 : 1.055 * std::pow(a, 1.0 / 2.4) - 0.055;
    return std::copysign(enc, v);
}

double lab_f(double t)
{
    return t > kLabDelta * kLabDelta * kLabDelta ? std::cbrt(t)
                                                 : t / (3.0 * kLabDelta * kLabDelta) + 4.0 / 29.0;
}

double lab_f_inv(double f)
{
    return f > kLabDelta ? f * f * f : 3.0 * kLabDelta * kLabDelta * (f - 4.0 / 29.0);
}

// DIN99 (1999) constants, k_E = k_CH = 1.
constexpr double kDinL = 105.51;
constexpr double kDinLScale = 0.0158;
constexpr double kDinFScale = 0.7;
constexpr double kDinC = 0.045;
const double kDinCos16 = std::cos(16.0 * std::numbers::pi / 180.0);
const double kDinSin16 = std::sin(16.0 * std::numbers::pi / 180.0);

Color srgb_to_xyz(const Color& c)
{
    const Vec3 lin{srgb_decode(c.c1), srgb_decode(c.c2), srgb_decode(c.c3)};
    const Vec3 x = mul(kRgbToXyz, lin);
    return Color::xyz(x[0] * 100.0, x[1] * 100.0, x[2] * 100.0);
}

Color xyz_to_srgb(const Color& c)
{
    const Vec3 lin = mul(kXyzToRgb, Vec3{c.c1 / 100.0, c.c2 / 100.0, c.c3 / 100.0});
    return {ColorSpace::SRGB, srgb_encode(lin[0]), srgb_encode(lin[1]), srgb_encode(lin[2])};
}

Color xyz_to_lab(const Color& c)
{
    const double fx = lab_f(c.c1 / kWhite[0]);
    const double fy = lab_f(c.c2 / kWhite[1]);
    const double fz = lab_f(c.c3 / kWhite[2]);
    return Color::lab(116.0 * fy - 16.0, 500.0 * (fx - fy), 200.0 * (fy - fz));
}

Color lab_to_xyz(const Color& c)
{
    const double fy = (c.c1 + 16.0) / 116.0;
    const double fx = fy + c.c2 / 500.0;
    const double fz = fy - c.c3 / 200.0;
    return Color::xyz(lab_f_inv(fx) * kWhite[0], lab_f_inv(fy) * kWhite[1],
                      lab_f_inv(fz) * kWhite[2]);
}

Color lab_to_din99(const Color& c)
{
    const double l99 = kDinL * std::log1p(kDinLScale * c.c1);
    const double e = c.c2 * kDinCos16 + c.c3 * kDinSin16;
    const double f = kDinFScale * (-c.c2 * kDinSin16 + c.c3 * kDinCos16);
    const double g = std::hypot(e, f);
    if (g == 0.0) return Color::din99(l99, 0.0, 0.0);
    const double c99 = std::log1p(kDinC * g) / kDinC;
    return Color::din99(l99, c99 * e / g, c99 * f / g);
}

Color din99_to_lab(const Color& c)
{
    const double l = std::expm1(c.c1 / kDinL) / kDinLScale;
    const double c99 = std::hypot(c.c2, c.c3);
    if (c99 == 0.0) return Color::lab(l, 0.0, 0.0);
    const double g = std::expm1(kDinC * c99) / kDinC;
    const double e = g * c.c2 / c99;
    const double f = g * c.c3 / c99 / kDinFScale;
    return Color::lab(l, e * kDinCos16 - f * kDinSin16, e * kDinSin16 + f * kDinCos16);
}

// Position along the chain sRGB(0) - XYZ(1) - LAB(2) - DIN99(3).
int rank(ColorSpace s) { return static_cast<int>(s); }

Color step_towards(const Color& c, ColorSpace target)
{
    const bool up = rank(target) > rank(c.space);
    switch (c.space) {
    case ColorSpace::SRGB: return srgb_to_xyz(c);
    case ColorSpace::XYZ: return up ? xyz_to_lab(c) : xyz_to_srgb(c);
    case ColorSpace::LAB: return up ? lab_to_din99(c) : lab_to_xyz(c);
    case ColorSpace::DIN99: return din99_to_lab(c);
    }
    return c;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

double deg(double rad) { return rad * 180.0 / std::numbers::pi; }
double rad(double deg) { return deg * std::numbers::pi / 180.0; }

} // namespace

Color Color::srgb(double r, double g, double b)
{
    return {ColorSpace::SRGB, std::clamp(r, 0.0, 1.0), std::clamp(g, 0.0, 1.0),
            std::clamp(b, 0.0, 1.0)};
}

bool Color::finite() const
{
    return std::isfinite(c1) && std::isfinite(c2) && std::isfinite(c3);
}

ConversionResult convert_checked(const Color& color, ColorSpace target)
{
    Color c = color;
    while (c.space != target) c = step_towards(c, target);
    ConversionResult result{c, false};
    if (target == ColorSpace::SRGB && color.space != ColorSpace::SRGB) {
        constexpr double tol = 1e-9;
        for (double v : {c.c1, c.c2, c.c3})
            if (v < -tol || v > 1.0 + tol) result.out_of_gamut = true;
    }
    return result;
}

Color convert(const Color& color, ColorSpace target) { return convert_checked(color, target).color; }

Color to_displayable_srgb(const Color& color)
{
    const Color c = convert(color, ColorSpace::SRGB);
    return Color::srgb(c.c1, c.c2, c.c3);
}

ColorSpace metric_space(DifferenceMetric metric)
{
    return metric == DifferenceMetric::Din99Euclidean ? ColorSpace::DIN99 : ColorSpace::LAB;
}

double de94(const Color& reference, const Color& sample, const De94Params& p)
{
    const double dl = reference.c1 - sample.c1;
    const double c1 = std::hypot(reference.c2, reference.c3);
    const double c2 = std::hypot(sample.c2, sample.c3);
    const double dc = c1 - c2;
    const double da = reference.c2 - sample.c2;
    const double db = reference.c3 - sample.c3;
    const double dh2 = std::max(0.0, da * da + db * db - dc * dc);
    const double sc = 1.0 + p.K1 * c1;
    const double sh = 1.0 + p.K2 * c1;
    const double tl = dl / p.kL;
    const double tc = dc / sc;
    return std::sqrt(tl * tl + tc * tc + dh2 / (sh * sh));
}

double ciede2000(const Color& lab1, const Color& lab2)
{
    const double L1 = lab1.c1, a1 = lab1.c2, b1 = lab1.c3;
    const double L2 = lab2.c1, a2 = lab2.c2, b2 = lab2.c3;

    const double c_bar = (std::hypot(a1, b1) + std::hypot(a2, b2)) / 2.0;
    const double c_bar7 = std::pow(c_bar, 7.0);
    const double g = 0.5 * (1.0 - std::sqrt(c_bar7 / (c_bar7 + std::pow(25.0, 7.0))));
    const double a1p = (1.0 + g) * a1;
    const double a2p = (1.0 + g) * a2;
    const double c1p = std::hypot(a1p, b1);
    const double c2p = std::hypot(a2p, b2);

    auto hue = [](double b, double ap) {
        if (b == 0.0 && ap == 0.0) return 0.0;
        const double h = deg(std::atan2(b, ap));
        return h < 0.0 ? h + 360.0 : h;
    };
    const double h1p = hue(b1, a1p);
    const double h2p = hue(b2, a2p);

    const double dlp = L2 - L1;
    const double dcp = c2p - c1p;
    double dhp = 0.0;
    if (c1p * c2p != 0.0) {
        dhp = h2p - h1p;
        if (dhp > 180.0) dhp -= 360.0;
        else if (dhp < -180.0) dhp += 360.0;
    }
    const double dHp = 2.0 * std::sqrt(c1p * c2p) * std::sin(rad(dhp / 2.0));

    const double l_bar = (L1 + L2) / 2.0;
    const double cp_bar = (c1p + c2p) / 2.0;
    double hp_bar = h1p + h2p;
    if (c1p * c2p != 0.0) {
        if (std::abs(h1p - h2p) <= 180.0) hp_bar /= 2.0;
        else if (h1p + h2p < 360.0) hp_bar = (hp_bar + 360.0) / 2.0;
        else hp_bar = (hp_bar - 360.0) / 2.0;
    }

    const double t = 1.0 - 0.17 * std::cos(rad(hp_bar - 30.0)) + 0.24 * std::cos(rad(2.0 * hp_bar)) +
                     0.32 * std::cos(rad(3.0 * hp_bar + 6.0)) - 0.20 * std::cos(rad(4.0 * hp_bar - 63.0));
    const double d_theta = 30.0 * std::exp(-std::pow((hp_bar - 275.0) / 25.0, 2.0));
    const double cp_bar7 = std::pow(cp_bar, 7.0);
    const double rc = 2.0 * std::sqrt(cp_bar7 / (cp_bar7 + std::pow(25.0, 7.0)));
    const double l50 = (l_bar - 50.0) * (l_bar - 50.0);
    const double sl = 1.0 + 0.015 * l50 / std::sqrt(20.0 + l50);
    const double sc = 1.0 + 0.045 * cp_bar;
    const double sh = 1.0 + 0.015 * cp_bar * t;
    const double rt = -std::sin(rad(2.0 * d_theta)) * rc;

    const double tl = dlp / sl;
    const double tc = dcp / sc;
    const double th = dHp / sh;
    return std::sqrt(tl * tl + tc * tc + th * th + rt * tc * th);
}

double delta_e_native(DifferenceMetric metric, const Color& a, const Color& b, const De94Params& p)
{
    switch (metric) {
    case DifferenceMetric::LabEuclidean:
    case DifferenceMetric::Din99Euclidean: {
        const double d1 = a.c1 - b.c1, d2 = a.c2 - b.c2, d3 = a.c3 - b.c3;
        return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3);
    }
    case DifferenceMetric::De94: return de94(a, b, p);
    case DifferenceMetric::Ciede2000: return ciede2000(a, b);
    }
    return 0.0;
}

double delta_e(DifferenceMetric metric, const Color& a, const Color& b, const De94Params& p)
{
    if (!a.finite() || !b.finite())
        throw ValidationError("delta_e: color components must be finite");
    const ColorSpace space = metric_space(metric);
    return delta_e_native(metric, convert(a, space), convert(b, space), p);
}

std::string_view to_string(ColorSpace space)
{
    switch (space) {
    case ColorSpace::SRGB: return "srgb";
    case ColorSpace::XYZ: return "xyz";
    case ColorSpace::LAB: return "lab";
    case ColorSpace::DIN99: return "din99";
    }
    return "?";
}

std::string_view to_string(DifferenceMetric metric)
{
    switch (metric) {
    case DifferenceMetric::LabEuclidean: return "lab";
    case DifferenceMetric::Din99Euclidean: return "din99";
    case DifferenceMetric::De94: return "de94";
    case DifferenceMetric::Ciede2000: return "ciede2000";
    }
    return "?";
}

ColorSpace parse_color_space(std::string_view text)
{
    const std::string s = lower(text);
    if (s == "srgb") return ColorSpace::SRGB;
    if (s == "xyz") return ColorSpace::XYZ;
    if (s == "lab") return ColorSpace::LAB;
    if (s == "din99") return ColorSpace::DIN99;
    throw ValidationError("unknown color space '" + std::string(text) + "'");
}

DifferenceMetric parse_metric(std::string_view text)
{
    const std::string s = lower(text);
    if (s == "lab" || s == "lab_euclidean") return DifferenceMetric::LabEuclidean;
    if (s == "din99" || s == "din99_euclidean") return DifferenceMetric::Din99Euclidean;
    if (s == "de94") return DifferenceMetric::De94;
    if (s == "ciede2000" || s == "de2000") return DifferenceMetric::Ciede2000;
    throw ValidationError("unknown metric '" + std::string(text) +
                          "' (expected lab, din99, de94 or ciede2000)");
}

} // namespace cmtest
