#include "cmtest/evaluation.hpp"

#include "cmtest/errors.hpp"
#include "cmtest/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <limits>

namespace cmtest {

namespace {

constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

bool in_grid(std::size_t w, std::size_t h, std::size_t i, std::size_t j, Offset o)
{
    const long long x = static_cast<long long>(i) + o.dx;
    const long long y = static_cast<long long>(j) + o.dy;
    return x >= 0 && y >= 0 && x < static_cast<long long>(w) && y < static_cast<long long>(h);
}

// Fills both directions of every neighbor pair with raw = diff(lo, hi),
// where lo is the pixel with the smaller row-major index. Forward
// directions (k >= 4) are computed; the others are copied from the
// neighbor, so the stored value is identical from both sides.
template <class Diff>
std::vector<double> pair_differences(std::size_t w, std::size_t h, const Diff& diff)
{
    std::vector<double> raw(w * h * 8, kMissing);
    parallel_for(h, [&](std::size_t j) {
        for (std::size_t i = 0; i < w; ++i) {
            const std::size_t p = j * w + i;
            for (std::size_t k = 4; k < 8; ++k) {
                const Offset o = kNeighborOffsets[k];
                if (!in_grid(w, h, i, j, o)) continue;
                const std::size_t q = (j + o.dy) * w + (i + o.dx);
                raw[p * 8 + k] = diff(p, q);
            }
        }
    });
    parallel_for(h, [&](std::size_t j) {
        for (std::size_t i = 0; i < w; ++i) {
            const std::size_t p = j * w + i;
            for (std::size_t k = 0; k < 4; ++k) {
                const Offset o = kNeighborOffsets[k];
                if (!in_grid(w, h, i, j, o)) continue;
                const std::size_t q = (j + o.dy) * w + (i + o.dx);
                raw[p * 8 + k] = raw[q * 8 + (7 - k)];
            }
        }
    });
    return raw;
}

std::pair<double, double> raw_range(const std::vector<double>& raw)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (double v : raw) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo > hi) return {0.0, 0.0};
    return {lo, hi};
}

void fill(NeighborDifferenceField& f, const std::vector<double>& raw, double scale_min, double scale_max,
          bool clamp)
{
    const double span = scale_max - scale_min;
    const std::size_t w = f.width();
    parallel_for(f.height(), [&](std::size_t j) {
        for (std::size_t i = 0; i < w; ++i) {
            for (std::size_t k = 0; k < 8; ++k) {
                const double r = raw[(j * w + i) * 8 + k];
                if (std::isnan(r)) continue;
                double n = f.degenerate ? 0.0 : (r - scale_min) / span;
                if (clamp) n = std::clamp(n, 0.0, 1.0);
                f.set(i, j, k, r, n);
            }
        }
    });
}

// MINMAX: affine on the observed range. When every difference is equal and
// nonzero the entries normalize to 1; when all are zero the field is
// degenerate.
void normalize_minmax(NeighborDifferenceField& f, const std::vector<double>& raw)
{
    auto [lo, hi] = raw_range(raw);
    if (hi == lo) {
        if (hi > 0.0) {
            lo = 0.0;
        } else {
            f.degenerate = true;
        }
    }
    f.scale_min = lo;
    f.scale_max = hi;
    fill(f, raw, lo, hi, false);
}

} // namespace

std::string_view to_string(FieldKind kind)
{
    switch (kind) {
    case FieldKind::Value: return "value";
    case FieldKind::Color: return "color";
    case FieldKind::Subtraction: return "subtraction";
    }
    return "?";
}

std::string to_string(const Normalization& norm)
{
    switch (norm.mode) {
    case NormalizationMode::MinMax: return "minmax";
    case NormalizationMode::BlackWhite: return "blackwhite";
    case NormalizationMode::Custom: {
        char buf[64];
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, norm.custom_max);
        return "custom:" + std::string(buf, end);
    }
    }
    return "?";
}

std::string_view to_string(Aggregation how)
{
    switch (how) {
    case Aggregation::Max: return "max";
    case Aggregation::Average: return "avg";
    case Aggregation::Median: return "median";
    }
    return "?";
}

Normalization parse_normalization(std::string_view text)
{
    if (text == "minmax") return Normalization::minmax();
    if (text == "blackwhite" || text == "black_white") return Normalization::black_white();
    if (text.starts_with("custom:")) {
        const std::string_view num = text.substr(7);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
        if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(v))
            throw ValidationError("custom normalization needs a number, got '" + std::string(num) + "'");
        if (v <= 0.0) throw ValidationError("custom normalization maximum must be > 0");
        return Normalization::custom(v);
    }
    throw ValidationError("unknown normalization '" + std::string(text) +
                          "' (expected minmax, blackwhite or custom:<max>)");
}

Aggregation parse_aggregation(std::string_view text)
{
    if (text == "max") return Aggregation::Max;
    if (text == "avg" || text == "average") return Aggregation::Average;
    if (text == "median") return Aggregation::Median;
    throw ValidationError("unknown aggregation '" + std::string(text) + "' (expected max, avg or median)");
}

NeighborDifferenceField::NeighborDifferenceField(std::size_t width, std::size_t height, FieldKind kind)
    : width_(width), height_(height), kind_(kind), raw_(width * height * 8, kMissing),
      norm_(width * height * 8, kMissing)
{
}

bool NeighborDifferenceField::has_neighbor(std::size_t i, std::size_t j, std::size_t k) const
{
    return k < 8 && in_grid(width_, height_, i, j, kNeighborOffsets[k]);
}

std::size_t NeighborDifferenceField::neighbor_count(std::size_t i, std::size_t j) const
{
    std::size_t n = 0;
    for (std::size_t k = 0; k < 8; ++k) n += has_neighbor(i, j, k);
    return n;
}

std::vector<double> NeighborDifferenceField::normalized_entries() const
{
    std::vector<double> out;
    out.reserve(norm_.size());
    for (double v : norm_)
        if (!std::isnan(v)) out.push_back(v);
    return out;
}

NeighborDifferenceField value_difference_field(const ScalarField& field)
{
    if (!field.all_finite()) throw ValidationError("value difference field needs finite values");
    const auto v = field.values();
    NeighborDifferenceField f(field.width(), field.height(), FieldKind::Value);
    const auto raw =
        pair_differences(field.width(), field.height(), [&](std::size_t p, std::size_t q) { return std::abs(v[p] - v[q]); });
    normalize_minmax(f, raw);
    return f;
}

NeighborDifferenceField color_difference_field(const ScalarField& field, const ColormapSpec& cmap,
                                               DifferenceMetric metric, Normalization norm,
                                               const De94Params& de94)
{
    if (!field.all_finite()) throw ValidationError("color difference field needs finite values");
    if (norm.mode == NormalizationMode::Custom && !(norm.custom_max > 0.0))
        throw ValidationError("custom normalization maximum must be > 0");

    const ColorSpace space = metric_space(metric);
    const auto v = field.values();
    std::vector<Color> colors(v.size());
    parallel_for(field.height(), [&](std::size_t j) {
        for (std::size_t i = 0; i < field.width(); ++i) {
            const std::size_t p = j * field.width() + i;
            colors[p] = convert(cmap.sample(v[p]), space);
        }
    });

    NeighborDifferenceField f(field.width(), field.height(), FieldKind::Color);
    f.normalization = norm;
    f.metric = metric;
    const auto raw = pair_differences(field.width(), field.height(), [&](std::size_t p, std::size_t q) {
        return delta_e_native(metric, colors[p], colors[q], de94);
    });

    switch (norm.mode) {
    case NormalizationMode::MinMax: normalize_minmax(f, raw); break;
    case NormalizationMode::BlackWhite: {
        const double bw = delta_e(metric, Color::srgb(0, 0, 0), Color::srgb(1, 1, 1), de94);
        f.scale_min = 0.0;
        f.scale_max = bw;
        fill(f, raw, 0.0, bw, true);
        break;
    }
    case NormalizationMode::Custom:
        f.scale_min = 0.0;
        f.scale_max = norm.custom_max;
        fill(f, raw, 0.0, norm.custom_max, true);
        break;
    }
    return f;
}

NeighborDifferenceField subtraction_field(const NeighborDifferenceField& value_f,
                                          const NeighborDifferenceField& color_f)
{
    if (value_f.width() != color_f.width() || value_f.height() != color_f.height())
        throw ValidationError("subtraction needs fields of equal size: " + std::to_string(value_f.width()) + "x" +
                              std::to_string(value_f.height()) + " vs " + std::to_string(color_f.width()) + "x" +
                              std::to_string(color_f.height()));
    NeighborDifferenceField s(value_f.width(), value_f.height(), FieldKind::Subtraction);
    s.metric = color_f.metric;
    s.normalization = color_f.normalization;
    parallel_for(s.height(), [&](std::size_t j) {
        for (std::size_t i = 0; i < s.width(); ++i) {
            for (std::size_t k = 0; k < 8; ++k) {
                if (!s.has_neighbor(i, j, k)) continue;
                const double d = value_f.normalized(i, j, k) - color_f.normalized(i, j, k);
                s.set(i, j, k, d, d);
            }
        }
    });
    return s;
}

ScalarField aggregate(const NeighborDifferenceField& f, Aggregation how, const Domain& domain)
{
    ScalarField out(f.width(), f.height(), domain);
    const bool signed_max = f.kind() == FieldKind::Subtraction;
    parallel_for(f.height(), [&](std::size_t j) {
        std::array<double, 8> e{};
        for (std::size_t i = 0; i < f.width(); ++i) {
            std::size_t n = 0;
            for (std::size_t k = 0; k < 8; ++k)
                if (f.has_neighbor(i, j, k)) e[n++] = f.normalized(i, j, k);
            double r = 0.0;
            if (n == 0) {
                r = 0.0;
            } else if (how == Aggregation::Max) {
                r = e[0];
                for (std::size_t m = 1; m < n; ++m) {
                    if (signed_max ? std::abs(e[m]) > std::abs(r) : e[m] > r) r = e[m];
                }
            } else if (how == Aggregation::Average) {
                double sum = 0.0;
                for (std::size_t m = 0; m < n; ++m) sum += e[m];
                r = sum / static_cast<double>(n);
            } else {
                std::sort(e.begin(), e.begin() + n);
                r = n % 2 ? e[n / 2] : 0.5 * (e[n / 2 - 1] + e[n / 2]);
            }
            out.at(i, j) = r;
        }
    });
    return out;
}

FieldStatistics entry_statistics(std::vector<double> entries)
{
    FieldStatistics s;
    s.count = entries.size();
    if (entries.empty()) return s;
    double sum = 0.0;
    s.min = entries[0];
    s.max = entries[0];
    for (double v : entries) {
        sum += v;
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
    }
    s.mean = sum / static_cast<double>(entries.size());
    double sq = 0.0;
    for (double v : entries) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / static_cast<double>(entries.size()));

    const std::size_t n = entries.size();
    auto mid = entries.begin() + static_cast<std::ptrdiff_t>(n / 2);
    std::nth_element(entries.begin(), mid, entries.end());
    const double upper = *mid;
    if (n % 2) {
        s.median = upper;
    } else {
        const double lower = *std::max_element(entries.begin(), mid);
        s.median = 0.5 * (lower + upper);
    }
    return s;
}

FieldStatistics field_statistics(const NeighborDifferenceField& f)
{
    return entry_statistics(f.normalized_entries());
}

EvaluationBundle evaluate(ScalarField field, ColormapSpec cmap, const EvaluationOptions& options,
                          std::optional<TestSpec> test)
{
    NeighborDifferenceField value = value_difference_field(field);
    NeighborDifferenceField color =
        color_difference_field(field, cmap, options.metric, options.normalization, options.de94);
    NeighborDifferenceField sub = subtraction_field(value, color);
    EvaluationBundle b{std::move(field), std::move(cmap), std::move(test), options,
                       std::move(value), std::move(color), std::move(sub), {}, {}, {}};
    b.value_stats = field_statistics(b.value);
    b.color_stats = field_statistics(b.color);
    b.subtraction_stats = field_statistics(b.subtraction);
    return b;
}

ObserverReport pixel_observer(const EvaluationBundle& bundle, std::size_t i, std::size_t j)
{
    const ScalarField& src = bundle.source;
    if (i >= src.width() || j >= src.height())
        throw ValidationError("pixel (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
                              std::to_string(src.width()) + "x" + std::to_string(src.height()) + " grid");
    ObserverReport r{i, j, src.at(i, j), to_displayable_srgb(bundle.colormap.sample(src.at(i, j))), {}};
    for (std::size_t k = 0; k < 8; ++k) {
        if (!bundle.value.has_neighbor(i, j, k)) continue;
        const Offset o = kNeighborOffsets[k];
        const std::size_t qi = i + o.dx;
        const std::size_t qj = j + o.dy;
        r.entries.push_back({o, qi, qj, src.at(qi, qj), bundle.value.raw(i, j, k), bundle.value.normalized(i, j, k),
                             bundle.color.raw(i, j, k), bundle.color.normalized(i, j, k),
                             bundle.subtraction.normalized(i, j, k)});
    }
    return r;
}

nlohmann::json to_json(const FieldStatistics& s)
{
    return {{"min", s.min},       {"max", s.max},       {"mean", s.mean},
            {"median", s.median}, {"stddev", s.stddev}, {"count", s.count}};
}

nlohmann::json to_json(const ObserverReport& r)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const ObserverEntry& e : r.entries) {
        rows.push_back({{"dx", e.offset.dx},
                        {"dy", e.offset.dy},
                        {"i", e.i},
                        {"j", e.j},
                        {"neighbor_value", e.neighbor_value},
                        {"value_raw", e.value_raw},
                        {"value_normalized", e.value_normalized},
                        {"color_raw", e.color_raw},
                        {"color_normalized", e.color_normalized},
                        {"subtraction", e.subtraction}});
    }
    return {{"i", r.i},
            {"j", r.j},
            {"value", r.value},
            {"srgb", {r.color.c1, r.color.c2, r.color.c3}},
            {"neighbors", rows}};
}

nlohmann::json statistics_json(const EvaluationBundle& b)
{
    auto field = [](const NeighborDifferenceField& f, const FieldStatistics& s) {
        nlohmann::json j = to_json(s);
        j["scale_min"] = f.scale_min;
        j["scale_max"] = f.scale_max;
        j["degenerate"] = f.degenerate;
        return j;
    };
    return {{"width", b.source.width()},
            {"height", b.source.height()},
            {"metric", std::string(to_string(b.options.metric))},
            {"normalization", to_string(b.options.normalization)},
            {"aggregation", std::string(to_string(b.options.aggregation))},
            {"degenerate", b.degenerate()},
            {"value", field(b.value, b.value_stats)},
            {"color", field(b.color, b.color_stats)},
            {"subtraction", field(b.subtraction, b.subtraction_stats)}};
}

} // namespace cmtest
