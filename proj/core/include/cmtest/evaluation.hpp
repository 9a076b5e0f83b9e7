#pragma once

#include "cmtest/catalog.hpp"
#include "cmtest/color.hpp"
#include "cmtest/colormap.hpp"
#include "cmtest/scalar_field.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cmtest {

enum class FieldKind { Value, Color, Subtraction };

enum class NormalizationMode { MinMax, BlackWhite, Custom };

struct Normalization {
    NormalizationMode mode = NormalizationMode::MinMax;
    double custom_max = 0.0;

    static Normalization minmax() { return {}; }
    static Normalization black_white() { return {NormalizationMode::BlackWhite, 0.0}; }
    static Normalization custom(double max) { return {NormalizationMode::Custom, max}; }

    friend bool operator==(const Normalization&, const Normalization&) = default;
};

enum class Aggregation { Max, Average, Median };

std::string_view to_string(FieldKind kind);
std::string to_string(const Normalization& norm);
std::string_view to_string(Aggregation how);
/// "minmax", "blackwhite" or "custom:<max>".
Normalization parse_normalization(std::string_view text);
/// "max", "avg" (or "average"), "median".
Aggregation parse_aggregation(std::string_view text);

struct Offset {
    int dx;
    int dy;
};

/// Neighbor directions, row-major over the 3x3 block. Direction 7 - k is
/// the opposite of direction k.
inline constexpr std::array<Offset, 8> kNeighborOffsets{{
    {-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1},
}};

/// Per-pixel differences toward each 8-neighbor that exists: three at
/// corners, five on edges, eight inside. Missing directions read as NaN.
class NeighborDifferenceField {
public:
    NeighborDifferenceField() = default;
    NeighborDifferenceField(std::size_t width, std::size_t height, FieldKind kind);

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    FieldKind kind() const { return kind_; }

    bool has_neighbor(std::size_t i, std::size_t j, std::size_t k) const;
    std::size_t neighbor_count(std::size_t i, std::size_t j) const;

    double raw(std::size_t i, std::size_t j, std::size_t k) const { return raw_[slot(i, j, k)]; }
    double normalized(std::size_t i, std::size_t j, std::size_t k) const { return norm_[slot(i, j, k)]; }
    void set(std::size_t i, std::size_t j, std::size_t k, double raw, double normalized)
    {
        raw_[slot(i, j, k)] = raw;
        norm_[slot(i, j, k)] = normalized;
    }

    /// Every stored normalized entry in pixel-then-direction order.
    std::vector<double> normalized_entries() const;

    Normalization normalization;
    std::optional<DifferenceMetric> metric;
    /// The (min, max) mapped onto [0, 1]. Subtraction fields keep (0, 1).
    double scale_min = 0.0;
    double scale_max = 1.0;
    /// All raw differences were zero, so every normalized entry is 0.
    bool degenerate = false;

private:
    std::size_t slot(std::size_t i, std::size_t j, std::size_t k) const { return (j * width_ + i) * 8 + k; }

    std::size_t width_ = 0;
    std::size_t height_ = 0;
    FieldKind kind_ = FieldKind::Value;
    std::vector<double> raw_;
    std::vector<double> norm_;
};

/// |v(p) - v(q)| over all neighbor pairs, MINMAX normalized.
NeighborDifferenceField value_difference_field(const ScalarField& field);

/// delta_e between the colormap colors of neighboring pixels. For DE94 the
/// pixel with the lower row-major index is the reference color, which keeps
/// the field symmetric. Throws ValidationError for CUSTOM with max <= 0.
NeighborDifferenceField color_difference_field(const ScalarField& field, const ColormapSpec& cmap,
                                               DifferenceMetric metric, Normalization norm,
                                               const De94Params& de94 = {});

/// Normalized value minus normalized color difference per entry.
NeighborDifferenceField subtraction_field(const NeighborDifferenceField& value_f,
                                          const NeighborDifferenceField& color_f);

/// Per-pixel reduction over the normalized entries. MAX on a subtraction
/// field picks the entry of largest magnitude and keeps its sign.
ScalarField aggregate(const NeighborDifferenceField& f, Aggregation how, const Domain& domain = {0, 1, 0, 1});

struct FieldStatistics {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0; // population
    std::size_t count = 0;
};

FieldStatistics field_statistics(const NeighborDifferenceField& f);
FieldStatistics entry_statistics(std::vector<double> entries);

struct EvaluationOptions {
    DifferenceMetric metric = DifferenceMetric::Ciede2000;
    Normalization normalization;
    Aggregation aggregation = Aggregation::Max;
    De94Params de94;
};

struct EvaluationBundle {
    ScalarField source;
    ColormapSpec colormap;
    std::optional<TestSpec> test;
    EvaluationOptions options;
    NeighborDifferenceField value;
    NeighborDifferenceField color;
    NeighborDifferenceField subtraction;
    FieldStatistics value_stats;
    FieldStatistics color_stats;
    FieldStatistics subtraction_stats;

    bool degenerate() const { return value.degenerate || color.degenerate; }
};

EvaluationBundle evaluate(ScalarField field, ColormapSpec cmap, const EvaluationOptions& options,
                          std::optional<TestSpec> test = std::nullopt);

struct ObserverEntry {
    Offset offset;
    std::size_t i;
    std::size_t j;
    double neighbor_value;
    double value_raw;
    double value_normalized;
    double color_raw;
    double color_normalized;
    double subtraction;
};

struct ObserverReport {
    std::size_t i;
    std::size_t j;
    double value;
    /// Mapped color of the probed pixel as displayable sRGB.
    Color color;
    std::vector<ObserverEntry> entries;
};

/// The probed pixel's neighborhood across all three fields. Throws
/// ValidationError when (i, j) is outside the grid.
ObserverReport pixel_observer(const EvaluationBundle& bundle, std::size_t i, std::size_t j);

nlohmann::json to_json(const FieldStatistics& stats);
nlohmann::json to_json(const ObserverReport& report);
/// Statistics of the three fields plus normalization metadata.
nlohmann::json statistics_json(const EvaluationBundle& bundle);

} // namespace cmtest
