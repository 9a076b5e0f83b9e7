#pragma once

#include "cmtest/colormap.hpp"
#include "cmtest/evaluation.hpp"
#include "cmtest/io.hpp"
#include "cmtest/scalar_field.hpp"

#include <array>
#include <string_view>

namespace cmtest {

/// One image pixel per field pixel; the top image row shows the y1 edge.
/// Colors are clamped into sRGB and rounded to 8 bits.
Image render_field(const ScalarField& field, const ColormapSpec& cmap);

enum class Panel { Grayscale, Mapped, Value, Color, Subtraction };

inline constexpr std::array<Panel, 5> kAllPanels{Panel::Grayscale, Panel::Mapped, Panel::Value, Panel::Color,
                                                  Panel::Subtraction};

std::string_view to_string(Panel panel);
/// Throws UnknownNameError.
Panel parse_panel(std::string_view text);

/// White (0) to black (1) over [0, 1], used for the value and color panels.
ColormapSpec difference_ramp();
/// Blue (+1), white (0), red (-1): negative entries, where the color
/// difference exceeds the value difference, show red.
ColormapSpec subtraction_diverging();

Image render_panel(const EvaluationBundle& bundle, Panel panel, Aggregation how);

struct PanelSet {
    Image grayscale;
    Image mapped;
    Image value;
    Image color;
    Image subtraction;

    const Image& get(Panel panel) const;
};

PanelSet render_evaluation(const EvaluationBundle& bundle, Aggregation how);

} // namespace cmtest
