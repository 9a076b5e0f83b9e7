#include "cmtest/render.hpp"

#include "cmtest/errors.hpp"
#include "cmtest/parallel.hpp"

#include <cmath>

namespace cmtest {

namespace {

std::uint8_t to_byte(double c) { return static_cast<std::uint8_t>(std::lround(std::clamp(c, 0.0, 1.0) * 255.0)); }

ColormapSpec grayscale_for(const ScalarField& field)
{
    auto [lo, hi] = field.value_range();
    if (!(hi > lo)) hi = lo + 1.0;
    return grayscale_uniform(lo, hi);
}

} // namespace

Image render_field(const ScalarField& field, const ColormapSpec& cmap)
{
    Image img(field.width(), field.height());
    const std::size_t h = field.height();
    parallel_for(h, [&](std::size_t j) {
        const std::size_t row = h - 1 - j;
        for (std::size_t i = 0; i < field.width(); ++i) {
            const Color c = to_displayable_srgb(cmap.sample(field.at(i, j)));
            std::uint8_t* px = img.pixel(i, row);
            px[0] = to_byte(c.c1);
            px[1] = to_byte(c.c2);
            px[2] = to_byte(c.c3);
        }
    });
    return img;
}

std::string_view to_string(Panel panel)
{
    switch (panel) {
    case Panel::Grayscale: return "grayscale";
    case Panel::Mapped: return "mapped";
    case Panel::Value: return "value";
    case Panel::Color: return "color";
    case Panel::Subtraction: return "subtraction";
    }
    return "?";
}

Panel parse_panel(std::string_view text)
{
    for (Panel p : kAllPanels)
        if (text == to_string(p)) return p;
    throw UnknownNameError("unknown panel '" + std::string(text) +
                           "' (expected grayscale, mapped, value, color or subtraction)");
}

ColormapSpec difference_ramp()
{
    return ColormapSpec({ColormapKey::single(0.0, Color::lab(100, 0, 0)), ColormapKey::single(1.0, Color::lab(0, 0, 0))},
                        ColorSpace::LAB);
}

ColormapSpec subtraction_diverging()
{
    return ColormapSpec({ColormapKey::single(-1.0, Color::srgb(0.706, 0.016, 0.150)),
                         ColormapKey::single(0.0, Color::srgb(1, 1, 1)),
                         ColormapKey::single(1.0, Color::srgb(0.230, 0.299, 0.754))},
                        ColorSpace::LAB);
}

Image render_panel(const EvaluationBundle& b, Panel panel, Aggregation how)
{
    const Domain& d = b.source.domain();
    switch (panel) {
    case Panel::Grayscale: return render_field(b.source, grayscale_for(b.source));
    case Panel::Mapped: return render_field(b.source, b.colormap);
    case Panel::Value: return render_field(aggregate(b.value, how, d), difference_ramp());
    case Panel::Color: return render_field(aggregate(b.color, how, d), difference_ramp());
    case Panel::Subtraction: return render_field(aggregate(b.subtraction, how, d), subtraction_diverging());
    }
    throw std::logic_error("unhandled panel");
}

const Image& PanelSet::get(Panel panel) const
{
    switch (panel) {
    case Panel::Grayscale: return grayscale;
    case Panel::Mapped: return mapped;
    case Panel::Value: return value;
    case Panel::Color: return color;
    case Panel::Subtraction: return subtraction;
    }
    throw std::logic_error("unhandled panel");
}

PanelSet render_evaluation(const EvaluationBundle& b, Aggregation how)
{
    return {render_panel(b, Panel::Grayscale, how), render_panel(b, Panel::Mapped, how),
            render_panel(b, Panel::Value, how), render_panel(b, Panel::Color, how),
            render_panel(b, Panel::Subtraction, how)};
}

} // namespace cmtest
