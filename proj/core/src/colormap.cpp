#include "cmtest/colormap.hpp"

#include "cmtest/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace cmtest {

using nlohmann::json;

namespace {

Color lerp(const Color& a, const Color& b, double t)
{
    return {a.space, a.c1 + t * (b.c1 - a.c1), a.c2 + t * (b.c2 - a.c2), a.c3 + t * (b.c3 - a.c3)};
}

std::string fmt_position(double v)
{
    return json(v).dump();
}

} // namespace

ColormapSpec::ColormapSpec(std::vector<ColormapKey> keys, ColorSpace interpolation_space,
                           Color nan_color)
    : keys_(std::move(keys)), space_(interpolation_space), nan_color_(nan_color)
{
    if (keys_.size() < 2) throw ValidationError("colormap needs at least 2 keys");
    if (space_ == ColorSpace::XYZ)
        throw ValidationError("interpolation space must be lab, din99 or srgb");
    for (std::size_t i = 0; i < keys_.size(); ++i) {
        const ColormapKey& k = keys_[i];
        if (!std::isfinite(k.position))
            throw ValidationError("key " + std::to_string(i) + ": position is not finite");
        if (!k.left.finite() || !k.right.finite())
            throw ValidationError("key " + std::to_string(i) + ": color is not finite");
        if (i > 0) {
            const double prev = keys_[i - 1].position;
            if (k.position == prev)
                throw ValidationError("duplicate key position " + fmt_position(k.position));
            if (k.position < prev)
                throw ValidationError("key positions not increasing at key " + std::to_string(i) + " (" +
                                      fmt_position(prev) + " then " + fmt_position(k.position) + ")");
        }
    }
    positions_.reserve(keys_.size());
    left_.reserve(keys_.size());
    right_.reserve(keys_.size());
    for (const ColormapKey& k : keys_) {
        positions_.push_back(k.position);
        left_.push_back(convert(k.left, space_));
        right_.push_back(convert(k.right, space_));
    }
    nan_native_ = convert(nan_color_, space_);
}

Color ColormapSpec::sample(double value) const
{
    if (std::isnan(value)) return nan_native_;
    if (value < positions_.front()) return left_.front();
    if (value >= positions_.back()) return right_.back();
    const auto it = std::upper_bound(positions_.begin(), positions_.end(), value);
    const std::size_t k = static_cast<std::size_t>(it - positions_.begin()) - 1;
    if (value == positions_[k]) return right_[k];
    const double t = (value - positions_[k]) / (positions_[k + 1] - positions_[k]);
    return lerp(right_[k], left_[k + 1], t);
}

ColormapSpec ColormapSpec::with_interpolation_space(ColorSpace space) const
{
    return ColormapSpec(keys_, space, nan_color_);
}

ColormapSpec grayscale_uniform(double lo, double hi)
{
    return ColormapSpec({ColormapKey::single(lo, Color::lab(0.0, 0.0, 0.0)),
                         ColormapKey::single(hi, Color::lab(100.0, 0.0, 0.0))},
                        ColorSpace::LAB, Color::lab(50.0, 0.0, 0.0));
}

namespace {

const std::set<std::string> kKnownFields{"range", "interpolation_space", "nan_color", "keys", "name"};

Color read_rgb(const json& node, const std::string& where)
{
    if (!node.is_array() || node.size() != 3)
        throw ValidationError(where + ": expected [r, g, b]");
    double c[3];
    for (std::size_t i = 0; i < 3; ++i) {
        if (!node[i].is_number()) throw ValidationError(where + ": components must be numbers");
        c[i] = node[i].get<double>();
        if (!(c[i] >= 0.0 && c[i] <= 1.0))
            throw ValidationError(where + ": sRGB components must lie in [0,1]");
    }
    return Color::srgb(c[0], c[1], c[2]);
}

json write_rgb(const Color& color)
{
    const Color c = to_displayable_srgb(color);
    return json::array({c.c1, c.c2, c.c3});
}

} // namespace

ParsedColormap parse_colormap(std::string_view json_text)
{
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("colormap document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ValidationError("colormap document must be a JSON object");

    std::vector<std::string> warnings;
    std::string unknown;
    for (const auto& [field, value] : doc.items()) {
        if (kKnownFields.count(field)) continue;
        unknown += unknown.empty() ? field : ", " + field;
    }
    if (!unknown.empty()) warnings.push_back("ignored unknown top-level fields: " + unknown);

    if (!doc.contains("keys") || !doc["keys"].is_array())
        throw ValidationError("missing 'keys' array");
    std::vector<ColormapKey> keys;
    for (std::size_t i = 0; i < doc["keys"].size(); ++i) {
        const json& k = doc["keys"][i];
        const std::string where = "keys[" + std::to_string(i) + "]";
        if (!k.is_object()) throw ValidationError(where + ": expected an object");
        if (!k.contains("position") || !k["position"].is_number())
            throw ValidationError(where + ": missing numeric 'position'");
        if (!k.contains("left_rgb")) throw ValidationError(where + ": missing 'left_rgb'");
        const Color left = read_rgb(k["left_rgb"], where + ".left_rgb");
        const Color right = k.contains("right_rgb") ? read_rgb(k["right_rgb"], where + ".right_rgb") : left;
        keys.push_back({k["position"].get<double>(), left, right});
    }

    ColorSpace space = ColorSpace::LAB;
    if (doc.contains("interpolation_space")) {
        if (!doc["interpolation_space"].is_string())
            throw ValidationError("'interpolation_space' must be a string");
        const std::string tag = doc["interpolation_space"].get<std::string>();
        space = parse_color_space(tag);
        if (space == ColorSpace::XYZ)
            throw ValidationError("unknown interpolation space '" + tag + "' (expected lab, din99 or srgb)");
    }
    Color nan_color = Color::srgb(0.5, 0.5, 0.5);
    if (doc.contains("nan_color")) nan_color = read_rgb(doc["nan_color"], "nan_color");

    ColormapSpec spec(std::move(keys), space, nan_color);

    if (doc.contains("range")) {
        const json& r = doc["range"];
        if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
            throw ValidationError("'range' must be [min, max]");
        const auto [lo, hi] = spec.range();
        if (r[0].get<double>() != lo || r[1].get<double>() != hi)
            throw ValidationError("'range' must equal the first and last key positions");
    }

    std::optional<std::string> name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ValidationError("'name' must be a string");
        name = doc["name"].get<std::string>();
    }
    return {std::move(spec), std::move(name), std::move(warnings)};
}

std::string serialize_colormap(const ColormapSpec& spec, const std::optional<std::string>& name)
{
    json doc = json::object();
    if (name) doc["name"] = *name;
    const auto [lo, hi] = spec.range();
    doc["range"] = json::array({lo, hi});
    doc["interpolation_space"] = std::string(to_string(spec.interpolation_space()));
    doc["nan_color"] = write_rgb(spec.nan_color());
    json keys = json::array();
    for (const ColormapKey& k : spec.keys()) {
        keys.push_back({{"position", k.position}, {"left_rgb", write_rgb(k.left)}, {"right_rgb", write_rgb(k.right)}});
    }
    doc["keys"] = std::move(keys);
    return doc.dump(2) + "\n";
}

} // namespace cmtest
