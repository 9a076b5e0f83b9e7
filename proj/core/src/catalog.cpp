#include "cmtest/catalog.hpp"

#include "cmtest/errors.hpp"
#include "cmtest/noise.hpp"
#include "cmtest/testfields.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace cmtest {

namespace {

constexpr FunctionId kAllFunctions[] = {
    FunctionId::Step,      FunctionId::Gradient,   FunctionId::MinMaxSaddle, FunctionId::RidgeValley,
    FunctionId::Frequency, FunctionId::Threshold,  FunctionId::LittleBit,    FunctionId::Bukin6,
    FunctionId::Langermann, FunctionId::CrossInTray, FunctionId::Levy13,     FunctionId::Schwefel,
    FunctionId::SixHumpCamel, FunctionId::Mandelbrot,
};

ParamSchema real(std::string name, std::string def, std::string desc)
{
    return {std::move(name), ParamKind::Real, std::move(def), std::move(desc), {}};
}

ParamSchema integer(std::string name, std::optional<std::string> def, std::string desc)
{
    return {std::move(name), ParamKind::Integer, std::move(def), std::move(desc), {}};
}

ParamSchema choice(std::string name, std::string def, std::string desc, std::vector<std::string> choices)
{
    return {std::move(name), ParamKind::Choice, std::move(def), std::move(desc), std::move(choices)};
}

ParamSchema optional_real(std::string name, std::string desc)
{
    return {std::move(name), ParamKind::Real, std::nullopt, std::move(desc), {}};
}

std::vector<ParamSchema> collection_params(bool mandelbrot)
{
    std::vector<ParamSchema> p{optional_real("rescale_min", "rescale values affinely so the minimum maps here"),
                               optional_real("rescale_max", "rescale values affinely so the maximum maps here")};
    if (mandelbrot) p.push_back(integer("max_iter", "256", "escape-time iteration cap"));
    return p;
}

std::vector<FunctionInfo> build_catalog()
{
    const std::vector<std::string> shapes{"linear", "concave", "convex"};
    std::vector<FunctionInfo> c;
    c.push_back({FunctionId::Step, "neighborhood step test; even columns hold one value, odd columns all values",
                 {0, 8, 0, 4},
                 {{"A", ParamKind::RealList, "0,0.25,0.75,1", "strictly increasing test values", {}}}});
    c.push_back({FunctionId::Gradient, "gradient variation from r towards g(y) with g(0)=r, g(1)=R",
                 {0, 1, 0, 1},
                 {real("r", "0", "value at x=0 and y=0"), real("R", "1", "value at (1,1)"),
                  integer("b", "1", "polynomial exponent (>= 1)"),
                  choice("T_x", "convex", "profile along x", shapes),
                  choice("T_y", "convex", "profile along y", shapes)}});
    c.push_back({FunctionId::MinMaxSaddle, "o*x^2 + p*y^2 + m: minimum, maximum or saddle at the origin",
                 {-1, 1, -1, 1},
                 {real("o", "1", "x curvature (nonzero)"), real("p", "1", "y curvature (nonzero)"),
                  real("m", "0", "value at the critical point")}});
    c.push_back({FunctionId::RidgeValley, "ridge (R > r) or valley (R < r) along x = 0",
                 {-1, 1, 0, 1},
                 {real("r", "0", "value at x = +-1"), real("R", "1", "value on the line at y = 1"),
                  integer("b", "1", "polynomial exponent (>= 1)"),
                  choice("T_x", "concave", "cross-section profile", shapes),
                  choice("T_y", "convex", "profile along the line", shapes),
                  integer("b_y", std::nullopt, "separate exponent for the line profile (defaults to b)")}});
    c.push_back({FunctionId::Frequency, "D+1 sine periods of rising frequency, amplitude W(1-y) around u",
                 {0, 2.45, 0, 1},
                 {integer("D", "5", "number of frequency increases (>= 0)"), real("W", "0.5", "amplitude (> 0)"),
                  real("u", "0.5", "median value")}});
    c.push_back({FunctionId::Threshold, "isoline t along x = 0 between f_m(y) and f_M(y)",
                 {-1, 1, -1, 1},
                 {real("m", "-1", "minimum (m < t)"), real("M", "1", "maximum (t < M)"), real("t", "0", "threshold"),
                  choice("T", "linear", "gradient behaviour around the threshold", {"linear", "flat", "steep"}),
                  integer("b", "2", "exponent for flat/steep (>= 1)")}});
    c.push_back({FunctionId::LittleBit, "linear ramp m..M along y with n sine grooves of depth g_m..g_M",
                 {0, 21, 0, 1},
                 {real("m", "0.1", "ramp start (m < M)"), real("M", "1", "ramp end"),
                  real("g_m", "0.0001", "first groove depth (> 0)"), real("g_M", "0.1", "last groove depth (>= g_m)"),
                  integer("groove_count", "10", "number of grooves n (>= 1)")}});
    for (FunctionId id : {FunctionId::Bukin6, FunctionId::Langermann, FunctionId::CrossInTray, FunctionId::Levy13,
                          FunctionId::Schwefel, FunctionId::SixHumpCamel, FunctionId::Mandelbrot}) {
        const CollectionId cid = parse_collection_id(to_string(id));
        c.push_back({id, "function collection: " + std::string(to_string(id)), collection_domain(cid),
                     collection_params(id == FunctionId::Mandelbrot)});
    }
    return c;
}

std::vector<ParamSchema> build_noise_params()
{
    return {
        choice("noise", "none", "noise application option",
               {"none", "max_scaled", "min_scaled", "range_scaled", "replacement"}),
        real("noise_amplitude", "0.25", "peak noise for scaled options, in (0,1]"),
        optional_real("noise_min", "replacement range minimum n_m"),
        optional_real("noise_max", "replacement range maximum n_M"),
        {"noise_clip", ParamKind::Flag, "true", "clip scaled results to the field range", {}},
        real("noise_proportion", "1", "fraction of pixels receiving noise, in [0,1]"),
        choice("noise_distribution", "uniform", "random draw distribution",
               {"uniform", "normal", "beta", "beta_left", "beta_right"}),
        choice("noise_source", "random", "per-pixel random draws or Perlin gradient noise", {"random", "perlin"}),
        real("noise_cells", "8", "Perlin lattice cells across the larger dimension"),
    };
}

std::string kind_name(ParamKind kind)
{
    switch (kind) {
    case ParamKind::Real: return "real";
    case ParamKind::Integer: return "integer";
    case ParamKind::Choice: return "choice";
    case ParamKind::RealList: return "real list";
    case ParamKind::Flag: return "flag";
    }
    return "?";
}

double parse_real(std::string_view name, std::string_view text)
{
    double v = 0.0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v))
        throw ValidationError("parameter " + std::string(name) + ": '" + std::string(text) + "' is not a finite real");
    return v;
}

long long parse_integer(std::string_view name, std::string_view text)
{
    long long v = 0;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end)
        throw ValidationError("parameter " + std::string(name) + ": '" + std::string(text) + "' is not an integer");
    return v;
}

// Parameter values resolved against a schema.
class ParamReader {
public:
    ParamReader(FunctionId fn, const std::map<std::string, std::string>& given)
    {
        for (const auto* schema : {&function_info(fn).params, &noise_params()})
            for (const ParamSchema& p : *schema) schema_[p.name] = &p;
        for (const auto& [name, value] : given) {
            if (!schema_.count(name)) {
                std::string known;
                for (const auto* s : {&function_info(fn).params, &noise_params()})
                    for (const ParamSchema& p : *s) known += (known.empty() ? "" : ", ") + p.name;
                throw UnknownNameError("unknown parameter '" + name + "' for function '" +
                                       std::string(to_string(fn)) + "' (accepted: " + known +
                                       "); run `catalog` for schemas");
            }
        }
        given_ = &given;
        // Supplied values must parse even when the option that reads them is off.
        for (const auto& [name, value] : given) {
            switch (schema_.at(name)->kind) {
            case ParamKind::Real: real(name); break;
            case ParamKind::Integer: integer(name); break;
            case ParamKind::Choice: choice(name); break;
            case ParamKind::RealList: real_list(name); break;
            case ParamKind::Flag: flag(name); break;
            }
        }
    }

    std::optional<std::string> raw(const std::string& name) const
    {
        if (auto it = given_->find(name); it != given_->end()) return it->second;
        return schema_.at(name)->default_value;
    }

    double real(const std::string& name) const { return parse_real(name, required(name)); }

    std::optional<double> optional_real(const std::string& name) const
    {
        auto v = raw(name);
        if (!v) return std::nullopt;
        return parse_real(name, *v);
    }

    int integer(const std::string& name) const
    {
        const long long v = parse_integer(name, required(name));
        if (v < -1'000'000'000LL || v > 1'000'000'000LL)
            throw ValidationError("parameter " + name + " out of range");
        return static_cast<int>(v);
    }

    std::optional<int> optional_integer(const std::string& name) const
    {
        if (!raw(name)) return std::nullopt;
        return integer(name);
    }

    std::string choice(const std::string& name) const
    {
        const std::string v = required(name);
        const auto& choices = schema_.at(name)->choices;
        if (std::find(choices.begin(), choices.end(), v) == choices.end()) {
            std::string list;
            for (const auto& c : choices) list += (list.empty() ? "" : ", ") + c;
            throw ValidationError("parameter " + name + ": '" + v + "' is not one of " + list);
        }
        return v;
    }

    bool flag(const std::string& name) const
    {
        const std::string v = required(name);
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ValidationError("parameter " + name + ": '" + v + "' is not a flag (true/false)");
    }

    std::vector<double> real_list(const std::string& name) const
    {
        const std::string v = required(name);
        std::vector<double> out;
        std::size_t start = 0;
        while (start <= v.size()) {
            const std::size_t comma = v.find(',', start);
            const std::size_t end = comma == std::string::npos ? v.size() : comma;
            out.push_back(parse_real(name, std::string_view(v).substr(start, end - start)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    }

private:
    std::string required(const std::string& name) const
    {
        auto v = raw(name);
        if (!v) throw ValidationError("parameter " + name + " is required");
        return *v;
    }

    std::map<std::string, const ParamSchema*> schema_;
    const std::map<std::string, std::string>* given_ = nullptr;
};

ScalarField generate_base(FunctionId fn, const ParamReader& p, Resolution res, std::vector<std::string>& warnings)
{
    switch (fn) {
    case FunctionId::Step: return gen_step(p.real_list("A"), res);
    case FunctionId::Gradient:
        return gen_gradient(p.real("r"), p.real("R"), p.integer("b"), parse_shape(p.choice("T_x")),
                            parse_shape(p.choice("T_y")), res);
    case FunctionId::MinMaxSaddle: return gen_mms(p.real("o"), p.real("p"), p.real("m"), res);
    case FunctionId::RidgeValley:
        return gen_ridge_valley(p.real("r"), p.real("R"), p.integer("b"), parse_shape(p.choice("T_x")),
                                parse_shape(p.choice("T_y")), res, p.optional_integer("b_y"));
    case FunctionId::Frequency: {
        std::string warning;
        ScalarField f = gen_frequency(p.integer("D"), p.real("W"), p.real("u"), res, &warning);
        if (!warning.empty()) warnings.push_back(warning);
        return f;
    }
    case FunctionId::Threshold:
        return gen_threshold(p.real("m"), p.real("M"), p.real("t"), parse_threshold_type(p.choice("T")),
                             p.integer("b"), res);
    case FunctionId::LittleBit:
        return gen_little_bit(p.real("m"), p.real("M"), p.real("g_m"), p.real("g_M"), p.integer("groove_count"),
                              res);
    default: break;
    }
    const CollectionId cid = parse_collection_id(to_string(fn));
    const auto lo = p.optional_real("rescale_min");
    const auto hi = p.optional_real("rescale_max");
    if (lo.has_value() != hi.has_value())
        throw ValidationError("rescale_min and rescale_max must be given together");
    std::optional<std::pair<double, double>> rescale;
    if (lo) rescale = std::pair{*lo, *hi};
    const int iterations = fn == FunctionId::Mandelbrot ? p.integer("max_iter") : 256;
    return gen_collection(cid, res, rescale, iterations);
}

} // namespace

std::string_view to_string(FunctionId id)
{
    switch (id) {
    case FunctionId::Step: return "step";
    case FunctionId::Gradient: return "gradient";
    case FunctionId::MinMaxSaddle: return "mms";
    case FunctionId::RidgeValley: return "ridge_valley";
    case FunctionId::Frequency: return "frequency";
    case FunctionId::Threshold: return "threshold";
    case FunctionId::LittleBit: return "little_bit";
    case FunctionId::Bukin6: return "bukin6";
    case FunctionId::Langermann: return "langermann";
    case FunctionId::CrossInTray: return "cross_in_tray";
    case FunctionId::Levy13: return "levy13";
    case FunctionId::Schwefel: return "schwefel";
    case FunctionId::SixHumpCamel: return "six_hump_camel";
    case FunctionId::Mandelbrot: return "mandelbrot";
    }
    return "?";
}

FunctionId parse_function_id(std::string_view text)
{
    for (FunctionId id : kAllFunctions)
        if (text == to_string(id)) return id;
    std::string list;
    for (FunctionId id : kAllFunctions) list += (list.empty() ? "" : ", ") + std::string(to_string(id));
    throw UnknownNameError("unknown function '" + std::string(text) + "' (available: " + list +
                           "); run `catalog` for parameter schemas");
}

const std::vector<FunctionInfo>& catalog()
{
    static const std::vector<FunctionInfo> c = build_catalog();
    return c;
}

const FunctionInfo& function_info(FunctionId id)
{
    for (const FunctionInfo& f : catalog())
        if (f.id == id) return f;
    throw std::logic_error("function missing from catalog");
}

const std::vector<ParamSchema>& noise_params()
{
    static const std::vector<ParamSchema> p = build_noise_params();
    return p;
}

GeneratedField generate(const TestSpec& spec)
{
    const ParamReader p(spec.function, spec.params);
    std::vector<std::string> warnings;
    ScalarField field = generate_base(spec.function, p, spec.resolution, warnings);

    const std::string mode = p.choice("noise");
    if (mode != "none") {
        NoiseOptions opts;
        opts.mode = parse_noise_mode(mode);
        opts.amplitude = p.real("noise_amplitude");
        const auto n_lo = p.optional_real("noise_min");
        const auto n_hi = p.optional_real("noise_max");
        if (n_lo.has_value() != n_hi.has_value())
            throw ValidationError("noise_min and noise_max must be given together");
        if (n_lo) opts.replacement_range = std::pair{*n_lo, *n_hi};
        opts.clipping = p.flag("noise_clip");
        opts.proportion = p.real("noise_proportion");
        opts.distribution = parse_distribution(p.choice("noise_distribution"));
        opts.source = parse_noise_source(p.choice("noise_source"));
        opts.perlin_cells = p.real("noise_cells");
        opts.seed = spec.seed;
        field = apply_noise(field, field.value_range(), opts);
    }
    return {std::move(field), std::move(warnings)};
}

nlohmann::json to_json(const TestSpec& spec)
{
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : spec.params) params[k] = v;
    return {{"function", std::string(to_string(spec.function))},
            {"params", params},
            {"size", {spec.resolution.width, spec.resolution.height}},
            {"seed", spec.seed}};
}

TestSpec test_spec_from_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) throw ValidationError("test spec must be an object");
    if (!doc.contains("function") || !doc["function"].is_string())
        throw ValidationError("test spec: missing 'function'");
    TestSpec spec;
    spec.function = parse_function_id(doc["function"].get<std::string>());
    if (doc.contains("params")) {
        if (!doc["params"].is_object()) throw ValidationError("test spec: 'params' must be an object");
        for (const auto& [k, v] : doc["params"].items()) {
            if (v.is_string()) spec.params[k] = v.get<std::string>();
            else if (v.is_number() || v.is_boolean()) spec.params[k] = v.dump();
            else throw ValidationError("test spec: parameter '" + k + "' must be a string or number");
        }
    }
    if (doc.contains("size")) {
        const auto& s = doc["size"];
        if (s.is_string()) {
            spec.resolution = parse_resolution(s.get<std::string>());
        } else if (s.is_array() && s.size() == 2 && s[0].is_number_unsigned() && s[1].is_number_unsigned()) {
            spec.resolution = {s[0].get<std::size_t>(), s[1].get<std::size_t>()};
        } else {
            throw ValidationError("test spec: 'size' must be [width, height] or \"WxH\"");
        }
        if (spec.resolution.width == 0 || spec.resolution.height == 0)
            throw ValidationError("test spec: size must be positive");
    }
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) throw ValidationError("test spec: 'seed' must be unsigned");
        spec.seed = doc["seed"].get<std::uint64_t>();
    }
    return spec;
}

namespace {

nlohmann::json schema_json(const std::vector<ParamSchema>& params)
{
    nlohmann::json out = nlohmann::json::array();
    for (const ParamSchema& p : params) {
        nlohmann::json e{{"name", p.name}, {"kind", kind_name(p.kind)}, {"description", p.description}};
        if (p.default_value) e["default"] = *p.default_value;
        else e["default"] = nullptr;
        if (!p.choices.empty()) e["choices"] = p.choices;
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

nlohmann::json catalog_json()
{
    nlohmann::json fns = nlohmann::json::array();
    for (const FunctionInfo& f : catalog()) {
        fns.push_back({{"id", std::string(to_string(f.id))},
                       {"description", f.description},
                       {"domain", {f.domain.x0, f.domain.x1, f.domain.y0, f.domain.y1}},
                       {"params", schema_json(f.params)}});
    }
    return {{"functions", fns}, {"noise_params", schema_json(noise_params())}};
}

std::string catalog_text()
{
    std::ostringstream os;
    auto list = [&](const std::vector<ParamSchema>& params) {
        for (const ParamSchema& p : params) {
            os << "    " << p.name << " (" << kind_name(p.kind);
            if (p.default_value) os << ", default " << *p.default_value;
            else os << ", optional";
            os << ")";
            if (!p.choices.empty()) {
                os << " {";
                for (std::size_t i = 0; i < p.choices.size(); ++i) os << (i ? "|" : "") << p.choices[i];
                os << "}";
            }
            os << "  " << p.description << "\n";
        }
    };
    for (const FunctionInfo& f : catalog()) {
        os << to_string(f.id) << "  " << f.description << "\n";
        os << "  domain [" << f.domain.x0 << ", " << f.domain.x1 << "] x [" << f.domain.y0 << ", " << f.domain.y1
           << "]\n";
        list(f.params);
    }
    os << "noise parameters (all functions):\n";
    list(noise_params());
    return os.str();
}

Resolution parse_resolution(std::string_view text)
{
    const std::size_t x = text.find_first_of("xX");
    if (x == std::string_view::npos) throw ValidationError("size must look like WxH");
    const long long w = parse_integer("size", text.substr(0, x));
    const long long h = parse_integer("size", text.substr(x + 1));
    if (w <= 0 || h <= 0) throw ValidationError("size must be positive");
    return {static_cast<std::size_t>(w), static_cast<std::size_t>(h)};
}

} // namespace cmtest
