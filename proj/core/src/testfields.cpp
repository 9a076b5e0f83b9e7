#include "cmtest/testfields.hpp"

#include "cmtest/errors.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cmtest {

namespace {

constexpr double kPi = std::numbers::pi;

double ipow(double base, int exponent)
{
    double result = 1.0;
    for (int k = 0; k < exponent; ++k) result *= base;
    return result;
}

// Rising profile on [0,1] with p(0) = 0 and p(1) = 1.
double rise(double t, int b, bool concave)
{
    if (b == 1) return t;
    return concave ? 1.0 - ipow(1.0 - t, b) : ipow(t, b);
}

int effective_exponent(Shape shape, int b) { return shape == Shape::Linear ? 1 : b; }

void require_exponent(int b)
{
    if (b < 1) throw ValidationError("exponent b must be an integer >= 1 (got " + std::to_string(b) + ")");
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

std::string_view to_string(Shape shape)
{
    switch (shape) {
    case Shape::Linear: return "linear";
    case Shape::Concave: return "concave";
    case Shape::Convex: return "convex";
    }
    return "?";
}

std::string_view to_string(ThresholdType type)
{
    switch (type) {
    case ThresholdType::Linear: return "linear";
    case ThresholdType::Flat: return "flat";
    case ThresholdType::Steep: return "steep";
    }
    return "?";
}

Shape parse_shape(std::string_view text)
{
    const std::string s = lower(text);
    if (s == "linear") return Shape::Linear;
    if (s == "concave") return Shape::Concave;
    if (s == "convex") return Shape::Convex;
    throw ValidationError("unknown shape '" + std::string(text) + "' (expected linear, concave or convex)");
}

ThresholdType parse_threshold_type(std::string_view text)
{
    const std::string s = lower(text);
    if (s == "linear") return ThresholdType::Linear;
    if (s == "flat") return ThresholdType::Flat;
    if (s == "steep") return ThresholdType::Steep;
    throw ValidationError("unknown threshold type '" + std::string(text) + "' (expected linear, flat or steep)");
}

// ---- step ------------------------------------------------------------------

StepFunction::StepFunction(std::vector<double> values) : values_(std::move(values))
{
    if (values_.size() < 2) throw ValidationError("step: A needs at least 2 values");
    for (std::size_t i = 1; i < values_.size(); ++i)
        if (!(values_[i - 1] < values_[i]))
            throw ValidationError("step: A must be strictly increasing");
}

double StepFunction::operator()(double x, double y) const
{
    const long n = static_cast<long>(values_.size());
    const long col = std::clamp(static_cast<long>(std::floor(x)), 0L, 2 * n - 1);
    if (col % 2 == 0) return values_[static_cast<std::size_t>(col / 2)];
    const long row = std::clamp(static_cast<long>(std::floor(y)), 0L, n - 1);
    return values_[static_cast<std::size_t>(row)];
}

Domain StepFunction::domain() const
{
    const double n = static_cast<double>(values_.size());
    return {0.0, 2.0 * n, 0.0, n};
}

// ---- gradient --------------------------------------------------------------

GradientFunction::GradientFunction(double r, double R, int exponent, Shape shape_x, Shape shape_y)
    : r_(r), R_(R), b_(exponent), tx_(shape_x), ty_(shape_y)
{
    require_exponent(b_);
    if (r_ == R_) throw ValidationError("gradient: r and R must differ");
}

double GradientFunction::g(double y) const
{
    return (R_ - r_) * rise(y, effective_exponent(ty_, b_), ty_ == Shape::Concave) + r_;
}

double GradientFunction::operator()(double x, double y) const
{
    return (g(y) - r_) * rise(x, effective_exponent(tx_, b_), tx_ == Shape::Concave) + r_;
}

// ---- min / max / saddle ----------------------------------------------------

MinMaxSaddleFunction::MinMaxSaddleFunction(double o, double p, double m, Domain domain)
    : o_(o), p_(p), m_(m), domain_(domain)
{
    if (o_ == 0.0 || p_ == 0.0) throw ValidationError("mms: o and p must be nonzero");
}

// ---- ridge / valley --------------------------------------------------------

RidgeValleyFunction::RidgeValleyFunction(double r, double R, int exponent, Shape shape_x, Shape shape_y,
                                         std::optional<int> exponent_y)
    : r_(r), b_(exponent), tx_(shape_x), profile_(r, R, exponent_y.value_or(exponent), Shape::Linear, shape_y)
{
    require_exponent(b_);
}

double RidgeValleyFunction::operator()(double x, double y) const
{
    const double gy = profile_.g(y);
    const double ax = std::abs(x);
    const int b = effective_exponent(tx_, b_);
    // Concave uses |x|^b, convex 1-(1-|x|)^b (profile from the line outwards).
    const double w = tx_ == Shape::Convex ? rise(ax, b, true) : rise(ax, b, false);
    return (r_ - gy) * w + gy;
}

// ---- frequency -------------------------------------------------------------

FrequencyFunction::FrequencyFunction(int increases, double amplitude, double median)
    : W_(amplitude), u_(median)
{
    if (increases < 0) throw ValidationError("frequency: D must be >= 0");
    if (!(amplitude > 0.0)) throw ValidationError("frequency: W must be > 0");
    boundaries_.push_back(0.0);
    for (int k = 1; k <= increases + 1; ++k) boundaries_.push_back(boundaries_.back() + 1.0 / k);
}

double FrequencyFunction::operator()(double x, double y) const
{
    // Segment j covers [x_{j-1}, x_j]; a shared boundary belongs to the
    // segment it closes.
    auto it = std::lower_bound(boundaries_.begin() + 1, boundaries_.end(), x);
    if (it == boundaries_.end()) --it;
    const std::size_t j = static_cast<std::size_t>(it - boundaries_.begin());
    return W_ * (1.0 - y) * std::sin(2.0 * kPi * static_cast<double>(j) * (x - *it)) + u_;
}

double FrequencyFunction::pixels_per_shortest_period(std::size_t width) const
{
    const double period = 1.0 / static_cast<double>(boundaries_.size() - 1);
    return period * static_cast<double>(width) / boundaries_.back();
}

// ---- threshold -------------------------------------------------------------

ThresholdFunction::ThresholdFunction(double m, double M, double t, ThresholdType type, int exponent)
    : m_(m), M_(M), t_(t), type_(type), b_(exponent)
{
    require_exponent(b_);
    if (!(m_ < t_ && t_ < M_)) throw ValidationError("threshold: requires m < t < M");
}

double ThresholdFunction::operator()(double x, double y) const
{
    const double end = x <= 0.0 ? lower(y) : upper(y);
    const double ax = std::abs(x);
    double w = ax;
    if (type_ == ThresholdType::Flat) w = rise(ax, b_, false);
    else if (type_ == ThresholdType::Steep) w = rise(ax, b_, true);
    return (end - t_) * w + t_;
}

// ---- little bit ------------------------------------------------------------

LittleBitFunction::LittleBitFunction(double m, double M, double depth_min, double depth_max, int grooves)
    : m_(m), M_(M), gm_(depth_min), gM_(depth_max), grooves_(grooves)
{
    if (!(m_ < M_)) throw ValidationError("little_bit: requires m < M");
    if (!(gm_ > 0.0 && gm_ <= gM_)) throw ValidationError("little_bit: requires 0 < g_m <= g_M");
    if (grooves_ < 1) throw ValidationError("little_bit: groove count must be >= 1");
}

double LittleBitFunction::groove_depth(int stripe) const
{
    if (grooves_ == 1) return gm_;
    const double s = static_cast<double>(stripe - 1) / static_cast<double>(2 * grooves_ - 2);
    return gm_ * (1.0 - s) + gM_ * s;
}

double LittleBitFunction::operator()(double x, double y) const
{
    const double background = m_ + (M_ - m_) * y;
    const double fl = std::floor(x);
    const long stripe = static_cast<long>(fl);
    if (stripe % 2 == 0 || stripe < 1 || stripe > 2L * grooves_ - 1) return background;
    return background - groove_depth(static_cast<int>(stripe)) * std::sin(kPi * (x - fl));
}

// ---- function collection ---------------------------------------------------

std::string_view to_string(CollectionId id)
{
    switch (id) {
    case CollectionId::Bukin6: return "bukin6";
    case CollectionId::Langermann: return "langermann";
    case CollectionId::CrossInTray: return "cross_in_tray";
    case CollectionId::Levy13: return "levy13";
    case CollectionId::Schwefel: return "schwefel";
    case CollectionId::SixHumpCamel: return "six_hump_camel";
    case CollectionId::Mandelbrot: return "mandelbrot";
    }
    return "?";
}

CollectionId parse_collection_id(std::string_view text)
{
    for (CollectionId id : {CollectionId::Bukin6, CollectionId::Langermann, CollectionId::CrossInTray,
                            CollectionId::Levy13, CollectionId::Schwefel, CollectionId::SixHumpCamel,
                            CollectionId::Mandelbrot})
        if (lower(text) == to_string(id)) return id;
    throw UnknownNameError("unknown collection function '" + std::string(text) + "'");
}

Domain collection_domain(CollectionId id)
{
    switch (id) {
    case CollectionId::Bukin6: return {-15.0, -5.0, -3.0, 3.0};
    case CollectionId::Langermann: return {0.0, 10.0, 0.0, 10.0};
    case CollectionId::CrossInTray: return {-10.0, 10.0, -10.0, 10.0};
    case CollectionId::Levy13: return {-10.0, 10.0, -10.0, 10.0};
    case CollectionId::Schwefel: return {-500.0, 500.0, -500.0, 500.0};
    case CollectionId::SixHumpCamel: return {-2.0, 2.0, -1.0, 1.0};
    case CollectionId::Mandelbrot: return {-2.0, 1.0, -1.5, 1.5};
    }
    return {};
}

CollectionFunction::CollectionFunction(CollectionId id, int mandelbrot_iterations)
    : id_(id), max_iter_(mandelbrot_iterations)
{
    if (max_iter_ < 1) throw ValidationError("mandelbrot: max_iter must be >= 1");
}

Domain CollectionFunction::domain() const { return collection_domain(id_); }

double CollectionFunction::operator()(double x, double y) const
{
    switch (id_) {
    case CollectionId::Bukin6:
        return 100.0 * std::sqrt(std::abs(y - 0.01 * x * x)) + 0.01 * std::abs(x + 10.0);
    case CollectionId::Langermann: {
        static constexpr std::array<double, 5> c{1.0, 2.0, 5.0, 2.0, 3.0};
        static constexpr std::array<std::array<double, 2>, 5> A{{{3, 5}, {5, 2}, {2, 1}, {1, 4}, {7, 9}}};
        double sum = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double d = (x - A[i][0]) * (x - A[i][0]) + (y - A[i][1]) * (y - A[i][1]);
            sum += c[i] * std::exp(-d / kPi) * std::cos(kPi * d);
        }
        return sum;
    }
    case CollectionId::CrossInTray: {
        const double e = std::abs(100.0 - std::sqrt(x * x + y * y) / kPi);
        return -0.0001 * std::pow(std::abs(std::sin(x) * std::sin(y) * std::exp(e)) + 1.0, 0.1);
    }
    case CollectionId::Levy13: {
        const double s1 = std::sin(3.0 * kPi * x);
        const double s2 = std::sin(3.0 * kPi * y);
        const double s3 = std::sin(2.0 * kPi * y);
        return s1 * s1 + (x - 1.0) * (x - 1.0) * (1.0 + s2 * s2) + (y - 1.0) * (y - 1.0) * (1.0 + s3 * s3);
    }
    case CollectionId::Schwefel:
        return 418.9829 * 2.0 - x * std::sin(std::sqrt(std::abs(x))) - y * std::sin(std::sqrt(std::abs(y)));
    case CollectionId::SixHumpCamel: {
        const double x2 = x * x;
        const double y2 = y * y;
        return (4.0 - 2.1 * x2 + x2 * x2 / 3.0) * x2 + x * y + (-4.0 + 4.0 * y2) * y2;
    }
    case CollectionId::Mandelbrot: {
        double zr = 0.0, zi = 0.0;
        for (int k = 0; k < max_iter_; ++k) {
            const double r2 = zr * zr, i2 = zi * zi;
            if (r2 + i2 > 4.0) return static_cast<double>(k);
            zi = 2.0 * zr * zi + y;
            zr = r2 - i2 + x;
        }
        return static_cast<double>(max_iter_);
    }
    }
    return 0.0;
}

// ---- grid generators -------------------------------------------------------

namespace {

void require_resolution(Resolution res)
{
    if (res.width == 0 || res.height == 0) throw ValidationError("resolution must be at least 1x1");
}

template <class Fn>
ScalarField generate(const Fn& fn, Resolution res, std::optional<std::pair<double, double>> hint)
{
    require_resolution(res);
    ScalarField field = sample_grid(fn, fn.domain(), res);
    field.set_value_range_hint(hint);
    return field;
}

} // namespace

ScalarField gen_step(const std::vector<double>& values, Resolution res)
{
    const StepFunction fn(values);
    return generate(fn, res, std::pair{values.front(), values.back()});
}

ScalarField gen_gradient(double r, double R, int exponent, Shape tx, Shape ty, Resolution res)
{
    const GradientFunction fn(r, R, exponent, tx, ty);
    return generate(fn, res, std::pair{std::min(r, R), std::max(r, R)});
}

ScalarField gen_mms(double o, double p, double m, Resolution res, Domain domain)
{
    const MinMaxSaddleFunction fn(o, p, m, domain);
    return generate(fn, res, std::nullopt);
}

ScalarField gen_ridge_valley(double r, double R, int exponent, Shape tx, Shape ty, Resolution res,
                             std::optional<int> exponent_y)
{
    const RidgeValleyFunction fn(r, R, exponent, tx, ty, exponent_y);
    return generate(fn, res, std::pair{std::min(r, R), std::max(r, R)});
}

ScalarField gen_frequency(int increases, double amplitude, double median, Resolution res, std::string* warning)
{
    const FrequencyFunction fn(increases, amplitude, median);
    require_resolution(res);
    const double ppp = fn.pixels_per_shortest_period(res.width);
    if (warning) {
        warning->clear();
        if (ppp < 8.0) {
            std::ostringstream os;
            os << "frequency: shortest period covers " << ppp << " pixels (< 8); expect aliasing";
            *warning = os.str();
        }
    }
    return generate(fn, res, std::pair{median - amplitude, median + amplitude});
}

ScalarField gen_threshold(double m, double M, double t, ThresholdType type, int exponent, Resolution res)
{
    const ThresholdFunction fn(m, M, t, type, exponent);
    return generate(fn, res, std::pair{m, M});
}

ScalarField gen_little_bit(double m, double M, double depth_min, double depth_max, int grooves, Resolution res)
{
    const LittleBitFunction fn(m, M, depth_min, depth_max, grooves);
    return generate(fn, res, std::pair{m - depth_max, M});
}

ScalarField gen_collection(CollectionId id, Resolution res, std::optional<std::pair<double, double>> rescale,
                           int mandelbrot_iterations)
{
    const CollectionFunction fn(id, mandelbrot_iterations);
    ScalarField field = generate(fn, res, std::nullopt);
    if (rescale) {
        if (!(rescale->first < rescale->second))
            throw ValidationError("rescale range must satisfy lo < hi");
        rescale_field(field, rescale->first, rescale->second);
    }
    return field;
}

void rescale_field(ScalarField& field, double lo, double hi)
{
    const auto [mn, mx] = field.min_max();
    auto values = field.values();
    if (mx == mn) {
        std::fill(values.begin(), values.end(), lo);
    } else {
        const double scale = (hi - lo) / (mx - mn);
        for (double& v : values) v = lo + (v - mn) * scale;
    }
    field.set_value_range_hint(std::pair{lo, hi});
}

} // namespace cmtest
