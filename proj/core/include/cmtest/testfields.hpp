#pragma once

#include "cmtest/scalar_field.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cmtest {

/// Profile of a ramp. Linear ignores the exponent.
enum class Shape { Linear, Concave, Convex };

enum class ThresholdType { Linear, Flat, Steep };

std::string_view to_string(Shape shape);
std::string_view to_string(ThresholdType type);
Shape parse_shape(std::string_view text);
ThresholdType parse_threshold_type(std::string_view text);

/// Piecewise-constant neighborhood test on [0,2n) x [0,n). Even unit
/// columns hold one value of A each; odd columns run through all of A
/// bottom to top.
class StepFunction {
public:
    explicit StepFunction(std::vector<double> values);
    double operator()(double x, double y) const;
    Domain domain() const;

private:
    std::vector<double> values_;
};

/// Ramp from r towards g(y) along x on [0,1]^2, where g runs r -> R in y.
class GradientFunction {
public:
    GradientFunction(double r, double R, int exponent, Shape shape_x, Shape shape_y);
    double operator()(double x, double y) const;
    double g(double y) const;
    Domain domain() const { return {0.0, 1.0, 0.0, 1.0}; }

private:
    double r_, R_;
    int b_;
    Shape tx_, ty_;
};

/// o*x^2 + p*y^2 + m: minimum, maximum, or saddle at the origin.
class MinMaxSaddleFunction {
public:
    MinMaxSaddleFunction(double o, double p, double m, Domain domain = {-1.0, 1.0, -1.0, 1.0});
    double operator()(double x, double y) const { return o_ * x * x + p_ * y * y + m_; }
    Domain domain() const { return domain_; }

private:
    double o_, p_, m_;
    Domain domain_;
};

/// Ridge (R > r) or valley (R < r) along x = 0 on [-1,1] x [0,1]. The
/// profile along the line is g(y) from GradientFunction; `exponent_y`
/// optionally decouples its exponent from the cross-section one.
class RidgeValleyFunction {
public:
    RidgeValleyFunction(double r, double R, int exponent, Shape shape_x, Shape shape_y,
                        std::optional<int> exponent_y = std::nullopt);
    double operator()(double x, double y) const;
    Domain domain() const { return {-1.0, 1.0, 0.0, 1.0}; }

private:
    double r_;
    int b_;
    Shape tx_;
    GradientFunction profile_;
};

/// D+1 single sine periods of rising frequency j = 1..D+1, segment j
/// spanning [x_{j-1}, x_j] with x_j the j-th harmonic number; amplitude
/// W(1-y) around u.
class FrequencyFunction {
public:
    FrequencyFunction(int increases, double amplitude, double median);
    double operator()(double x, double y) const;
    Domain domain() const { return {0.0, boundaries_.back(), 0.0, 1.0}; }
    /// x_0 .. x_{D+1}.
    const std::vector<double>& boundaries() const { return boundaries_; }
    /// Pixels per period of the highest frequency at the given width.
    double pixels_per_shortest_period(std::size_t width) const;

private:
    double W_, u_;
    std::vector<double> boundaries_;
};

/// Isoline t along x = 0 on [-1,1]^2; rows run from f_m(y) at x = -1 to
/// f_M(y) at x = 1.
class ThresholdFunction {
public:
    ThresholdFunction(double m, double M, double t, ThresholdType type, int exponent);
    double operator()(double x, double y) const;
    double upper(double y) const { return (M_ + t_) / 2.0 - (M_ - t_) / 2.0 * y; }
    double lower(double y) const { return (t_ + m_) / 2.0 + (t_ - m_) / 2.0 * y; }
    Domain domain() const { return {-1.0, 1.0, -1.0, 1.0}; }

private:
    double m_, M_, t_;
    ThresholdType type_;
    int b_;
};

/// Linear ramp m -> M along y with n sine grooves on the odd unit stripes
/// of [0,2n+1] x [0,1]. Groove depth rises linearly from g_m to g_M.
class LittleBitFunction {
public:
    LittleBitFunction(double m, double M, double depth_min, double depth_max, int grooves);
    double operator()(double x, double y) const;
    double groove_depth(int stripe) const;
    Domain domain() const { return {0.0, 2.0 * grooves_ + 1.0, 0.0, 1.0}; }
    int grooves() const { return grooves_; }

private:
    double m_, M_, gm_, gM_;
    int grooves_;
};

enum class CollectionId { Bukin6, Langermann, CrossInTray, Levy13, Schwefel, SixHumpCamel, Mandelbrot };

std::string_view to_string(CollectionId id);
CollectionId parse_collection_id(std::string_view text);

/// Benchmark function from the optimization literature, evaluated on its
/// customary domain (see collection_domain).
class CollectionFunction {
public:
    explicit CollectionFunction(CollectionId id, int mandelbrot_iterations = 256);
    double operator()(double x, double y) const;
    Domain domain() const;
    CollectionId id() const { return id_; }

private:
    CollectionId id_;
    int max_iter_;
};

Domain collection_domain(CollectionId id);

ScalarField gen_step(const std::vector<double>& values, Resolution res);
ScalarField gen_gradient(double r, double R, int exponent, Shape tx, Shape ty, Resolution res);
ScalarField gen_mms(double o, double p, double m, Resolution res, Domain domain = {-1.0, 1.0, -1.0, 1.0});
ScalarField gen_ridge_valley(double r, double R, int exponent, Shape tx, Shape ty, Resolution res,
                             std::optional<int> exponent_y = std::nullopt);
/// `warning` receives an aliasing notice when the shortest period spans
/// fewer than 8 pixels.
ScalarField gen_frequency(int increases, double amplitude, double median, Resolution res,
                          std::string* warning = nullptr);
ScalarField gen_threshold(double m, double M, double t, ThresholdType type, int exponent, Resolution res);
ScalarField gen_little_bit(double m, double M, double depth_min, double depth_max, int grooves,
                           Resolution res);
ScalarField gen_collection(CollectionId id, Resolution res,
                           std::optional<std::pair<double, double>> rescale = std::nullopt,
                           int mandelbrot_iterations = 256);

/// Affine map of the field's min/max onto [lo, hi]. A constant field maps
/// to lo.
void rescale_field(ScalarField& field, double lo, double hi);

} // namespace cmtest
