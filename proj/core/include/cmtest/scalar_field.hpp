#pragma once

#include "cmtest/parallel.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace cmtest {

/// Physical rectangle [x0,x1] x [y0,y1] covered by a field.
struct Domain {
    double x0 = 0.0;
    double x1 = 1.0;
    double y0 = 0.0;
    double y1 = 1.0;

    friend bool operator==(const Domain&, const Domain&) = default;
};

struct Resolution {
    std::size_t width = 0;
    std::size_t height = 0;

    friend bool operator==(const Resolution&, const Resolution&) = default;
};

/// Center of cell `index` out of `count` equal cells spanning [lo, hi].
/// The fraction is formed as (2i+1)/(2n) so refining by an odd factor
/// reproduces the coarse centers bit for bit.
inline double pixel_center(double lo, double hi, std::size_t index, std::size_t count)
{
    const double t = static_cast<double>(2 * index + 1) / static_cast<double>(2 * count);
    return lo + (hi - lo) * t;
}

/// Rectangular grid of reals, row-major; row 0 holds the y0 edge and
/// column 0 the x0 edge. Pixel (i, j) samples the point
/// (pixel_center(x0, x1, i, width), pixel_center(y0, y1, j, height)).
class ScalarField {
public:
    ScalarField() = default;
    /// Zero-filled when `values` is empty. Throws ValidationError for zero
    /// dimensions, a degenerate domain, or a size mismatch.
    ScalarField(std::size_t width, std::size_t height, Domain domain, std::vector<double> values = {});

    std::size_t width() const { return width_; }
    std::size_t height() const { return height_; }
    std::size_t size() const { return values_.size(); }
    const Domain& domain() const { return domain_; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    double at(std::size_t i, std::size_t j) const { return values_[j * width_ + i]; }
    double& at(std::size_t i, std::size_t j) { return values_[j * width_ + i]; }

    double x_at(std::size_t i) const { return pixel_center(domain_.x0, domain_.x1, i, width_); }
    double y_at(std::size_t j) const { return pixel_center(domain_.y0, domain_.y1, j, height_); }

    /// Analytic (min, max) of the generating function when known.
    const std::optional<std::pair<double, double>>& value_range_hint() const { return hint_; }
    void set_value_range_hint(std::optional<std::pair<double, double>> hint) { hint_ = hint; }

    /// Smallest and largest stored value.
    std::pair<double, double> min_max() const;
    /// The hint when present, otherwise min_max().
    std::pair<double, double> value_range() const;

    bool all_finite() const;

    friend bool operator==(const ScalarField& a, const ScalarField& b)
    {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.domain_ == b.domain_ &&
               a.values_ == b.values_;
    }

private:
    std::size_t width_ = 0;
    std::size_t height_ = 0;
    Domain domain_;
    std::vector<double> values_;
    std::optional<std::pair<double, double>> hint_;
};

/// Evaluates fn(x, y) at every pixel center. Rows are distributed over
/// worker threads; output does not depend on the thread count.
template <class Fn>
ScalarField sample_grid(const Fn& fn, const Domain& domain, Resolution res)
{
    ScalarField field(res.width, res.height, domain);
    parallel_for(res.height, [&](std::size_t j) {
        const double y = field.y_at(j);
        for (std::size_t i = 0; i < res.width; ++i) field.at(i, j) = fn(field.x_at(i), y);
    });
    return field;
}

} // namespace cmtest
