#include "cmtest/scalar_field.hpp"

#include "cmtest/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace cmtest {

ScalarField::ScalarField(std::size_t width, std::size_t height, Domain domain, std::vector<double> values)
    : width_(width), height_(height), domain_(domain), values_(std::move(values))
{
    if (width_ == 0 || height_ == 0) throw ValidationError("field dimensions must be positive");
    if (!(domain_.x0 != domain_.x1) || !(domain_.y0 != domain_.y1) || !std::isfinite(domain_.x0) ||
        !std::isfinite(domain_.x1) || !std::isfinite(domain_.y0) || !std::isfinite(domain_.y1))
        throw ValidationError("field domain must be finite and non-degenerate");
    if (values_.empty()) values_.assign(width_ * height_, 0.0);
    if (values_.size() != width_ * height_)
        throw ValidationError("field has " + std::to_string(values_.size()) + " values, expected " +
                              std::to_string(width_ * height_));
}

std::pair<double, double> ScalarField::min_max() const
{
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    return {*lo, *hi};
}

std::pair<double, double> ScalarField::value_range() const
{
    return hint_ ? *hint_ : min_max();
}

bool ScalarField::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

} // namespace cmtest
