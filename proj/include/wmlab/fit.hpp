#pragma once

#include <algorithm>
#include <cmath>
#include <span>

#include "wmlab/error.hpp"
#include "wmlab/summation.hpp"

namespace wmlab {

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;  // of log y against log x
    double r_squared = 0.0;
};

/// Least squares of log y on log x.
inline PowerLawFit fit_power_law(std::span<const double> xs, std::span<const double> ys) {
    require(xs.size() == ys.size(), ErrorKind::contract, "fit_power_law: length mismatch");
    require(xs.size() >= 3, ErrorKind::contract, "fit_power_law: need at least 3 points");
    const std::size_t n = xs.size();
    CompensatedSum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        require(xs[i] > 0.0 && ys[i] > 0.0, ErrorKind::numerical, "fit_power_law: nonpositive value");
        sx.add(std::log(xs[i]));
        sy.add(std::log(ys[i]));
    }
    const double mx = sx.value() / n, my = sy.value() / n;
    CompensatedSum sxx, sxy, syy;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(xs[i]) - mx, dy = std::log(ys[i]) - my;
        sxx.add(dx * dx);
        sxy.add(dx * dy);
        syy.add(dy * dy);
    }
    require(sxx.value() > 0.0, ErrorKind::contract, "fit_power_law: all x equal");
    PowerLawFit f;
    f.slope = sxy.value() / sxx.value();
    f.intercept = my - f.slope * mx;
    CompensatedSum res;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::log(ys[i]) - (f.intercept + f.slope * std::log(xs[i]));
        res.add(e * e);
    }
    const double tot = syy.value();
    f.r_squared = tot > 0.0 ? std::clamp(1.0 - res.value() / tot, 0.0, 1.0) : 1.0;
    return f;
}

}  // namespace wmlab
