#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace memspike {

// Synthesis cost measurements for the generated accelerator at six network
// scales, plus the cross-device snapshot of the smallest build. The scale
// metric combines image side length and class count as side * classes^2.

struct ResourcePoint {
    int n_side = 0;
    int t_classes = 0;
    long alm_without = 0;  // adaptive logic modules, no weight sharing
    long alm_with = 0;     // with weight sharing
};

inline double resource_metric(int n_side, int t_classes) {
    if (n_side <= 0 || t_classes <= 0)
        throw std::invalid_argument("metric needs positive side and class count");
    return static_cast<double>(n_side) * t_classes * t_classes;
}

inline const std::vector<ResourcePoint>& resource_points() {
    static const std::vector<ResourcePoint> pts = {
        {3, 3, 199, 122},  {5, 3, 395, 214},   {7, 3, 516, 237},
        {5, 5, 869, 428},  {7, 5, 1309, 475},  {9, 5, 1917, 540},
    };
    return pts;
}

struct PlatformPoint {
    std::string platform;
    std::string unit;
    long without_sharing = 0;
    long with_sharing = 0;
};

// Reference only: the 3x3x3 build measured on three device families.
inline const std::vector<PlatformPoint>& platform_reference_points() {
    static const std::vector<PlatformPoint> pts = {
        {"stratix-v", "ALM", 199, 122},
        {"cyclone-10", "LE", 542, 477},
        {"arria-10", "ALM", 203, 130},
    };
    return pts;
}

enum class FitModel : uint8_t { LinearInMetric, PowerLaw };

struct ResourceFit {
    FitModel model = FitModel::LinearInMetric;
    double c0 = 0.0;  // linear: intercept;  power: prefactor
    double c1 = 0.0;  // linear: slope;      power: exponent
    std::vector<double> residuals;
    double log_log_slope = 0.0;  // power model only: equals c1
};

namespace detail {

// Best prefactor for a fixed exponent s, minimizing sum (y - c*x^s)^2.
inline double power_prefactor(const std::vector<std::pair<double, double>>& pts, double s) {
    double num = 0.0, den = 0.0;
    for (const auto& [x, y] : pts) {
        const double xs = std::pow(x, s);
        num += y * xs;
        den += xs * xs;
    }
    return num / den;
}

// d(SSE)/ds with the prefactor at its conditional optimum; by the envelope
// theorem the dc/ds contribution vanishes there, so a sign change brackets
// the least-squares exponent.
inline double power_sse_gradient(const std::vector<std::pair<double, double>>& pts, double s) {
    const double c = power_prefactor(pts, s);
    double g = 0.0;
    for (const auto& [x, y] : pts) {
        const double f = c * std::pow(x, s);
        g += -2.0 * (y - f) * f * std::log(x);
    }
    return g;
}

}  // namespace detail

// Least squares in measured units for both models. The power law keeps its
// natural form alm = c0 * metric^c1 rather than a straight line through the
// log-log points; the data's small-scale overhead drags a log-space slope
// just under 1 and would misstate the growth trend at scale.
inline ResourceFit fit_resources(const std::vector<std::pair<double, double>>& pts, FitModel model) {
    if (pts.size() < 2) throw std::invalid_argument("need at least two points to fit");
    for (size_t i = 0; i < pts.size(); ++i) {
        if (!(pts[i].first > 0.0) || !(pts[i].second > 0.0))
            throw std::invalid_argument("fit points must be positive");
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (pts[i].first == pts[j].first)
                throw std::invalid_argument("degenerate fit: duplicate metric value " +
                                            std::to_string(pts[i].first));
    }

    ResourceFit out;
    out.model = model;
    if (model == FitModel::LinearInMetric) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        const double n = static_cast<double>(pts.size());
        for (const auto& [x, y] : pts) {
            sx += x; sy += y; sxx += x * x; sxy += x * y;
        }
        const double det = n * sxx - sx * sx;
        out.c1 = (n * sxy - sx * sy) / det;
        out.c0 = (sy - out.c1 * sx) / n;
        for (const auto& [x, y] : pts) out.residuals.push_back(y - (out.c0 + out.c1 * x));
        return out;
    }

    // Bracket the exponent, then bisect the gradient to machine precision.
    double lo = 1e-3, hi = 8.0;
    if (detail::power_sse_gradient(pts, lo) > 0.0 || detail::power_sse_gradient(pts, hi) < 0.0)
        throw std::runtime_error("power-law exponent out of bracketing range");
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (detail::power_sse_gradient(pts, mid) <= 0.0 ? lo : hi) = mid;
    }
    out.c1 = 0.5 * (lo + hi);
    out.c0 = detail::power_prefactor(pts, out.c1);
    out.log_log_slope = out.c1;
    for (const auto& [x, y] : pts) out.residuals.push_back(y - out.c0 * std::pow(x, out.c1));
    return out;
}

inline double predict(const ResourceFit& f, int n_side, int t_classes) {
    const double m = resource_metric(n_side, t_classes);
    return f.model == FitModel::LinearInMetric ? f.c0 + f.c1 * m : f.c0 * std::pow(m, f.c1);
}

}  // namespace memspike
