#include "memspike/resource_model.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace memspike;

namespace {

std::vector<std::pair<double, double>> series(bool with_sharing) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : resource_points())
        out.emplace_back(resource_metric(p.n_side, p.t_classes),
                         static_cast<double>(with_sharing ? p.alm_with : p.alm_without));
    return out;
}

}  // namespace

TEST(Metric, GrowsAsSideTimesClassesSquared) {
    EXPECT_DOUBLE_EQ(resource_metric(3, 3), 27.0);
    EXPECT_DOUBLE_EQ(resource_metric(5, 3), 45.0);
    EXPECT_DOUBLE_EQ(resource_metric(7, 3), 63.0);
    EXPECT_DOUBLE_EQ(resource_metric(5, 5), 125.0);
    EXPECT_DOUBLE_EQ(resource_metric(7, 5), 175.0);
    EXPECT_DOUBLE_EQ(resource_metric(9, 5), 225.0);
    EXPECT_THROW(resource_metric(0, 3), std::invalid_argument);
    EXPECT_THROW(resource_metric(3, -1), std::invalid_argument);
}

TEST(Fixtures, SynthesisTableRows) {
    const auto& pts = resource_points();
    ASSERT_EQ(pts.size(), 6u);
    EXPECT_EQ(pts[0].n_side, 3);
    EXPECT_EQ(pts[0].t_classes, 3);
    EXPECT_EQ(pts[0].alm_without, 199);
    EXPECT_EQ(pts[0].alm_with, 122);
    EXPECT_EQ(pts[5].n_side, 9);
    EXPECT_EQ(pts[5].t_classes, 5);
    EXPECT_EQ(pts[5].alm_without, 1917);
    EXPECT_EQ(pts[5].alm_with, 540);
    // sharing reduces the footprint at every size
    for (const auto& p : pts) EXPECT_LT(p.alm_with, p.alm_without);
}

TEST(Fixtures, PlatformReference) {
    const auto& ref = platform_reference_points();
    ASSERT_EQ(ref.size(), 3u);
    EXPECT_EQ(ref[0].platform, "stratix-v");
    EXPECT_EQ(ref[0].without_sharing, 199);
    EXPECT_EQ(ref[0].with_sharing, 122);
    EXPECT_EQ(ref[1].unit, "LE");
    EXPECT_EQ(ref[1].without_sharing, 542);
    EXPECT_EQ(ref[1].with_sharing, 477);
    EXPECT_EQ(ref[2].without_sharing, 203);
    EXPECT_EQ(ref[2].with_sharing, 130);
}

// Fit oracles below were frozen from an independent least-squares
// computation (numpy lstsq for the linear model, exhaustive grid plus
// golden-section refinement for the power model) on the same six points.

TEST(LinearFit, MatchesTheOracle) {
    const auto f = fit_resources(series(false), FitModel::LinearInMetric);
    EXPECT_EQ(f.model, FitModel::LinearInMetric);
    EXPECT_NEAR(f.c0, -27.21611071682107, 1e-6);
    EXPECT_NEAR(f.c1, 8.133782824698375, 1e-8);

    const auto g = fit_resources(series(true), FitModel::LinearInMetric);
    EXPECT_NEAR(g.c0, 108.10787792760817, 1e-6);
    EXPECT_NEAR(g.c1, 2.071746564294472, 1e-8);
}

TEST(LinearFit, NormalEquationsHold) {
    for (bool sharing : {false, true}) {
        const auto pts = series(sharing);
        const auto f = fit_resources(pts, FitModel::LinearInMetric);
        ASSERT_EQ(f.residuals.size(), pts.size());
        double sum_r = 0.0, sum_rx = 0.0;
        for (size_t i = 0; i < pts.size(); ++i) {
            sum_r += f.residuals[i];
            sum_rx += f.residuals[i] * pts[i].first;
        }
        EXPECT_NEAR(sum_r, 0.0, 1e-9);
        EXPECT_NEAR(sum_rx, 0.0, 1e-6);  // scaled by metric values up to 225
    }
}

TEST(PowerFit, MatchesTheOracle) {
    const auto f = fit_resources(series(false), FitModel::PowerLaw);
    EXPECT_NEAR(f.c0, 4.878439833129449, 1e-5);
    EXPECT_NEAR(f.c1, 1.094792857732545, 1e-6);
    EXPECT_DOUBLE_EQ(f.log_log_slope, f.c1);

    const auto g = fit_resources(series(true), FitModel::PowerLaw);
    EXPECT_NEAR(g.c0, 18.760317360650916, 1e-4);
    EXPECT_NEAR(g.c1, 0.6263890504864211, 1e-6);
}

TEST(PowerFit, ExponentStraddlesLinearGrowth) {
    // the headline scaling contrast: superlinear without sharing,
    // sublinear with it
    EXPECT_GT(fit_resources(series(false), FitModel::PowerLaw).c1, 1.0);
    EXPECT_LT(fit_resources(series(true), FitModel::PowerLaw).c1, 1.0);
}

TEST(PowerFit, ResidualsOrthogonalToTheModel) {
    for (bool sharing : {false, true}) {
        const auto pts = series(sharing);
        const auto f = fit_resources(pts, FitModel::PowerLaw);
        double dot_c = 0.0, norm_r = 0.0, norm_b = 0.0;
        for (size_t i = 0; i < pts.size(); ++i) {
            const double basis = std::pow(pts[i].first, f.c1);
            dot_c += f.residuals[i] * basis;
            norm_r += f.residuals[i] * f.residuals[i];
            norm_b += basis * basis;
        }
        // cos of the angle between residual and model direction
        EXPECT_NEAR(dot_c / std::sqrt(norm_r * norm_b), 0.0, 1e-9);
    }
}

TEST(PowerFit, PredictInterpolatesTheFit) {
    const auto f = fit_resources(series(false), FitModel::PowerLaw);
    EXPECT_DOUBLE_EQ(predict(f, 3, 3), f.c0 * std::pow(27.0, f.c1));
    const auto lin = fit_resources(series(false), FitModel::LinearInMetric);
    EXPECT_DOUBLE_EQ(predict(lin, 9, 5), lin.c0 + lin.c1 * 225.0);
}

TEST(Fit, RejectsDegenerateInputs) {
    EXPECT_THROW(fit_resources({{27.0, 199.0}}, FitModel::LinearInMetric), std::invalid_argument);
    EXPECT_THROW(fit_resources({{27.0, 199.0}, {27.0, 300.0}}, FitModel::PowerLaw),
                 std::invalid_argument);  // duplicate metric
    EXPECT_THROW(fit_resources({{27.0, 199.0}, {-45.0, 395.0}}, FitModel::PowerLaw),
                 std::invalid_argument);
    EXPECT_THROW(fit_resources({{27.0, 0.0}, {45.0, 395.0}}, FitModel::PowerLaw),
                 std::invalid_argument);
}
