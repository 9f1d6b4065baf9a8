#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hydrocas/quadrature.hpp"

using namespace hydrocas;

TEST(Quadrature, KronrodWeightsIntegrateConstants)
{
    double k = detail::kWgk[10];
    for (int j = 0; j < 10; ++j)
        k += 2.0 * detail::kWgk[j];
    double g = 0.0;
    for (double w : detail::kWg)
        g += 2.0 * w;
    EXPECT_NEAR(k, 2.0, 1e-15);
    EXPECT_NEAR(g, 2.0, 1e-15);
}

TEST(Quadrature, PolynomialExactness)
{
    // the Kronrod rule is exact through degree 31, the embedded Gauss rule through 19
    IntegrationSettings s;
    s.rel_tol = 1e-12;
    const auto r = integrate_adaptive([](double x) { return std::pow(x, 19); }, 0.0, 1.0, s);
    EXPECT_NEAR(r.value, 1.0 / 20.0, 1e-16);
    EXPECT_EQ(r.n_evals, 21);
    const auto h = integrate_adaptive([](double x) { return std::pow(x, 30); }, 0.0, 1.0, s);
    EXPECT_NEAR(h.value, 1.0 / 31.0, 1e-15);
}

TEST(Quadrature, SemiInfiniteExponential)
{
    for (auto t : {Transform::none, Transform::exp_tail})
    {
        IntegrationSettings s;
        s.rel_tol = 1e-10;
        s.transform = t;
        const auto r = integrate_adaptive([](double x) { return std::exp(-x); }, 0.0, INFINITY, s);
        EXPECT_NEAR(r.value, 1.0, 1e-10);
    }
}

TEST(Quadrature, BoseIntegral)
{
    IntegrationSettings s;
    s.rel_tol = 1e-10;
    s.transform = Transform::exp_tail;
    const auto r =
        integrate_adaptive([](double x) { return x == 0.0 ? 0.0 : x * x * x / std::expm1(x); }, 0.0, INFINITY, s);
    const double pi = std::numbers::pi;
    EXPECT_NEAR(r.value, pi * pi * pi * pi / 15.0, 1e-9 * r.value);
}

TEST(Quadrature, LogSingularityAndLogTransform)
{
    IntegrationSettings s;
    s.rel_tol = 1e-10;
    const auto r = integrate_adaptive([](double x) { return std::log(x); }, 0.0, 1.0, s);
    EXPECT_NEAR(r.value, -1.0, 1e-9);

    s.transform = Transform::log;
    const auto q = integrate_adaptive([](double x) { return 1.0 / x; }, 1e-8, 1e4, s);
    EXPECT_NEAR(q.value, std::log(1e12), 1e-9 * q.value);
    EXPECT_THROW(integrate_adaptive([](double x) { return x; }, 0.0, 1.0, s), std::invalid_argument);
    EXPECT_THROW(integrate_adaptive([](double x) { return x; }, 1.0, INFINITY, s), std::invalid_argument);
}

TEST(Quadrature, ReversedAndEmptyIntervals)
{
    auto f = [](double x) { return std::cos(x); };
    const auto fwd = integrate_adaptive(f, 0.0, 2.0);
    const auto rev = integrate_adaptive(f, 2.0, 0.0);
    EXPECT_DOUBLE_EQ(fwd.value, -rev.value);
    EXPECT_EQ(integrate_adaptive(f, 1.0, 1.0).value, 0.0);
}

TEST(Quadrature, ErrorEstimateBoundsTrueErrorOnRandomExponentials)
{
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> ua(0.1, 5.0), ub(0.5, 20.0), uc(-3.0, 3.0);
    for (int i = 0; i < 20; ++i)
    {
        const double a = ua(rng), b = ub(rng), c = uc(rng);
        auto f = [&](double x) { return std::exp(c + a * std::sin(x) - x / b); };
        IntegrationSettings loose;
        loose.rel_tol = 1e-4;
        loose.transform = Transform::exp_tail;
        loose.x0 = b;
        IntegrationSettings tight = loose;
        tight.rel_tol = 1e-13;
        tight.max_evals = 2000000;
        const auto r = integrate_adaptive(f, 0.0, INFINITY, loose);
        const auto ref = integrate_adaptive(f, 0.0, INFINITY, tight);
        EXPECT_GE(r.abs_error, std::fabs(r.value - ref.value)) << i;
        EXPECT_LE(std::fabs(r.value - ref.value), 1e-4 * std::fabs(ref.value)) << i;
    }
}

TEST(Quadrature, HalvingToleranceDoesNotIncreaseError)
{
    auto f = [](double x) { return 1.0 / (1e-3 + x * x); };
    const double exact = 2.0 * std::atan(1.0 / std::sqrt(1e-3)) / std::sqrt(1e-3);
    double last = INFINITY;
    for (double tol = 1e-3; tol > 1e-11; tol /= 2)
    {
        IntegrationSettings s;
        s.rel_tol = tol;
        const double err = std::fabs(integrate_adaptive(f, -1.0, 1.0, s).value - exact);
        EXPECT_LE(err, tol * exact);
        last = std::min(last, err);
    }
    EXPECT_LT(last, 1e-11 * exact);
}

TEST(Quadrature, BudgetExhaustionCarriesPartialResult)
{
    IntegrationSettings s;
    s.rel_tol = 1e-14;
    s.max_evals = 200;
    try
    {
        integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, s);
        FAIL() << "expected convergence_error";
    }
    catch (const convergence_error &e)
    {
        EXPECT_LE(e.n_evals(), 200);
        EXPECT_TRUE(std::isfinite(e.partial_value()));
        EXPECT_GT(e.abs_error(), 0.0);
    }
}

TEST(Quadrature, RejectsBadInput)
{
    auto f = [](double x) { return x; };
    IntegrationSettings s;
    s.rel_tol = 0.0;
    EXPECT_THROW(integrate_adaptive(f, 0.0, 1.0, s), std::invalid_argument);
    EXPECT_THROW(integrate_adaptive(f, NAN, 1.0), std::invalid_argument);
    EXPECT_THROW(integrate_adaptive(f, -INFINITY, 1.0), std::invalid_argument);
    EXPECT_THROW(integrate_adaptive([](double) { return NAN; }, 0.0, 1.0), domain_error);
}

TEST(Quadrature, PanelsIndependentOfThreadCount)
{
    auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x) * std::sqrt(x); };
    std::vector<double> edges{0.0};
    for (int i = 1; i <= 16; ++i)
        edges.push_back(0.5 * i);
    edges.push_back(INFINITY);
    IntegrationSettings s;
    s.rel_tol = 1e-9;
    const auto r1 = integrate_panels(f, edges, s, 1);
    for (unsigned nt : {2u, 4u, 8u, 32u})
    {
        const auto r = integrate_panels(f, edges, s, nt);
        EXPECT_EQ(r.value, r1.value);
        EXPECT_EQ(r.abs_error, r1.abs_error);
        EXPECT_EQ(r.n_evals, r1.n_evals);
    }
    const auto whole = integrate_adaptive(f, 0.0, INFINITY, s);
    EXPECT_NEAR(r1.value, whole.value, 1e-8 * std::fabs(whole.value));
}
