#ifndef HYDROCAS_QUADRATURE_HPP
#define HYDROCAS_QUADRATURE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"

namespace hydrocas
{
enum class Transform
{
    none,    // finite: identity; semi-infinite: x = a + x0 t/(1-t)
    log,     // finite with a > 0: x = exp(s)
    exp_tail // semi-infinite: x = a - x0 ln(1-t)
};

struct IntegrationSettings
{
    double rel_tol = 1e-6;
    double abs_tol = 0.0;
    long max_evals = 400000;
    Transform transform = Transform::none;
    double x0 = 1.0; // decay scale for semi-infinite maps

    void validate() const
    {
        if (!(rel_tol > 0.0))
            throw std::invalid_argument("IntegrationSettings: rel_tol must be positive");
        if (!(abs_tol >= 0.0))
            throw std::invalid_argument("IntegrationSettings: abs_tol must be non-negative");
        if (max_evals <= 0)
            throw std::invalid_argument("IntegrationSettings: max_evals must be positive");
        if (!(x0 > 0.0))
            throw std::invalid_argument("IntegrationSettings: x0 must be positive");
    }
};

struct IntegrationResult
{
    double value = 0.0;
    double abs_error = 0.0;
    long n_evals = 0;
};

namespace detail
{
// 21-point Kronrod extension of the 10-point Gauss rule (abscissae in
// decreasing order, the last one is the centre). Gauss nodes are the odd
// entries of kXgk.
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208767919977, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment
{
    double a, b, value, error;
    bool operator<(const Segment &o) const { return error < o.error; }
};

template <class G>
Segment gauss_kronrod_21(G &g, double a, double b)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = g(c);
    double fv1[10], fv2[10];
    double kron = kWgk[10] * fc;
    double gauss = 0.0;
    double absum = std::fabs(kron);
    for (int j = 0; j < 10; ++j)
    {
        const double dx = h * kXgk[j];
        fv1[j] = g(c - dx);
        fv2[j] = g(c + dx);
        kron += kWgk[j] * (fv1[j] + fv2[j]);
        absum += kWgk[j] * (std::fabs(fv1[j]) + std::fabs(fv2[j]));
        if (j % 2 == 1)
            gauss += kWg[j / 2] * (fv1[j] + fv2[j]);
    }
    // QUADPACK error heuristic: scale |K - G| against the variation of f
    const double mean = 0.5 * kron;
    double asc = kWgk[10] * std::fabs(fc - mean);
    for (int j = 0; j < 10; ++j)
        asc += kWgk[j] * (std::fabs(fv1[j] - mean) + std::fabs(fv2[j] - mean));
    const double value = kron * h;
    const double resasc = asc * std::fabs(h);
    double err = std::fabs((kron - gauss) * h);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double floor = 50.0 * std::numeric_limits<double>::epsilon() * absum * std::fabs(h);
    err = std::max(err, floor);
    if (!std::isfinite(value))
        throw domain_error("integrate_adaptive: non-finite integrand value on [" + std::to_string(a) +
                           ", " + std::to_string(b) + "]");
    return {a, b, value, err};
}

// Global adaptive bisection on [a, b] of an already-transformed integrand.
template <class G>
IntegrationResult adapt(G &g, double a, double b, const IntegrationSettings &s)
{
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod_21(g, a, b);
    long evals = 21;
    double total = first.value;
    double error = first.error;
    heap.push(first);

    auto done = [&] { return error <= std::max(s.abs_tol, s.rel_tol * std::fabs(total)); };
    while (!done())
    {
        if (evals + 42 > s.max_evals)
            throw convergence_error("integrate_adaptive: evaluation budget exhausted", total, error, evals);
        Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b))
            throw convergence_error("integrate_adaptive: interval cannot be subdivided further", total,
                                    error, evals);
        heap.pop();
        Segment left = gauss_kronrod_21(g, worst.a, mid);
        Segment right = gauss_kronrod_21(g, mid, worst.b);
        evals += 42;
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // refresh the running sums from scratch now and then to shed drift
        if (heap.size() % 64 == 0)
        {
            auto copy = heap;
            total = 0.0;
            error = 0.0;
            while (!copy.empty())
            {
                total += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    // final sums in a fixed order
    std::vector<Segment> segs;
    segs.reserve(heap.size());
    while (!heap.empty())
    {
        segs.push_back(heap.top());
        heap.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Segment &x, const Segment &y) { return x.a < y.a; });
    IntegrationResult r;
    for (const auto &sg : segs)
    {
        r.value += sg.value;
        r.abs_error += sg.error;
    }
    r.n_evals = evals;
    return r;
}
} // namespace detail

// Integrate f over [a, b]; b may be +infinity.
template <class F>
IntegrationResult integrate_adaptive(F &&f, double a, double b, const IntegrationSettings &s = {})
{
    s.validate();
    if (std::isnan(a) || std::isnan(b) || std::isinf(a))
        throw std::invalid_argument("integrate_adaptive: invalid bounds");
    if (a == b)
        return {};
    if (b < a)
    {
        auto r = integrate_adaptive(f, b, a, s);
        r.value = -r.value;
        return r;
    }

    if (std::isinf(b))
    {
        if (s.transform == Transform::exp_tail)
        {
            auto g = [&](double t) {
                if (t >= 1.0)
                    return 0.0; // the point at infinity carries no weight
                const double x = a - s.x0 * std::log1p(-t);
                return f(x) * s.x0 / (1.0 - t);
            };
            return detail::adapt(g, 0.0, 1.0, s);
        }
        if (s.transform == Transform::log)
            throw std::invalid_argument("integrate_adaptive: log transform needs a finite interval");
        auto g = [&](double t) {
            const double w = 1.0 - t;
            if (w <= 0.0)
                return 0.0;
            return f(a + s.x0 * t / w) * s.x0 / (w * w);
        };
        return detail::adapt(g, 0.0, 1.0, s);
    }

    if (s.transform == Transform::log)
    {
        if (!(a > 0.0))
            throw std::invalid_argument("integrate_adaptive: log transform needs a > 0");
        auto g = [&](double t) {
            const double x = std::exp(t);
            return f(x) * x;
        };
        return detail::adapt(g, std::log(a), std::log(b), s);
    }
    auto g = [&](double x) { return f(x); };
    return detail::adapt(g, a, b, s);
}

// Integrate over consecutive panels [edges[i], edges[i+1]] concurrently and
// reduce in panel order; the result does not depend on n_threads. The last
// edge may be +infinity.
template <class F>
IntegrationResult integrate_panels(const F &f, const std::vector<double> &edges,
                                   const IntegrationSettings &s, unsigned n_threads = 1)
{
    if (edges.size() < 2)
        throw std::invalid_argument("integrate_panels: need at least two edges");
    const std::size_t n = edges.size() - 1;
    std::vector<IntegrationResult> parts(n);
    std::vector<std::exception_ptr> failures(n);
    IntegrationSettings ps = s;
    ps.abs_tol = s.abs_tol / static_cast<double>(n);

    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < n; i += stride)
        {
            try
            {
                parts[i] = integrate_adaptive(f, edges[i], edges[i + 1], ps);
            }
            catch (...)
            {
                failures[i] = std::current_exception();
            }
        }
    };

    const unsigned nt = std::max(1u, std::min<unsigned>(n_threads, static_cast<unsigned>(n)));
    if (nt == 1)
        work(0, 1);
    else
    {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < nt; ++t)
            pool.emplace_back(work, t, nt);
        for (auto &th : pool)
            th.join();
    }

    IntegrationResult total;
    double partial = 0.0;
    double partial_err = 0.0;
    long partial_evals = 0;
    std::exception_ptr first_failure;
    for (std::size_t i = 0; i < n; ++i)
    {
        if (failures[i])
        {
            try
            {
                std::rethrow_exception(failures[i]);
            }
            catch (const convergence_error &e)
            {
                partial += e.partial_value();
                partial_err += e.abs_error();
                partial_evals += e.n_evals();
                if (!first_failure)
                    first_failure = failures[i];
                continue;
            }
            catch (...)
            {
                throw;
            }
        }
        partial += parts[i].value;
        partial_err += parts[i].abs_error;
        partial_evals += parts[i].n_evals;
    }
    if (first_failure)
    {
        try
        {
            std::rethrow_exception(first_failure);
        }
        catch (const convergence_error &e)
        {
            throw convergence_error(e.what(), partial, partial_err, partial_evals);
        }
    }
    total.value = partial;
    total.abs_error = partial_err;
    total.n_evals = partial_evals;
    return total;
}

} // namespace hydrocas

#endif // HYDROCAS_QUADRATURE_HPP
