#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <utility>
#include <vector>

#include "biphoton/errors.hpp"

// 1-D numerical integration: adaptive Gauss-Kronrod (G7,K15) panels with
// bisection refinement, and Gauss-Legendre node/weight generation for
// fixed-order rules. All Gaussian-type integrands in this project are
// analytic, so a handful of panels usually suffices; the adaptive driver
// exists to certify the tolerance rather than to rescue hard integrands.

namespace biphoton {

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-12;
    int initial_panels = 8;
    int max_panels = 4000;
};

namespace detail {

// QUADPACK dqk15 abscissae/weights on [-1, 1], positive half.
inline constexpr double kron_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kron_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double err;
    bool operator<(const Panel& other) const { return err < other.err; }
};

template <class F>
Panel evaluate_panel(F&& f, double a, double b) {
    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(centre - half * kron_x[i]);
        fv[14 - i] = f(centre + half * kron_x[i]);
    }
    fv[7] = f(centre);

    double kronrod = 0, gauss = 0, resabs = 0;
    for (int i = 0; i < 7; ++i) {
        const double pair_sum = fv[i] + fv[14 - i];
        kronrod += kron_w[i] * pair_sum;
        resabs += kron_w[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        if (i % 2 == 1)
            gauss += gauss_w[i / 2] * pair_sum;
    }
    kronrod += kron_w[7] * fv[7];
    resabs += kron_w[7] * std::abs(fv[7]);
    gauss += gauss_w[3] * fv[7];

    // QUADPACK-style error: scale |K15 - G7| by the deviation integral so a
    // panel whose nodes all miss a feature is not trusted blindly.
    const double mean = kronrod * 0.5;
    double resasc = kron_w[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kron_w[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));
    resasc *= half;

    double err = std::abs(kronrod - gauss) * half;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    const double round_off = 50.0 * 2.22e-16 * resabs * half;
    err = std::max(err, round_off);

    return Panel{a, b, kronrod * half, err};
}

} // namespace detail

/// Integrates f over [a, b] to max(abs_tol, rel_tol*|I|); throws
/// quadrature_failure if the panel budget is exhausted first.
template <class F>
double integrate_adaptive(F&& f, double a, double b, QuadratureOptions opts = {}) {
    if (!(b > a))
        std::swap(a, b);
    std::priority_queue<detail::Panel> panels;
    double total = 0, total_err = 0;
    const int n0 = std::max(1, opts.initial_panels);
    for (int i = 0; i < n0; ++i) {
        const double pa = a + (b - a) * i / n0;
        const double pb = a + (b - a) * (i + 1) / n0;
        auto p = detail::evaluate_panel(f, pa, pb);
        total += p.value;
        total_err += p.err;
        panels.push(p);
    }

    int used = n0;
    while (total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (used >= opts.max_panels || panels.empty())
            throw quadrature_failure("adaptive quadrature did not reach the requested tolerance");
        const auto worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = detail::evaluate_panel(f, worst.a, mid);
        auto right = detail::evaluate_panel(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        panels.push(left);
        panels.push(right);
        ++used;
    }
    return total;
}

/// Gauss-Legendre nodes and weights on [-1, 1], exact for polynomials of
/// degree 2n-1. Newton iteration on the Legendre recurrence.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    if (n < 1)
        throw invalid_config("gauss_legendre requires n >= 1");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if (n % 2 == 1)
        nodes[n / 2] = 0.0;
}

} // namespace biphoton
