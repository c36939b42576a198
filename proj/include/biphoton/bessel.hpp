#pragma once

#include <cmath>
#include <cstdlib>

#include "biphoton/errors.hpp"

// Exponentially scaled modified Bessel function of the first kind,
// exp(-|x|) * I_n(x), for integer order. The scaled form is what the
// spiral-weight integrands need: the raw I_n overflows double precision
// for the arguments that occur at strongly elliptic mode functions, while
// the scaled product exp(-(F+G)u/4) * I_n((G-F)u/8)^2 stays finite.
//
// Method: Miller's backward recurrence I_{k-1} = I_{k+1} + (2k/x) I_k from
// a start order above both n and x, normalized with the Neumann sum
// e^x = I_0(x) + 2 sum_{k>=1} I_k(x). Normalizing by the sum (rather than
// by a separately computed I_0) yields the scaled value directly and
// avoids any e^x-sized intermediate. Accumulated values are renormalized
// whenever they grow past 1e250.

namespace biphoton {

inline double bessel_i_scaled(int order, double x) {
    const int n = std::abs(order); // I_{-n} = I_n
    const double ax = std::abs(x);
    const double parity = (x < 0 && n % 2 == 1) ? -1.0 : 1.0;

    if (ax == 0.0)
        return n == 0 ? 1.0 : 0.0;

    if (ax < 1e-8) {
        // leading series term; the next term is smaller by (x/2)^2 < 1e-17
        const double log_term = n * std::log(ax / 2) - std::lgamma(n + 1.0) - ax;
        return log_term < -745.0 ? 0.0 : parity * std::exp(log_term);
    }

    const double top = std::max<double>(n, std::ceil(ax));
    const int start = static_cast<int>(top + 2 * std::ceil(std::sqrt(top)) + 24);
    const double tox = 2.0 / ax;

    double above = 0.0;          // trial I_{k+1}
    double current = 1.0;        // trial I_k
    double wanted = (n == start) ? current : 0.0;
    double neumann_sum = 2.0 * current;
    for (int k = start; k >= 1; --k) {
        const double below = above + k * tox * current; // trial I_{k-1}
        above = current;
        current = below;
        if (std::abs(current) > 1e250) {
            current *= 1e-250;
            above *= 1e-250;
            neumann_sum *= 1e-250;
            wanted *= 1e-250;
        }
        if (k - 1 == n)
            wanted = current;
        neumann_sum += (k == 1) ? current : 2.0 * current;
    }
    return parity * wanted / neumann_sum;
}

} // namespace biphoton
