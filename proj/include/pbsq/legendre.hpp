#pragma once

#include <cmath>
#include <vector>

#include "pbsq/types.hpp"

namespace pbsq {

/// Legendre P_n(x) by the three-term recurrence. Intended for x > 1 or
/// small n; values overflow near n ~ 1100 for x ~ 1.2 (use the log form).
inline double legendre_value(int n, double x) {
    if (n < 0) throw Error("legendre_value: negative degree");
    if (n == 0) return 1.0;
    double pm1 = 1.0, p = x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
        pm1 = p;
        p = next;
    }
    return p;
}

/// log P_n(x) for x > 1, where every recurrence term is positive. The
/// iterates carry a shared log-scale and are renormalized each step, so
/// degrees in the thousands stay in range.
inline std::vector<double> legendre_log_table(int n_max, double x) {
    if (x < 1.0) throw Error("legendre_log_table: requires x >= 1");
    if (n_max < 0) throw Error("legendre_log_table: negative degree");
    std::vector<double> out(n_max + 1);
    out[0] = 0.0;
    if (n_max == 0) return out;
    double scale = 0.0;
    double pm1 = 1.0, p = x;
    out[1] = std::log(x);
    for (int k = 1; k < n_max; ++k) {
        double next = ((2.0 * k + 1.0) * x * p - k * pm1) / (k + 1.0);
        pm1 = p;
        p = next;
        if (p > 1e100) {
            const double m = p;
            p /= m;
            pm1 /= m;
            scale += std::log(m);
        }
        out[k + 1] = scale + std::log(p);
    }
    return out;
}

inline double legendre_log(int n, double x) { return legendre_log_table(n, x).back(); }

}  // namespace pbsq
