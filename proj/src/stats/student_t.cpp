#include "ecograde/stats/student_t.hpp"

#include <cmath>
#include <limits>

#include "ecograde/core/error.hpp"

namespace ecograde {
namespace {

// Lentz evaluation of the continued fraction for I_x(a, b).
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) {
            return h;
        }
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    require(a > 0.0 && b > 0.0, "incomplete beta needs positive shape parameters");
    require(x >= 0.0 && x <= 1.0, "incomplete beta argument outside [0,1]");
    if (x == 0.0 || x == 1.0) {
        return x;
    }
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                             a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_sf(double t, double df) {
    require(df > 0.0, "degrees of freedom must be positive");
    if (std::isnan(t)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isinf(t)) {
        return t > 0 ? 0.0 : 1.0;
    }
    // x = df / (df + t²) computed without cancellation for large |t|.
    const double t2 = t * t;
    const double x = df / (df + t2);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0 ? tail : 1.0 - tail;
}

double student_t_cdf(double t, double df) {
    require(df > 0.0, "degrees of freedom must be positive");
    if (std::isnan(t)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isinf(t)) {
        return t > 0 ? 1.0 : 0.0;
    }
    const double x = df / (df + t * t);
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, x);
    return t > 0 ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
    require(p > 0.0 && p < 1.0, "quantile probability must lie in (0,1)");
    require(df > 0.0, "degrees of freedom must be positive");
    if (p == 0.5) {
        return 0.0;
    }
    // Symmetric: solve in the upper half for accuracy.
    const bool upper = p > 0.5;
    const double q = upper ? 1.0 - p : p;  // lower-tail mass to hit, q < 0.5
    double lo = 0.0;
    double hi = 1.0;
    while (student_t_sf(hi, df) > q) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (student_t_sf(mid, df) > q) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-15 * hi) break;
    }
    const double t = 0.5 * (lo + hi);
    return upper ? t : -t;
}

}  // namespace ecograde
