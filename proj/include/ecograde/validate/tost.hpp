#pragma once

#include <span>

#include "ecograde/core/serialize.hpp"

namespace ecograde {

struct ConfidenceInterval {
    double low = 0.0;
    double high = 0.0;
};

/// Two one-sided Welch t-tests for |mean(g1) - mean(g2)| < margin.
struct TostResult {
    double mean_diff = 0.0;  // mean(g1) - mean(g2)
    double t_lower = 0.0;    // against H0: diff <= -margin
    double t_upper = 0.0;    // against H0: diff >= +margin
    double df = 0.0;         // Welch-Satterthwaite
    double p_lower = 1.0;
    double p_upper = 1.0;
    double margin = 0.1;
    double alpha = 0.05;
    bool equivalent = false;  // max(p_lower, p_upper) < alpha
    ConfidenceInterval ci_g1;  // 95% mean intervals
    ConfidenceInterval ci_g2;
};

/// Throws Error(InsufficientData) if a group has fewer than two values or no variance.
TostResult tost_equivalence(std::span<const double> g1, std::span<const double> g2, double margin = 0.1,
                            double alpha = 0.05);

/// Student-t interval for the mean. Throws Error(InsufficientData) for n < 2.
ConfidenceInterval mean_confidence_interval(std::span<const double> sample, double level = 0.95);

void to_json(Json& j, const TostResult& r);

}  // namespace ecograde
