#include "ecograde/validate/tost.hpp"

#include <cmath>

#include "ecograde/core/error.hpp"
#include "ecograde/stats/compare.hpp"
#include "ecograde/stats/student_t.hpp"

namespace ecograde {
namespace {

SampleStats checked_stats(std::span<const double> g, const char* name) {
    if (g.size() < 2) {
        fail(ErrorCode::InsufficientData, std::string(name) + " needs at least two values");
    }
    SampleStats s = SampleStats::of(g);
    if (!(s.sigma > 0.0)) {
        fail(ErrorCode::InsufficientData, std::string(name) + " has zero variance");
    }
    return s;
}

}  // namespace

ConfidenceInterval mean_confidence_interval(std::span<const double> sample, double level) {
    if (sample.size() < 2) {
        fail(ErrorCode::InsufficientData, "confidence interval needs at least two values");
    }
    require(level > 0.0 && level < 1.0, "confidence level must lie in (0,1)");
    SampleStats s = SampleStats::of(sample);
    const double q = student_t_quantile(0.5 + 0.5 * level, s.n - 1);
    const double half = q * s.sigma / std::sqrt(static_cast<double>(s.n));
    return {s.mu - half, s.mu + half};
}

TostResult tost_equivalence(std::span<const double> g1, std::span<const double> g2, double margin,
                            double alpha) {
    require(margin > 0.0, "equivalence margin must be positive");
    require(alpha > 0.0 && alpha < 1.0, "alpha must lie in (0,1)");
    const SampleStats s1 = checked_stats(g1, "group 1");
    const SampleStats s2 = checked_stats(g2, "group 2");

    const double v1 = s1.sigma * s1.sigma / s1.n;
    const double v2 = s2.sigma * s2.sigma / s2.n;
    const double se = std::sqrt(v1 + v2);

    TostResult r;
    r.margin = margin;
    r.alpha = alpha;
    r.mean_diff = s1.mu - s2.mu;
    r.df = (v1 + v2) * (v1 + v2) / (v1 * v1 / (s1.n - 1) + v2 * v2 / (s2.n - 1));
    r.t_lower = (r.mean_diff + margin) / se;
    r.t_upper = (r.mean_diff - margin) / se;
    r.p_lower = student_t_sf(r.t_lower, r.df);
    r.p_upper = student_t_cdf(r.t_upper, r.df);
    r.equivalent = std::max(r.p_lower, r.p_upper) < alpha;
    r.ci_g1 = mean_confidence_interval(g1);
    r.ci_g2 = mean_confidence_interval(g2);
    return r;
}

void to_json(Json& j, const TostResult& r) {
    j = Json{{"mean_diff", r.mean_diff},
             {"t_lower", r.t_lower},
             {"t_upper", r.t_upper},
             {"df", r.df},
             {"p_lower", r.p_lower},
             {"p_upper", r.p_upper},
             {"margin", r.margin},
             {"alpha", r.alpha},
             {"equivalent", r.equivalent},
             {"ci_g1", {r.ci_g1.low, r.ci_g1.high}},
             {"ci_g2", {r.ci_g2.low, r.ci_g2.high}}};
}

}  // namespace ecograde
