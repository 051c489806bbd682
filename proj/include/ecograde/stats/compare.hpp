#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ecograde/core/model.hpp"

namespace ecograde {

/// Mean, sample standard deviation (n - 1 denominator) and count.
struct SampleStats {
    double mu = 0.0;
    double sigma = 0.0;
    int n = 0;

    /// Throws Error(ContractViolation) for an empty sample. sigma is 0 when n == 1.
    static SampleStats of(std::span<const double> values);

    /// Statistics behind a report's CO₂ estimate (certificates used as the sample).
    static SampleStats of(const Co2Summary& co2);
};

/// Standardized mean difference with pooled standard deviation.
/// Throws Error(InsufficientSamples) when a.n + c.n < 3 and
/// Error(DegenerateVariance) when the pooled variance is zero.
double cohens_d(const SampleStats& a, const SampleStats& c);

/// 100·d / sqrt(d² + 4), in (-100, 100).
double cohens_d_percent(double d) noexcept;

enum class Direction {
    Higher,
    Lower,
};

struct ComparisonLabel {
    double d_p = 0.0;           // unrounded
    Direction direction = Direction::Lower;
    std::string reference;      // "typical 1-bed apartment in London"

    /// d_p rounded to one decimal, half away from zero.
    double rounded() const noexcept;

    /// "-34.6% Lower emissions compared to a typical 1-bed apartment in London".
    std::string text() const;
};

inline constexpr const char* kComingSoon = "Coming Soon";

struct ComingSoon {
    std::string reason;
};

using EmissionsComparison = std::variant<ComparisonLabel, ComingSoon>;

std::string bed_type_label(int bed_type);

/// Compares a listing's CO₂ sample with the baseline for its city and bed type.
/// Missing baselines and statistical failures become ComingSoon.
EmissionsComparison emissions_comparison(const SampleStats& listing,
                                         const std::optional<CityBaseline>& baseline);

std::string comparison_text(const EmissionsComparison& comparison);

struct BaselineDiagnostic {
    std::string city;
    int bed_type = 0;
    std::string reason;
};

struct BaselineSet {
    std::vector<CityBaseline> baselines;  // sorted by (city, bed_type)
    std::vector<BaselineDiagnostic> diagnostics;

    std::optional<CityBaseline> find(const std::string& city, int bed_type) const;
};

/// Groups reports by (city, bedrooms) and summarizes co2.avg. Reports without
/// CO₂ or bedroom count are skipped; groups with fewer than two reports are
/// omitted with a diagnostic.
BaselineSet build_baselines(std::span<const EcoGradeReport> reports);

/// "city,bed_type,mu,sigma,n" with a header row.
void write_baselines_csv(std::ostream& out, std::span<const CityBaseline> baselines);
std::vector<CityBaseline> read_baselines_csv(std::istream& in);

}  // namespace ecograde
