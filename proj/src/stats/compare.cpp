#include "ecograde/stats/compare.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <utility>

#include "ecograde/core/error.hpp"
#include "ecograde/ingest/csv.hpp"

namespace ecograde {
namespace {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& s, std::size_t line) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        fail(ErrorCode::Parse, "baselines line " + std::to_string(line) + ": bad number '" + s + "'");
    }
    return v;
}

}  // namespace

SampleStats SampleStats::of(std::span<const double> values) {
    require(!values.empty(), "sample statistics need at least one value");
    double mean = 0.0;
    double m2 = 0.0;
    int n = 0;
    for (double x : values) {
        ++n;
        double delta = x - mean;
        mean += delta / n;
        m2 += delta * (x - mean);
    }
    double sd = n > 1 ? std::sqrt(std::max(0.0, m2 / (n - 1))) : 0.0;
    return {mean, sd, n};
}

SampleStats SampleStats::of(const Co2Summary& co2) {
    return {co2.avg, co2.sigma, std::max(co2.samples, 1)};
}

double cohens_d(const SampleStats& a, const SampleStats& c) {
    if (a.n < 1 || c.n < 1 || a.n + c.n < 3) {
        fail(ErrorCode::InsufficientSamples, "Cohen's d needs a_n + c_n >= 3");
    }
    require(a.sigma >= 0.0 && c.sigma >= 0.0, "standard deviations must be non-negative");
    const double pooled_var = ((a.n - 1) * a.sigma * a.sigma + (c.n - 1) * c.sigma * c.sigma) /
                              static_cast<double>(a.n + c.n - 2);
    if (!(pooled_var > 0.0)) {
        fail(ErrorCode::DegenerateVariance, "pooled variance is zero");
    }
    return (a.mu - c.mu) / std::sqrt(pooled_var);
}

double cohens_d_percent(double d) noexcept {
    return 100.0 * d / std::sqrt(d * d + 4.0);
}

double ComparisonLabel::rounded() const noexcept {
    double r = std::round(d_p * 10.0) / 10.0;
    return r == 0.0 ? 0.0 : r;
}

std::string ComparisonLabel::text() const {
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.1f%%", rounded());
    return std::string(pct) + (direction == Direction::Higher ? " Higher" : " Lower") +
           " emissions compared to a " + reference;
}

std::string bed_type_label(int bed_type) {
    return bed_type == 0 ? "studio" : std::to_string(bed_type) + "-bed";
}

EmissionsComparison emissions_comparison(const SampleStats& listing,
                                         const std::optional<CityBaseline>& baseline) {
    if (!baseline) {
        return ComingSoon{"no baseline for this city and bed type"};
    }
    try {
        double d = cohens_d(listing, SampleStats{baseline->c_mu, baseline->c_sigma, baseline->c_n});
        ComparisonLabel label;
        label.d_p = cohens_d_percent(d);
        label.direction = label.d_p > 0.0 ? Direction::Higher : Direction::Lower;
        label.reference = "typical " + bed_type_label(baseline->bed_type) + " apartment in " + baseline->city;
        return label;
    } catch (const Error& e) {
        return ComingSoon{std::string(to_string(e.code()))};
    }
}

std::string comparison_text(const EmissionsComparison& comparison) {
    if (const auto* label = std::get_if<ComparisonLabel>(&comparison)) {
        return label->text();
    }
    return kComingSoon;
}

std::optional<CityBaseline> BaselineSet::find(const std::string& city, int bed_type) const {
    for (const auto& b : baselines) {
        if (b.city == city && b.bed_type == bed_type) {
            return b;
        }
    }
    return std::nullopt;
}

BaselineSet build_baselines(std::span<const EcoGradeReport> reports) {
    std::map<std::pair<std::string, int>, std::vector<double>> groups;
    for (const auto& r : reports) {
        if (r.co2 && r.bedrooms) {
            groups[{r.city, *r.bedrooms}].push_back(r.co2->avg);
        }
    }
    BaselineSet out;
    for (const auto& [key, values] : groups) {
        if (values.size() < 2) {
            out.diagnostics.push_back({key.first, key.second, "fewer than two reports"});
            continue;
        }
        SampleStats s = SampleStats::of(values);
        out.baselines.push_back({key.first, key.second, s.mu, s.sigma, s.n});
    }
    return out;
}

void write_baselines_csv(std::ostream& out, std::span<const CityBaseline> baselines) {
    out << "city,bed_type,mu,sigma,n\n";
    for (const auto& b : baselines) {
        out << csv_row({b.city, std::to_string(b.bed_type), format_g17(b.c_mu), format_g17(b.c_sigma),
                        std::to_string(b.c_n)})
            << '\n';
    }
}

std::vector<CityBaseline> read_baselines_csv(std::istream& in) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    std::vector<CityBaseline> out;
    if (!reader.next(fields)) {
        return out;
    }
    if (fields != std::vector<std::string>{"city", "bed_type", "mu", "sigma", "n"}) {
        fail(ErrorCode::Parse, "baselines header must be city,bed_type,mu,sigma,n");
    }
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) {
            continue;
        }
        if (fields.size() != 5) {
            fail(ErrorCode::Parse, "baselines line " + std::to_string(reader.line()) + ": expected 5 fields");
        }
        CityBaseline b;
        b.city = fields[0];
        b.bed_type = static_cast<int>(to_double(fields[1], reader.line()));
        b.c_mu = to_double(fields[2], reader.line());
        b.c_sigma = to_double(fields[3], reader.line());
        b.c_n = static_cast<int>(to_double(fields[4], reader.line()));
        out.push_back(std::move(b));
    }
    return out;
}

}  // namespace ecograde
