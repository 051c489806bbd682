#include "ecograde/validate/run.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "ecograde/core/error.hpp"
#include "ecograde/match/epc_index.hpp"
#include "ecograde/match/interpolate.hpp"
#include "ecograde/score/engine.hpp"
#include "ecograde/stats/compare.hpp"
#include "ecograde/validate/distributions.hpp"

namespace ecograde {
namespace {

struct Accumulator {
    double direct_sum = 0.0;
    double interp_sum = 0.0;
    int n_direct = 0;
    int n_interp = 0;

    void add(bool interpolated, double score) {
        if (interpolated) {
            interp_sum += score;
            ++n_interp;
        } else {
            direct_sum += score;
            ++n_direct;
        }
    }

    GroupComparison finish(std::string group) const {
        GroupComparison c;
        c.group = std::move(group);
        c.n_direct = n_direct;
        c.n_interpolated = n_interp;
        c.mean_direct = n_direct ? direct_sum / n_direct : std::nan("");
        c.mean_interpolated = n_interp ? interp_sum / n_interp : std::nan("");
        c.gap = std::fabs(c.mean_interpolated - c.mean_direct);
        return c;
    }
};

Json comparison_json(const GroupComparison& c) {
    auto num = [](double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); };
    return Json{{"group", c.group},
                {"n_direct", c.n_direct},
                {"n_interpolated", c.n_interpolated},
                {"mean_direct", num(c.mean_direct)},
                {"mean_interpolated", num(c.mean_interpolated)},
                {"gap", num(c.gap)}};
}

std::string comparisons_csv(const std::vector<GroupComparison>& rows) {
    std::ostringstream out;
    out << "group,n_direct,n_interpolated,mean_direct,mean_interpolated,gap\n";
    char buf[256];
    for (const auto& c : rows) {
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.17g,%.17g", c.n_direct, c.n_interpolated, c.mean_direct,
                      c.mean_interpolated, c.gap);
        out << c.group << ',' << buf << '\n';
    }
    return out.str();
}

}  // namespace

ValidationReport run_validation(std::span<const SyntheticCityParams> cities, const ValidationOptions& options) {
    options.calibration.validate();
    options.conversion.validate();
    options.cleaning.validate();

    ValidationReport report;
    report.options = options;
    if (!cities.empty()) {
        report.base_seed = cities.front().seed;
    }
    std::map<int, Accumulator> by_bed;
    std::vector<double> g1;
    std::vector<double> g2;

    for (const auto& params : cities) {
        if (params.n_addresses == 0) {
            report.diagnostics.push_back(params.name + ": no addresses, city omitted");
            continue;
        }
        SyntheticCity city = generate_city(params, options.bedrooms);
        CleanOutcome cleaned = clean_records(std::move(city.certificates), options.cleaning);
        EpcIndex index(dedupe_by_address(std::move(cleaned.kept)));

        ScoringContext ctx;
        ctx.index = &index;
        ctx.bedrooms = &options.bedrooms;
        ctx.transport = &city.transport;
        ctx.calibration = options.calibration;
        ctx.conversion = options.conversion;
        ctx.min_similar = options.min_similar;

        Rng area_rng(mix_seed(params.seed ^ 0x5eed0a4ea5ULL));
        Accumulator acc;
        int unscored = 0;
        for (const auto& listing : city.listings) {
            std::optional<EcoGradeReport> scored;
            bool interpolated = false;
            if (find_direct(listing, index)) {
                scored = score_listing(listing, ctx);
            } else {
                try {
                    NeighborSet neighbors = find_neighbors(listing, index, options.bedrooms, options.min_similar);
                    ListingOverrides overrides;
                    overrides.floor_area = assign_random_area(neighbors.records, area_rng);
                    scored = score_listing(listing, ctx, overrides);
                    interpolated = true;
                } catch (const Error& e) {
                    if (e.code() != ErrorCode::NoComparableData) {
                        throw;
                    }
                    ++unscored;
                }
            }
            if (!scored) {
                continue;
            }
            double compared = scored->overall + (interpolated ? options.inject_shift : 0.0);
            acc.add(interpolated, compared);
            if (scored->bedrooms) {
                by_bed[*scored->bedrooms].add(interpolated, compared);
            }
            (interpolated ? g1 : g2).push_back(compared);
            report.listings.push_back({std::move(*scored), interpolated, compared});
        }
        if (unscored > 0) {
            report.diagnostics.push_back(params.name + ": " + std::to_string(unscored) +
                                         " listings without comparable certificates");
        }
        report.by_city.push_back(acc.finish(params.name));
    }
    for (const auto& [beds, acc] : by_bed) {
        report.by_bed_type.push_back(acc.finish(bed_type_label(beds)));
    }
    report.tost = tost_equivalence(g1, g2, options.margin, options.alpha);
    return report;
}

Json summary_json(const ValidationReport& report) {
    Json cities = Json::array();
    double max_gap = 0.0;
    for (const auto& c : report.by_city) {
        cities.push_back(comparison_json(c));
        if (std::isfinite(c.gap)) {
            max_gap = std::max(max_gap, c.gap);
        }
    }
    Json beds = Json::array();
    for (const auto& c : report.by_bed_type) {
        beds.push_back(comparison_json(c));
    }
    int n_g1 = 0;
    for (const auto& l : report.listings) {
        n_g1 += l.interpolated ? 1 : 0;
    }
    return Json{{"base_seed", report.base_seed},
                {"options",
                 {{"margin", report.options.margin},
                  {"alpha", report.options.alpha},
                  {"inject_shift", report.options.inject_shift},
                  {"min_similar", report.options.min_similar}}},
                {"n_interpolated", n_g1},
                {"n_direct", static_cast<int>(report.listings.size()) - n_g1},
                {"cities", std::move(cities)},
                {"bed_types", std::move(beds)},
                {"max_city_gap", max_gap},
                {"tost", report.tost},
                {"diagnostics", report.diagnostics}};
}

void write_validation_outputs(const std::filesystem::path& dir, const ValidationReport& report) {
    write_file(dir / "summary.json", summary_json(report).dump(2) + "\n");
    write_file(dir / "city_means.csv", comparisons_csv(report.by_city));
    write_file(dir / "bed_type_means.csv", comparisons_csv(report.by_bed_type));

    // Per-listing rows for distribution plots of CO2 and individual factors.
    std::ostringstream rows;
    rows << "listing_id,city,bedrooms,group,overall,compared_score,consumption,efficiency,supplier,transport,co2_avg\n";
    auto cell = [](const std::optional<double>& v) {
        char buf[32];
        if (!v) return std::string();
        std::snprintf(buf, sizeof buf, "%.17g", *v);
        return std::string(buf);
    };
    for (const auto& l : report.listings) {
        const EcoGradeReport& r = l.report;
        rows << r.listing_id << ',' << r.city << ',' << (r.bedrooms ? std::to_string(*r.bedrooms) : "") << ','
             << (l.interpolated ? "interpolated" : "direct") << ',' << cell(r.overall) << ','
             << cell(l.compared_score);
        for (Factor f : kAllFactors) {
            rows << ',' << cell(r.factor_scores[index_of(f)]);
        }
        rows << ',' << cell(r.co2 ? std::optional<double>(r.co2->avg) : std::nullopt) << '\n';
    }
    write_file(dir / "listings.csv", rows.str());

    std::vector<EcoGradeReport> reports;
    reports.reserve(report.listings.size());
    for (const auto& l : report.listings) {
        reports.push_back(l.report);
    }
    write_distribution_files(dir, "city", export_distributions(reports, GroupBy::City));
    write_distribution_files(dir, "beds", export_distributions(reports, GroupBy::BedType));
    for (auto& r : reports) {
        r.city = "all";
    }
    write_distribution_files(dir, "overall", export_distributions(reports, GroupBy::City));
}

}  // namespace ecograde
