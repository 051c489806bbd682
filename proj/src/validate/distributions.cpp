#include "ecograde/validate/distributions.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "ecograde/core/serialize.hpp"
#include "ecograde/stats/compare.hpp"

namespace ecograde {
namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::size_t histogram_bin(double score) noexcept {
    double b = std::floor(std::max(score, 0.0) / kHistogramBinWidth);
    return std::min(static_cast<std::size_t>(b), kHistogramBins - 1);
}

std::vector<GroupDistribution> export_distributions(std::span<const EcoGradeReport> reports, GroupBy group_by) {
    // Sort key: bed types numerically with unknown last; cities by name.
    std::map<std::pair<int, std::string>, GroupDistribution> groups;
    for (const auto& r : reports) {
        std::pair<int, std::string> key;
        if (group_by == GroupBy::City) {
            key = {0, r.city};
        } else if (r.bedrooms) {
            key = {*r.bedrooms, bed_type_label(*r.bedrooms)};
        } else {
            key = {1000, "unknown"};
        }
        auto& g = groups[key];
        g.group = key.second;
        g.bins[histogram_bin(r.overall)] += 1;
        g.scores.push_back(r.overall);
    }
    std::vector<GroupDistribution> out;
    for (auto& [key, g] : groups) {
        out.push_back(std::move(g));
    }
    return out;
}

std::string file_token(std::string_view group) {
    std::string out;
    for (char c : group) {
        unsigned char u = static_cast<unsigned char>(c);
        out.push_back(std::isalnum(u) || c == '-' ? c : '_');
    }
    return out;
}

void write_distribution_files(const std::filesystem::path& dir, std::string_view tag,
                              std::span<const GroupDistribution> groups) {
    for (const auto& g : groups) {
        std::ostringstream hist;
        hist << "bin_low,bin_high,count\n";
        for (std::size_t i = 0; i < kHistogramBins; ++i) {
            hist << g17(i * kHistogramBinWidth) << ',' << g17((i + 1) * kHistogramBinWidth) << ','
                 << g.bins[i] << '\n';
        }
        std::ostringstream rain;
        rain << "score\n";
        for (double s : g.scores) {
            rain << g17(s) << '\n';
        }
        std::string suffix = std::string(tag) + "_" + file_token(g.group) + ".csv";
        write_file(dir / ("histogram_" + suffix), hist.str());
        write_file(dir / ("raincloud_" + suffix), rain.str());
    }
}

}  // namespace ecograde
