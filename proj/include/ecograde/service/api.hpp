#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ecograde/core/band.hpp"
#include "ecograde/core/serialize.hpp"
#include "ecograde/service/store.hpp"

namespace ecograde {

/// One "Improve Score" suggestion.
struct AdviceItem {
    EpcAttribute attribute{};
    EfficiencyBand current_band{};
    EfficiencyBand expected_band{};  // one band better than current
    std::string action;
    double projected_overall = 0.0;
    double gain = 0.0;  // projected_overall - current overall
};

void to_json(Json& j, const AdviceItem& a);

/// Static recommendation text per certificate element.
std::string_view advice_text(EpcAttribute attribute) noexcept;

/// Items for every attribute below "good", best overall gain first
/// (ties by attribute order). Empty when the report has no attributes.
std::vector<AdviceItem> advise(const EcoGradeReport& report, const ScoreCalibration& calib);

struct ApiResponse {
    int status = 200;
    Json body;
    std::string content_type = "application/json";
};

using Query = std::map<std::string, std::string>;

struct ApiOptions {
    std::size_t default_page_size = 20;
    std::size_t max_page_size = 500;
    /// Reference date for "complete month" filtering; defaults to the system clock.
    std::function<Date()> today;
};

/// Transport-free request handler over the current store snapshot.
class Api {
public:
    explicit Api(const Store& store, ApiOptions options = {});

    ApiResponse handle(const std::string& method, const std::string& path, const Query& query) const;

private:
    ApiResponse health(const StoreData& data) const;
    ApiResponse listings(const StoreData& data, const Query& query) const;
    ApiResponse listing_report(const StoreData& data, const std::string& id) const;
    ApiResponse listing_advice(const StoreData& data, const std::string& id) const;
    ApiResponse corporate_dashboard(const StoreData& data, const std::string& client, const Query& query) const;
    ApiResponse supplier_dashboard(const StoreData& data, const std::string& supplier) const;

    const Store& store_;
    ApiOptions options_;
};

/// RFC 7807 problem document.
ApiResponse problem(int status, std::string_view code, const std::string& detail);

Date system_today();

}  // namespace ecograde
