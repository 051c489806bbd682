#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ecograde/core/model.hpp"
#include "ecograde/core/serialize.hpp"

namespace ecograde {

enum class ExportFormat {
    Csv,
    JsonLines,
};

struct ParseDiagnostic {
    std::size_t row = 0;  // 1-based data row (header excluded)
    std::string reason;
};

struct ParseOutcome {
    std::vector<EpcRecord> records;
    std::vector<ParseDiagnostic> diagnostics;
};

/// Parses an open-data certificate export.
///
/// Columns follow the public export naming ("address", "postcode",
/// "total-floor-area", "energy-consumption-current", "lodgement-date",
/// "current-energy-rating", "main-fuel" and the nine "*-energy-eff" columns);
/// underscores, spaces and case are tolerated in headers. Unknown columns are
/// ignored. A row missing a mandatory value yields a diagnostic and no record;
/// an unrecognized band label yields the record without that band plus a
/// diagnostic. Throws Error(Io) if the stream cannot be read.
ParseOutcome parse_epc_export(std::istream& source, ExportFormat format);

/// Writes records in the open-data CSV layout read by parse_epc_export.
/// Numbers use the shortest round-trip form, so parsing the output
/// reproduces the records exactly.
void write_epc_export_csv(std::ostream& out, const std::vector<EpcRecord>& records);

struct CleaningRules {
    double min_plausible_area = 10.0;     // m²
    double max_plausible_area = 500.0;    // m²
    double good_rating_kwh_cap = 400.0;   // kWh/m²·yr
    std::set<char> good_ratings = {'A', 'B'};

    /// Throws Error(Config) when the invariants do not hold.
    void validate() const;
};

void to_json(Json& j, const CleaningRules& rules);
void from_json(const Json& j, CleaningRules& rules);

enum class RejectReason {
    ImplausibleArea,
    RatingKwhConflict,
    NoBands,
};

std::string_view to_string(RejectReason reason) noexcept;

struct Rejection {
    EpcRecord record;
    RejectReason reason;
};

struct CleanOutcome {
    std::vector<EpcRecord> kept;
    std::vector<Rejection> rejected;
};

/// Partitions records into kept and rejected; the input order is preserved in both.
CleanOutcome clean_records(std::vector<EpcRecord> records, const CleaningRules& rules = {});

/// One record per (address, postcode): latest lodgement date, then the worst
/// headline rating, then the smallest fingerprint. Output sorted by property key.
std::vector<EpcRecord> dedupe_by_address(std::vector<EpcRecord> records);

/// Rejection report: "fingerprint,reason" with a header row.
void write_rejections_csv(std::ostream& out, const std::vector<Rejection>& rejected);

}  // namespace ecograde
