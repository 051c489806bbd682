#pragma once

#include <string_view>

#include "ecograde/core/serialize.hpp"

namespace ecograde {

/// One JSON object per line on stderr: {"ts", "level", "event", ...fields}.
void log_event(std::string_view level, std::string_view event, const Json& fields = Json::object());

/// Seconds since the epoch, or SOURCE_DATE_EPOCH when set so that
/// manifests of reproducible runs compare equal.
long long now_epoch_seconds();

/// "2024-03-01T08:00:00Z".
std::string iso_timestamp(long long epoch_seconds);

}  // namespace ecograde
