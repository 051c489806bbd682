#include "ecograde/cli/log.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <mutex>

namespace ecograde {

long long now_epoch_seconds() {
    if (const char* pinned = std::getenv("SOURCE_DATE_EPOCH"); pinned && *pinned) {
        char* end = nullptr;
        long long v = std::strtoll(pinned, &end, 10);
        if (end && *end == '\0') return v;
    }
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

std::string iso_timestamp(long long epoch_seconds) {
    std::time_t t = static_cast<std::time_t>(epoch_seconds);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void log_event(std::string_view level, std::string_view event, const Json& fields) {
    static std::mutex mutex;
    Json line = {{"ts", iso_timestamp(now_epoch_seconds())}, {"level", level}, {"event", event}};
    for (auto it = fields.begin(); it != fields.end(); ++it) {
        line[it.key()] = it.value();
    }
    std::lock_guard lock(mutex);
    std::cerr << line.dump() << std::endl;
}

}  // namespace ecograde
