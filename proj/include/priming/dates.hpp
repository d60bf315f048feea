#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace priming {

using Date = std::chrono::sys_days;

// Parses a strict "YYYY-MM-DD" calendar date. Returns nullopt on any
// deviation from that shape or on an invalid calendar day.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(Date date);

}  // namespace priming
