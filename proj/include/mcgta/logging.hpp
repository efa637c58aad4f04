#pragma once

#include <functional>
#include <string>

namespace mcgta {

using WarningSink = std::function<void(const std::string&)>;

/// Replaces the process-wide warning sink. Default writes to std::clog.
/// Passing an empty function silences warnings.
void set_warning_sink(WarningSink sink);

void warn(const std::string& message);

}  // namespace mcgta
