// warnings.hpp: Process-wide channel for soft numerical warnings
//
// Truncation and normalization problems that do not invalidate a result are
// reported here instead of thrown. The default sink writes to stderr; tests
// install a capturing sink.

#pragma once

#include <functional>
#include <string>

namespace rabicat {

using WarningSink = std::function<void(const std::string&)>;

void warn(const std::string& message);

// Returns the previously installed sink. Passing an empty function restores
// the stderr default.
WarningSink set_warning_sink(WarningSink sink);

} // namespace rabicat
