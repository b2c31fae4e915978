#pragma once

#include <string>

namespace andreev {

// ANDREEV_LOG: 0 (default) silent, 1 info, 2 debug. Messages go to stderr.
int log_level();
void log_info(const std::string& msg);
void log_debug(const std::string& msg);

}  // namespace andreev
