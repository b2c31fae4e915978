#include "log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace andreev {

int log_level() {
  static const int level = [] {
    const char* v = std::getenv("ANDREEV_LOG");
    if (!v) return 0;
    std::string s(v);
    if (s == "debug") return 2;
    if (s == "info") return 1;
    return std::atoi(v);
  }();
  return level;
}

namespace {
std::mutex log_mutex;
void emit(const char* tag, const std::string& msg) {
  std::lock_guard<std::mutex> lock(log_mutex);
  std::cerr << "[andreev " << tag << "] " << msg << "\n";
}
}  // namespace

void log_info(const std::string& msg) {
  if (log_level() >= 1) emit("info", msg);
}

void log_debug(const std::string& msg) {
  if (log_level() >= 2) emit("debug", msg);
}

}  // namespace andreev
