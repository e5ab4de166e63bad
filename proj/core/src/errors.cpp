#include "qclab/errors.hpp"

#include <iostream>
#include <mutex>

namespace qclab {

namespace {
std::mutex sink_mutex;
WarningSink& sink_slot() {
  static WarningSink sink = [](const std::string& msg) { std::cerr << "qclab warning: " << msg << '\n'; };
  return sink;
}
}  // namespace

void set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex);
  sink_slot() = sink ? std::move(sink) : [](const std::string&) {};
}

void warn(const std::string& message) {
  std::lock_guard lock(sink_mutex);
  sink_slot()(message);
}

}  // namespace qclab
