#include "mlab/errors.hpp"

#include <iostream>
#include <mutex>

namespace mlab {

namespace {
std::mutex sink_mutex;
WarningSink& sink_ref() {
  static WarningSink s = [](std::string_view m) { std::cerr << "warning: " << m << '\n'; };
  return s;
}
}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex);
  WarningSink old = std::move(sink_ref());
  sink_ref() = std::move(sink);
  return old;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink_ref()) sink_ref()(message);
}

}  // namespace mlab
