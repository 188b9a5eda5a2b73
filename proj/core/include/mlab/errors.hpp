#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mlab {

class syntax_error : public std::runtime_error {
 public:
  syntax_error(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

// Raised when an input violates an operation's stated precondition.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class convergence_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using WarningSink = std::function<void(std::string_view)>;

// Replaces the warning sink and returns the previous one. The default writes to stderr.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace mlab
