#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqmap {

struct source_loc {
  uint32_t line = 0; // 1-based; 0 means "no location"
  uint32_t col = 0;

  bool valid() const { return line != 0; }
};

inline std::string to_string(source_loc loc) {
  if (!loc.valid()) return "<unknown>";
  return std::to_string(loc.line) + ":" + std::to_string(loc.col);
}

// thrown by parse_program and the config/file readers
class parse_error : public std::runtime_error {
public:
  parse_error(source_loc loc, const std::string& msg)
      : std::runtime_error(to_string(loc) + ": " + msg), loc_(loc), msg_(msg) {}

  source_loc where() const { return loc_; }
  const std::string& message() const { return msg_; }

private:
  source_loc loc_;
  std::string msg_;
};

enum class severity : uint8_t { error, warning };

// validate() collects these instead of throwing: a broken program usually has
// several independent problems and the caller wants all of them at once.
struct diagnostic {
  severity sev = severity::error;
  source_loc loc;
  std::string message;
};

inline std::string to_string(const diagnostic& d) {
  std::string s = d.sev == severity::error ? "error" : "warning";
  if (d.loc.valid()) s += " at " + to_string(d.loc);
  s += ": " + d.message;
  return s;
}

} // namespace hqmap
