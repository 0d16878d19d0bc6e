// Sensor log reading and result formatting for the command line tool.
#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "attest/attest.h"

namespace attest_cli {

inline constexpr const char* kLogHeader = "t,gx,gy,gz,ax,ay,az,mx,my,mz";

/// One data row; absent cells are nullopt.
struct LogRow {
  std::size_t line = 0;
  double t = 0.0;
  std::optional<double> cells[9];  // gx gy gz ax ay az mx my mz
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Reads the whole log. Throws ParseError on a bad header, a malformed row or
/// non-increasing timestamps.
std::vector<LogRow> read_log(std::istream& in);

enum class AccMode { k3d, kXy };
enum class MagInput { k3d, kXy, kHeading, kNone };

/// Frame for one row under the given channel interpretation.
attest_frame to_frame(const LogRow& row, AccMode acc_mode, MagInput mag_mode);

/// %.9g, with NaN spelled "nan".
std::string fmt(double v);

}  // namespace attest_cli
