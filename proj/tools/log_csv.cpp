#include "log_csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <string_view>

namespace attest_cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::optional<double> parse_cell(std::string_view cell, std::size_t line, const char* column) {
  if (cell.empty()) return std::nullopt;
  if (cell.front() == '+') cell.remove_prefix(1);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc() || end != cell.data() + cell.size() || !std::isfinite(v))
    throw ParseError(line, std::string("invalid number in column ") + column + ": '" + std::string(cell) + "'");
  return v;
}

constexpr const char* kColumns[10] = {"t", "gx", "gy", "gz", "ax", "ay", "az", "mx", "my", "mz"};

}  // namespace

std::vector<LogRow> read_log(std::istream& in) {
  std::vector<LogRow> rows;
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    if (!have_header) {
      if (s != kLogHeader) throw ParseError(line, std::string("expected header '") + kLogHeader + "'");
      have_header = true;
      continue;
    }
    const auto fields = split(s);
    if (fields.size() != 10)
      throw ParseError(line, "expected 10 fields, found " + std::to_string(fields.size()));
    LogRow row;
    row.line = line;
    const auto t = parse_cell(fields[0], line, kColumns[0]);
    if (!t) throw ParseError(line, "missing timestamp");
    row.t = *t;
    if (!rows.empty() && !(row.t > rows.back().t)) throw ParseError(line, "timestamps must be strictly increasing");
    for (int i = 0; i < 9; ++i) row.cells[i] = parse_cell(fields[i + 1], line, kColumns[i + 1]);
    rows.push_back(row);
  }
  if (!have_header) throw ParseError(line, std::string("missing header '") + kLogHeader + "'");
  return rows;
}

attest_frame to_frame(const LogRow& row, AccMode acc_mode, MagInput mag_mode) {
  const auto& c = row.cells;
  attest_frame f{};
  f.t = row.t;
  f.gyro_valid = c[0] && c[1] && c[2];
  if (f.gyro_valid) f.gyro = {*c[0], *c[1], *c[2]};
  f.acc_valid = c[3] && c[4];
  f.acc_z_valid = f.acc_valid && c[5] && acc_mode == AccMode::k3d;
  if (f.acc_valid) f.acc = {*c[3], *c[4], f.acc_z_valid ? *c[5] : 0.0};
  f.mag_mode = ATTEST_MAG_ABSENT;
  switch (mag_mode) {
    case MagInput::k3d:
    case MagInput::kXy:
      if (c[6] && c[7]) {
        const bool full = mag_mode == MagInput::k3d && c[8];
        f.mag = {*c[6], *c[7], full ? *c[8] : 0.0};
        f.mag_mode = full ? ATTEST_MAG_FULL3D : ATTEST_MAG_XY_ONLY;
      }
      break;
    case MagInput::kHeading:
      if (c[6]) {
        f.heading = *c[6];
        f.mag_mode = ATTEST_MAG_HEADING_ONLY;
      }
      break;
    case MagInput::kNone:
      break;
  }
  return f;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace attest_cli
