// SPDX-License-Identifier: Apache-2.0
#include "hrd/signal_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hrd/error.hpp"

namespace hrd {

void Table::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw Error(ErrorCode::ShapeMismatch, "row width differs from the header");
  rows.push_back(std::move(row));
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string Table::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& cell, std::size_t line) {
  const std::string s = trim(cell);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw Error(ErrorCode::InvalidSignal,
                "malformed number '" + s + "' on line " + std::to_string(line));
  return v;
}

}  // namespace

Signal parse_signal_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<double> t, v;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw Error(ErrorCode::InvalidSignal,
                  "expected two columns on line " + std::to_string(lineno));
    if (!header) {
      if (trim(line.substr(0, comma)) != "t" || trim(line.substr(comma + 1)) != "v")
        throw Error(ErrorCode::InvalidSignal, "signal CSV must start with header 't,v'");
      header = true;
      continue;
    }
    t.push_back(parse_number(line.substr(0, comma), lineno));
    v.push_back(parse_number(line.substr(comma + 1), lineno));
  }
  if (!header) throw Error(ErrorCode::InvalidSignal, "empty signal file");
  return Signal(std::move(t), std::move(v));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Signal read_signal_csv(const std::string& path) {
  return parse_signal_csv(read_text_file(path));
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp + "'");
    out << contents;
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write to '" + tmp + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename onto '" + path + "': " + ec.message());
}

}  // namespace hrd
