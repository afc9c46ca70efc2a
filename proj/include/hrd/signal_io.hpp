// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "hrd/hysteresis.hpp"

namespace hrd {

/// Column-oriented numeric table written as CSV.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);
  std::string to_csv() const;
};

/// 17 significant digits, round-trip exact.
std::string format_double(double x);

/// Parses a signal CSV with header `t,v`.
Signal parse_signal_csv(const std::string& text);
Signal read_signal_csv(const std::string& path);

std::string read_text_file(const std::string& path);

/// Writes to `path + ".tmp"` and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace hrd
