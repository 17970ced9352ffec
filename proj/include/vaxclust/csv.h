/*
 * Copyright 2026 The vaxclust Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef VAXCLUST_CSV_H_
#define VAXCLUST_CSV_H_

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace vaxclust::csv {

// Minimal RFC 4180 reader: comma separator, double-quoted fields with ""
// escapes, LF or CRLF line ends. A UTF-8 byte order mark on the first line is
// skipped. Blank lines are ignored.
class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input.
  std::optional<std::vector<std::string>> Next();

  // 1-based line number of the last record returned.
  int line() const { return line_; }

 private:
  std::istream& in_;
  int line_ = 0;
  bool first_ = true;
};

// Quotes a field when it contains a comma, quote or newline.
std::string Escape(std::string_view field);

void WriteRow(std::ostream& out, const std::vector<std::string>& fields);

// Parses plain decimal notation ([+-]digits[.digits]) after trimming spaces
// and tabs. Exponents, locale separators, and other text are rejected.
std::optional<double> ParseDecimal(std::string_view text);

// Shortest text that round-trips the double exactly.
std::string FormatDouble(double value);

// Fixed-point formatting with `decimals` digits after the point.
std::string FormatFixed(double value, int decimals);

}  // namespace vaxclust::csv

#endif  // VAXCLUST_CSV_H_
