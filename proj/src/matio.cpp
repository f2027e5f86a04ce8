/* Copyright 2026 The Parkernel Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "parkernel/matio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

namespace parkernel::matio {

std::string format_entry(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw IoFailure("failed to format matrix entry");
  return std::string(buf, end);
}

void write_matrix(const std::filesystem::path& path, const linalg::DenseMatrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoFailure("cannot open '" + path.string() + "' for writing");
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ' ';
      out << format_entry(m(i, j));
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw IoFailure("write to '" + path.string() + "' failed");
}

linalg::DenseMatrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open '" + path.string() + "' for reading");

  std::vector<double> entries;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t count = 0;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      double v = 0.0;
      auto [next, ec] = std::from_chars(p, end, v);
      if (ec != std::errc() || (next < end && *next != ' ' && *next != '\t' && *next != '\r'))
        throw ParseError("line " + std::to_string(lineno) + ": unparseable number");
      if (!std::isfinite(v))
        throw ParseError("line " + std::to_string(lineno) + ": non-finite entry");
      entries.push_back(v);
      ++count;
      p = next;
    }
    if (count == 0) continue;  // blank line
    if (rows == 0) {
      cols = count;
    } else if (count != cols) {
      throw RaggedRows("line " + std::to_string(lineno) + " holds " + std::to_string(count) +
                       " entries, expected " + std::to_string(cols));
    }
    ++rows;
  }
  if (in.bad()) throw IoFailure("read from '" + path.string() + "' failed");
  return linalg::DenseMatrix(rows, cols, std::move(entries));
}

}  // namespace parkernel::matio
