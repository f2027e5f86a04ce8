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

#ifndef PARKERNEL_MATIO_HPP_
#define PARKERNEL_MATIO_HPP_

#include <filesystem>
#include <string>

#include "parkernel/linalg/matrix.hpp"

// Worker-side file data channel. The record format is normative and
// bit-exact: one matrix row per line, entries separated by a single space,
// each number rendered as the shortest decimal text that round-trips its
// binary64 value, every line newline-terminated, no header.

namespace parkernel::matio {

/// Shortest decimal rendering that parses back to the same binary64.
std::string format_entry(double v);

/// Writes `m` to `path` in the record format, replacing any existing file.
/// Throws IoFailure.
void write_matrix(const std::filesystem::path& path, const linalg::DenseMatrix& m);

/// Reads a record file: one row per line, equal entry counts per line.
/// Throws IoFailure, RaggedRows, or ParseError.
linalg::DenseMatrix read_matrix(const std::filesystem::path& path);

}  // namespace parkernel::matio

#endif  // PARKERNEL_MATIO_HPP_
