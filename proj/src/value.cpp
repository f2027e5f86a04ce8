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

#include "parkernel/value.hpp"

#include <bit>
#include <sstream>

#include "parkernel/message.hpp"

namespace parkernel::proto {

namespace {

bool bits_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

MatrixData::MatrixData(std::uint32_t r, std::uint32_t c, std::vector<double> e)
    : rows(r), cols(c), entries(std::move(e)) {
  if (entries.size() != static_cast<std::size_t>(rows) * cols)
    throw MalformedPayload("matrix entry count does not match rows*cols");
}

bool operator==(const MatrixData& a, const MatrixData& b) {
  if (a.rows != b.rows || a.cols != b.cols) return false;
  for (std::size_t i = 0; i < a.entries.size(); ++i)
    if (!bits_equal(a.entries[i], b.entries[i])) return false;
  return true;
}

bool Value::operator==(const Value& other) const {
  if (v_.index() != other.v_.index()) return false;
  if (is_real()) return bits_equal(std::get<double>(v_), std::get<double>(other.v_));
  return v_ == other.v_;
}

int Value::depth() const {
  if (!is_list()) return 0;
  int d = 0;
  for (const Value& e : as_list()) d = std::max(d, e.depth());
  return d + 1;
}

std::string Value::describe() const {
  std::ostringstream os;
  visit([&os](const auto& v) {
    using T = std::decay_t<decltype(v)>;
    if constexpr (std::is_same_v<T, Unit>) {
      os << "Unit";
    } else if constexpr (std::is_same_v<T, bool>) {
      os << (v ? "Bool(true)" : "Bool(false)");
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
      os << "Int(" << v << ")";
    } else if constexpr (std::is_same_v<T, double>) {
      os << "Real(" << v << ")";
    } else if constexpr (std::is_same_v<T, std::string>) {
      os << "Str(\"" << v << "\")";
    } else if constexpr (std::is_same_v<T, List>) {
      os << "List[" << v.size() << "]";
    } else {
      os << "Matrix(" << v.rows << "x" << v.cols << ")";
    }
  });
  return os.str();
}

const char* message_name(const Message& m) {
  switch (m.index()) {
    case 0: return "Hello";
    case 1: return "HelloAck";
    case 2: return "EnvExport";
    case 3: return "EnvAck";
    case 4: return "TaskSubmit";
    case 5: return "TaskResult";
    case 6: return "Shutdown";
    default: return "ProtoError";
  }
}

}  // namespace parkernel::proto
