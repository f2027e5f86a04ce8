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

#ifndef PARKERNEL_VALUE_HPP_
#define PARKERNEL_VALUE_HPP_

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "parkernel/errors.hpp"

namespace parkernel::proto {

/// Decoder-enforced bound on list nesting.
inline constexpr int kMaxListDepth = 32;

class Value;

/// Dense real matrix payload: binary64 entries in row-major order.
struct MatrixData {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<double> entries;

  MatrixData() = default;
  MatrixData(std::uint32_t r, std::uint32_t c, std::vector<double> e);
};

/// Serializable datum exchanged between master and workers.
///
/// Variants: Unit, Bool, Int (signed 64-bit), Real (binary64), Str (UTF-8),
/// List (ordered Values, nesting depth <= 32), Matrix (row-major binary64).
/// Equality is structural; Real components compare bit-for-bit, matching the
/// wire format's lossless round-trip.
class Value {
 public:
  struct Unit {
    bool operator==(const Unit&) const { return true; }
  };
  using List = std::vector<Value>;

  Value() : v_(Unit{}) {}
  Value(bool b) : v_(b) {}
  Value(std::int64_t i) : v_(i) {}
  Value(double d) : v_(d) {}
  Value(std::string s) : v_(std::move(s)) {}
  Value(const char* s) : v_(std::string(s)) {}
  Value(List l) : v_(std::move(l)) {}
  Value(MatrixData m) : v_(std::move(m)) {}

  static Value unit() { return Value(); }

  bool is_unit() const { return std::holds_alternative<Unit>(v_); }
  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
  bool is_real() const { return std::holds_alternative<double>(v_); }
  bool is_str() const { return std::holds_alternative<std::string>(v_); }
  bool is_list() const { return std::holds_alternative<List>(v_); }
  bool is_matrix() const { return std::holds_alternative<MatrixData>(v_); }

  // Checked accessors; a wrong variant raises TaskFailed so that a worker
  // handler unpacking bad arguments reports a task failure, not a crash.
  bool as_bool() const { return get<bool>("Bool"); }
  std::int64_t as_int() const { return get<std::int64_t>("Int"); }
  double as_real() const { return get<double>("Real"); }
  const std::string& as_str() const { return get<std::string>("Str"); }
  const List& as_list() const { return get<List>("List"); }
  const MatrixData& as_matrix() const { return get<MatrixData>("Matrix"); }

  bool operator==(const Value& other) const;
  bool operator!=(const Value& other) const { return !(*this == other); }

  /// Nesting depth: non-lists are depth 0, a flat list is depth 1.
  int depth() const;

  /// One-line human-readable rendering for logs and reports.
  std::string describe() const;

  template <typename V>
  decltype(auto) visit(V&& visitor) const {
    return std::visit(std::forward<V>(visitor), v_);
  }

 private:
  template <typename T>
  const T& get(const char* name) const {
    if (const T* p = std::get_if<T>(&v_)) return *p;
    throw TaskFailed(std::string("expected ") + name + " value, got " + describe());
  }

  std::variant<Unit, bool, std::int64_t, double, std::string, List, MatrixData> v_;
};

bool operator==(const MatrixData& a, const MatrixData& b);

}  // namespace parkernel::proto

#endif  // PARKERNEL_VALUE_HPP_
