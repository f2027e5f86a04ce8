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

// Randomized message/value generators for protocol property tests.

#ifndef PARKERNEL_TESTS_MSG_GEN_HPP_
#define PARKERNEL_TESTS_MSG_GEN_HPP_

#include <bit>
#include <cstdint>
#include <random>
#include <string>

#include "parkernel/message.hpp"
#include "parkernel/value.hpp"

namespace parkernel::testgen {

using proto::MatrixData;
using proto::Message;
using proto::Value;

inline std::string random_string(std::mt19937_64& rng) {
  static const std::string pieces[] = {"", "a", "ns", "data1.dat", "tcmpxeon", u8"λ", u8"π≈3",
                                       "worker info", u8"naïve", "x_1"};
  std::uniform_int_distribution<std::size_t> pick(0, std::size(pieces) - 1);
  std::string s = pieces[pick(rng)];
  if (pick(rng) % 3 == 0) s += std::to_string(rng() % 1000);
  return s;
}

inline double random_real(std::mt19937_64& rng) {
  switch (rng() % 5) {
    case 0: return 0.0;
    case 1: return -0.0;
    case 2: return std::uniform_real_distribution<double>(-1e3, 1e3)(rng);
    case 3: return std::ldexp(std::uniform_real_distribution<double>(-1, 1)(rng), int(rng() % 600) - 300);
    default: return std::bit_cast<double>(rng());  // arbitrary bit pattern, incl. NaN/inf
  }
}

inline Value random_value(std::mt19937_64& rng, int depth = 0) {
  std::uniform_int_distribution<int> pick(0, depth >= 4 ? 4 : 6);
  switch (pick(rng)) {
    case 0: return Value::unit();
    case 1: return Value(rng() % 2 == 0);
    case 2: return Value(static_cast<std::int64_t>(rng()));
    case 3: return Value(random_real(rng));
    case 4: return Value(random_string(rng));
    case 5: {
      Value::List l;
      std::size_t n = rng() % 5;
      for (std::size_t i = 0; i < n; ++i) l.push_back(random_value(rng, depth + 1));
      return Value(std::move(l));
    }
    default: {
      std::uint32_t r = static_cast<std::uint32_t>(rng() % 5);
      std::uint32_t c = static_cast<std::uint32_t>(rng() % 5);
      std::vector<double> e(static_cast<std::size_t>(r) * c);
      for (double& x : e) x = random_real(rng);
      return Value(MatrixData(r, c, std::move(e)));
    }
  }
}

inline Message random_message(std::mt19937_64& rng) {
  using namespace proto::msg;
  switch (rng() % 8) {
    case 0: return Hello{static_cast<std::uint32_t>(rng())};
    case 1: return HelloAck{random_string(rng) + "h", random_string(rng) + "o",
                            static_cast<std::int64_t>(rng() % 100000), random_string(rng) + "v"};
    case 2: {
      EnvExport e;
      e.scope = random_string(rng);
      std::size_t n = rng() % 4;
      for (std::size_t i = 0; i < n; ++i)
        e.bindings.emplace_back(random_string(rng) + std::to_string(i), random_value(rng));
      return e;
    }
    case 3: return EnvAck{};
    case 4: {
      TaskSubmit t;
      t.task_id = rng();
      t.name = random_string(rng);
      std::size_t n = rng() % 4;
      for (std::size_t i = 0; i < n; ++i) t.args.push_back(random_value(rng));
      return t;
    }
    case 5: {
      switch (rng() % 3) {
        case 0: return TaskResult::ok(rng(), random_value(rng));
        case 1: return TaskResult::unknown_task(rng(), random_string(rng));
        default: return TaskResult::failed(rng(), random_string(rng));
      }
    }
    case 6: return Shutdown{};
    default: return ProtoError{random_string(rng)};
  }
}

}  // namespace parkernel::testgen

#endif  // PARKERNEL_TESTS_MSG_GEN_HPP_
