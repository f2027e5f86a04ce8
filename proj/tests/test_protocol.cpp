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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <bit>

#include "msg_gen.hpp"
#include "parkernel/codec.hpp"

using namespace parkernel;
using namespace parkernel::proto;

TEST_CASE("shutdown frame is length prefix plus one tag byte") {
  auto bytes = encode_message(msg::Shutdown{});
  REQUIRE(bytes.size() == 5);
  CHECK(bytes[0] == 0);
  CHECK(bytes[1] == 0);
  CHECK(bytes[2] == 0);
  CHECK(bytes[3] == 1);
}

TEST_CASE("hello round-trips") {
  Message m = msg::Hello{1};
  auto bytes = encode_message(m);
  CHECK(decode_message(bytes) == m);
}

TEST_CASE("task submit round-trips") {
  Message m = msg::TaskSubmit{7, "echo", {Value(std::int64_t{42})}};
  CHECK(decode_message(encode_message(m)) == m);
}

TEST_CASE("env export round-trips") {
  msg::EnvExport e;
  e.scope = "Global";
  e.bindings.emplace_back("t", Value(1.2));
  Message m = e;
  CHECK(decode_message(encode_message(m)) == m);
}

TEST_CASE("encode is deterministic") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Message m = testgen::random_message(rng);
    CHECK(encode_message(m) == encode_message(m));
  }
}

TEST_CASE("randomized message round-trip") {
  std::mt19937_64 rng(20260809);
  for (int i = 0; i < 1500; ++i) {
    Message m = testgen::random_message(rng);
    auto bytes = encode_message(m);
    CAPTURE(i);
    CHECK(decode_message(bytes) == m);
  }
}

TEST_CASE("concatenated frames decode in order") {
  std::mt19937_64 rng(11);
  std::vector<Message> msgs;
  std::vector<std::uint8_t> stream;
  for (int i = 0; i < 25; ++i) {
    msgs.push_back(testgen::random_message(rng));
    auto b = encode_message(msgs.back());
    stream.insert(stream.end(), b.begin(), b.end());
  }
  MemorySource src(stream);
  for (const Message& m : msgs) CHECK(decode_message(src) == m);
  CHECK(src.exhausted());
  CHECK_THROWS_AS(decode_message(src), TruncatedFrame);
}

TEST_CASE("oversize frame rejected") {
  // Prefix claiming 2^31 bytes.
  std::uint8_t bytes[] = {0x80, 0x00, 0x00, 0x00};
  MemorySource src(bytes);
  CHECK_THROWS_AS(decode_message(src), OversizeFrame);
}

TEST_CASE("empty source is a truncated frame") {
  MemorySource src(std::span<const std::uint8_t>{});
  CHECK_THROWS_AS(decode_message(src), TruncatedFrame);
}

TEST_CASE("frame cut mid-payload is truncated") {
  auto bytes = encode_message(msg::ProtoError{"boom"});
  std::span<const std::uint8_t> cut(bytes.data(), bytes.size() - 2);
  MemorySource src(cut);
  CHECK_THROWS_AS(decode_message(src), TruncatedFrame);
}

TEST_CASE("frame cut mid-prefix is truncated") {
  std::uint8_t bytes[] = {0x00, 0x00};
  MemorySource src(bytes);
  CHECK_THROWS_AS(decode_message(src), TruncatedFrame);
}

TEST_CASE("unknown message tag rejected") {
  std::uint8_t frame[] = {0, 0, 0, 1, 0xEE};
  CHECK_THROWS_AS(decode_message(std::span<const std::uint8_t>(frame)), MalformedPayload);
}

TEST_CASE("trailing bytes rejected") {
  auto frame = encode_message(msg::Shutdown{});
  frame[3] += 1;  // lie about length
  frame.push_back(0x00);
  CHECK_THROWS_AS(decode_message(std::span<const std::uint8_t>(frame)), MalformedPayload);
}

TEST_CASE("invalid utf-8 rejected") {
  auto frame = encode_message(msg::ProtoError{"abcd"});
  frame[frame.size() - 2] = 0xFF;
  CHECK_THROWS_AS(decode_message(std::span<const std::uint8_t>(frame)), MalformedPayload);
  CHECK_FALSE(utf8_valid("\xC0\xAF"));         // overlong '/'
  CHECK_FALSE(utf8_valid("\xED\xA0\x80"));     // surrogate
  CHECK(utf8_valid(u8"héllo λ"));
}

TEST_CASE("value round-trip is bit exact for reals") {
  for (double d : {2.1, -0.0, 1e-308, std::numeric_limits<double>::quiet_NaN()}) {
    Value v(d);
    Value back = decode_value(encode_value(v));
    CHECK(std::bit_cast<std::uint64_t>(back.as_real()) == std::bit_cast<std::uint64_t>(d));
  }
}

TEST_CASE("1x1 matrix round-trips bit exactly") {
  Value v(MatrixData(1, 1, {0.0}));
  CHECK(decode_value(encode_value(v)) == v);
}

TEST_CASE("list nesting bound enforced on decode") {
  Value v = Value::unit();
  for (int i = 0; i < 32; ++i) v = Value(Value::List{v});
  auto ok = encode_value(v);
  CHECK(decode_value(ok) == v);

  // Hand-build a 33-deep encoding: 33 list headers around a unit.
  std::vector<std::uint8_t> bytes;
  for (int i = 0; i < 33; ++i) {
    bytes.push_back(0x05);
    bytes.insert(bytes.end(), {0, 0, 0, 1});
  }
  bytes.push_back(0x00);
  CHECK_THROWS_AS(decode_value(bytes), MalformedPayload);
}

TEST_CASE("matrix shape mismatch rejected on decode") {
  // Claims 2x2 but carries one entry.
  std::vector<std::uint8_t> bytes = {0x06, 0, 0, 0, 2, 0, 0, 0, 2};
  for (int i = 0; i < 8; ++i) bytes.push_back(0);
  CHECK_THROWS_AS(decode_value(bytes), MalformedPayload);
}

TEST_CASE("value decode rejects trailing bytes") {
  auto bytes = encode_value(Value(std::int64_t{5}));
  bytes.push_back(0x00);
  CHECK_THROWS_AS(decode_value(bytes), MalformedPayload);
}
