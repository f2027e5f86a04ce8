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

#include "parkernel/codec.hpp"

#include <bit>
#include <cstring>
#include <string_view>

namespace parkernel::proto {

namespace {

// Message payload tags.
enum : std::uint8_t {
  kTagHello = 0x01,
  kTagHelloAck = 0x02,
  kTagEnvExport = 0x03,
  kTagEnvAck = 0x04,
  kTagTaskSubmit = 0x05,
  kTagTaskResult = 0x06,
  kTagShutdown = 0x07,
  kTagProtoError = 0x08,
};

// Value tags.
enum : std::uint8_t {
  kValUnit = 0x00,
  kValBool = 0x01,
  kValInt = 0x02,
  kValReal = 0x03,
  kValStr = 0x04,
  kValList = 0x05,
  kValMatrix = 0x06,
};

using Buffer = std::vector<std::uint8_t>;

void put_u8(Buffer& b, std::uint8_t v) { b.push_back(v); }

void put_u32(Buffer& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(Buffer& b, std::uint64_t v) {
  for (int shift = 56; shift >= 0; shift -= 8)
    b.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_i64(Buffer& b, std::int64_t v) { put_u64(b, static_cast<std::uint64_t>(v)); }

void put_real(Buffer& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

void put_str(Buffer& b, std::string_view s) {
  put_u32(b, static_cast<std::uint32_t>(s.size()));
  b.insert(b.end(), s.begin(), s.end());
}

void put_value(Buffer& b, const Value& v, int depth) {
  if (depth > kMaxListDepth) throw MalformedPayload("list nesting exceeds bound");
  v.visit([&](const auto& x) {
    using T = std::decay_t<decltype(x)>;
    if constexpr (std::is_same_v<T, Value::Unit>) {
      put_u8(b, kValUnit);
    } else if constexpr (std::is_same_v<T, bool>) {
      put_u8(b, kValBool);
      put_u8(b, x ? 1 : 0);
    } else if constexpr (std::is_same_v<T, std::int64_t>) {
      put_u8(b, kValInt);
      put_i64(b, x);
    } else if constexpr (std::is_same_v<T, double>) {
      put_u8(b, kValReal);
      put_real(b, x);
    } else if constexpr (std::is_same_v<T, std::string>) {
      put_u8(b, kValStr);
      put_str(b, x);
    } else if constexpr (std::is_same_v<T, Value::List>) {
      put_u8(b, kValList);
      put_u32(b, static_cast<std::uint32_t>(x.size()));
      for (const Value& e : x) put_value(b, e, depth + 1);
    } else {
      put_u8(b, kValMatrix);
      put_u32(b, x.rows);
      put_u32(b, x.cols);
      for (double d : x.entries) put_real(b, d);
    }
  });
}

// Bounds-checked reader over a complete payload.
class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = (static_cast<std::uint32_t>(bytes_[pos_]) << 24) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 1]) << 16) |
                      (static_cast<std::uint32_t>(bytes_[pos_ + 2]) << 8) |
                      static_cast<std::uint32_t>(bytes_[pos_ + 3]);
    pos_ += 4;
    return v;
  }

  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += 8;
    return v;
  }

  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }

  double real() { return std::bit_cast<double>(u64()); }

  std::string str() {
    std::uint32_t len = u32();
    need(len);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    if (!utf8_valid(s)) throw MalformedPayload("string is not valid UTF-8");
    return s;
  }

  Value value(int depth) {
    if (depth > kMaxListDepth) throw MalformedPayload("list nesting exceeds bound");
    switch (u8()) {
      case kValUnit:
        return Value::unit();
      case kValBool: {
        std::uint8_t b = u8();
        if (b > 1) throw MalformedPayload("bool byte out of range");
        return Value(b == 1);
      }
      case kValInt:
        return Value(i64());
      case kValReal:
        return Value(real());
      case kValStr:
        return Value(str());
      case kValList: {
        std::uint32_t count = u32();
        if (count > remaining()) throw MalformedPayload("list count exceeds payload");
        Value::List l;
        l.reserve(count);
        for (std::uint32_t i = 0; i < count; ++i) l.push_back(value(depth + 1));
        return Value(std::move(l));
      }
      case kValMatrix: {
        std::uint32_t rows = u32();
        std::uint32_t cols = u32();
        std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
        if (count * 8 > remaining()) throw MalformedPayload("matrix entries exceed payload");
        std::vector<double> entries;
        entries.reserve(count);
        for (std::uint64_t i = 0; i < count; ++i) entries.push_back(real());
        return Value(MatrixData(rows, cols, std::move(entries)));
      }
      default:
        throw MalformedPayload("unknown value tag");
    }
  }

  void finish() const {
    if (pos_ != bytes_.size()) throw MalformedPayload("trailing bytes after message");
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw MalformedPayload("payload ends mid-field");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

Buffer encode_payload(const Message& m) {
  Buffer b;
  std::visit(
      [&b](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, msg::Hello>) {
          put_u8(b, kTagHello);
          put_u32(b, x.version);
        } else if constexpr (std::is_same_v<T, msg::HelloAck>) {
          put_u8(b, kTagHelloAck);
          put_str(b, x.host);
          put_str(b, x.os);
          put_i64(b, x.process);
          put_str(b, x.version);
        } else if constexpr (std::is_same_v<T, msg::EnvExport>) {
          put_u8(b, kTagEnvExport);
          put_str(b, x.scope);
          put_u32(b, static_cast<std::uint32_t>(x.bindings.size()));
          for (const auto& [name, value] : x.bindings) {
            put_str(b, name);
            put_value(b, value, 0);
          }
        } else if constexpr (std::is_same_v<T, msg::EnvAck>) {
          put_u8(b, kTagEnvAck);
        } else if constexpr (std::is_same_v<T, msg::TaskSubmit>) {
          put_u8(b, kTagTaskSubmit);
          put_u64(b, x.task_id);
          put_str(b, x.name);
          put_u32(b, static_cast<std::uint32_t>(x.args.size()));
          for (const Value& a : x.args) put_value(b, a, 0);
        } else if constexpr (std::is_same_v<T, msg::TaskResult>) {
          put_u8(b, kTagTaskResult);
          put_u64(b, x.task_id);
          put_u8(b, static_cast<std::uint8_t>(x.error));
          if (x.error == msg::TaskResult::ErrorKind::None)
            put_value(b, x.value, 0);
          else
            put_str(b, x.text);
        } else if constexpr (std::is_same_v<T, msg::Shutdown>) {
          put_u8(b, kTagShutdown);
        } else {
          put_u8(b, kTagProtoError);
          put_str(b, x.text);
        }
      },
      m);
  return b;
}

Message decode_payload(std::span<const std::uint8_t> payload) {
  Reader r(payload);
  Message m;
  switch (r.u8()) {
    case kTagHello:
      m = msg::Hello{r.u32()};
      break;
    case kTagHelloAck: {
      msg::HelloAck a;
      a.host = r.str();
      a.os = r.str();
      a.process = r.i64();
      a.version = r.str();
      m = std::move(a);
      break;
    }
    case kTagEnvExport: {
      msg::EnvExport e;
      e.scope = r.str();
      std::uint32_t count = r.u32();
      if (count > r.remaining()) throw MalformedPayload("binding count exceeds payload");
      e.bindings.reserve(count);
      for (std::uint32_t i = 0; i < count; ++i) {
        std::string name = r.str();
        e.bindings.emplace_back(std::move(name), r.value(0));
      }
      m = std::move(e);
      break;
    }
    case kTagEnvAck:
      m = msg::EnvAck{};
      break;
    case kTagTaskSubmit: {
      msg::TaskSubmit t;
      t.task_id = r.u64();
      t.name = r.str();
      std::uint32_t argc = r.u32();
      if (argc > r.remaining()) throw MalformedPayload("arg count exceeds payload");
      t.args.reserve(argc);
      for (std::uint32_t i = 0; i < argc; ++i) t.args.push_back(r.value(0));
      m = std::move(t);
      break;
    }
    case kTagTaskResult: {
      msg::TaskResult t;
      t.task_id = r.u64();
      std::uint8_t kind = r.u8();
      if (kind > 2) throw MalformedPayload("task result kind out of range");
      t.error = static_cast<msg::TaskResult::ErrorKind>(kind);
      if (t.error == msg::TaskResult::ErrorKind::None)
        t.value = r.value(0);
      else
        t.text = r.str();
      m = std::move(t);
      break;
    }
    case kTagShutdown:
      m = msg::Shutdown{};
      break;
    case kTagProtoError:
      m = msg::ProtoError{r.str()};
      break;
    default:
      throw MalformedPayload("unknown message tag");
  }
  r.finish();
  return m;
}

}  // namespace

std::size_t MemorySource::read_some(std::uint8_t* out, std::size_t n) {
  std::size_t avail = bytes_.size() - pos_;
  std::size_t take = std::min(n, avail);
  std::memcpy(out, bytes_.data() + pos_, take);
  pos_ += take;
  return take;
}

std::vector<std::uint8_t> encode_message(const Message& m) {
  Buffer payload = encode_payload(m);
  if (payload.size() > kMaxFramePayload) throw OversizeFrame("encoded payload exceeds 64 MiB");
  Buffer frame;
  frame.reserve(4 + payload.size());
  put_u32(frame, static_cast<std::uint32_t>(payload.size()));
  frame.insert(frame.end(), payload.begin(), payload.end());
  return frame;
}

namespace {

void read_exact(ByteSource& src, std::uint8_t* out, std::size_t n, const char* what) {
  std::size_t got = 0;
  while (got < n) {
    std::size_t k = src.read_some(out + got, n - got);
    if (k == 0) throw TruncatedFrame(std::string("source ended ") + what);
    got += k;
  }
}

}  // namespace

Message decode_message(ByteSource& src) {
  std::uint8_t hdr[4];
  std::size_t first = src.read_some(hdr, 4);
  if (first == 0) throw TruncatedFrame("source ended before a frame");
  if (first < 4) read_exact(src, hdr + first, 4 - first, "inside the length prefix");
  std::uint32_t len = (static_cast<std::uint32_t>(hdr[0]) << 24) |
                      (static_cast<std::uint32_t>(hdr[1]) << 16) |
                      (static_cast<std::uint32_t>(hdr[2]) << 8) | static_cast<std::uint32_t>(hdr[3]);
  if (len > kMaxFramePayload) throw OversizeFrame("frame length exceeds 64 MiB");
  std::vector<std::uint8_t> payload(len);
  if (len > 0) read_exact(src, payload.data(), len, "mid-frame");
  return decode_payload(payload);
}

Message decode_message(std::span<const std::uint8_t> frame) {
  MemorySource src(frame);
  Message m = decode_message(src);
  if (!src.exhausted()) throw MalformedPayload("trailing bytes after frame");
  return m;
}

std::vector<std::uint8_t> encode_value(const Value& v) {
  Buffer b;
  put_value(b, v, 0);
  return b;
}

Value decode_value(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Value v = r.value(0);
  r.finish();
  return v;
}

bool utf8_valid(std::string_view s) {
  const auto* p = reinterpret_cast<const unsigned char*>(s.data());
  std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    unsigned char c = p[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    int extra;
    std::uint32_t cp;
    if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= n) return false;
    for (int k = 1; k <= extra; ++k) {
      if ((p[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (p[i + k] & 0x3F);
    }
    if (extra == 1 && cp < 0x80) return false;       // overlong
    if (extra == 2 && cp < 0x800) return false;      // overlong
    if (extra == 3 && cp < 0x10000) return false;    // overlong
    if (cp >= 0xD800 && cp <= 0xDFFF) return false;  // surrogate
    if (cp > 0x10FFFF) return false;
    i += 1 + extra;
  }
  return true;
}

}  // namespace parkernel::proto
