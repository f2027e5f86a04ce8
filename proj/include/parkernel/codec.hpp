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

#ifndef PARKERNEL_CODEC_HPP_
#define PARKERNEL_CODEC_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parkernel/message.hpp"
#include "parkernel/value.hpp"

// Framed, versioned wire codec. Byte-level layout is documented in
// protocol.md at the repository root; in short, every message travels as
//
//   [u32be payload length][payload = tag byte + fields]
//
// with integers big-endian, reals as raw IEEE-754 binary64 bits, and strings
// length-prefixed UTF-8. Encoding is deterministic and all functions here are
// pure; they can be called from any thread.

namespace parkernel::proto {

/// Decoder-enforced bound on frame payload size (64 MiB).
inline constexpr std::uint32_t kMaxFramePayload = 64u * 1024u * 1024u;

/// Incremental byte supplier for the frame decoder.
class ByteSource {
 public:
  virtual ~ByteSource() = default;

  /// Reads up to `n` bytes into `out`; returns the count read, 0 on end.
  virtual std::size_t read_some(std::uint8_t* out, std::size_t n) = 0;
};

/// ByteSource over an in-memory buffer (does not own the bytes).
class MemorySource : public ByteSource {
 public:
  explicit MemorySource(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}
  std::size_t read_some(std::uint8_t* out, std::size_t n) override;
  bool exhausted() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

/// Encodes one message as a single frame (length prefix included).
/// Throws OversizeFrame if the payload would exceed kMaxFramePayload.
std::vector<std::uint8_t> encode_message(const Message& m);

/// Consumes exactly one frame from the source and decodes it.
/// Throws TruncatedFrame, OversizeFrame, or MalformedPayload.
Message decode_message(ByteSource& src);

/// Convenience overload over a complete in-memory frame.
Message decode_message(std::span<const std::uint8_t> frame);

/// Canonical serialization of a single value (no frame).
std::vector<std::uint8_t> encode_value(const Value& v);

/// Inverse of encode_value; the buffer must hold exactly one value.
Value decode_value(std::span<const std::uint8_t> bytes);

/// True when `s` is well-formed UTF-8 (no overlongs, surrogates, >U+10FFFF).
bool utf8_valid(std::string_view s);

}  // namespace parkernel::proto

#endif  // PARKERNEL_CODEC_HPP_
