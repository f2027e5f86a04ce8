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

#ifndef PARKERNEL_VERSION_HPP_
#define PARKERNEL_VERSION_HPP_

#include <cstdint>

namespace parkernel {

/// Software version reported by workers in the handshake.
inline constexpr const char* kVersion = "1.0.0";

/// Wire protocol version carried in Hello; a mismatch aborts the handshake.
inline constexpr std::uint32_t kProtocolVersion = 1;

}  // namespace parkernel

#endif  // PARKERNEL_VERSION_HPP_
