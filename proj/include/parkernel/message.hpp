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

#ifndef PARKERNEL_MESSAGE_HPP_
#define PARKERNEL_MESSAGE_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "parkernel/value.hpp"

namespace parkernel::proto {

/// Master-side worker descriptor: one row of the slave table.
struct SlaveInfo {
  int id = 0;               // master-assigned ordinal, >= 1
  std::string host;         // worker-reported machine name
  std::string os;           // worker-reported operating system
  std::int64_t process = 0; // worker's OS process id
  std::string version;      // worker software version

  bool operator==(const SlaveInfo&) const = default;
};

namespace msg {

struct Hello {
  std::uint32_t version = 0;
  bool operator==(const Hello&) const = default;
};

/// Worker self-report; the master supplies the registry id.
struct HelloAck {
  std::string host;
  std::string os;
  std::int64_t process = 0;
  std::string version;
  bool operator==(const HelloAck&) const = default;
};

struct EnvExport {
  std::string scope;
  std::vector<std::pair<std::string, Value>> bindings;
  bool operator==(const EnvExport&) const = default;
};

/// Worker acknowledgement of an applied EnvExport.
struct EnvAck {
  bool operator==(const EnvAck&) const { return true; }
};

struct TaskSubmit {
  std::uint64_t task_id = 0;
  std::string name;
  std::vector<Value> args;
  bool operator==(const TaskSubmit&) const = default;
};

/// Task outcome: a result value, or an error kind plus text.
struct TaskResult {
  enum class ErrorKind : std::uint8_t { None = 0, UnknownTask = 1, Failed = 2 };

  std::uint64_t task_id = 0;
  ErrorKind error = ErrorKind::None;
  Value value;        // meaningful when error == None
  std::string text;   // meaningful otherwise

  static TaskResult ok(std::uint64_t id, Value v) {
    return TaskResult{id, ErrorKind::None, std::move(v), {}};
  }
  static TaskResult unknown_task(std::uint64_t id, std::string t) {
    return TaskResult{id, ErrorKind::UnknownTask, Value(), std::move(t)};
  }
  static TaskResult failed(std::uint64_t id, std::string t) {
    return TaskResult{id, ErrorKind::Failed, Value(), std::move(t)};
  }

  bool operator==(const TaskResult&) const = default;
};

struct Shutdown {
  bool operator==(const Shutdown&) const { return true; }
};

struct ProtoError {
  std::string text;
  bool operator==(const ProtoError&) const = default;
};

}  // namespace msg

/// Tagged wire-protocol unit.
using Message = std::variant<msg::Hello, msg::HelloAck, msg::EnvExport, msg::EnvAck,
                             msg::TaskSubmit, msg::TaskResult, msg::Shutdown, msg::ProtoError>;

/// Short tag name for diagnostics ("Hello", "TaskSubmit", ...).
const char* message_name(const Message& m);

}  // namespace parkernel::proto

#endif  // PARKERNEL_MESSAGE_HPP_
