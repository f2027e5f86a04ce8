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

#ifndef PARKERNEL_WORKER_HPP_
#define PARKERNEL_WORKER_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "parkernel/message.hpp"
#include "parkernel/value.hpp"

namespace parkernel::worker {

/// Bindings exported by the master. Only the serve loop mutates it; task
/// handlers get a const view.
class BindingStore {
 public:
  const std::string& scope() const { return scope_; }
  bool has(const std::string& name) const { return values_.count(name) != 0; }

  /// Current value of `name`; throws UnknownBinding.
  const proto::Value& get(const std::string& name) const;

  void apply(const proto::msg::EnvExport& e);

 private:
  std::string scope_;
  std::map<std::string, proto::Value> values_;
};

using TaskHandler =
    std::function<proto::Value(const std::vector<proto::Value>& args, const BindingStore&)>;

/// Why a serve loop ended.
enum class ServeReason {
  ShutdownRequested,  // master sent Shutdown
  ConnectionLost,     // channel closed without Shutdown
  ProtocolViolation,  // peer broke the message rules; ProtoError was sent
};

/// Worker runtime: one handshake, one binding store, strictly sequential
/// task execution in submission order.
class Worker {
 public:
  /// Registers a named task. Throws DuplicateName, or Error once serving.
  void register_task(const std::string& name, TaskHandler handler);

  /// Serves one connection over the given descriptors (the worker
  /// executable passes stdin/stdout) until shutdown or error. Replies
  /// HelloAck to a version-matched Hello, then processes EnvExport,
  /// TaskSubmit and Shutdown messages. Handler exceptions become TaskFailed
  /// results; protocol violations are answered with ProtoError.
  ServeReason serve(int in_fd, int out_fd);

  /// Self-description reported in the handshake: host (PARKERNEL_REPORT_HOST
  /// overrides the machine name), OS, process id, software version.
  static proto::msg::HelloAck self_report();

 private:
  std::map<std::string, TaskHandler> tasks_;
  BindingStore bindings_;
  bool serving_ = false;
};

}  // namespace parkernel::worker

#endif  // PARKERNEL_WORKER_HPP_
