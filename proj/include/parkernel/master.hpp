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

#ifndef PARKERNEL_MASTER_HPP_
#define PARKERNEL_MASTER_HPP_

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parkernel/message.hpp"
#include "parkernel/transport.hpp"
#include "parkernel/value.hpp"

namespace parkernel::master {

/// Registry ordinal of one worker; stable for the connection's lifetime and
/// never reused within a master session.
struct SlaveHandle {
  int id = 0;
  bool operator==(const SlaveHandle&) const = default;
};

/// Named values exported to workers. Names are unique within one export;
/// a later export overwrites earlier bindings of the same name.
class Bindings {
 public:
  explicit Bindings(std::string scope = "Global") : scope_(std::move(scope)) {}

  Bindings& add(const std::string& name, proto::Value value);

  const std::string& scope() const { return scope_; }
  const std::vector<std::pair<std::string, proto::Value>>& entries() const { return entries_; }

 private:
  std::string scope_;
  std::vector<std::pair<std::string, proto::Value>> entries_;
};

/// Per-target acknowledgement of an environment export.
struct ExportOutcome {
  int slave_id = 0;
  std::optional<std::string> error;  // empty on success
  bool ok() const { return !error.has_value(); }
};

/// Per-worker outcome of a broadcast evaluation.
struct TaskOutcome {
  enum class Status { Ok, UnknownTask, TaskFailed, Transport };

  int slave_id = 0;
  Status status = Status::Ok;
  proto::Value value;  // meaningful when status == Ok
  std::string error;   // meaningful otherwise

  bool ok() const { return status == Status::Ok; }
};

/// Renders the descriptor table (columns ID, host, OS, process, Version).
std::string render_slave_table(const std::vector<proto::SlaveInfo>& infos);

/// Orchestrator: launches workers, keeps the registry, exports environments,
/// dispatches synchronous task evaluations, and closes everything down.
///
/// Thread safety: the registry is safe for concurrent access, and
/// evaluations targeting different workers run concurrently. Calls targeting
/// the same worker are serialized in arrival order (one task in flight per
/// connection).
class Master {
 public:
  Master();
  ~Master();  // closes all workers
  Master(const Master&) = delete;
  Master& operator=(const Master&) = delete;

  /// Spawns the endpoint's command, completes the Hello/HelloAck handshake,
  /// and registers the worker under the next ordinal. On failure the process
  /// is terminated and nothing is registered (no ordinal is consumed).
  /// Throws SpawnFailed or HandshakeFailed.
  SlaveHandle launch_slave(const transport::Endpoint& endpoint);

  /// Live workers in launch order.
  std::vector<SlaveHandle> slaves() const;

  proto::SlaveInfo info(SlaveHandle h) const;
  bool alive(SlaveHandle h) const;

  /// Descriptor table of the live workers, in id order.
  std::string slave_table() const;

  /// Sends the bindings to every live worker (or to `targets`) and collects
  /// one acknowledgement per target; failures are per-target, never global.
  std::vector<ExportOutcome> export_environment(const Bindings& b);
  std::vector<ExportOutcome> export_environment(const Bindings& b,
                                                const std::vector<SlaveHandle>& targets);

  /// Runs one named task on one worker and blocks for the result value.
  /// With a deadline, expiry raises TransportError and marks the worker
  /// dead. Throws UnknownTask, TaskFailed, or TransportError.
  proto::Value remote_evaluate(SlaveHandle target, const std::string& task_name,
                               std::vector<proto::Value> args,
                               std::optional<std::chrono::milliseconds> deadline = std::nullopt);

  /// Dispatches the task to every live worker concurrently and collects all
  /// outcomes in id order. Throws TransportError only when no worker is live.
  std::vector<TaskOutcome> remote_evaluate_all(const std::string& task_name,
                                               std::vector<proto::Value> args);

  /// Sends Shutdown to every live worker, reaps all processes (forced
  /// termination after the grace period), and empties the registry.
  /// Idempotent; never throws on worker failures.
  void close_slaves(std::chrono::milliseconds grace = transport::kShutdownGrace);

  /// (id, exit status) pairs recorded by close_slaves, in close order.
  std::vector<std::pair<int, int>> exit_statuses() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace parkernel::master

#endif  // PARKERNEL_MASTER_HPP_
