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

#include "parkernel/master.hpp"

#include <atomic>
#include <condition_variable>
#include <deque>
#include <future>
#include <mutex>
#include <sstream>

#include "parkernel/version.hpp"

namespace parkernel::master {

namespace {

/// Bound on the whole launch handshake; a command that starts but never
/// speaks the protocol should fail a launch, not hang it.
constexpr std::chrono::milliseconds kHandshakeDeadline{30000};

// Mutex granting the lock strictly in arrival order, with a timed
// acquisition that can give up without breaking the queue.
class FifoMutex {
 public:
  void lock() {
    std::unique_lock lk(m_);
    if (!held_ && queue_.empty()) {
      held_ = true;
      return;
    }
    auto w = std::make_shared<Waiter>();
    queue_.push_back(w);
    w->cv.wait(lk, [&] { return w->granted; });
  }

  bool try_lock_for(std::chrono::milliseconds timeout) {
    std::unique_lock lk(m_);
    if (!held_ && queue_.empty()) {
      held_ = true;
      return true;
    }
    auto w = std::make_shared<Waiter>();
    queue_.push_back(w);
    if (w->cv.wait_for(lk, timeout, [&] { return w->granted; })) return true;
    if (w->granted) return true;
    w->abandoned = true;
    return false;
  }

  void unlock() {
    std::lock_guard lk(m_);
    while (!queue_.empty()) {
      auto w = queue_.front();
      queue_.pop_front();
      if (w->abandoned) continue;
      w->granted = true;
      w->cv.notify_one();
      return;  // ownership handed to w; held_ stays true
    }
    held_ = false;
  }

 private:
  struct Waiter {
    std::condition_variable cv;
    bool granted = false;
    bool abandoned = false;
  };

  std::mutex m_;
  std::deque<std::shared_ptr<Waiter>> queue_;
  bool held_ = false;
};

struct Connection {
  proto::SlaveInfo info;
  transport::Channel chan;
  FifoMutex io;
  std::atomic<bool> alive{true};
};

}  // namespace

Bindings& Bindings::add(const std::string& name, proto::Value value) {
  for (const auto& [existing, _] : entries_)
    if (existing == name) throw Error("duplicate binding name in one export: " + name);
  entries_.emplace_back(name, std::move(value));
  return *this;
}

std::string render_slave_table(const std::vector<proto::SlaveInfo>& infos) {
  const std::vector<std::string> header = {"ID", "host", "OS", "process", "Version"};
  std::vector<std::vector<std::string>> rows;
  rows.push_back(header);
  for (const proto::SlaveInfo& s : infos)
    rows.push_back({std::to_string(s.id), s.host, s.os, std::to_string(s.process), s.version});

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());

  std::ostringstream out;
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << '\n';
  }
  return out.str();
}

struct Master::Impl {
  mutable std::mutex registry_mtx;
  std::vector<std::shared_ptr<Connection>> registry;  // launch order
  int next_id = 1;
  std::mutex launch_mtx;  // keeps id assignment in launch order
  std::atomic<std::uint64_t> next_task_id{1};
  std::atomic<std::uint64_t> launch_seq{1};
  mutable std::mutex exit_mtx;
  std::vector<std::pair<int, int>> exit_log;

  std::shared_ptr<Connection> find(SlaveHandle h) const {
    std::lock_guard lk(registry_mtx);
    for (const auto& c : registry)
      if (c->info.id == h.id) return c;
    throw TransportError("no registered worker with id " + std::to_string(h.id));
  }

  // Marks the connection dead and force-kills its process. Used whenever the
  // channel state is no longer trustworthy.
  static void condemn(Connection& c) {
    c.alive.store(false);
    c.chan.kill_now();
  }
};

Master::Master() : impl_(std::make_unique<Impl>()) {}

Master::~Master() {
  try {
    close_slaves();
  } catch (...) {
  }
}

SlaveHandle Master::launch_slave(const transport::Endpoint& endpoint) {
  std::lock_guard launch_lk(impl_->launch_mtx);

  const std::string token = "lnk" + std::to_string(impl_->launch_seq.fetch_add(1));
  transport::Channel chan = transport::spawn(endpoint, token);

  proto::Message reply;
  try {
    chan.write_message(proto::msg::Hello{kProtocolVersion});
    reply = chan.read_message(kHandshakeDeadline);
  } catch (const SpawnFailed&) {
    throw;
  } catch (const TransportError& e) {
    // Write failure means the command died instantly; read timeout means it
    // never spoke. Either way the launch did not produce a usable worker.
    chan.kill_now();
    throw SpawnFailed("worker did not complete the handshake: " + std::string(e.what()) +
                      "; stderr: " + chan.stderr_tail());
  } catch (const Error& e) {
    chan.kill_now();
    throw HandshakeFailed("malformed handshake reply: " + std::string(e.what()));
  }

  if (const auto* err = std::get_if<proto::msg::ProtoError>(&reply)) {
    std::string text = err->text;
    chan.kill_now();
    throw HandshakeFailed("worker rejected the handshake: " + text);
  }
  const auto* ack = std::get_if<proto::msg::HelloAck>(&reply);
  if (!ack) {
    chan.kill_now();
    throw HandshakeFailed(std::string("expected HelloAck, got ") + proto::message_name(reply));
  }
  if (ack->host.empty() || ack->os.empty() || ack->version.empty() || ack->process < 1) {
    chan.kill_now();
    throw HandshakeFailed("HelloAck carries empty or invalid descriptor fields");
  }

  auto conn = std::make_shared<Connection>();
  conn->chan = std::move(chan);

  std::lock_guard lk(impl_->registry_mtx);
  conn->info = proto::SlaveInfo{impl_->next_id++, ack->host, ack->os, ack->process, ack->version};
  impl_->registry.push_back(conn);
  return SlaveHandle{conn->info.id};
}

std::vector<SlaveHandle> Master::slaves() const {
  std::lock_guard lk(impl_->registry_mtx);
  std::vector<SlaveHandle> out;
  for (const auto& c : impl_->registry)
    if (c->alive.load()) out.push_back(SlaveHandle{c->info.id});
  return out;
}

proto::SlaveInfo Master::info(SlaveHandle h) const { return impl_->find(h)->info; }

bool Master::alive(SlaveHandle h) const { return impl_->find(h)->alive.load(); }

std::string Master::slave_table() const {
  std::vector<proto::SlaveInfo> infos;
  {
    std::lock_guard lk(impl_->registry_mtx);
    for (const auto& c : impl_->registry)
      if (c->alive.load()) infos.push_back(c->info);
  }
  return render_slave_table(infos);
}

std::vector<ExportOutcome> Master::export_environment(const Bindings& b) {
  return export_environment(b, slaves());
}

std::vector<ExportOutcome> Master::export_environment(const Bindings& b,
                                                      const std::vector<SlaveHandle>& targets) {
  proto::msg::EnvExport message;
  message.scope = b.scope();
  message.bindings = b.entries();

  std::vector<ExportOutcome> outcomes;
  outcomes.reserve(targets.size());
  for (SlaveHandle h : targets) {
    ExportOutcome out{h.id, std::nullopt};
    try {
      auto conn = impl_->find(h);
      if (!conn->alive.load()) throw TransportError("worker " + std::to_string(h.id) + " is dead");
      std::lock_guard<FifoMutex> io(conn->io);
      if (!conn->alive.load()) throw TransportError("worker " + std::to_string(h.id) + " is dead");
      try {
        conn->chan.write_message(message);
        proto::Message reply = conn->chan.read_message();
        if (!std::holds_alternative<proto::msg::EnvAck>(reply)) {
          Impl::condemn(*conn);
          throw TransportError(std::string("expected EnvAck, got ") + proto::message_name(reply));
        }
      } catch (const TransportError&) {
        Impl::condemn(*conn);
        throw;
      } catch (const Error& e) {
        Impl::condemn(*conn);
        throw TransportError(e.what());
      }
    } catch (const Error& e) {
      out.error = e.what();
    }
    outcomes.push_back(std::move(out));
  }
  return outcomes;
}

proto::Value Master::remote_evaluate(SlaveHandle target, const std::string& task_name,
                                     std::vector<proto::Value> args,
                                     std::optional<std::chrono::milliseconds> deadline) {
  auto conn = impl_->find(target);
  if (!conn->alive.load())
    throw TransportError("worker " + std::to_string(target.id) + " is dead");

  std::lock_guard<FifoMutex> io(conn->io);
  if (!conn->alive.load())
    throw TransportError("worker " + std::to_string(target.id) + " is dead");

  proto::msg::TaskSubmit submit;
  submit.task_id = impl_->next_task_id.fetch_add(1);
  submit.name = task_name;
  submit.args = std::move(args);

  try {
    conn->chan.write_message(submit);
    proto::Message reply = conn->chan.read_message(deadline);

    const auto* result = std::get_if<proto::msg::TaskResult>(&reply);
    if (!result) {
      Impl::condemn(*conn);
      if (const auto* err = std::get_if<proto::msg::ProtoError>(&reply))
        throw TransportError("worker reported a protocol error: " + err->text);
      throw TransportError(std::string("expected TaskResult, got ") + proto::message_name(reply));
    }
    if (result->task_id != submit.task_id) {
      Impl::condemn(*conn);
      throw TransportError("task id mismatch: sent " + std::to_string(submit.task_id) +
                           ", got " + std::to_string(result->task_id));
    }
    switch (result->error) {
      case proto::msg::TaskResult::ErrorKind::None:
        return result->value;
      case proto::msg::TaskResult::ErrorKind::UnknownTask:
        throw UnknownTask(result->text);
      default:
        throw TaskFailed(result->text);
    }
  } catch (const TransportError&) {
    Impl::condemn(*conn);
    throw;
  } catch (const UnknownTask&) {
    throw;  // worker stays healthy
  } catch (const TaskFailed&) {
    throw;  // worker stays healthy
  } catch (const Error& e) {
    // Undecodable reply or similar: the stream cannot be trusted any more.
    Impl::condemn(*conn);
    throw TransportError(e.what());
  }
}

std::vector<TaskOutcome> Master::remote_evaluate_all(const std::string& task_name,
                                                     std::vector<proto::Value> args) {
  const std::vector<SlaveHandle> live = slaves();
  if (live.empty()) throw TransportError("no live workers to dispatch to");

  std::vector<std::future<TaskOutcome>> futures;
  futures.reserve(live.size());
  for (SlaveHandle h : live) {
    futures.push_back(std::async(std::launch::async, [this, h, &task_name, &args] {
      TaskOutcome out;
      out.slave_id = h.id;
      try {
        out.value = remote_evaluate(h, task_name, args);
      } catch (const UnknownTask& e) {
        out.status = TaskOutcome::Status::UnknownTask;
        out.error = e.what();
      } catch (const TaskFailed& e) {
        out.status = TaskOutcome::Status::TaskFailed;
        out.error = e.what();
      } catch (const Error& e) {
        out.status = TaskOutcome::Status::Transport;
        out.error = e.what();
      }
      return out;
    }));
  }

  std::vector<TaskOutcome> outcomes;
  outcomes.reserve(live.size());
  for (auto& f : futures) outcomes.push_back(f.get());
  return outcomes;
}

void Master::close_slaves(std::chrono::milliseconds grace) {
  std::vector<std::shared_ptr<Connection>> doomed;
  {
    std::lock_guard lk(impl_->registry_mtx);
    doomed.swap(impl_->registry);
  }
  for (const auto& conn : doomed) {
    conn->alive.store(false);
    int status;
    if (conn->io.try_lock_for(grace)) {
      // Idle connection: polite shutdown.
      status = conn->chan.close(grace);
      conn->io.unlock();
    } else {
      // A task is stuck in flight; kill, then wait for the evaluator thread
      // to drain off the channel before tearing it down.
      conn->chan.kill_now();
      conn->io.lock();
      status = conn->chan.close(std::chrono::milliseconds(0));
      conn->io.unlock();
    }
    std::lock_guard lk(impl_->exit_mtx);
    impl_->exit_log.emplace_back(conn->info.id, status);
  }
}

std::vector<std::pair<int, int>> Master::exit_statuses() const {
  std::lock_guard lk(impl_->exit_mtx);
  return impl_->exit_log;
}

}  // namespace parkernel::master
