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

#include "parkernel/worker.hpp"

#include <sys/utsname.h>
#include <unistd.h>

#include <cerrno>
#include <cstdlib>
#include <cstring>

#include "parkernel/codec.hpp"
#include "parkernel/version.hpp"

namespace parkernel::worker {

namespace {

class FdSource : public proto::ByteSource {
 public:
  explicit FdSource(int fd) : fd_(fd) {}
  std::size_t read_some(std::uint8_t* out, std::size_t n) override {
    for (;;) {
      ssize_t got = ::read(fd_, out, n);
      if (got >= 0) return static_cast<std::size_t>(got);
      if (errno != EINTR) throw TransportError(std::string("read failed: ") + std::strerror(errno));
    }
  }

 private:
  int fd_;
};

void write_frame(int fd, const proto::Message& m) {
  const std::vector<std::uint8_t> frame = proto::encode_message(m);
  std::size_t off = 0;
  while (off < frame.size()) {
    ssize_t n = ::write(fd, frame.data() + off, frame.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError(std::string("write failed: ") + std::strerror(errno));
    }
    off += static_cast<std::size_t>(n);
  }
}

}  // namespace

const proto::Value& BindingStore::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw UnknownBinding("unknown binding: " + name);
  return it->second;
}

void BindingStore::apply(const proto::msg::EnvExport& e) {
  scope_ = e.scope;
  for (const auto& [name, value] : e.bindings) values_[name] = value;
}

void Worker::register_task(const std::string& name, TaskHandler handler) {
  if (serving_) throw Error("cannot register task '" + name + "' while serving");
  auto [it, inserted] = tasks_.emplace(name, std::move(handler));
  if (!inserted) throw DuplicateName("task '" + name + "' is already registered");
}

proto::msg::HelloAck Worker::self_report() {
  proto::msg::HelloAck ack;

  if (const char* env = std::getenv("PARKERNEL_REPORT_HOST"); env && *env) {
    ack.host = env;
  } else {
    char buf[256] = {0};
    ack.host = (::gethostname(buf, sizeof(buf) - 1) == 0 && buf[0]) ? buf : "unknown-host";
  }

  struct utsname uts{};
  if (::uname(&uts) == 0)
    ack.os = std::string(uts.sysname) + "-" + uts.machine;
  else
    ack.os = "unknown-os";

  ack.process = static_cast<std::int64_t>(::getpid());
  ack.version = kVersion;
  return ack;
}

ServeReason Worker::serve(int in_fd, int out_fd) {
  serving_ = true;
  FdSource src(in_fd);

  auto violation = [&](const std::string& text) {
    try {
      write_frame(out_fd, proto::msg::ProtoError{text});
    } catch (const Error&) {
    }
    return ServeReason::ProtocolViolation;
  };

  // Handshake: exactly one Hello with a matching protocol version.
  try {
    proto::Message first = proto::decode_message(src);
    const auto* hello = std::get_if<proto::msg::Hello>(&first);
    if (!hello)
      return violation(std::string("expected Hello, got ") + proto::message_name(first));
    if (hello->version != kProtocolVersion)
      return violation("protocol version mismatch: master speaks " +
                       std::to_string(hello->version) + ", worker speaks " +
                       std::to_string(kProtocolVersion));
    write_frame(out_fd, self_report());
  } catch (const TruncatedFrame&) {
    return ServeReason::ConnectionLost;
  } catch (const Error& e) {
    return violation(e.what());
  }

  for (;;) {
    proto::Message m;
    try {
      m = proto::decode_message(src);
    } catch (const TruncatedFrame&) {
      return ServeReason::ConnectionLost;
    } catch (const Error& e) {
      return violation(e.what());
    }

    if (std::holds_alternative<proto::msg::Shutdown>(m)) return ServeReason::ShutdownRequested;

    try {
      if (const auto* env = std::get_if<proto::msg::EnvExport>(&m)) {
        bindings_.apply(*env);
        write_frame(out_fd, proto::msg::EnvAck{});
        continue;
      }

      if (const auto* submit = std::get_if<proto::msg::TaskSubmit>(&m)) {
        proto::msg::TaskResult result;
        auto it = tasks_.find(submit->name);
        if (it == tasks_.end()) {
          result = proto::msg::TaskResult::unknown_task(submit->task_id,
                                                        "no task named '" + submit->name + "'");
        } else {
          try {
            result =
                proto::msg::TaskResult::ok(submit->task_id, it->second(submit->args, bindings_));
          } catch (const std::exception& e) {
            result = proto::msg::TaskResult::failed(submit->task_id, e.what());
          }
        }
        write_frame(out_fd, result);
        continue;
      }
    } catch (const TransportError&) {
      return ServeReason::ConnectionLost;
    }

    return violation(std::string("unexpected ") + proto::message_name(m) + " from master");
  }
}

}  // namespace parkernel::worker
