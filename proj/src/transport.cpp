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

#include "parkernel/transport.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <thread>

#include "parkernel/codec.hpp"

namespace parkernel::transport {

namespace {

constexpr const char* kPlaceholder = "`1`";
constexpr const char* kLogEnvVar = "PARKERNEL_WORKER_LOG";

std::string errno_text() { return std::strerror(errno); }

void ignore_sigpipe_once() {
  static const int once = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return 0;
  }();
  (void)once;
}

int encode_wait_status(int wstatus) {
  if (WIFEXITED(wstatus)) return WEXITSTATUS(wstatus);
  if (WIFSIGNALED(wstatus)) return 128 + WTERMSIG(wstatus);
  return -1;
}

// ByteSource over the channel's read fd, with an optional absolute deadline.
class FdSource : public proto::ByteSource {
 public:
  FdSource(int fd, std::optional<std::chrono::steady_clock::time_point> deadline)
      : fd_(fd), deadline_(deadline) {}

  std::size_t read_some(std::uint8_t* out, std::size_t n) override {
    for (;;) {
      int timeout_ms = -1;
      if (deadline_) {
        auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
            *deadline_ - std::chrono::steady_clock::now());
        if (left.count() <= 0) throw TransportError("deadline exceeded while waiting for a frame");
        timeout_ms = static_cast<int>(left.count());
      }
      struct pollfd pfd{fd_, POLLIN, 0};
      int rc = ::poll(&pfd, 1, timeout_ms);
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw TransportError("poll on worker channel failed: " + errno_text());
      }
      if (rc == 0) throw TransportError("deadline exceeded while waiting for a frame");
      ssize_t got = ::read(fd_, out, n);
      if (got < 0) {
        if (errno == EINTR) continue;
        throw TransportError("read from worker channel failed: " + errno_text());
      }
      return static_cast<std::size_t>(got);  // 0 = closed
    }
  }

 private:
  int fd_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
};

}  // namespace

std::string render_launch_command(const LaunchSpec& spec, const std::string& token) {
  if (token.empty()) throw SpawnFailed("connection token must be non-empty");
  if (token.find_first_of(" \t\r\n") != std::string::npos)
    throw SpawnFailed("connection token must not contain whitespace");
  std::string out = spec.command;
  std::size_t pos = 0;
  while ((pos = out.find(kPlaceholder, pos)) != std::string::npos) {
    out.replace(pos, std::strlen(kPlaceholder), token);
    pos += token.size();
  }
  return out;
}

Endpoint Endpoint::remote(std::string host, std::string command) {
  if (host.empty()) throw SpawnFailed("remote endpoint requires a host name");
  return Endpoint{Kind::Remote, std::move(host), LaunchSpec{std::move(command)}};
}

Channel::Channel(Channel&& other) noexcept {
  std::lock_guard lk(other.state_mtx_);
  pid_ = std::exchange(other.pid_, -1);
  read_fd_ = std::exchange(other.read_fd_, -1);
  write_fd_ = std::exchange(other.write_fd_, -1);
  frames_received_ = other.frames_received_;
  exit_status_ = other.exit_status_;
  log_path_ = std::move(other.log_path_);
  owns_log_ = std::exchange(other.owns_log_, false);
}

Channel& Channel::operator=(Channel&& other) noexcept {
  if (this != &other) {
    this->~Channel();
    new (this) Channel(std::move(other));
  }
  return *this;
}

Channel::~Channel() {
  {
    std::lock_guard lk(state_mtx_);
    if (pid_ > 0 && !exit_status_) reap_locked(/*force=*/true, std::chrono::milliseconds(0));
  }
  if (read_fd_ >= 0) ::close(read_fd_);
  if (write_fd_ >= 0) ::close(write_fd_);
  if (owns_log_) {
    std::error_code ec;
    std::filesystem::remove(log_path_, ec);
  }
}

void Channel::write_message(const proto::Message& m) {
  ignore_sigpipe_once();
  const std::vector<std::uint8_t> frame = proto::encode_message(m);
  std::size_t off = 0;
  while (off < frame.size()) {
    ssize_t n = ::write(write_fd_, frame.data() + off, frame.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw TransportError("write to worker failed: " + errno_text());
    }
    off += static_cast<std::size_t>(n);
  }
}

proto::Message Channel::read_message(std::optional<std::chrono::milliseconds> deadline) {
  std::optional<std::chrono::steady_clock::time_point> until;
  if (deadline) until = std::chrono::steady_clock::now() + *deadline;
  FdSource src(read_fd_, until);
  try {
    proto::Message m = proto::decode_message(src);
    ++frames_received_;
    return m;
  } catch (const TruncatedFrame& e) {
    if (frames_received_ == 0) {
      // The command never produced a frame: treat as a failed launch and
      // surface whatever it wrote to stderr.
      int status = kill_now();
      throw SpawnFailed("worker exited (status " + std::to_string(status) +
                        ") before the handshake; stderr: " + stderr_tail());
    }
    throw TransportError(std::string("connection closed: ") + e.what());
  }
}

int Channel::reap_locked(bool force, std::chrono::milliseconds grace) {
  if (exit_status_) return *exit_status_;
  int wstatus = 0;
  const auto poll_interval = std::chrono::milliseconds(10);
  auto give_up = std::chrono::steady_clock::now() + grace;
  for (;;) {
    pid_t rc = ::waitpid(static_cast<pid_t>(pid_), &wstatus, WNOHANG);
    if (rc == static_cast<pid_t>(pid_)) {
      exit_status_ = encode_wait_status(wstatus);
      return *exit_status_;
    }
    if (rc < 0) {
      // Not our child any more (should not happen); record the unknown.
      exit_status_ = -1;
      return *exit_status_;
    }
    if (force || std::chrono::steady_clock::now() >= give_up) {
      // Kill the whole process group (the launch command may have wrapped
      // the worker in a shell), then collect synchronously.
      ::kill(static_cast<pid_t>(-pid_), SIGKILL);
      ::kill(static_cast<pid_t>(pid_), SIGKILL);
      if (::waitpid(static_cast<pid_t>(pid_), &wstatus, 0) == static_cast<pid_t>(pid_))
        exit_status_ = encode_wait_status(wstatus);
      else
        exit_status_ = -1;
      return *exit_status_;
    }
    std::this_thread::sleep_for(poll_interval);
  }
}

int Channel::close(std::chrono::milliseconds grace) {
  ignore_sigpipe_once();
  {
    std::lock_guard lk(state_mtx_);
    if (exit_status_) return *exit_status_;
  }
  if (write_fd_ >= 0) {
    // Best-effort polite shutdown; never block on a full pipe.
    int flags = ::fcntl(write_fd_, F_GETFL);
    if (flags >= 0) ::fcntl(write_fd_, F_SETFL, flags | O_NONBLOCK);
    try {
      write_message(proto::msg::Shutdown{});
    } catch (const TransportError&) {
    }
    ::close(write_fd_);
    write_fd_ = -1;
  }
  std::lock_guard lk(state_mtx_);
  return reap_locked(/*force=*/false, grace);
}

int Channel::kill_now() {
  std::lock_guard lk(state_mtx_);
  return reap_locked(/*force=*/true, std::chrono::milliseconds(0));
}

std::string Channel::stderr_tail(std::size_t max_bytes) const {
  std::ifstream in(log_path_, std::ios::binary);
  if (!in) return "(no stderr captured)";
  in.seekg(0, std::ios::end);
  auto size = static_cast<std::size_t>(in.tellg());
  auto start = size > max_bytes ? size - max_bytes : 0;
  in.seekg(static_cast<std::streamoff>(start));
  std::string tail(size - start, '\0');
  in.read(tail.data(), static_cast<std::streamsize>(tail.size()));
  while (!tail.empty() && (tail.back() == '\n' || tail.back() == '\r')) tail.pop_back();
  return tail.empty() ? "(stderr empty)" : tail;
}

Channel spawn(const Endpoint& endpoint, const std::string& connection_token) {
  ignore_sigpipe_once();
  const std::string command = render_launch_command(endpoint.spec, connection_token);
  if (command.empty()) throw SpawnFailed("launch template rendered to an empty command");

  // stderr goes to a log file so launch failures can be reported with it.
  std::filesystem::path log_path;
  bool owns_log = false;
  if (const char* env = std::getenv(kLogEnvVar); env && *env) {
    log_path = env;
  } else {
    static std::atomic<unsigned> seq{0};
    log_path = std::filesystem::temp_directory_path() /
               ("parkernel-worker-" + std::to_string(::getpid()) + "-" +
                std::to_string(seq.fetch_add(1)) + ".log");
    owns_log = true;
  }
  int log_fd = ::open(log_path.c_str(), O_CREAT | O_WRONLY | O_APPEND, 0644);
  if (log_fd < 0) throw SpawnFailed("cannot open worker log '" + log_path.string() + "': " + errno_text());

  int to_child[2];   // parent writes, child stdin
  int from_child[2]; // child stdout, parent reads
  if (::pipe(to_child) != 0) {
    ::close(log_fd);
    throw SpawnFailed("pipe failed: " + errno_text());
  }
  if (::pipe(from_child) != 0) {
    ::close(log_fd);
    ::close(to_child[0]);
    ::close(to_child[1]);
    throw SpawnFailed("pipe failed: " + errno_text());
  }

  pid_t pid = ::fork();
  if (pid < 0) {
    ::close(log_fd);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1]}) ::close(fd);
    throw SpawnFailed("fork failed: " + errno_text());
  }
  if (pid == 0) {
    // Child: own process group so the whole launch command can be signalled.
    ::setpgid(0, 0);
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::dup2(log_fd, STDERR_FILENO);
    for (int fd : {to_child[0], to_child[1], from_child[0], from_child[1], log_fd}) ::close(fd);
    ::signal(SIGPIPE, SIG_DFL);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }

  ::close(to_child[0]);
  ::close(from_child[1]);
  ::close(log_fd);

  Channel ch;
  ch.pid_ = pid;
  ch.read_fd_ = from_child[0];
  ch.write_fd_ = to_child[1];
  ch.log_path_ = log_path;
  ch.owns_log_ = owns_log;
  return ch;
}

}  // namespace parkernel::transport
