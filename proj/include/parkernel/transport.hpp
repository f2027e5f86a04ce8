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

#ifndef PARKERNEL_TRANSPORT_HPP_
#define PARKERNEL_TRANSPORT_HPP_

#include <chrono>
#include <filesystem>
#include <mutex>
#include <optional>
#include <string>

#include "parkernel/message.hpp"

// Worker process launch and the duplex byte channel to it.
//
// A launch template is an ordinary shell command line with an optional
// `1` placeholder; rendering substitutes the connection token for every
// occurrence and the result is handed verbatim to /bin/sh. The child's
// stdin/stdout become the frame channel and its stderr goes to a log file
// (PARKERNEL_WORKER_LOG if set, otherwise a per-process temp file). The
// channel contract is identical for local and remote launches: a remote
// endpoint simply renders a remote-shell command such as
//
//   ssh -e none myhost parkernel-worker --token `1`

namespace parkernel::transport {

/// Command template with the `1` connection-token placeholder.
struct LaunchSpec {
  std::string command;
};

/// Replaces every `1` occurrence in the template with `token`; everything
/// else is passed through verbatim. The token must be non-empty and free of
/// whitespace.
std::string render_launch_command(const LaunchSpec& spec, const std::string& token);

struct Endpoint {
  enum class Kind { Local, Remote };

  Kind kind = Kind::Local;
  std::string host;  // non-empty for Remote
  LaunchSpec spec;

  static Endpoint local(std::string command) {
    return Endpoint{Kind::Local, "", LaunchSpec{std::move(command)}};
  }
  static Endpoint remote(std::string host, std::string command);
};

/// Grace period between a shutdown request and forced termination.
inline constexpr std::chrono::milliseconds kShutdownGrace{5000};

/// Duplex frame channel to one child process. Reads and writes may run on
/// different threads, but each direction has at most one user at a time.
class Channel {
 public:
  Channel() = default;
  Channel(Channel&& other) noexcept;
  Channel& operator=(Channel&&) noexcept;
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;
  ~Channel();

  bool open() const { return pid_ > 0 && !exit_status_.has_value(); }
  long pid() const { return pid_; }

  /// Writes one frame. Throws TransportError on a broken pipe.
  void write_message(const proto::Message& m);

  /// Reads one frame, optionally bounded by a deadline (TransportError on
  /// expiry). End-of-stream before any frame was ever received classifies
  /// as SpawnFailed (the command never came up) and includes captured
  /// stderr; end-of-stream later raises TransportError.
  proto::Message read_message(
      std::optional<std::chrono::milliseconds> deadline = std::nullopt);

  /// Polite close: sends Shutdown if possible, closes the write end, waits
  /// up to `grace` for exit, then force-kills. Returns the exit status
  /// (128+signal when signalled); idempotent once reaped.
  int close(std::chrono::milliseconds grace = kShutdownGrace);

  /// Immediate SIGKILL and reap; no channel writes. Safe alongside close().
  int kill_now();

  /// Last bytes of the child's stderr log, for diagnostics.
  std::string stderr_tail(std::size_t max_bytes = 4096) const;

 private:
  friend Channel spawn(const Endpoint&, const std::string&);

  int reap_locked(bool force, std::chrono::milliseconds grace);

  long pid_ = -1;
  int read_fd_ = -1;
  int write_fd_ = -1;
  std::size_t frames_received_ = 0;
  std::optional<int> exit_status_;
  std::filesystem::path log_path_;
  bool owns_log_ = false;
  mutable std::mutex state_mtx_;  // guards pid_/exit_status_ during reap/kill
};

/// Launches the endpoint's command with the token substituted and returns
/// the channel to it. Throws SpawnFailed if the process cannot be created.
Channel spawn(const Endpoint& endpoint, const std::string& connection_token);

}  // namespace parkernel::transport

#endif  // PARKERNEL_TRANSPORT_HPP_
