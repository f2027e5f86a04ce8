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

#ifndef PARKERNEL_ERRORS_HPP_
#define PARKERNEL_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace parkernel {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- codec ---

/// Byte source ended in the middle of a frame (or before one started).
class TruncatedFrame : public Error {
 public:
  using Error::Error;
};

/// Frame length prefix exceeds the 64 MiB bound.
class OversizeFrame : public Error {
 public:
  using Error::Error;
};

/// Payload bytes do not decode to exactly one well-formed message/value.
class MalformedPayload : public Error {
 public:
  using Error::Error;
};

// --- transport ---

/// Child process could not be started, or exited before the handshake.
class SpawnFailed : public Error {
 public:
  using Error::Error;
};

/// Connection lost, write failed, or a per-call deadline expired.
class TransportError : public Error {
 public:
  using Error::Error;
};

// --- master ---

/// Handshake did not complete: version mismatch or malformed HelloAck.
class HandshakeFailed : public Error {
 public:
  using Error::Error;
};

/// The worker has no handler registered under the submitted task name.
class UnknownTask : public Error {
 public:
  using Error::Error;
};

/// The task handler reported a failure.
class TaskFailed : public Error {
 public:
  using Error::Error;
};

// --- worker ---

class DuplicateName : public Error {
 public:
  using Error::Error;
};

class UnknownBinding : public Error {
 public:
  using Error::Error;
};

// --- file data channel ---

class IoFailure : public Error {
 public:
  using Error::Error;
};

/// Record file whose lines carry different numbers of entries.
class RaggedRows : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// --- linalg ---

class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

class NoConvergence : public Error {
 public:
  using Error::Error;
};

class OrderTooLarge : public Error {
 public:
  using Error::Error;
};

// --- pipeline ---

/// Config file parse error; carries the offending 1-based line number.
class BadLine : public Error {
 public:
  BadLine(int lineno, const std::string& reason)
      : Error("line " + std::to_string(lineno) + ": " + reason), lineno_(lineno) {}
  int lineno() const { return lineno_; }

 private:
  int lineno_;
};

/// Config is well-formed line by line but unusable as a whole.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Workflow stage failure; carries the name of the stage that failed.
class WorkflowError : public Error {
 public:
  WorkflowError(const std::string& stage, const std::string& reason)
      : Error("stage '" + stage + "': " + reason), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace parkernel

#endif  // PARKERNEL_ERRORS_HPP_
