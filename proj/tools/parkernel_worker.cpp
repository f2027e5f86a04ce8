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

// Worker executable: speaks protocol frames on stdin/stdout and logs to
// stderr, so it can be launched directly or through any remote shell.

#include <signal.h>
#include <unistd.h>

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "parkernel/tasks.hpp"
#include "parkernel/version.hpp"
#include "parkernel/worker.hpp"

int main(int argc, char** argv) {
  CLI::App app{"parkernel worker: executes tasks on behalf of a master"};
  std::string token;
  app.add_option("--token", token, "connection token passed by the launcher (diagnostic)");
  app.set_version_flag("--version", std::string(parkernel::kVersion));
  CLI11_PARSE(app, argc, argv);

  ::signal(SIGPIPE, SIG_IGN);

  parkernel::worker::Worker w;
  parkernel::tasks::register_builtin_tasks(w);

  std::fprintf(stderr, "parkernel-worker %s pid=%d token=%s\n", parkernel::kVersion, ::getpid(),
               token.empty() ? "-" : token.c_str());

  const auto reason = w.serve(STDIN_FILENO, STDOUT_FILENO);
  switch (reason) {
    case parkernel::worker::ServeReason::ShutdownRequested:
      std::fprintf(stderr, "worker exiting: shutdown requested\n");
      return 0;
    case parkernel::worker::ServeReason::ConnectionLost:
      std::fprintf(stderr, "worker exiting: connection lost\n");
      return 2;
    default:
      std::fprintf(stderr, "worker exiting: protocol violation\n");
      return 3;
  }
}
