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

#include "parkernel/tasks.hpp"

#include <chrono>
#include <thread>

#include "parkernel/linalg/matrix.hpp"
#include "parkernel/matio.hpp"

namespace parkernel::tasks {

namespace {

using proto::Value;
using worker::BindingStore;

void require_args(const std::vector<Value>& args, std::size_t n, const char* task) {
  if (args.size() != n)
    throw TaskFailed(std::string(task) + " expects " + std::to_string(n) + " argument(s), got " +
                     std::to_string(args.size()));
}

std::size_t positive_order(std::int64_t n, const char* what) {
  if (n < 1) throw TaskFailed(std::string(what) + " must be >= 1, got " + std::to_string(n));
  return static_cast<std::size_t>(n);
}

linalg::TridiagonalSpec spec_from_args(std::size_t n, const Value& diag, const Value& sup,
                                       const Value& sub) {
  return linalg::TridiagonalSpec{n, diag.as_real(), sup.as_real(), sub.as_real()};
}

}  // namespace

void register_builtin_tasks(worker::Worker& w) {
  w.register_task("echo", [](const std::vector<Value>& args, const BindingStore&) -> Value {
    if (args.empty()) return Value::unit();
    if (args.size() == 1) return args[0];
    return Value(Value::List(args.begin(), args.end()));
  });

  w.register_task("get_binding", [](const std::vector<Value>& args, const BindingStore& b) {
    require_args(args, 1, "get_binding");
    return b.get(args[0].as_str());
  });

  w.register_task("worker_info", [](const std::vector<Value>& args, const BindingStore&) {
    require_args(args, 0, "worker_info");
    const proto::msg::HelloAck self = worker::Worker::self_report();
    return Value(Value::List{Value(self.host), Value(self.os), Value(self.process),
                             Value(self.version)});
  });

  w.register_task("export_file", [](const std::vector<Value>& args, const BindingStore&) {
    require_args(args, 2, "export_file");
    matio::write_matrix(args[0].as_str(), linalg::matrix_from_value(args[1]));
    return Value::unit();
  });

  w.register_task("read_records", [](const std::vector<Value>& args, const BindingStore&) {
    require_args(args, 1, "read_records");
    return linalg::to_value(matio::read_matrix(args[0].as_str()));
  });

  w.register_task("build_tridiagonal", [](const std::vector<Value>& args, const BindingStore&) {
    require_args(args, 4, "build_tridiagonal");
    const std::size_t n = positive_order(args[0].as_int(), "order");
    return linalg::to_value(linalg::build_tridiagonal(spec_from_args(n, args[1], args[2], args[3])));
  });

  // The order comes from the exported `ns` binding, the band values from the
  // arguments; the matrix lands in a worker-local file, not in the reply.
  w.register_task("build_and_export", [](const std::vector<Value>& args, const BindingStore& b) {
    require_args(args, 4, "build_and_export");
    const std::size_t n = positive_order(b.get("ns").as_int(), "ns binding");
    matio::write_matrix(args[0].as_str(),
                        linalg::build_tridiagonal(spec_from_args(n, args[1], args[2], args[3])));
    return Value::unit();
  });

  w.register_task("sleep_ms", [](const std::vector<Value>& args, const BindingStore&) {
    require_args(args, 1, "sleep_ms");
    std::this_thread::sleep_for(std::chrono::milliseconds(args[0].as_int()));
    return Value::unit();
  });
}

}  // namespace parkernel::tasks
