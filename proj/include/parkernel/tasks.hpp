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

#ifndef PARKERNEL_TASKS_HPP_
#define PARKERNEL_TASKS_HPP_

#include "parkernel/worker.hpp"

namespace parkernel::tasks {

/// Registers the built-in task pack on a worker:
///
///   echo(args...)                        first argument back (list if several)
///   get_binding(name)                    exported binding value
///   worker_info()                        [host, os, process, version]
///   export_file(path, matrix)            write matrix to a worker-local file
///   read_records(path)                   read a record file back as a matrix
///   build_tridiagonal(n, diag, sup, sub) constant-band tridiagonal matrix
///   build_and_export(path, diag, sup, sub)
///                                        build order-`ns` (from bindings) and
///                                        write it to `path`
///   sleep_ms(n)                          hold the worker busy for n ms
void register_builtin_tasks(worker::Worker& w);

}  // namespace parkernel::tasks

#endif  // PARKERNEL_TASKS_HPP_
