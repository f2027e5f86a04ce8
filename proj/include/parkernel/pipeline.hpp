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

#ifndef PARKERNEL_PIPELINE_HPP_
#define PARKERNEL_PIPELINE_HPP_

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "parkernel/linalg/eig.hpp"
#include "parkernel/linalg/matrix.hpp"
#include "parkernel/transport.hpp"

// Demo workflow: build one tridiagonal matrix locally and two more on two
// workers (each written to a worker-local file, then read back and returned
// over the wire), multiply the three, and report the chopped eigenvalue
// spectrum of the product.

namespace parkernel::pipeline {

/// Host configuration: one endpoint per line.
///
///   local  <launch command>
///   remote <host> <launch command>
///
/// Blank lines and `#` comments are ignored. The launch command may use the
/// `1` connection-token placeholder.
struct ClusterConfig {
  std::vector<transport::Endpoint> endpoints;
};

/// Parses config text; throws BadLine with the offending line number.
ClusterConfig parse_config(const std::string& text);

/// Reads and parses a config file; throws IoFailure or BadLine.
ClusterConfig load_config(const std::filesystem::path& path);

/// Diag/superdiagonal/subdiagonal values of one matrix in the workflow.
struct BandSpec {
  double diag = 0.0;
  double sup = 0.0;
  double sub = 0.0;
};

struct WorkflowSpec {
  std::size_t ns = 4;  // shared matrix order, >= 1
  std::array<BandSpec, 3> bands{{{0.0, 1.2, 2.1}, {0.0, 2.6, 1.8}, {0.0, 2.0, 3.0}}};
  double chop_eps = 1e-10;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct WorkflowReport {
  std::string worker_table;          // descriptor table after launch
  linalg::DenseMatrix product;       // mat1 * mat2 * mat3
  linalg::EigenSet eigenvalues;      // chopped, in comparison-key order
  std::vector<StageTiming> timings;  // one entry per stage, in order
};

/// Runs the workflow against the configured cluster (at least two
/// endpoints). Matrix 1 is built on the master while workers 1 and 2 build
/// matrices 2 and 3 concurrently, each through its file channel. Workers are
/// always closed, also on failure; errors carry the failing stage name
/// (WorkflowError).
WorkflowReport run_workflow(const ClusterConfig& cfg, const WorkflowSpec& w);

struct SequentialResult {
  linalg::DenseMatrix product;
  linalg::EigenSet eigenvalues;
};

/// Single-process reference of the same computation, no workers involved.
SequentialResult run_sequential(const WorkflowSpec& w);

struct TableReport {
  std::string table;                // descriptor table of launched workers
  std::vector<std::string> errors;  // one line per endpoint that failed
};

/// Launches every endpoint, renders the descriptor table, closes everything.
/// Launch failures are reported inline, not thrown.
TableReport cmd_table(const ClusterConfig& cfg);

/// Renders the eigenvalue report: one `re im` line per eigenvalue.
std::string format_eigenvalues(const linalg::EigenSet& e);

}  // namespace parkernel::pipeline

#endif  // PARKERNEL_PIPELINE_HPP_
