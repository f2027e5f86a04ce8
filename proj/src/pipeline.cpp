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

#include "parkernel/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <future>
#include <sstream>

#include "parkernel/master.hpp"
#include "parkernel/matio.hpp"

namespace parkernel::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}

  void begin(const std::string& stage) {
    stage_ = stage;
    start_ = Clock::now();
  }

  void end() {
    sink_.push_back({stage_, std::chrono::duration<double>(Clock::now() - start_).count()});
  }

  const std::string& stage() const { return stage_; }

 private:
  std::vector<StageTiming>& sink_;
  std::string stage_;
  Clock::time_point start_;
};

linalg::TridiagonalSpec with_order(const BandSpec& b, std::size_t n) {
  return linalg::TridiagonalSpec{n, b.diag, b.sup, b.sub};
}

}  // namespace

ClusterConfig parse_config(const std::string& text) {
  ClusterConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string entry = trim(line);
    if (entry.empty() || entry[0] == '#') continue;

    std::istringstream fields(entry);
    std::string role;
    fields >> role;
    if (role == "local") {
      std::string command;
      std::getline(fields, command);
      command = trim(command);
      if (command.empty()) throw BadLine(lineno, "missing launch template");
      cfg.endpoints.push_back(transport::Endpoint::local(command));
    } else if (role == "remote") {
      std::string host;
      fields >> host;
      if (host.empty()) throw BadLine(lineno, "missing host");
      std::string command;
      std::getline(fields, command);
      command = trim(command);
      if (command.empty()) throw BadLine(lineno, "missing launch template");
      cfg.endpoints.push_back(transport::Endpoint::remote(host, command));
    } else {
      throw BadLine(lineno, "unknown role token '" + role + "' (expected local or remote)");
    }
  }
  if (cfg.endpoints.empty()) throw ConfigError("config declares no endpoints");
  return cfg;
}

ClusterConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoFailure("cannot open config '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

WorkflowReport run_workflow(const ClusterConfig& cfg, const WorkflowSpec& w) {
  if (w.ns < 1) throw WorkflowError("precondition", "ns must be >= 1");
  if (cfg.endpoints.size() < 2)
    throw WorkflowError("precondition", "workflow needs at least 2 endpoints, config has " +
                                            std::to_string(cfg.endpoints.size()));

  WorkflowReport report;
  StageClock clock(report.timings);
  master::Master m;

  auto stage_error = [&clock](const Error& e) {
    return WorkflowError(clock.stage(), e.what());
  };

  try {
    clock.begin("launch");
    std::vector<master::SlaveHandle> workers;
    for (const transport::Endpoint& ep : cfg.endpoints) workers.push_back(m.launch_slave(ep));
    report.worker_table = m.slave_table();
    clock.end();

    clock.begin("export-env");
    master::Bindings bindings("Global");
    bindings.add("ns", proto::Value(static_cast<std::int64_t>(w.ns)));
    for (const master::ExportOutcome& out : m.export_environment(bindings))
      if (!out.ok())
        throw TransportError("export to worker " + std::to_string(out.slave_id) + " failed: " +
                             *out.error);
    clock.end();

    // Workers 1 and 2 each build their matrix into a worker-local file and
    // read it back; the master builds matrix 1 meanwhile.
    clock.begin("build-and-gather");
    auto remote_matrix = [&m](master::SlaveHandle h, const std::string& path,
                              const BandSpec& band) {
      try {
        m.remote_evaluate(h, "build_and_export",
                          {proto::Value(path), proto::Value(band.diag), proto::Value(band.sup),
                           proto::Value(band.sub)});
      } catch (const Error& e) {
        throw WorkflowError("build-remote", "worker " + std::to_string(h.id) + ": " + e.what());
      }
      try {
        return linalg::matrix_from_value(m.remote_evaluate(h, "read_records", {proto::Value(path)}));
      } catch (const Error& e) {
        throw WorkflowError("gather", "worker " + std::to_string(h.id) + ": " + e.what());
      }
    };

    linalg::DenseMatrix mat2, mat3;
    {
      auto f2 = std::async(std::launch::async, remote_matrix, workers[0], std::string("data1.dat"),
                           w.bands[1]);
      auto f3 = std::async(std::launch::async, remote_matrix, workers[1], std::string("data2.dat"),
                           w.bands[2]);
      const linalg::DenseMatrix mat1 = linalg::build_tridiagonal(with_order(w.bands[0], w.ns));
      mat2 = f2.get();
      mat3 = f3.get();
      clock.end();

      clock.begin("multiply");
      report.product = linalg::mat_mul(linalg::mat_mul(mat1, mat2), mat3);
      clock.end();
    }

    clock.begin("eigensolve");
    report.eigenvalues = linalg::chop(linalg::eig_qr(report.product), w.chop_eps);
    linalg::sort_eigenset(report.eigenvalues);
    clock.end();

    clock.begin("close");
    m.close_slaves();
    clock.end();
    return report;
  } catch (const WorkflowError&) {
    m.close_slaves();
    throw;
  } catch (const Error& e) {
    m.close_slaves();
    throw stage_error(e);
  }
}

SequentialResult run_sequential(const WorkflowSpec& w) {
  if (w.ns < 1) throw WorkflowError("precondition", "ns must be >= 1");
  const linalg::DenseMatrix mat1 = linalg::build_tridiagonal(with_order(w.bands[0], w.ns));
  const linalg::DenseMatrix mat2 = linalg::build_tridiagonal(with_order(w.bands[1], w.ns));
  const linalg::DenseMatrix mat3 = linalg::build_tridiagonal(with_order(w.bands[2], w.ns));

  SequentialResult result;
  result.product = linalg::mat_mul(linalg::mat_mul(mat1, mat2), mat3);
  result.eigenvalues = linalg::chop(linalg::eig_qr(result.product), w.chop_eps);
  linalg::sort_eigenset(result.eigenvalues);
  return result;
}

TableReport cmd_table(const ClusterConfig& cfg) {
  TableReport report;
  master::Master m;
  for (std::size_t i = 0; i < cfg.endpoints.size(); ++i) {
    try {
      m.launch_slave(cfg.endpoints[i]);
    } catch (const Error& e) {
      report.errors.push_back("endpoint " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  report.table = m.slave_table();
  m.close_slaves();
  return report;
}

std::string format_eigenvalues(const linalg::EigenSet& e) {
  std::ostringstream out;
  for (const auto& v : e)
    out << matio::format_entry(v.real()) << ' ' << matio::format_entry(v.imag()) << '\n';
  return out.str();
}

}  // namespace parkernel::pipeline

