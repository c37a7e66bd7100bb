/* Copyright 2026-present, the lampsim authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lamp/report.h"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace lamp {

namespace {

std::string fmt_ms(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::vector<std::string> server_union(const Metrics& m) {
  std::set<std::string> names;
  for (const auto& [name, row] : m.per_server) names.insert(name);
  for (const TrialMetrics& tm : m.trials)
    for (const auto& [name, count] : tm.invalid_received) names.insert(name);
  return std::vector<std::string>(names.begin(), names.end());
}

void verify_aggregates(const Metrics& m) {
  if (aggregate_metrics(m.trials, server_union(m)) != m.per_server)
    throw std::logic_error(
        "report aggregates do not match recomputation from trial rows");
}

uint64_t count_of(const TrialMetrics& tm, const std::string& server) {
  auto it = tm.invalid_received.find(server);
  return it == tm.invalid_received.end() ? 0 : it->second;
}

}  // namespace

std::string render_csv(const RunReport& report) {
  verify_aggregates(report.metrics);
  std::string out;
  out += "# lampsim report\n";
  out += "# scenario=" + report.scenario_path + "\n";
  out += "# seed=" + std::to_string(report.seed) + "\n";
  out += "# mode=" + std::string(to_string(report.mode)) + "\n";
  out += "trial,mode,server,invalid_received,block_time_ms,alert_drops\n";
  std::vector<std::string> servers = server_union(report.metrics);
  for (const TrialMetrics& tm : report.metrics.trials)
    for (const std::string& server : servers)
      out += std::to_string(tm.trial) + "," + to_string(report.mode) + "," +
             server + "," + std::to_string(count_of(tm, server)) + "," +
             fmt_ms(tm.block_time_ms) + "," +
             std::to_string(tm.alert_drops) + "\n";
  out += "aggregate,mode,server,total,min,max,mean\n";
  for (const std::string& server : servers) {
    const AggregateRow& row = report.metrics.per_server.at(server);
    out += "aggregate," + std::string(to_string(report.mode)) + "," + server +
           "," + std::to_string(row.total) + "," + std::to_string(row.min) +
           "," + std::to_string(row.max) + "," + fmt_ms(row.mean) + "\n";
  }
  return out;
}

std::string render_json(const RunReport& report) {
  verify_aggregates(report.metrics);
  nlohmann::ordered_json doc;
  doc["scenario"] = report.scenario_path;
  doc["seed"] = report.seed;
  doc["mode"] = to_string(report.mode);
  doc["trials"] = nlohmann::ordered_json::array();
  std::vector<std::string> servers = server_union(report.metrics);
  for (const TrialMetrics& tm : report.metrics.trials) {
    nlohmann::ordered_json row;
    row["trial"] = tm.trial;
    row["block_time_ms"] = tm.block_time_ms;
    row["alert_drops"] = tm.alert_drops;
    for (const std::string& server : servers)
      row["invalid_received"][server] = count_of(tm, server);
    doc["trials"].push_back(std::move(row));
  }
  for (const std::string& server : servers) {
    const AggregateRow& agg = report.metrics.per_server.at(server);
    nlohmann::ordered_json row;
    row["total"] = agg.total;
    row["min"] = agg.min;
    row["max"] = agg.max;
    row["mean"] = agg.mean;
    doc["aggregates"][server] = std::move(row);
  }
  return doc.dump(2) + "\n";
}

std::string render_compare(const RunReport& lamp, const RunReport& sdn) {
  verify_aggregates(lamp.metrics);
  verify_aggregates(sdn.metrics);
  std::vector<std::string> servers = server_union(lamp.metrics);
  if (servers != server_union(sdn.metrics))
    throw std::logic_error("comparison runs cover different servers");

  std::string out;
  out += "# lampsim comparison\n";
  out += "# scenario=" + lamp.scenario_path + "\n";
  out += "# seed=" + std::to_string(lamp.seed) + "\n";
  char line[128];
  std::snprintf(line, sizeof(line), "%-24s %12s %12s\n", "measurement",
                to_string(lamp.mode), to_string(sdn.mode));
  out += line;
  for (const std::string& server : servers) {
    const AggregateRow& a = lamp.metrics.per_server.at(server);
    const AggregateRow& b = sdn.metrics.per_server.at(server);
    auto emit = [&](const char* label, const std::string& va,
                    const std::string& vb) {
      std::snprintf(line, sizeof(line), "%-24s %12s %12s\n",
                    (server + " " + label).c_str(), va.c_str(), vb.c_str());
      out += line;
    };
    emit("total", std::to_string(a.total), std::to_string(b.total));
    emit("maximum", std::to_string(a.max), std::to_string(b.max));
    emit("minimum", std::to_string(a.min), std::to_string(b.min));
    emit("average", fmt_ms(a.mean), fmt_ms(b.mean));
  }
  return out;
}

std::string render_trace(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const TraceEvent& ev : events) out += to_string(ev) + "\n";
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw ConfigError(ConfigError::Kind::BadValue,
                      "cannot open '" + path + "' for writing");
  out << content;
  if (!out)
    throw ConfigError(ConfigError::Kind::BadValue,
                      "failed while writing '" + path + "'");
}

}  // namespace lamp
