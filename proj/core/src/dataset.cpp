// Copyright 2026 The seqtouch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "seqtouch/dataset.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "json_keys.hpp"

namespace seqtouch {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "seqtouch-dataset";
constexpr int kVersion = 1;

json record_to_json(const DemoRecord& r) {
  json j;
  j["seed"] = r.seed;
  j["hidden"] = {r.hidden.x, r.hidden.y, r.hidden.theta};
  j["source"] = r.source == DemoSource::kExpert ? "expert" : "robot";
  j["template"] = r.template_id;
  json steps = json::array();
  for (const ExplorationStep& s : r.exploration) {
    json step;
    step["a"] = {s.action.dx, s.action.dy, s.action.dphi};
    const auto o = s.obs.flat();
    step["o"] = json::array();
    for (double v : o) step["o"].push_back(v);
    steps.push_back(std::move(step));
  }
  j["exploration"] = std::move(steps);
  json poses = json::array();
  for (const Pose& p : r.skill.poses) poses.push_back({p.x, p.y, p.phi});
  j["skill"] = {{"poses", std::move(poses)}, {"valid", r.skill.valid}};
  return j;
}

DemoRecord record_from_json(const json& j, int line_no) {
  const std::string where = "dataset line " + std::to_string(line_no);
  check_keys(j, {"seed", "hidden", "source", "template", "exploration", "skill"},
             where);
  DemoRecord r;
  try {
    r.seed = j.at("seed").get<std::uint64_t>();
    const auto& h = j.at("hidden");
    if (!h.is_array() || h.size() != 3) {
      throw std::invalid_argument("hidden must be [x, y, theta]");
    }
    r.hidden = {h[0].get<double>(), h[1].get<double>(), h[2].get<double>()};
    const std::string src = j.at("source").get<std::string>();
    if (src == "expert") {
      r.source = DemoSource::kExpert;
    } else if (src == "robot") {
      r.source = DemoSource::kRobot;
    } else {
      throw std::invalid_argument("source must be expert or robot");
    }
    r.template_id = j.at("template").get<int>();
    for (const auto& step : j.at("exploration")) {
      check_keys(step, {"a", "o"}, where);
      const auto& a = step.at("a");
      const auto& o = step.at("o");
      if (!a.is_array() || a.size() != 3 || !o.is_array() ||
          o.size() != kObsDim) {
        throw std::invalid_argument("malformed exploration step");
      }
      ExplorationStep s;
      s.action = {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
      s.obs.wrench = {o[0].get<double>(), o[1].get<double>(), o[2].get<double>()};
      s.obs.ee_pose = {o[3].get<double>(), o[4].get<double>(), o[5].get<double>()};
      s.obs.ee_velocity = {o[6].get<double>(), o[7].get<double>(),
                           o[8].get<double>()};
      r.exploration.push_back(std::move(s));
    }
    const auto& sk = j.at("skill");
    check_keys(sk, {"poses", "valid"}, where);
    for (const auto& p : sk.at("poses")) {
      if (!p.is_array() || p.size() != 3) {
        throw std::invalid_argument("skill pose must be [x, y, phi]");
      }
      r.skill.poses.push_back(
          {p[0].get<double>(), p[1].get<double>(), p[2].get<double>()});
    }
    r.skill.valid = sk.at("valid").get<int>();
    if (r.skill.valid < 0 ||
        r.skill.valid > static_cast<int>(r.skill.poses.size())) {
      throw std::invalid_argument("skill valid count out of range");
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(where + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(where + ": " + e.what());
  }
  return r;
}

}  // namespace

void save_dataset(const std::string& path,
                  const std::vector<DemoRecord>& demos) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  json header;
  header["format"] = kFormat;
  header["version"] = kVersion;
  f << header.dump() << '\n';
  for (const DemoRecord& r : demos) f << record_to_json(r).dump() << '\n';
  if (!f) throw std::runtime_error("write failed for " + path);
}

std::vector<DemoRecord> load_dataset(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  int line_no = 0;
  std::vector<DemoRecord> demos;
  bool header_seen = false;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": " + e.what());
    }
    if (!header_seen) {
      if (!j.is_object() || j.value("format", "") != kFormat) {
        throw std::runtime_error(path + ": missing dataset header line");
      }
      if (j.value("version", -1) != kVersion) {
        throw std::runtime_error(path + ": unsupported dataset version");
      }
      header_seen = true;
      continue;
    }
    demos.push_back(record_from_json(j, line_no));
  }
  if (!header_seen) {
    throw std::runtime_error(path + ": missing dataset header line");
  }
  return demos;
}

}  // namespace seqtouch
