// Copyright 2026 The InstKG Authors.
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

// Scripted plug-in used by the protocol tests. The first argument selects
// the behavior.

#include <chrono>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "instkg/gazetteer.h"
#include "instkg/unicode.h"
#include "json.hpp"

using Json = nlohmann::json;

namespace {

Json Entity(const std::u32string &text, size_t start, size_t end, const char *label,
            double score) {
  return {{"start", start},
          {"end", end},
          {"label", label},
          {"text", instkg::EncodeUtf8(text.substr(start, end - start))},
          {"score", score}};
}

}  // namespace

int main(int argc, char **argv) {
  std::string mode = argc > 1 ? argv[1] : "gazetteer";
  instkg::Gazetteer gazetteer;
  if (argc > 2) gazetteer = instkg::Gazetteer::Load(argv[2]);

  std::vector<Json> held;
  std::string line;
  while (std::getline(std::cin, line)) {
    Json req = Json::parse(line, nullptr, false);
    if (req.is_discarded()) {
      std::cout << Json{{"id", nullptr}, {"error", "bad request"}}.dump() << std::endl;
      continue;
    }
    const auto id = req["id"];
    std::u32string text = instkg::DecodeUtf8(req.value("text", ""));
    Json resp = {{"id", id}, {"entities", Json::array()}};

    if (mode == "exit") return 3;
    if (mode == "hang") {
      std::this_thread::sleep_for(std::chrono::hours(1));
    }
    if (mode == "slow") std::this_thread::sleep_for(std::chrono::milliseconds(400));
    if (mode == "garbage") {
      std::cout << "this is not json" << std::endl;
      continue;
    }
    if (mode == "wrong_id") resp["id"] = id.get<long>() + 1000;
    if (mode == "error") {
      std::cout << Json{{"id", id}, {"error", "model failed"}}.dump() << std::endl;
      continue;
    }
    if (req["kind"] == "classify") {
      resp = {{"id", id}, {"label", req["labels"].back()}, {"score", 0.75}};
      if (mode == "bad_label") resp["label"] = "Astrology";
      std::cout << resp.dump() << std::endl;
      continue;
    }

    if (mode == "gazetteer" || mode == "reverse" || mode == "slow") {
      for (const auto &s : gazetteer.Extract(std::u32string_view(text))) {
        resp["entities"].push_back(
            Entity(text, s.start, s.end, std::string(instkg::ToString(s.label)).c_str(), 0.9));
      }
    } else if (mode == "overlap" && text.size() >= 15) {
      resp["entities"].push_back(Entity(text, 0, 10, "Data", 0.9));
      resp["entities"].push_back(Entity(text, 5, 15, "Method", 0.8));
    } else if (mode == "tie" && text.size() >= 15) {
      resp["entities"].push_back(Entity(text, 5, 15, "Method", 0.8));
      resp["entities"].push_back(Entity(text, 0, 10, "Data", 0.8));
    } else if (mode == "out_of_range") {
      resp["entities"].push_back(
          {{"start", 0}, {"end", text.size() + 1}, {"label", "Data"}, {"score", 0.5}});
    } else if (mode == "bad_text" && text.size() >= 3) {
      resp["entities"].push_back(
          {{"start", 0}, {"end", 3}, {"label", "Data"}, {"text", "zzz"}, {"score", 0.5}});
    } else if (mode == "bad_score" && text.size() >= 3) {
      auto e = Entity(text, 0, 3, "Data", 1.5);
      resp["entities"].push_back(e);
    } else if (mode == "bad_label" && text.size() >= 3) {
      resp["entities"].push_back(Entity(text, 0, 3, "Organism", 0.5));
    }

    if (mode == "reverse") {
      // Answer pairs of requests in reverse order.
      held.push_back(resp);
      if (held.size() == 2) {
        std::cout << held[1].dump() << "\n" << held[0].dump() << std::endl;
        held.clear();
      }
      continue;
    }
    std::cout << resp.dump() << std::endl;
  }
  return 0;
}
