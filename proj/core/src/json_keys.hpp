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

// Internal helper shared by the config/dataset translation units.

#ifndef SEQTOUCH_SRC_JSON_KEYS_HPP_
#define SEQTOUCH_SRC_JSON_KEYS_HPP_

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace seqtouch {

// Rejects unknown object keys; `where` names the object in the error message.
inline void check_keys(const nlohmann::json& j,
                       const std::vector<std::string>& allowed,
                       const std::string& where) {
  if (!j.is_object()) {
    throw std::invalid_argument(where + ": expected a JSON object");
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
      throw std::invalid_argument(where + ": unknown key '" + it.key() + "'");
    }
  }
}

}  // namespace seqtouch

#endif  // SEQTOUCH_SRC_JSON_KEYS_HPP_
