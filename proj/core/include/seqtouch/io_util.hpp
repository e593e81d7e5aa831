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

#ifndef SEQTOUCH_IO_UTIL_HPP_
#define SEQTOUCH_IO_UTIL_HPP_

#include <string>
#include <vector>

namespace seqtouch {

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Reads a JSON-lines file; returns one raw line per entry (no parsing).
std::vector<std::string> read_lines(const std::string& path);

}  // namespace seqtouch

#endif  // SEQTOUCH_IO_UTIL_HPP_
