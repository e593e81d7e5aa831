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

#include "seqtouch/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace seqtouch::ad {
namespace {

constexpr char kMagic[8] = {'S', 'E', 'Q', 'T', 'C', 'K', 'P', 'T'};

template <typename T>
void write_pod(std::ofstream& f, T v) {
  f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& f) {
  T v{};
  f.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!f) throw std::runtime_error("checkpoint: truncated file");
  return v;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamStore& params) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
  f.write(kMagic, sizeof(kMagic));
  write_pod<std::uint32_t>(f, kCheckpointVersion);
  write_pod<std::uint64_t>(f, params.count());
  for (std::size_t k = 0; k < params.count(); ++k) {
    const std::string& name = params.names()[k];
    const Tensor& t = params.tensors()[k];
    write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(name.size()));
    f.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(t.rank()));
    for (int d : t.shape()) write_pod<std::uint32_t>(f, static_cast<std::uint32_t>(d));
    f.write(reinterpret_cast<const char*>(t.data()),
            static_cast<std::streamsize>(t.size() * sizeof(double)));
  }
  if (!f) throw std::runtime_error("checkpoint: write failed for " + path);
}

std::vector<std::pair<std::string, Tensor>> load_checkpoint(
    const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  auto version = read_pod<std::uint32_t>(f);
  if (version != kCheckpointVersion) {
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version));
  }
  auto count = read_pod<std::uint64_t>(f);
  std::vector<std::pair<std::string, Tensor>> out;
  out.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    auto name_len = read_pod<std::uint32_t>(f);
    std::string name(name_len, '\0');
    f.read(name.data(), name_len);
    if (!f) throw std::runtime_error("checkpoint: truncated name");
    auto rank = read_pod<std::uint32_t>(f);
    std::vector<int> shape(rank);
    std::int64_t n = 1;
    for (auto& d : shape) {
      d = static_cast<int>(read_pod<std::uint32_t>(f));
      n *= d;
    }
    std::vector<double> data(static_cast<std::size_t>(n));
    f.read(reinterpret_cast<char*>(data.data()),
           static_cast<std::streamsize>(n * sizeof(double)));
    if (!f) throw std::runtime_error("checkpoint: truncated payload");
    out.emplace_back(std::move(name), Tensor::from(shape, std::move(data)));
  }
  return out;
}

void restore_checkpoint(const std::string& path, ParamStore& params) {
  auto loaded = load_checkpoint(path);
  if (loaded.size() != params.count()) {
    throw std::runtime_error("checkpoint: tensor count mismatch");
  }
  for (auto& [name, value] : loaded) {
    if (!params.contains(name)) {
      throw std::runtime_error("checkpoint: unexpected tensor " + name);
    }
    Tensor dst = params.get(name);
    if (dst.shape() != value.shape()) {
      throw std::runtime_error("checkpoint: shape mismatch for " + name);
    }
    std::memcpy(dst.data(), value.data(),
                static_cast<std::size_t>(dst.size()) * sizeof(double));
  }
}

}  // namespace seqtouch::ad
