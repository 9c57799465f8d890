#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "myogan/params.hpp"
#include "myogan/tensor.hpp"

namespace myogan {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Versioned binary checkpoint: magic bytes, format version, named tensor
// table (name, shape, raw little-endian float64 data), trailing FNV-1a64
// checksum over everything before it. Writes go through a temp file and a
// rename so a crashed writer never clobbers the previous checkpoint.
void write_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path);

// ParamStore helpers; names are stored as "<prefix><entry name>".
void append_store(std::vector<NamedTensor>& out, const ParamStore& store,
                  const std::string& prefix);
// Loads every "<prefix>*" tensor into the matching store entry (shape-checked).
// Throws InputError if an entry is missing or mismatched.
void load_store(const std::vector<NamedTensor>& in, ParamStore& store, const std::string& prefix);

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace myogan
