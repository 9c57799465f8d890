#include "myogan/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "myogan/errors.hpp"

namespace myogan {

namespace {

constexpr char kMagic[8] = {'M', 'Y', 'O', 'G', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& buf, std::uint32_t v) {
  char raw[4];
  std::memcpy(raw, &v, 4);
  buf.append(raw, 4);
}

void put_u64(std::string& buf, std::uint64_t v) {
  char raw[8];
  std::memcpy(raw, &v, 8);
  buf.append(raw, 8);
}

class Reader {
 public:
  Reader(const std::string& buf, const std::filesystem::path& path) : buf_(buf), path_(path) {}

  const char* take(std::size_t n) {
    if (pos_ + n > buf_.size()) {
      throw InputError("checkpoint truncated: " + path_.string());
    }
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    std::memcpy(&v, take(4), 4);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    std::memcpy(&v, take(8), 8);
    return v;
  }
  std::size_t pos() const { return pos_; }

 private:
  const std::string& buf_;
  std::filesystem::path path_;
  std::size_t pos_ = 0;
};

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void write_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  std::string buf;
  buf.append(kMagic, sizeof(kMagic));
  put_u32(buf, kVersion);
  put_u32(buf, static_cast<std::uint32_t>(tensors.size()));
  for (const NamedTensor& nt : tensors) {
    put_u32(buf, static_cast<std::uint32_t>(nt.name.size()));
    buf.append(nt.name);
    put_u32(buf, static_cast<std::uint32_t>(nt.tensor.rank()));
    for (std::size_t d : nt.tensor.shape) put_u64(buf, d);
    const auto& data = nt.tensor.data;
    buf.append(reinterpret_cast<const char*>(data.data()), data.size() * sizeof(double));
  }
  put_u64(buf, fnv1a64(buf.data(), buf.size()));

  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write checkpoint: " + tmp.string());
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw InputError("short write on checkpoint: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::vector<NamedTensor> read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read checkpoint: " + path.string());
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + 4 + 4 + 8) {
    throw InputError("checkpoint too small: " + path.string());
  }
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw InputError("bad checkpoint magic: " + path.string());
  }
  std::uint64_t stored_sum;
  std::memcpy(&stored_sum, buf.data() + buf.size() - 8, 8);
  if (stored_sum != fnv1a64(buf.data(), buf.size() - 8)) {
    throw InputError("checkpoint checksum mismatch: " + path.string());
  }

  Reader r(buf, path);
  r.take(sizeof(kMagic));
  const std::uint32_t version = r.u32();
  if (version != kVersion) {
    throw InputError("unsupported checkpoint version " + std::to_string(version) + ": " +
                     path.string());
  }
  const std::uint32_t count = r.u32();
  std::vector<NamedTensor> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    NamedTensor nt;
    const std::uint32_t name_len = r.u32();
    nt.name.assign(r.take(name_len), name_len);
    const std::uint32_t rank = r.u32();
    if (rank == 0 || rank > 3) {
      throw InputError("checkpoint tensor '" + nt.name + "' has invalid rank");
    }
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = static_cast<std::size_t>(r.u64());
    nt.tensor = Tensor(shape);
    const std::size_t bytes = nt.tensor.size() * sizeof(double);
    std::memcpy(nt.tensor.data.data(), r.take(bytes), bytes);
    out.push_back(std::move(nt));
  }
  return out;
}

void append_store(std::vector<NamedTensor>& out, const ParamStore& store,
                  const std::string& prefix) {
  for (const auto& e : store.entries()) {
    out.push_back({prefix + e.name, e.value});
  }
}

void load_store(const std::vector<NamedTensor>& in, ParamStore& store, const std::string& prefix) {
  for (auto& e : store.entries()) {
    const std::string full = prefix + e.name;
    bool found = false;
    for (const NamedTensor& nt : in) {
      if (nt.name != full) continue;
      if (!nt.tensor.same_shape(e.value)) {
        throw InputError("checkpoint tensor '" + full + "' shape " + shape_str(nt.tensor.shape) +
                         " does not match expected " + shape_str(e.value.shape));
      }
      e.value = nt.tensor;
      found = true;
      break;
    }
    if (!found) throw InputError("checkpoint missing tensor '" + full + "'");
  }
}

}  // namespace myogan
