#include "rill/learner/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "rill/errors.hpp"

namespace rill::learner {
namespace {

constexpr char kMagic[8] = {'R', 'I', 'L', 'L', 'C', 'K', 'P', 'T'};

template <class U>
void put(std::ostream& out, U v) {
  unsigned char b[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), sizeof(U));
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}
  template <class U>
  U get() {
    unsigned char b[sizeof(U)];
    if (!in_.read(reinterpret_cast<char*>(b), sizeof(U))) throw FormatError("checkpoint is truncated");
    U v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i) v |= static_cast<U>(b[i]) << (8 * i);
    return v;
  }
  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    if (!in_.read(s.data(), static_cast<std::streamsize>(n))) throw FormatError("checkpoint is truncated");
    return s;
  }

 private:
  std::istream& in_;
};

// Guards against absurd sizes in corrupted headers before allocating.
constexpr std::uint64_t kMaxDim = 1u << 24;

std::uint64_t checked_dim(std::uint64_t v) {
  if (v == 0 || v > kMaxDim) throw FormatError("checkpoint has an implausible dimension");
  return v;
}

}  // namespace

std::uint64_t config_hash(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(const std::string& path, const MLP& model, std::uint64_t hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write checkpoint '" + path + "'");
  out.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, kCheckpointVersion);
  put<std::uint64_t>(out, hash);
  const MLPSpec& spec = model.spec();
  put<std::uint64_t>(out, spec.input_dim);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.hidden.size()));
  for (std::size_t w : spec.hidden) put<std::uint64_t>(out, w);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(spec.heads.size()));
  for (const HeadSpec& h : spec.heads) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(h.name.size()));
    out.write(h.name.data(), static_cast<std::streamsize>(h.name.size()));
    put<std::uint64_t>(out, h.classes);
  }
  for (const Matrix* m : model.parameters()) {
    for (double v : m->data()) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
  }
  if (!out) throw ConfigError("failed writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open checkpoint '" + path + "'");
  Reader r(in);
  if (r.bytes(sizeof kMagic) != std::string(kMagic, sizeof kMagic)) throw FormatError("not a checkpoint (bad magic)");
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ck;
  ck.config_hash = r.get<std::uint64_t>();
  MLPSpec spec;
  spec.input_dim = checked_dim(r.get<std::uint64_t>());
  const auto n_hidden = r.get<std::uint32_t>();
  if (n_hidden > 64) throw FormatError("checkpoint has an implausible depth");
  for (std::uint32_t i = 0; i < n_hidden; ++i) spec.hidden.push_back(checked_dim(r.get<std::uint64_t>()));
  const auto n_heads = r.get<std::uint32_t>();
  if (n_heads > 64) throw FormatError("checkpoint has an implausible head count");
  for (std::uint32_t i = 0; i < n_heads; ++i) {
    const auto len = r.get<std::uint32_t>();
    if (len > 4096) throw FormatError("checkpoint head name too long");
    HeadSpec h;
    h.name = r.bytes(len);
    h.classes = checked_dim(r.get<std::uint64_t>());
    spec.heads.push_back(std::move(h));
  }
  try {
    ck.model = MLP(spec, 0);
  } catch (const ConfigError& e) {
    throw FormatError(std::string("checkpoint holds an invalid model: ") + e.what());
  }
  for (Matrix* m : ck.model.parameters()) {
    for (double& v : m->data()) v = std::bit_cast<double>(r.get<std::uint64_t>());
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("checkpoint has trailing bytes");
  return ck;
}

}  // namespace rill::learner
