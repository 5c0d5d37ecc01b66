#include "fmp/checkpoint.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "fmp/error.hpp"

namespace fmp {

namespace {

constexpr std::array<char, 8> kMagic = {'F', 'M', 'P', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint64_t kMaxLength = std::uint64_t{1} << 40;

void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 8);
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>(v >> (8 * i));
  out.write(b, 4);
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

void put_string(std::ostream& out, const std::string& s) {
  put_u64(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

void put_block(std::ostream& out, std::span<const double> block) {
  put_u64(out, block.size());
  for (double v : block) put_f64(out, v);
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError("checkpoint truncated");
  }
  std::uint64_t u64() {
    unsigned char b[8];
    bytes(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  std::uint32_t u32() {
    unsigned char b[4];
    bytes(reinterpret_cast<char*>(b), 4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint64_t length() {
    const std::uint64_t n = u64();
    if (n > kMaxLength) throw FormatError("checkpoint length field out of range");
    return n;
  }
  std::string string() {
    std::string s(length(), '\0');
    bytes(s.data(), s.size());
    return s;
  }
  std::vector<double> block() {
    std::vector<double> v(length());
    for (double& x : v) x = f64();
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace

void save_checkpoint(const Checkpoint& checkpoint, std::ostream& out) {
  const Network& net = checkpoint.network;
  out.write(kMagic.data(), kMagic.size());
  put_string(out, format_spec(net.spec()));
  put_u32(out, static_cast<std::uint32_t>(net.in_channels()));
  put_u32(out, static_cast<std::uint32_t>(net.class_count()));
  put_f64(out, net.leaky_slope());
  put_u64(out, net.block_count());
  for (std::size_t k = 0; k < net.block_count(); ++k) put_block(out, net.block(k));
  put_u64(out, static_cast<std::uint64_t>(checkpoint.state.epoch));
  put_f64(out, checkpoint.state.learning_rate);
  put_u64(out, checkpoint.state.velocity.size());
  for (const auto& v : checkpoint.state.velocity) put_block(out, v);
  put_string(out, checkpoint.state.rng_state);
  if (!out) throw FormatError("failed to write checkpoint");
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  save_checkpoint(checkpoint, out);
}

Checkpoint load_checkpoint(std::istream& in) {
  Reader r(in);
  std::array<char, 8> magic{};
  r.bytes(magic.data(), magic.size());
  if (magic != kMagic) throw FormatError("not a checkpoint (bad magic)");
  const std::string spec_text = r.string();
  const auto channels = static_cast<int>(r.u32());
  const auto classes = static_cast<int>(r.u32());
  const double slope = r.f64();

  NetworkSpec spec;
  try {
    spec = parse_and_size(spec_text);
  } catch (const ParseError& e) {
    throw FormatError(std::string("checkpoint spec: ") + e.what());
  }
  Network net(std::move(spec), channels, classes, slope);
  if (r.u64() != net.block_count()) throw FormatError("checkpoint parameter block count mismatch");
  for (std::size_t k = 0; k < net.block_count(); ++k) {
    const auto values = r.block();
    auto dst = net.block(k);
    if (values.size() != dst.size()) throw FormatError("checkpoint parameter block size mismatch");
    std::copy(values.begin(), values.end(), dst.begin());
  }

  TrainState state;
  state.epoch = static_cast<int>(r.u64());
  state.learning_rate = r.f64();
  const std::uint64_t n_velocity = r.u64();
  if (n_velocity != 0 && n_velocity != net.block_count()) throw FormatError("checkpoint momentum block count mismatch");
  for (std::uint64_t k = 0; k < n_velocity; ++k) {
    state.velocity.push_back(r.block());
    if (state.velocity.back().size() != net.block(k).size()) throw FormatError("checkpoint momentum block size mismatch");
  }
  state.rng_state = r.string();
  return {std::move(net), std::move(state)};
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  return load_checkpoint(in);
}

}  // namespace fmp
