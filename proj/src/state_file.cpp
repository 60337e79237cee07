#include "rkex/state_file.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>

#include "rkex/error.hpp"
#include "rkex/wire.hpp"

namespace rkex {

namespace {
constexpr std::uint8_t kStateMagic[4] = {'R', 'K', 'S', 'T'};
constexpr std::uint8_t kStateVersion = 1;
}  // namespace

Bytes encode_state(const SessionState& state) {
  ByteWriter out;
  out.raw(kStateMagic);
  out.u8(kStateVersion);
  out.raw(encode_hello(state.params));
  out.raw(state.digest);
  for (const auto& [a, b] : state.secret.pairs()) {
    write_matrix(out, a);
    write_matrix(out, b);
  }
  return std::move(out).take();
}

SessionState decode_state(ByteView data) {
  ByteReader in(data);
  auto magic = in.raw(4);
  if (!std::equal(magic.begin(), magic.end(), std::begin(kStateMagic))) throw DecodingError("not a session state file");
  if (in.u8() != kStateVersion) throw DecodingError("unsupported session state version");
  ParamSet params = decode_hello(in.raw(kHelloBytes));
  Digest512 digest{};
  auto d = in.raw(digest.size());
  std::copy(d.begin(), d.end(), digest.begin());
  std::vector<SecretPair> pairs;
  for (std::uint32_t k = 0; k < params.cycles(); ++k) {
    ZpMatrix a = read_matrix(in, params.modulus());
    ZpMatrix b = read_matrix(in, params.modulus());
    pairs.push_back({std::move(a), std::move(b)});
  }
  in.expect_end("session state");
  try {
    PartySecret secret(params, std::move(pairs));
    return {params, digest, std::move(secret)};
  } catch (const InvalidArgument& e) {
    throw DecodingError(std::string("session state inconsistent: ") + e.what());
  }
}

void save_state(const std::filesystem::path& path, const SessionState& state) {
  const Bytes data = encode_state(state);
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) throw Error("cannot write " + path.string() + ": " + std::strerror(errno));
  // O_CREAT's mode does not apply to an existing file.
  ::fchmod(fd, 0600);
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(fd, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      const std::string err = std::strerror(errno);
      ::close(fd);
      throw Error("cannot write " + path.string() + ": " + err);
    }
    off += static_cast<std::size_t>(n);
  }
  ::close(fd);
}

SessionState load_state(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  const Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_state(data);
}

}  // namespace rkex
