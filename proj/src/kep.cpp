#include "rkex/kep.hpp"

#include <charconv>
#include <sstream>

#include "rkex/error.hpp"
#include "rkex/hash.hpp"

namespace rkex {

ParamSet::ParamSet(PrimeModulus p, std::uint32_t rows_a, std::uint32_t columns_a,
                   std::uint32_t cycles, HashId hash)
    : p_(p), rows_a_(rows_a), columns_a_(columns_a), cycles_(cycles), hash_(hash) {
  if (columns_a < 1) throw InvalidArgument("columnsA must be at least 1");
  if (rows_a <= columns_a) throw InvalidArgument("rowsA must exceed columnsA");
  if (cycles < 1) throw InvalidArgument("cycle count t must be at least 1");
  if (hash != HashId::Sha3_512) throw InvalidArgument("unsupported hash id");
}

namespace {
std::uint64_t parse_u64(std::string_view field, const char* name) {
  std::uint64_t v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end || field.empty()) {
    throw InvalidArgument(std::string("bad ") + name + " in parameter list: '" + std::string(field) + "'");
  }
  return v;
}

std::uint32_t parse_u32(std::string_view field, const char* name) {
  const std::uint64_t v = parse_u64(field, name);
  if (v > UINT32_MAX) throw InvalidArgument(std::string(name) + " out of range");
  return static_cast<std::uint32_t>(v);
}
}  // namespace

ParamSet ParamSet::parse(const std::string& text) {
  std::vector<std::string_view> fields;
  std::string_view rest(text);
  for (;;) {
    const auto comma = rest.find(',');
    fields.push_back(rest.substr(0, comma));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (fields.size() != 4) throw InvalidArgument("parameters must be p,rowsA,columnsA,t");
  return ParamSet(PrimeModulus(parse_u64(fields[0], "p")), parse_u32(fields[1], "rowsA"),
                  parse_u32(fields[2], "columnsA"), parse_u32(fields[3], "t"));
}

ParamSet ParamSet::random(PrimeModulus p, std::uint32_t cycles, RandomSource& rng,
                          std::uint32_t row_max) {
  if (row_max < 5) throw InvalidArgument("row_max must be at least 5");
  const auto rows = static_cast<std::uint32_t>(rng.uniform_closed(5, row_max));
  const auto cols = static_cast<std::uint32_t>(rng.uniform_closed(4, rows - 1));
  return ParamSet(p, rows, cols, cycles);
}

std::vector<std::string> ParamSet::advisories() const {
  std::vector<std::string> notes;
  if (rows_a_ < 5 || rows_a_ > 100) {
    notes.push_back("rowsA=" + std::to_string(rows_a_) + " is outside the recommended range [5, 100]");
  }
  if (columns_a_ < 4) {
    notes.push_back("columnsA=" + std::to_string(columns_a_) + " is below the recommended minimum 4");
  }
  return notes;
}

std::string ParamSet::to_string() const {
  std::ostringstream os;
  os << "p=" << p() << " rowsA=" << rows_a_ << " columnsA=" << columns_a_ << " t=" << cycles_;
  return os.str();
}

PartySecret::PartySecret(ParamSet params, std::vector<SecretPair> pairs)
    : params_(std::move(params)), pairs_(std::move(pairs)) {
  if (pairs_.size() != params_.cycles()) throw InvalidArgument("secret pair count differs from t");
  for (const auto& [a, b] : pairs_) {
    if (!(a.modulus() == params_.modulus()) || !(b.modulus() == params_.modulus())) {
      throw InvalidArgument("secret matrix modulus differs from parameters");
    }
    if (a.rows() != params_.rows_a() || a.cols() != params_.columns_a() ||
        b.rows() != params_.rows_b() || b.cols() != params_.columns_b()) {
      throw InvalidArgument("secret matrix dimensions do not match parameters");
    }
  }
}

PublicShare::PublicShare(ParamSet params, std::vector<ZpMatrix> mats)
    : params_(std::move(params)), mats_(std::move(mats)) {
  if (mats_.size() != params_.cycles()) throw InvalidArgument("share matrix count differs from t");
  for (const auto& m : mats_) {
    if (!(m.modulus() == params_.modulus())) throw InvalidArgument("share modulus differs from parameters");
    if (m.rows() != params_.rows_a() || m.cols() != params_.rows_a()) {
      throw InvalidArgument("share matrix must be rowsA x rowsA");
    }
  }
}

PublicShare compute_share(const PartySecret& secret) {
  std::vector<ZpMatrix> mats;
  mats.reserve(secret.pairs().size());
  for (const auto& [a, b] : secret.pairs()) mats.push_back(mat_mul_mod(a, b));
  return PublicShare(secret.params(), std::move(mats));
}

Session new_session(const ParamSet& params, RandomSource& rng) {
  std::vector<SecretPair> pairs;
  pairs.reserve(params.cycles());
  for (std::uint32_t k = 0; k < params.cycles(); ++k) {
    auto a = sample_matrix(params.rows_a(), params.columns_a(), params.modulus(), rng);
    auto b = sample_matrix(params.rows_b(), params.columns_b(), params.modulus(), rng);
    pairs.push_back({std::move(a), std::move(b)});
  }
  PartySecret secret(params, std::move(pairs));
  PublicShare share = compute_share(secret);
  return {std::move(secret), std::move(share)};
}

std::vector<std::uint64_t> derive_components(const PartySecret& secret,
                                             const PublicShare& other_share) {
  if (!(secret.params() == other_share.params())) {
    throw InvalidArgument("share parameters differ from session parameters");
  }
  if (secret.pairs().size() != other_share.mats().size()) throw InvalidArgument("cycle count mismatch");
  std::vector<std::uint64_t> components;
  components.reserve(secret.pairs().size());
  for (std::size_t k = 0; k < secret.pairs().size(); ++k) {
    const auto& [a, b] = secret.pairs()[k];
    // (columnsA x rowsA)(rowsA x rowsA)(rowsA x columnsA) -> columnsA x columnsA
    const ZpMatrix left = mat_mul_mod(transpose(a), other_share.mats()[k]);
    components.push_back(det_mod(mat_mul_mod(left, transpose(b))));
  }
  return components;
}

SessionKey finalize_key(const std::vector<std::uint64_t>& components) {
  if (components.empty()) throw InvalidArgument("finalize_key: no components");
  SessionKey key;
  key.components = components;
  for (auto c : components) key.concat += std::to_string(c);
  key.digest = sha3_512(as_bytes(key.concat));
  return key;
}

}  // namespace rkex
