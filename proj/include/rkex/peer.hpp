#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rkex/envelope.hpp"
#include "rkex/kep.hpp"
#include "rkex/net.hpp"
#include "rkex/random.hpp"
#include "rkex/wire.hpp"

namespace rkex {

inline constexpr const char* kBindEnvVar = "RKEX_BIND";
inline constexpr const char* kDefaultBindAddress = "127.0.0.1:7707";

/// Bind address from RKEX_BIND, else the built-in default.
std::string default_bind_address();

struct PeerOptions {
  std::chrono::milliseconds timeout{30'000};
  std::chrono::milliseconds connect_wait{5'000};
  std::uint64_t max_payload = kDefaultMaxPayload;
  /// Initiator only: after the exchange, send this text as a CIPHER frame
  /// (if it fits 64 bytes) and as an ENVELOPE, then wait for the sealed ack.
  std::optional<std::string> message;
  std::ostream* log = nullptr;
  std::function<std::unique_ptr<RandomSource>()> rng_factory = [] {
    return std::unique_ptr<RandomSource>(std::make_unique<SecureRandom>());
  };
};

struct TranscriptEntry {
  bool sent;
  MsgType type;
  Bytes frame;  // full encoded frame as it crossed the wire
};

enum class SessionPhase { AwaitHello, AwaitShare, Established };

struct SessionOutcome {
  bool ok = false;
  std::string error;
  SessionPhase phase = SessionPhase::AwaitHello;
  std::optional<Session> own;
  std::optional<PublicShare> peer_share;
  std::optional<SessionKey> key;
  std::vector<std::string> received_plaintexts;  // decrypted CIPHER frames
  std::vector<Bytes> received_payloads;          // verified ENVELOPE payloads
  bool ack_verified = false;                     // initiator: responder's sealed ack checked out
  std::vector<TranscriptEntry> transcript;
};

/// Responder state machine over any byte channel. Never throws for peer
/// misbehaviour: malformed input yields an ERROR frame and a failed outcome.
SessionOutcome run_responder_session(ByteChannel& io, const ParamSet& params, RandomSource& rng,
                                     const PeerOptions& opts = {});
SessionOutcome run_initiator_session(ByteChannel& io, const ParamSet& params, RandomSource& rng,
                                     const PeerOptions& opts = {});

/// Listens on an address and runs one responder session per connection.
class Responder {
 public:
  Responder(const std::string& bind_address, ParamSet params, PeerOptions opts = {});

  std::uint16_t port() const { return listener_.port(); }

  SessionOutcome serve_one();
  /// Serves max_sessions connections concurrently, one thread each, and
  /// returns their outcomes in accept order.
  std::vector<SessionOutcome> serve(std::size_t max_sessions);

 private:
  SessionOutcome handle(Socket sock);

  Listener listener_;
  ParamSet params_;
  PeerOptions opts_;
};

SessionOutcome run_responder(const std::string& bind_address, const ParamSet& params,
                             const PeerOptions& opts = {});
SessionOutcome run_initiator(const std::string& target_address, const ParamSet& params,
                             const PeerOptions& opts = {});

}  // namespace rkex
