#include "rkex/peer.hpp"

#include <cstdlib>
#include <mutex>
#include <thread>

#include "rkex/error.hpp"
#include "rkex/hashcipher.hpp"

namespace rkex {

std::string default_bind_address() {
  const char* env = std::getenv(kBindEnvVar);
  return (env != nullptr && *env != '\0') ? env : kDefaultBindAddress;
}

namespace {

constexpr std::string_view kAck = "ack";

std::mutex& log_mutex() {
  static std::mutex mu;
  return mu;
}

// Shared frame I/O, transcript and failure handling for both roles.
class Driver {
 public:
  Driver(ByteChannel& io, const PeerOptions& opts, const char* role)
      : frames_(io, opts.max_payload), opts_(opts), role_(role) {}

  SessionOutcome& outcome() { return out_; }

  void send(MsgType type, Bytes payload) {
    WireFrame frame{type, std::move(payload)};
    Bytes encoded = encode_frame(frame);
    log(std::string("sent ") + to_string(type) + " (" + std::to_string(frame.payload.size()) + " bytes)");
    out_.transcript.push_back({true, type, encoded});
    frames_.send(frame);
  }

  std::optional<WireFrame> recv() {
    auto frame = frames_.recv();
    if (frame) {
      log(std::string("received ") + to_string(frame->type) + " (" + std::to_string(frame->payload.size()) +
          " bytes)");
      out_.transcript.push_back({false, frame->type, encode_frame(*frame)});
    }
    return frame;
  }

  /// Receives the next frame and insists on its type; a peer ERROR frame
  /// or end of stream becomes a ProtocolError.
  WireFrame expect(MsgType type) {
    auto frame = recv();
    if (!frame) throw ProtocolError(std::string("peer closed the connection while awaiting ") + to_string(type));
    if (frame->type == MsgType::Error) peer_error(*frame);
    if (frame->type != type) {
      throw DecodingError(std::string("expected ") + to_string(type) + ", got " + to_string(frame->type));
    }
    return std::move(*frame);
  }

  [[noreturn]] void peer_error(const WireFrame& frame) {
    peer_error_ = true;
    throw ProtocolError("peer reported error: " + std::string(frame.payload.begin(), frame.payload.end()));
  }

  void fail(const std::exception& e, bool notify_peer) {
    out_.ok = false;
    out_.error = e.what();
    log(std::string("failed: ") + e.what());
    if (notify_peer && !peer_error_) {
      try {
        send(MsgType::Error, Bytes(out_.error.begin(), out_.error.end()));
      } catch (const std::exception&) {
        // Peer already gone.
      }
    }
  }

  void log(const std::string& line) {
    if (opts_.log == nullptr) return;
    std::lock_guard lock(log_mutex());
    *opts_.log << '[' << role_ << "] " << line << '\n';
  }

 private:
  FrameChannel frames_;
  const PeerOptions& opts_;
  const char* role_;
  bool peer_error_ = false;
  SessionOutcome out_;
};

template <typename Body>
SessionOutcome drive(Driver& d, Body&& body) {
  try {
    body();
    d.outcome().ok = true;
  } catch (const std::exception& e) {
    d.fail(e, true);
  }
  return std::move(d.outcome());
}

}  // namespace

SessionOutcome run_responder_session(ByteChannel& io, const ParamSet& params, RandomSource& rng,
                                     const PeerOptions& opts) {
  Driver d(io, opts, "responder");
  return drive(d, [&] {
    SessionOutcome& out = d.outcome();

    const WireFrame hello = d.expect(MsgType::Hello);
    const ParamSet proposed = decode_hello(hello.payload);
    if (!(proposed == params)) {
      throw ProtocolError("parameter mismatch: peer proposed " + proposed.to_string() + ", responder requires " +
                          params.to_string());
    }
    d.send(MsgType::Hello, encode_hello(params));
    out.phase = SessionPhase::AwaitShare;

    const WireFrame share_frame = d.expect(MsgType::Share);
    PublicShare peer_share = decode_share(share_frame.payload, params);
    Session own = new_session(params, rng);
    d.send(MsgType::Share, encode_share(own.share));
    SessionKey key = derive_session_key(own.secret, peer_share);
    d.log("session key " + key.hex());
    out.phase = SessionPhase::Established;
    out.peer_share = std::move(peer_share);
    out.key = std::move(key);
    out.own = std::move(own);

    const MacKey mac(out.key->digest);
    while (auto frame = d.recv()) {
      switch (frame->type) {
        case MsgType::Cipher: {
          const CipherText ct = decode_ciphertext(frame->payload, params);
          if (!(ct.c == *out.peer_share)) throw DecodingError("CIPHER carries a share other than the peer's");
          const CipherBlock plain = decrypt(out.own->secret, ct);
          out.received_plaintexts.emplace_back(plain.begin(), plain.end());
          d.log("decrypted message: \"" + out.received_plaintexts.back() + "\"");
          break;
        }
        case MsgType::Envelope: {
          const Envelope env = decode_envelope(frame->payload);
          const VerifyResult vr = verify_envelope(mac, env);
          if (!vr.accepted()) throw DecodingError(std::string("envelope rejected: ") + to_string(vr.status));
          out.received_payloads.push_back(env.payload);
          d.log("verified envelope (" + std::to_string(env.payload.size()) + " bytes, " + env.timestamp + ")");
          d.send(MsgType::Envelope, encode_envelope(seal_envelope(mac, as_bytes(kAck), rng)));
          break;
        }
        case MsgType::Error:
          d.peer_error(*frame);
        default:
          throw DecodingError(std::string("unexpected ") + to_string(frame->type) + " after key establishment");
      }
    }
  });
}

SessionOutcome run_initiator_session(ByteChannel& io, const ParamSet& params, RandomSource& rng,
                                     const PeerOptions& opts) {
  Driver d(io, opts, "initiator");
  return drive(d, [&] {
    SessionOutcome& out = d.outcome();

    d.send(MsgType::Hello, encode_hello(params));
    const WireFrame hello = d.expect(MsgType::Hello);
    if (!(decode_hello(hello.payload) == params)) throw DecodingError("responder echoed different parameters");
    out.phase = SessionPhase::AwaitShare;

    Session own = new_session(params, rng);
    d.send(MsgType::Share, encode_share(own.share));
    const WireFrame share_frame = d.expect(MsgType::Share);
    PublicShare peer_share = decode_share(share_frame.payload, params);
    SessionKey key = derive_session_key(own.secret, peer_share);
    d.log("session key " + key.hex());
    out.phase = SessionPhase::Established;
    out.peer_share = std::move(peer_share);
    out.key = std::move(key);
    out.own = std::move(own);

    if (opts.message) {
      const MacKey mac(out.key->digest);
      if (opts.message->size() <= kCipherBlock) {
        const CipherText ct = encrypt_with_key(*out.key, out.own->share, pad_message(*opts.message));
        d.send(MsgType::Cipher, encode_ciphertext(ct));
      }
      d.send(MsgType::Envelope, encode_envelope(seal_envelope(mac, as_bytes(*opts.message), rng)));
      const WireFrame ack = d.expect(MsgType::Envelope);
      const Envelope env = decode_envelope(ack.payload);
      const VerifyResult vr = verify_envelope(mac, env);
      if (!vr.accepted()) throw DecodingError(std::string("acknowledgement rejected: ") + to_string(vr.status));
      out.ack_verified = true;
      d.log("responder acknowledgement verified");
    }
  });
}

Responder::Responder(const std::string& bind_address, ParamSet params, PeerOptions opts)
    : listener_(bind_address), params_(std::move(params)), opts_(std::move(opts)) {}

SessionOutcome Responder::handle(Socket sock) {
  sock.set_timeout(opts_.timeout);
  auto rng = opts_.rng_factory();
  return run_responder_session(sock, params_, *rng, opts_);
}

SessionOutcome Responder::serve_one() { return handle(listener_.accept()); }

std::vector<SessionOutcome> Responder::serve(std::size_t max_sessions) {
  std::vector<SessionOutcome> outcomes(max_sessions);
  std::vector<std::thread> workers;
  for (std::size_t i = 0; i < max_sessions; ++i) {
    Socket sock = listener_.accept();
    workers.emplace_back([this, &outcomes, i, s = std::move(sock)]() mutable { outcomes[i] = handle(std::move(s)); });
  }
  for (auto& w : workers) w.join();
  return outcomes;
}

SessionOutcome run_responder(const std::string& bind_address, const ParamSet& params, const PeerOptions& opts) {
  Responder responder(bind_address, params, opts);
  return responder.serve_one();
}

SessionOutcome run_initiator(const std::string& target_address, const ParamSet& params, const PeerOptions& opts) {
  SessionOutcome failed;
  try {
    Socket sock = Socket::connect(target_address, opts.connect_wait);
    sock.set_timeout(opts.timeout);
    auto rng = opts.rng_factory();
    SessionOutcome out = run_initiator_session(sock, params, *rng, opts);
    sock.shutdown_write();
    return out;
  } catch (const std::exception& e) {
    failed.error = e.what();
  }
  return failed;
}

}  // namespace rkex
