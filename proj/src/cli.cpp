#include "rkex/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>

#include "rkex/analysis.hpp"
#include "rkex/envelope.hpp"
#include "rkex/error.hpp"
#include "rkex/hashcipher.hpp"
#include "rkex/kep.hpp"
#include "rkex/peer.hpp"
#include "rkex/state_file.hpp"
#include "rkex/wire.hpp"

namespace rkex {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct UsageError : InvalidArgument {
  using InvalidArgument::InvalidArgument;
};

struct RngOptions {
  bool insecure = false;
  std::optional<std::uint64_t> seed;

  void check() const {
    if (seed && !insecure) throw UsageError("--seed requires --insecure-test-rng");
  }

  std::unique_ptr<RandomSource> make() const {
    if (insecure) return std::make_unique<InsecureTestRandom>(seed.value_or(0));
    return std::make_unique<SecureRandom>();
  }
};

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, ByteView data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("cannot write " + path);
}

ParamSet parse_params(const std::string& text) {
  try {
    return ParamSet::parse(text);
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
}

void print_advisories(const ParamSet& params, std::ostream& err) {
  for (const auto& note : params.advisories()) err << "warning: " << note << '\n';
}

void print_outcome(const SessionOutcome& out, std::ostream& os, std::ostream& err) {
  if (out.key) os << "session key: " << out.key->hex() << '\n';
  for (const auto& text : out.received_plaintexts) os << "plaintext: " << text << '\n';
  for (const auto& payload : out.received_payloads) {
    os << "envelope payload: " << std::string(payload.begin(), payload.end()) << '\n';
  }
  if (out.ack_verified) os << "acknowledgement verified\n";
  if (!out.ok) err << "error: " << out.error << '\n';
}

void maybe_save_state(const std::string& path, const SessionOutcome& out) {
  if (path.empty() || !out.ok || !out.own || !out.key) return;
  save_state(path, {out.own->secret.params(), out.key->digest, out.own->secret});
}

MacKey mac_key_from_state(const std::string& state_path) { return MacKey(load_state(state_path).digest); }

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rectangular-matrix key agreement toolkit", "rkex"};
  app.require_subcommand(1);
  app.fallthrough();

  RngOptions rng_opts;
  bool csv = false;
  std::uint64_t budget = kDefaultAttackBudget;
  app.add_flag("--insecure-test-rng", rng_opts.insecure, "Use a seeded, NON-SECURE generator (tests only)");
  app.add_option("--seed", rng_opts.seed, "Seed for --insecure-test-rng");
  app.add_flag("--csv", csv, "CSV output for estimate/bench/audit");
  app.add_option("--budget", budget, "Maximum brute-force candidates")->capture_default_str();

  std::string params_text;
  std::vector<std::string> params_list;

  auto* exchange = app.add_subcommand("exchange", "Run both parties in one process and print both keys");
  exchange->add_option("--params", params_text, "p,rowsA,columnsA,t")->required();
  std::string state_a, state_b;
  exchange->add_option("--state-a", state_a, "Write the first party's session state here");
  exchange->add_option("--state-b", state_b, "Write the second party's session state here");

  auto* serve = app.add_subcommand("serve", "Responder: accept connections and run the exchange");
  std::string bind = default_bind_address();
  std::size_t sessions = 1;
  std::string state_out;
  double timeout_s = 30;
  serve->add_option("--params", params_text, "p,rowsA,columnsA,t")->required();
  serve->add_option("--bind", bind, "host:port (default from RKEX_BIND)")->capture_default_str();
  serve->add_option("--sessions", sessions, "Connections to serve concurrently before exiting")->capture_default_str();
  serve->add_option("--state-out", state_out, "Write session state here (first session)");
  serve->add_option("--timeout", timeout_s, "I/O timeout in seconds")->capture_default_str();

  auto* connect = app.add_subcommand("connect", "Initiator: connect to a responder and run the exchange");
  std::string target = default_bind_address();
  std::optional<std::string> message;
  connect->add_option("--params", params_text, "p,rowsA,columnsA,t")->required();
  connect->add_option("--target", target, "host:port (default from RKEX_BIND)")->capture_default_str();
  connect->add_option("--message", message, "Send this text encrypted and in a sealed envelope");
  connect->add_option("--state-out", state_out, "Write session state here");
  connect->add_option("--timeout", timeout_s, "I/O timeout in seconds")->capture_default_str();

  std::string state_path, in_path, out_path;
  auto* encrypt_cmd = app.add_subcommand("encrypt", "Encrypt up to 64 bytes with a stored session");
  encrypt_cmd->add_option("--state", state_path)->required();
  encrypt_cmd->add_option("--in", in_path, "Plaintext file (at most 64 bytes, space padded)");
  encrypt_cmd->add_option("--message", message, "Plaintext text instead of --in");
  encrypt_cmd->add_option("--out", out_path)->required();

  auto* decrypt_cmd = app.add_subcommand("decrypt", "Decrypt a ciphertext file with a stored session");
  decrypt_cmd->add_option("--state", state_path)->required();
  decrypt_cmd->add_option("--in", in_path)->required();
  decrypt_cmd->add_option("--out", out_path, "Write plaintext here instead of stdout");

  std::string sender_id;
  auto* seal_cmd = app.add_subcommand("seal", "Seal a file into an authenticated envelope");
  seal_cmd->add_option("--state", state_path)->required();
  seal_cmd->add_option("--in", in_path)->required();
  seal_cmd->add_option("--out", out_path)->required();
  seal_cmd->add_option("--id", sender_id, "Shared sender identifier carried with the payload");

  auto* verify_cmd = app.add_subcommand("verify", "Verify an envelope file");
  verify_cmd->add_option("--state", state_path)->required();
  verify_cmd->add_option("--in", in_path)->required();
  verify_cmd->add_option("--out", out_path, "Write the payload here when accepted");

  auto* estimate = app.add_subcommand("estimate", "Brute-force complexity estimates");
  estimate->add_option("--params", params_list, "p,rowsA,columnsA,t (repeatable; default: published tables)");

  auto* attack = app.add_subcommand("attack", "Toy-scale exhaustive factorization attack");
  attack->add_option("--params", params_text, "p,rowsA,columnsA,t")->required();

  std::size_t reps = 10;
  auto* bench = app.add_subcommand("bench", "Time complete exchanges");
  bench->add_option("--params", params_list, "p,rowsA,columnsA,t (repeatable; default: published tables)");
  bench->add_option("--reps", reps, "Repetitions per row")->capture_default_str();

  std::size_t audit_sessions = 10;
  auto* audit = app.add_subcommand("audit", "Check that public shares are singular with bounded rank");
  audit->add_option("--params", params_text, "p,rowsA,columnsA,t")->required();
  audit->add_option("--sessions", audit_sessions, "Random sessions to audit")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    rng_opts.check();
    if (rng_opts.insecure) err << "warning: using the insecure test generator\n";

    if (*exchange) {
      const ParamSet params = parse_params(params_text);
      print_advisories(params, err);
      auto rng = rng_opts.make();
      const Session alice = new_session(params, *rng);
      const Session bob = new_session(params, *rng);
      const SessionKey ka = derive_session_key(alice.secret, bob.share);
      const SessionKey kb = derive_session_key(bob.secret, alice.share);
      out << "alice key: " << ka.hex() << '\n' << "bob key:   " << kb.hex() << '\n';
      if (!state_a.empty()) save_state(state_a, {params, ka.digest, alice.secret});
      if (!state_b.empty()) save_state(state_b, {params, kb.digest, bob.secret});
      if (ka.digest != kb.digest) {
        err << "error: keys differ\n";
        return kExitFailure;
      }
      out << "keys match\n";
      return kExitOk;
    }

    if (*serve || *connect) {
      const ParamSet params = parse_params(params_text);
      print_advisories(params, err);
      PeerOptions opts;
      opts.timeout = std::chrono::milliseconds(static_cast<long long>(timeout_s * 1000));
      opts.log = &err;
      opts.rng_factory = [rng_opts] { return rng_opts.make(); };
      if (*serve) {
        Responder responder(bind, params, opts);
        err << "listening on port " << responder.port() << '\n';
        auto outcomes = responder.serve(sessions);
        bool ok = true;
        for (const auto& o : outcomes) {
          print_outcome(o, out, err);
          ok = ok && o.ok;
        }
        maybe_save_state(state_out, outcomes.front());
        return ok ? kExitOk : kExitFailure;
      }
      opts.message = message;
      const SessionOutcome o = run_initiator(target, params, opts);
      print_outcome(o, out, err);
      maybe_save_state(state_out, o);
      return o.ok ? kExitOk : kExitFailure;
    }

    if (*encrypt_cmd) {
      if (in_path.empty() == !message.has_value()) throw UsageError("give exactly one of --in or --message");
      const SessionState state = load_state(state_path);
      std::string text;
      if (message) {
        text = *message;
      } else {
        const Bytes raw = read_file(in_path);
        text.assign(raw.begin(), raw.end());
      }
      if (text.size() > kCipherBlock) throw UsageError("plaintext longer than 64 bytes");
      SessionKey key;
      key.digest = state.digest;
      const CipherText ct = encrypt_with_key(key, compute_share(state.secret), pad_message(text));
      write_file(out_path, encode_ciphertext(ct));
      return kExitOk;
    }

    if (*decrypt_cmd) {
      const SessionState state = load_state(state_path);
      const CipherText ct = decode_ciphertext(read_file(in_path), state.params);
      const CipherBlock plain = decrypt(state.secret, ct);
      if (out_path.empty()) {
        out << std::string(plain.begin(), plain.end()) << '\n';
      } else {
        write_file(out_path, plain);
      }
      return kExitOk;
    }

    if (*seal_cmd) {
      const MacKey key = mac_key_from_state(state_path);
      Bytes payload = read_file(in_path);
      if (!sender_id.empty()) payload = pack_identified(as_bytes(sender_id), payload);
      auto rng = rng_opts.make();
      write_file(out_path, encode_envelope(seal_envelope(key, payload, *rng)));
      return kExitOk;
    }

    if (*verify_cmd) {
      const MacKey key = mac_key_from_state(state_path);
      Envelope env;
      try {
        env = decode_envelope(read_file(in_path));
      } catch (const DecodingError&) {
        out << "reject: malformed\n";
        return kExitFailure;
      }
      const VerifyResult vr = verify_envelope(key, env);
      if (!vr.accepted()) {
        out << "reject: " << to_string(vr.status) << '\n';
        return kExitFailure;
      }
      out << "accept (" << env.payload.size() << " bytes, sealed " << env.timestamp << ")\n";
      if (!out_path.empty()) write_file(out_path, env.payload);
      return kExitOk;
    }

    if (*estimate) {
      std::vector<ComplexityReport> rows;
      if (params_list.empty()) {
        for (const auto& p : published_table_params()) rows.push_back(complexity_estimate(p));
      } else {
        for (const auto& text : params_list) rows.push_back(complexity_estimate(parse_params(text)));
      }
      out << format_estimates(rows, csv);
      return kExitOk;
    }

    if (*attack) {
      const ParamSet params = parse_params(params_text);
      auto rng = rng_opts.make();
      const Session victim = new_session(params, *rng);
      const Session counterpart = new_session(params, *rng);
      const SessionKey truth = derive_session_key(victim.secret, counterpart.share);
      AttackOptions opts;
      opts.budget = budget;
      SessionAttack result;
      try {
        result = attack_session(victim.share, counterpart.share, opts);
      } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
      }
      out << "candidates tried: " << result.tried << '\n';
      bool recovered = true;
      for (std::size_t k = 0; k < result.cycles.size(); ++k) {
        const auto& comps = result.candidate_components[k];
        const bool hit = std::find(comps.begin(), comps.end(), truth.components[k]) != comps.end();
        recovered = recovered && hit;
        out << "cycle " << k + 1 << ": " << result.cycles[k].matches.size() << " matches, "
            << comps.size() << " candidate components, true component "
            << (hit ? "recovered" : "not recovered") << '\n';
      }
      out << "session key " << (recovered ? "within candidate set" : "not recovered") << '\n';
      return kExitOk;
    }

    if (*bench) {
      std::vector<ParamSet> rows;
      if (params_list.empty()) {
        rows = published_table_params();
      } else {
        for (const auto& text : params_list) rows.push_back(parse_params(text));
      }
      auto rng = rng_opts.make();
      std::vector<BenchReport> reports;
      for (const auto& p : rows) reports.push_back(bench_kep(p, reps, *rng));
      out << format_bench(reports, csv);
      return kExitOk;
    }

    if (*audit) {
      const ParamSet params = parse_params(params_text);
      auto rng = rng_opts.make();
      std::vector<AuditReport> reports;
      bool ok = true;
      for (std::size_t s = 0; s < audit_sessions; ++s) {
        reports.push_back(singularity_audit(new_session(params, *rng).share));
        ok = ok && reports.back().passed();
      }
      out << format_audit(reports, csv);
      return ok ? kExitOk : kExitFailure;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

int cli_dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace rkex
