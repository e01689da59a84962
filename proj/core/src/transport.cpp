#include "bqkd/transport.hpp"

#include <array>
#include <cstdio>

#include "bqkd/errors.hpp"

namespace bqkd {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 10> kKindNames{
    "Hello", "QState", "Ack", "BasisReveal", "MeasuredRoundsReveal",
    "DiscardSet", "CheckSetRequest", "CheckData", "Abort", "Done",
};

void append_double(std::string& out, double x) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
  out.append(buf, static_cast<std::size_t>(n));
}

std::string state_payload(const JointState& s) {
  std::string out = "{\"dim\":" + std::to_string(s.travel_dim());
  if (s.ancilla_dim() > 1) out += ",\"ancilla_dim\":" + std::to_string(s.ancilla_dim());
  out += ",\"amps\":[";
  bool first = true;
  for (const auto& a : s.amps()) {
    if (!first) out += ',';
    first = false;
    out += '[';
    append_double(out, a.real());
    out += ',';
    append_double(out, a.imag());
    out += ']';
  }
  out += "]}";
  return out;
}

bool is_final(const WireMessage& m) { return m.kind == MessageKind::Done || m.kind == MessageKind::Abort; }

}  // namespace

std::string_view to_string(MessageKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

std::optional<MessageKind> parse_message_kind(std::string_view s) {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == s) return static_cast<MessageKind>(i);
  }
  return std::nullopt;
}

std::string encode_line(const WireMessage& m) {
  std::string out = "{\"kind\":\"";
  out += to_string(m.kind);
  out += "\",\"round\":" + std::to_string(m.round) + ",\"payload\":";
  if (m.kind == MessageKind::QState) {
    if (!m.state) throw Error(ErrorCode::FramingError, "QState frame without a state");
    out += state_payload(*m.state);
  } else {
    out += m.payload.dump();
  }
  out += '}';
  return out;
}

WireMessage decode_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::FramingError, e.what());
  }
  try {
    WireMessage m;
    const auto kind = parse_message_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::FramingError, "unknown kind");
    m.kind = *kind;
    m.round = j.at("round").get<int>();
    const auto& p = j.at("payload");
    if (m.kind != MessageKind::QState) {
      m.payload = p;
      return m;
    }
    const int dim = p.at("dim").get<int>();
    const int anc = p.contains("ancilla_dim") ? p.at("ancilla_dim").get<int>() : 1;
    std::vector<Complex> amps;
    amps.reserve(p.at("amps").size());
    for (const auto& a : p.at("amps")) amps.emplace_back(a.at(0).get<double>(), a.at(1).get<double>());
    m.state.emplace(dim, anc, std::move(amps));
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FramingError, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::FramingError) throw;
    throw Error(ErrorCode::FramingError, e.what());
  }
}

void LoopbackChannel::send(const WireMessage& m) {
  if (pending_) throw Error(ErrorCode::TransportFailure, "send before the previous reply was received");
  WireMessage out = m;
  if (relay_ != nullptr) relay_->forward(out);
  WireMessage reply = peer_.handle(out);
  if (relay_ != nullptr) relay_->backward(reply);
  pending_ = std::move(reply);
}

WireMessage LoopbackChannel::recv() {
  if (!pending_) throw Error(ErrorCode::TransportFailure, "recv with no outstanding request");
  WireMessage m = std::move(*pending_);
  pending_.reset();
  return m;
}

void serve(Channel& ch, Responder& responder) {
  for (;;) {
    const WireMessage in = ch.recv();
    const WireMessage out = responder.handle(in);
    ch.send(out);
    if (is_final(in) || is_final(out)) return;
  }
}

void run_relay(Channel& alice_side, Channel& bob_side, Relay& relay) {
  for (;;) {
    WireMessage m = alice_side.recv();
    const bool last = is_final(m);
    relay.forward(m);
    bob_side.send(m);
    WireMessage r = bob_side.recv();
    relay.backward(r);
    alice_side.send(r);
    if (last || is_final(r)) return;
  }
}

std::pair<std::string, int> parse_endpoint(std::string_view s) {
  const auto colon = s.rfind(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::ConfigInvalid, "endpoint must be host:port");
  std::string host(s.substr(0, colon));
  int port = 0;
  try {
    std::size_t used = 0;
    const std::string ps(s.substr(colon + 1));
    port = std::stoi(ps, &used);
    if (used != ps.size()) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigInvalid, "bad port in endpoint '" + std::string(s) + "'");
  }
  if (port < 0 || port > 65535) throw Error(ErrorCode::ConfigInvalid, "port out of range");
  if (host.empty()) host = "127.0.0.1";
  return {host, port};
}

}  // namespace bqkd
