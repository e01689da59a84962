#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "bqkd/joint_state.hpp"

namespace bqkd {

enum class MessageKind {
  Hello,
  QState,
  Ack,
  BasisReveal,
  MeasuredRoundsReveal,
  DiscardSet,
  CheckSetRequest,
  CheckData,
  Abort,
  Done,
};

std::string_view to_string(MessageKind k);
std::optional<MessageKind> parse_message_kind(std::string_view s);

/// One frame. QState frames carry the in-flight state in `state`; every
/// other kind carries a JSON payload.
struct WireMessage {
  MessageKind kind = MessageKind::Ack;
  int round = -1;
  std::optional<JointState> state;
  nlohmann::json payload;

  static WireMessage qstate(int round, JointState s) { return {MessageKind::QState, round, std::move(s), nullptr}; }
  static WireMessage classical(MessageKind k, nlohmann::json payload, int round = -1) {
    return {k, round, std::nullopt, std::move(payload)};
  }
};

/// {"kind":..,"round":..,"payload":..} on one line, no newline. State
/// amplitudes are written as [re, im] with 17 significant digits; "ancilla_dim"
/// appears only when Eve has attached a register.
std::string encode_line(const WireMessage& m);

/// Throws FramingError on malformed input.
WireMessage decode_line(std::string_view line);

/// Ordered, exactly-once message pipe owned by one party.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const WireMessage& m) = 0;
  /// Blocks for the next frame; throws TransportFailure when the peer is gone.
  virtual WireMessage recv() = 0;

  WireMessage request(const WireMessage& m) {
    send(m);
    return recv();
  }
};

/// Bob's side of the alternation: one reply per request.
class Responder {
 public:
  virtual ~Responder() = default;
  virtual WireMessage handle(const WireMessage& m) = 0;
};

/// Man-in-the-middle hook applied to frames in each direction.
class Relay {
 public:
  virtual ~Relay() = default;
  virtual void forward(WireMessage& m) = 0;
  virtual void backward(WireMessage& m) = 0;
};

/// In-process channel: each request is handed through the relay to the
/// responder and the reply comes back the same way. Nothing is serialized.
class LoopbackChannel : public Channel {
 public:
  LoopbackChannel(Responder& peer, Relay* relay = nullptr) : peer_(peer), relay_(relay) {}

  void send(const WireMessage& m) override;
  WireMessage recv() override;

 private:
  Responder& peer_;
  Relay* relay_;
  std::optional<WireMessage> pending_;
};

/// Newline-delimited JSON over a connected TCP socket.
class SocketChannel : public Channel {
 public:
  explicit SocketChannel(int fd);
  ~SocketChannel() override;
  SocketChannel(const SocketChannel&) = delete;
  SocketChannel& operator=(const SocketChannel&) = delete;

  void send(const WireMessage& m) override;
  WireMessage recv() override;

  /// Connects to host:port, retrying for up to `timeout_ms`.
  static std::unique_ptr<SocketChannel> connect(const std::string& host, int port, int timeout_ms = 10000);

 private:
  int fd_;
  std::string buffer_;
};

/// A bound, listening TCP socket.
class Listener {
 public:
  Listener(const std::string& host, int port);
  ~Listener();
  Listener(const Listener&) = delete;
  Listener& operator=(const Listener&) = delete;

  int port() const noexcept { return port_; }
  std::unique_ptr<SocketChannel> accept();

 private:
  int fd_;
  int port_;
};

/// Splits "host:port"; throws ConfigInvalid.
std::pair<std::string, int> parse_endpoint(std::string_view s);

/// Serves requests until the final Done/Abort reply has been sent.
void serve(Channel& ch, Responder& responder);

/// Pumps frames from Alice's side to Bob's side and back until the final
/// exchange is complete.
void run_relay(Channel& alice_side, Channel& bob_side, Relay& relay);

}  // namespace bqkd
