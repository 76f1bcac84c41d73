#pragma once

#include <memory>

#include "bcszk/oracle.hpp"

namespace bcszk {

// One referee/prover message. Wire format: a 4-byte big-endian length prefix
// followed by canonical UTF-8 JSON {"kind":...,"payload":...,"round":...}.
struct Message {
    enum class Kind { Question, Answer, Verdict };
    Kind kind = Kind::Question;
    int round = 0;
    int question = -1;     // Question payload (0-based on the wire? 1-based; see cpp)
    std::string answer;    // Answer payload: sign string
    bool verdict = false;  // Verdict payload

    std::string to_json() const;
    static Message from_json(const std::string& text);
    std::string wire_encode() const;
};

// A bidirectional message endpoint. Both implementations move the byte-level
// wire format.
class Channel {
  public:
    virtual ~Channel() = default;
    virtual void send(const Message& m) = 0;
    virtual Message receive() = 0;              // blocks; TransportError on close
    virtual std::optional<Message> poll() = 0;  // non-blocking (round-robin mode)
};

struct ChannelPair {
    std::unique_ptr<Channel> left;   // referee end
    std::unique_ptr<Channel> right;  // prover end
};

ChannelPair make_inprocess_channel();
// A connected TCP pair over 127.0.0.1. Throws TransportError when loopback
// sockets are unavailable.
ChannelPair make_tcp_loopback_channel();

// The prover side of the protocol: a pure function from (prover index,
// question, round) to an answer string. Round seeds derive from the shared
// master seed, which models pre-shared randomness without communication.
class ProverBehavior {
  public:
    virtual ~ProverBehavior() = default;
    // Joint backends (the zero-knowledge simulator) sit behind both channels
    // and answer the two questions together; everything else answers
    // per-prover with no sight of the partner's question.
    virtual bool joint() const { return false; }
    virtual std::string answer(int prover, int question, std::uint64_t round);
    virtual std::pair<std::string, std::string> joint_answer(int question_a, int question_b,
                                                             std::uint64_t round);
};

std::shared_ptr<ProverBehavior> deterministic_backend(const Game& game,
                                                      DeterministicStrategy strategy);
std::shared_ptr<ProverBehavior> shared_randomness_backend(const Game& game,
                                                          SharedRandomnessStrategy strategy,
                                                          std::uint64_t master_seed);
// Honest provers on a compiled game: both actors derive the same tapes per
// round from the master seed.
std::shared_ptr<ProverBehavior> honest_backend(const CompiledGame& g, Assignment phi_star,
                                               std::uint64_t master_seed);
// The zero-knowledge simulator as a joint backend.
std::shared_ptr<ProverBehavior> simulator_backend(const CompiledGame& g,
                                                  std::uint64_t master_seed);

enum class Transport { InProcess, TcpLoopback };
enum class Schedule { Threads, RoundRobin };  // RoundRobin needs InProcess

struct ProtocolResult {
    std::vector<Message> transcript;  // canonical per-round order
    std::uint64_t rounds = 0;
    std::uint64_t wins = 0;
    std::uint64_t violations = 0;  // malformed answers (auto-losses)

    Rat acceptance() const;
    std::string transcript_ndjson() const;
};

// N independent rounds: the referee samples a pair from pi, dispatches the
// questions on separate channels, collects the answers and applies the win
// predicate. Provers cannot reach each other: the transport hands each actor
// exactly one endpoint. Identical inputs and seed give byte-identical
// transcripts regardless of transport or schedule.
ProtocolResult run_protocol(const Game& game, const std::shared_ptr<ProverBehavior>& backend,
                            std::uint64_t rounds, Transport transport, Schedule schedule,
                            std::uint64_t seed);

// The same protocol against a compiled game's clause windows, refereed
// through the window predicates (never materializes the clause-window BCS,
// whose context count can be in the millions).
ProtocolResult run_protocol_compiled(const CompiledGame& g,
                                     const std::shared_ptr<ProverBehavior>& backend,
                                     std::uint64_t rounds, Transport transport,
                                     Schedule schedule, std::uint64_t seed);

struct ValueEstimate {
    Rat frequency;      // wins / rounds, exact
    double low, high;   // Wald 95% interval, clamped to [0,1]
    std::uint64_t rounds;
};

ValueEstimate estimate_value(const Game& game, const std::shared_ptr<ProverBehavior>& backend,
                             std::uint64_t rounds, std::uint64_t seed,
                             Transport transport = Transport::InProcess,
                             Schedule schedule = Schedule::RoundRobin);

}  // namespace bcszk
