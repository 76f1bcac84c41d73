#include "bcszk/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <thread>

namespace bcszk {

// --- messages ---------------------------------------------------------------

std::string Message::to_json() const {
    Json doc;
    switch (kind) {
        case Kind::Question:
            doc["kind"] = "question";
            doc["payload"] = question + 1;  // 1-based on the wire
            break;
        case Kind::Answer:
            doc["kind"] = "answer";
            doc["payload"] = answer;
            break;
        case Kind::Verdict:
            doc["kind"] = "verdict";
            doc["payload"] = verdict;
            break;
    }
    doc["round"] = round;
    return doc.dump();
}

Message Message::from_json(const std::string& text) {
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ProtocolViolation(std::string("unparseable message: ") + e.what());
    }
    Message m;
    if (!doc.contains("kind") || !doc.contains("round") || !doc.contains("payload"))
        throw ProtocolViolation("message misses kind/round/payload");
    m.round = doc["round"].get<int>();
    std::string kind = doc["kind"].get<std::string>();
    if (kind == "question") {
        m.kind = Kind::Question;
        m.question = doc["payload"].get<int>() - 1;
    } else if (kind == "answer") {
        m.kind = Kind::Answer;
        m.answer = doc["payload"].get<std::string>();
    } else if (kind == "verdict") {
        m.kind = Kind::Verdict;
        m.verdict = doc["payload"].get<bool>();
    } else {
        throw ProtocolViolation("unknown message kind '" + kind + "'");
    }
    return m;
}

std::string Message::wire_encode() const {
    std::string body = to_json();
    std::string out;
    std::uint32_t length = static_cast<std::uint32_t>(body.size());
    out.push_back(static_cast<char>((length >> 24) & 0xff));
    out.push_back(static_cast<char>((length >> 16) & 0xff));
    out.push_back(static_cast<char>((length >> 8) & 0xff));
    out.push_back(static_cast<char>(length & 0xff));
    return out + body;
}

// --- in-process transport ----------------------------------------------------

namespace {

// Byte queue carrying wire-encoded frames; both directions of one pair.
struct InProcessState {
    std::mutex mutex;
    std::condition_variable cv;
    std::deque<std::string> to_left, to_right;
    bool closed = false;
};

class InProcessChannel final : public Channel {
  public:
    InProcessChannel(std::shared_ptr<InProcessState> state, bool is_left)
        : state_(std::move(state)), left_(is_left) {}

    ~InProcessChannel() override {
        std::lock_guard<std::mutex> lock(state_->mutex);
        state_->closed = true;
        state_->cv.notify_all();
    }

    void send(const Message& m) override {
        std::string frame = m.wire_encode();
        {
            std::lock_guard<std::mutex> lock(state_->mutex);
            (left_ ? state_->to_right : state_->to_left).push_back(std::move(frame));
        }
        state_->cv.notify_all();
    }

    Message receive() override {
        std::unique_lock<std::mutex> lock(state_->mutex);
        auto& queue = left_ ? state_->to_left : state_->to_right;
        state_->cv.wait(lock, [&] { return !queue.empty() || state_->closed; });
        if (queue.empty()) throw TransportError("channel closed");
        return decode_frame(pop(queue));
    }

    std::optional<Message> poll() override {
        std::lock_guard<std::mutex> lock(state_->mutex);
        auto& queue = left_ ? state_->to_left : state_->to_right;
        if (queue.empty()) return std::nullopt;
        return decode_frame(pop(queue));
    }

  private:
    static std::string pop(std::deque<std::string>& queue) {
        std::string frame = std::move(queue.front());
        queue.pop_front();
        return frame;
    }
    static Message decode_frame(const std::string& frame) {
        if (frame.size() < 4) throw TransportError("short frame");
        return Message::from_json(frame.substr(4));
    }

    std::shared_ptr<InProcessState> state_;
    bool left_;
};

}  // namespace

ChannelPair make_inprocess_channel() {
    auto state = std::make_shared<InProcessState>();
    ChannelPair pair;
    pair.left = std::make_unique<InProcessChannel>(state, true);
    pair.right = std::make_unique<InProcessChannel>(state, false);
    return pair;
}

// --- tcp loopback transport ----------------------------------------------------

namespace {

class TcpChannel final : public Channel {
  public:
    explicit TcpChannel(int fd) : fd_(fd) {}
    ~TcpChannel() override {
        if (fd_ >= 0) ::close(fd_);
    }

    void send(const Message& m) override {
        std::string frame = m.wire_encode();
        std::size_t sent = 0;
        while (sent < frame.size()) {
            ssize_t n = ::send(fd_, frame.data() + sent, frame.size() - sent, 0);
            if (n <= 0) throw TransportError("tcp send failed");
            sent += static_cast<std::size_t>(n);
        }
    }

    Message receive() override {
        unsigned char header[4];
        read_exact(header, 4);
        std::uint32_t length = (static_cast<std::uint32_t>(header[0]) << 24) |
                               (static_cast<std::uint32_t>(header[1]) << 16) |
                               (static_cast<std::uint32_t>(header[2]) << 8) |
                               static_cast<std::uint32_t>(header[3]);
        if (length > (1u << 24)) throw TransportError("oversized frame");
        std::string body(length, '\0');
        read_exact(body.data(), length);
        return Message::from_json(body);
    }

    std::optional<Message> poll() override {
        throw TransportError("round-robin scheduling needs the in-process transport");
    }

  private:
    void read_exact(void* out, std::size_t bytes) {
        auto* dst = static_cast<char*>(out);
        std::size_t got = 0;
        while (got < bytes) {
            ssize_t n = ::recv(fd_, dst + got, bytes - got, 0);
            if (n <= 0) throw TransportError("tcp receive failed");
            got += static_cast<std::size_t>(n);
        }
    }

    int fd_;
};

}  // namespace

ChannelPair make_tcp_loopback_channel() {
    int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw TransportError("cannot create socket");
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = 0;
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
        ::listen(listener, 1) != 0) {
        ::close(listener);
        throw TransportError("cannot bind loopback listener");
    }
    socklen_t len = sizeof(addr);
    if (::getsockname(listener, reinterpret_cast<sockaddr*>(&addr), &len) != 0) {
        ::close(listener);
        throw TransportError("getsockname failed");
    }
    int client = ::socket(AF_INET, SOCK_STREAM, 0);
    if (client < 0 || ::connect(client, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
        if (client >= 0) ::close(client);
        ::close(listener);
        throw TransportError("cannot connect loopback socket");
    }
    int server = ::accept(listener, nullptr, nullptr);
    ::close(listener);
    if (server < 0) {
        ::close(client);
        throw TransportError("accept failed");
    }
    ChannelPair pair;
    pair.left = std::make_unique<TcpChannel>(server);
    pair.right = std::make_unique<TcpChannel>(client);
    return pair;
}

// --- backends ----------------------------------------------------------------

std::string ProverBehavior::answer(int, int, std::uint64_t) {
    throw ProtocolViolation("joint backend asked for a single-prover answer");
}

std::pair<std::string, std::string> ProverBehavior::joint_answer(int, int, std::uint64_t) {
    throw ProtocolViolation("split backend asked for a joint answer");
}

namespace {

class DeterministicBackend final : public ProverBehavior {
  public:
    DeterministicBackend(const Game& game, DeterministicStrategy strategy)
        : strategy_(std::move(strategy)) {
        strategy_.validate(game);
        for (int i = 0; i < game.question_count(); ++i)
            keys_.push_back(strategy_.answer[i].sign_string(game.bcs().context(i)));
    }
    std::string answer(int, int question, std::uint64_t) override { return keys_.at(question); }

  private:
    DeterministicStrategy strategy_;
    std::vector<std::string> keys_;
};

class SharedRandomnessBackend final : public ProverBehavior {
  public:
    SharedRandomnessBackend(const Game& game, SharedRandomnessStrategy strategy,
                            std::uint64_t master)
        : game_(&game), strategy_(std::move(strategy)), master_(master) {}
    std::string answer(int, int question, std::uint64_t round) override {
        Int seed;
        if (strategy_.seed_count.fits_ulong_p()) {
            seed = Int(derive_seed(master_, round) % strategy_.seed_count.get_ui());
        } else {
            seed = Int(derive_seed(master_, round));
        }
        Assignment a = strategy_.answer(seed, question);
        return a.sign_string(game_->bcs().context(question));
    }

  private:
    const Game* game_;
    SharedRandomnessStrategy strategy_;
    std::uint64_t master_;
};

class HonestBackend final : public ProverBehavior {
  public:
    HonestBackend(const CompiledGame& g, Assignment phi_star, std::uint64_t master)
        : prover_(g, std::move(phi_star)), master_(master) {}
    std::string answer(int, int question, std::uint64_t round) override {
        // Both provers derive the same tapes: pre-shared randomness.
        Rng rng(derive_seed(master_, round));
        HonestTapes tapes = draw_honest_tapes(prover_.game(), rng);
        return prover_.answer(question, tapes);
    }

  private:
    HonestProver prover_;
    std::uint64_t master_;
};

class SimulatorBackend final : public ProverBehavior {
  public:
    SimulatorBackend(const CompiledGame& g, std::uint64_t master) : g_(&g), master_(master) {}
    bool joint() const override { return true; }
    std::pair<std::string, std::string> joint_answer(int qa, int qb,
                                                     std::uint64_t round) override {
        Rng rng(derive_seed(master_, round));
        return simulate_answers(*g_, qa, qb, rng);
    }

  private:
    const CompiledGame* g_;
    std::uint64_t master_;
};

}  // namespace

std::shared_ptr<ProverBehavior> deterministic_backend(const Game& game,
                                                      DeterministicStrategy strategy) {
    return std::make_shared<DeterministicBackend>(game, std::move(strategy));
}

std::shared_ptr<ProverBehavior> shared_randomness_backend(const Game& game,
                                                          SharedRandomnessStrategy strategy,
                                                          std::uint64_t master_seed) {
    return std::make_shared<SharedRandomnessBackend>(game, std::move(strategy), master_seed);
}

std::shared_ptr<ProverBehavior> honest_backend(const CompiledGame& g, Assignment phi_star,
                                               std::uint64_t master_seed) {
    return std::make_shared<HonestBackend>(g, std::move(phi_star), master_seed);
}

std::shared_ptr<ProverBehavior> simulator_backend(const CompiledGame& g,
                                                  std::uint64_t master_seed) {
    return std::make_shared<SimulatorBackend>(g, master_seed);
}

// --- the referee ---------------------------------------------------------------

Rat ProtocolResult::acceptance() const {
    if (rounds == 0) return Rat(0);
    Rat r(static_cast<unsigned long>(wins), static_cast<unsigned long>(rounds));
    r.canonicalize();
    return r;
}

std::string ProtocolResult::transcript_ndjson() const {
    std::string out;
    for (const auto& m : transcript) out += m.to_json() + "\n";
    return out;
}

namespace {

// A prover actor: services its channel until a shutdown frame (round -1).
void actor_loop(Channel& channel, ProverBehavior& behavior, int prover_index) {
    for (;;) {
        Message m = channel.receive();
        if (m.kind != Message::Kind::Question) continue;
        if (m.round < 0) return;  // shutdown
        Message reply;
        reply.kind = Message::Kind::Answer;
        reply.round = m.round;
        reply.answer = behavior.answer(prover_index, m.question,
                                       static_cast<std::uint64_t>(m.round));
        channel.send(reply);
    }
}

// Round-robin flavor: one pending question handled per step.
bool actor_step(Channel& channel, ProverBehavior& behavior, int prover_index) {
    auto m = channel.poll();
    if (!m || m->kind != Message::Kind::Question) return false;
    if (m->round < 0) return false;
    Message reply;
    reply.kind = Message::Kind::Answer;
    reply.round = m->round;
    reply.answer =
        behavior.answer(prover_index, m->question, static_cast<std::uint64_t>(m->round));
    channel.send(reply);
    return true;
}

ChannelPair make_pair(Transport transport) {
    return transport == Transport::InProcess ? make_inprocess_channel()
                                             : make_tcp_loopback_channel();
}

}  // namespace

namespace {

// Referee loop shared by the plain and compiled runners; `judge` maps
// (question_a, question_b, answer_a, answer_b) to (win, violation).
template <typename Pi, typename Judge>
ProtocolResult referee_loop(const Pi& pi, const Judge& judge,
                            const std::shared_ptr<ProverBehavior>& backend,
                            std::uint64_t rounds, Transport transport, Schedule schedule,
                            std::uint64_t seed);

}  // namespace

ProtocolResult run_protocol(const Game& game, const std::shared_ptr<ProverBehavior>& backend,
                            std::uint64_t rounds, Transport transport, Schedule schedule,
                            std::uint64_t seed) {
    auto judge = [&game](int i, int j, const std::string& a, const std::string& b,
                         bool* violation) {
        try {
            Assignment phi = Assignment::from_sign_string(game.bcs().context(i), a);
            Assignment psi = Assignment::from_sign_string(game.bcs().context(j), b);
            return game.win(phi, psi, i, j);
        } catch (const Error&) {
            *violation = true;
            return false;
        }
    };
    return referee_loop(game.pi(), judge, backend, rounds, transport, schedule, seed);
}

ProtocolResult run_protocol_compiled(const CompiledGame& g,
                                     const std::shared_ptr<ProverBehavior>& backend,
                                     std::uint64_t rounds, Transport transport,
                                     Schedule schedule, std::uint64_t seed) {
    auto judge = [&g](int qa, int qb, const std::string& a, const std::string& b,
                      bool* violation) {
        const TableauSystem& tab = g.tableau();
        PairSampler checker(g, qa, qb);
        auto values_a = tab.window_values(checker.left_constraint(), checker.left_window(),
                                          [&] {
                                              try {
                                                  return string_to_signs(a);
                                              } catch (const Error&) {
                                                  return SignVec{};
                                              }
                                          }());
        auto values_b = tab.window_values(checker.right_constraint(), checker.right_window(),
                                          [&] {
                                              try {
                                                  return string_to_signs(b);
                                              } catch (const Error&) {
                                                  return SignVec{};
                                              }
                                          }());
        if (!values_a || !values_b) {
            *violation = true;
            return false;
        }
        PairSampler::Draw draw{*values_a, *values_b};
        return checker.wins(draw);
    };
    return referee_loop(g.sub_pi(), judge, backend, rounds, transport, schedule, seed);
}

namespace {

template <typename Pi, typename Judge>
ProtocolResult referee_loop(const Pi& pi, const Judge& judge,
                            const std::shared_ptr<ProverBehavior>& backend,
                            std::uint64_t rounds, Transport transport, Schedule schedule,
                            std::uint64_t seed) {
    if (rounds == 0) throw UsageError("the protocol needs at least one round");
    if (schedule == Schedule::RoundRobin && transport != Transport::InProcess)
        throw TransportError("round-robin scheduling needs the in-process transport");

    ProtocolResult result;
    Rng referee_rng(seed);

    ChannelPair to_a = make_pair(transport);
    ChannelPair to_b = make_pair(transport);

    std::thread thread_a, thread_b, thread_joint;
    if (schedule == Schedule::Threads) {
        if (backend->joint()) {
            // The zero-knowledge simulator: one actor behind both channels.
            Channel* ca = to_a.right.get();
            Channel* cb = to_b.right.get();
            ProverBehavior* behavior = backend.get();
            thread_joint = std::thread([ca, cb, behavior] {
                auto next_question = [](Channel& c) {
                    for (;;) {
                        Message m = c.receive();
                        if (m.kind == Message::Kind::Question) return m;
                    }
                };
                for (;;) {
                    Message qa = next_question(*ca);
                    if (qa.round < 0) return;
                    Message qb = next_question(*cb);
                    auto [a, b] = behavior->joint_answer(
                        qa.question, qb.question, static_cast<std::uint64_t>(qa.round));
                    Message ra{Message::Kind::Answer, qa.round, -1, a, false};
                    Message rb{Message::Kind::Answer, qb.round, -1, b, false};
                    ca->send(ra);
                    cb->send(rb);
                }
            });
        } else {
            thread_a = std::thread(
                [&to_a, backend] { actor_loop(*to_a.right, *backend, 0); });
            thread_b = std::thread(
                [&to_b, backend] { actor_loop(*to_b.right, *backend, 1); });
        }
    }

    for (std::uint64_t r = 0; r < rounds; ++r) {
        auto [i, j] = pi.sample(referee_rng);
        int round = static_cast<int>(r);
        Message qa{Message::Kind::Question, round, i, "", false};
        Message qb{Message::Kind::Question, round, j, "", false};
        to_a.left->send(qa);
        to_b.left->send(qb);
        result.transcript.push_back(qa);
        result.transcript.push_back(qb);

        if (schedule == Schedule::RoundRobin) {
            if (backend->joint()) {
                Message mqa = *to_a.right->poll();
                Message mqb = *to_b.right->poll();
                auto [a, b] = backend->joint_answer(mqa.question, mqb.question,
                                                    static_cast<std::uint64_t>(round));
                to_a.right->send({Message::Kind::Answer, round, -1, a, false});
                to_b.right->send({Message::Kind::Answer, round, -1, b, false});
            } else {
                while (actor_step(*to_a.right, *backend, 0)) {}
                while (actor_step(*to_b.right, *backend, 1)) {}
            }
        }

        Message aa = to_a.left->receive();
        Message ab = to_b.left->receive();
        result.transcript.push_back(aa);
        result.transcript.push_back(ab);

        // Total referee: malformed answers lose, never raise.
        bool violation = false;
        bool win = judge(i, j, aa.answer, ab.answer, &violation);
        if (violation) ++result.violations;
        if (win) ++result.wins;
        ++result.rounds;
        Message verdict{Message::Kind::Verdict, round, -1, "", win};
        to_a.left->send(verdict);
        to_b.left->send(verdict);
        result.transcript.push_back(verdict);
        if (schedule == Schedule::RoundRobin) {
            // Drain the verdicts so the queues stay bounded.
            to_a.right->poll();
            to_b.right->poll();
        }
    }

    // Shutdown.
    Message bye{Message::Kind::Question, -1, -1, "", false};
    to_a.left->send(bye);
    to_b.left->send(bye);
    if (thread_a.joinable()) thread_a.join();
    if (thread_b.joinable()) thread_b.join();
    if (thread_joint.joinable()) thread_joint.join();
    return result;
}

}  // namespace

ValueEstimate estimate_value(const Game& game, const std::shared_ptr<ProverBehavior>& backend,
                             std::uint64_t rounds, std::uint64_t seed, Transport transport,
                             Schedule schedule) {
    if (rounds == 0) throw UsageError("estimate_value needs rounds >= 1");
    ProtocolResult result = run_protocol(game, backend, rounds, transport, schedule, seed);
    ValueEstimate estimate;
    estimate.frequency = result.acceptance();
    estimate.rounds = rounds;
    double p = rat_to_double(estimate.frequency);
    double margin = 1.96 * std::sqrt(p * (1 - p) / static_cast<double>(rounds));
    estimate.low = std::max(0.0, p - margin);
    estimate.high = std::min(1.0, p + margin);
    return estimate;
}

}  // namespace bcszk
