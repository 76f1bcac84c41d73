// bcszk: boolean-constraint-system games, their zero-knowledge compilation,
// simulation, and two-prover protocol runs.

#include <CLI11.hpp>

#include <iostream>

#include "bcszk/classical_value.hpp"
#include "bcszk/protocol.hpp"

namespace {

using namespace bcszk;

std::string out_or_stdout(const std::string& out_path, const std::string& payload) {
    if (out_path.empty()) {
        std::cout << payload << "\n";
    } else {
        write_file(out_path, payload);
    }
    return out_path;
}

struct PipelinePass {
    std::string name;
    int arg = 0;
};

std::vector<PipelinePass> parse_pipeline(const std::string& text) {
    std::vector<PipelinePass> passes;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t comma = text.find(',', start);
        std::string token = text.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start);
        if (!token.empty()) {
            PipelinePass pass;
            auto colon = token.find(':');
            pass.name = token.substr(0, colon);
            if (colon != std::string::npos) {
                try {
                    pass.arg = std::stoi(token.substr(colon + 1));
                } catch (const std::exception&) {
                    throw UsageError("bad pass argument in '" + token + "'");
                }
            }
            passes.push_back(pass);
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (passes.empty()) throw UsageError("empty pipeline");
    return passes;
}

int run_transform(const std::string& in_path, const std::string& pipeline,
                  const std::string& out_path, const Limits& limits) {
    auto [b, pi] = parse_bcs(read_file(in_path));
    auto passes = parse_pipeline(pipeline);

    // A trailing [obl:<n>,]tab,subdiv group compiles to the clause-window
    // game and dumps the compiled format.
    std::size_t tab_at = passes.size();
    for (std::size_t k = 0; k < passes.size(); ++k)
        if (passes[k].name == "tab") tab_at = k;
    std::size_t stop = tab_at;
    int degree = 1;
    if (tab_at != passes.size()) {
        if (tab_at + 2 != passes.size() || passes[tab_at + 1].name != "subdiv")
            throw UsageError("'tab' must be the next-to-last pass, followed by 'subdiv'");
        if (tab_at > 0 && passes[tab_at - 1].name == "obl") {
            degree = passes[tab_at - 1].arg;
            stop = tab_at - 1;
        }
    }

    for (std::size_t k = 0; k < stop; ++k) {
        const auto& pass = passes[k];
        if (pass.name == "obl") {
            if (pass.arg < 1) throw UsageError("obl:<n> needs n >= 1");
            b = obliviate(b, pass.arg);
        } else if (pass.name == "to3sat") {
            b = to_3sat(b, limits).system;
        } else if (pass.name == "subdiv") {
            auto plan = natural_subdivision_plan(b, limits);
            std::tie(b, pi) = subdivide(b, plan, pi, limits);
        } else if (pass.name == "repeat") {
            if (pass.arg < 1) throw UsageError("repeat:<n> needs n >= 1");
            std::tie(b, pi) = parallel_repeat(b, pi, pass.arg, limits);
        } else if (pass.name == "orac") {
            std::tie(b, pi) = oracularize(build_game(b, pi), limits);
        } else {
            throw UsageError("unknown pass '" + pass.name + "'");
        }
    }

    if (tab_at != passes.size()) {
        CompiledGame g = compile_pipeline(b, pi, degree, {}, limits);
        out_or_stdout(out_path, serialize_compiled(g));
    } else {
        out_or_stdout(out_path, serialize_bcs(b, pi));
    }
    return 0;
}

std::shared_ptr<ProverBehavior> make_backend(const std::string& name, const CompiledGame& g,
                                             const std::string& assignment_signs,
                                             std::uint64_t seed) {
    if (name == "simulator") return simulator_backend(g, derive_seed(seed, 0x51));
    if (name == "honest") {
        if (assignment_signs.empty())
            throw UsageError("--backend honest needs --assignment over the original variables");
        Assignment star =
            Assignment::from_sign_string(g.original().variables, assignment_signs);
        return honest_backend(g, star, derive_seed(seed, 0x52));
    }
    throw UsageError("compiled games support --backend honest|simulator");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boolean constraint system games and their zero-knowledge compilation"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    long long budget = 0;
    std::string out_path;
    app.add_option("--seed", seed, "master seed for all randomized operations");
    app.add_option("--budget", budget, "enumeration budget override");
    app.add_option("--out", out_path, "output path (stdout when omitted)");

    std::string in_path, pipeline, backend_name, assignment_signs, pair_text, transport_name =
        "inproc", schedule_name = "roundrobin";
    std::uint64_t rounds = 10000, samples = 100000;
    int repeat_n = 2;
    std::uint64_t max_pairs = 4096;
    bool aggregate = false, serial = false, witness = false;

    auto* validate_cmd = app.add_subcommand("validate", "parse and check a BCS document");
    validate_cmd->add_option("file", in_path)->required();

    auto* value_cmd = app.add_subcommand("value", "exact classical value by exhaustive search");
    value_cmd->add_option("file", in_path)->required();
    value_cmd->add_flag("--serial", serial, "use the plain pair-search reference");
    value_cmd->add_flag("--witness", witness, "print a maximizing strategy pair");

    auto* transform_cmd = app.add_subcommand("transform", "apply soundness-preserving passes");
    transform_cmd->add_option("file", in_path)->required();
    transform_cmd->add_option("--pipeline", pipeline,
                              "comma list: obl:<n>, to3sat, subdiv, repeat:<n>, orac, tab")
        ->required();

    auto* repeat_cmd = app.add_subcommand("repeat", "n-fold parallel repetition");
    repeat_cmd->add_option("file", in_path)->required();
    repeat_cmd->add_option("-n", repeat_n, "repetition count")->required();

    auto* compile_cmd = app.add_subcommand("compile-pzk",
                                           "compile to the zero-knowledge clause-window game");
    compile_cmd->add_option("file", in_path)->required();

    auto* simulate_cmd = app.add_subcommand("simulate", "sample the compiled answer simulator");
    simulate_cmd->add_option("file", in_path)->required();
    simulate_cmd->add_option("--pair", pair_text, "question pair 'a,b' (1-based)")->required();
    simulate_cmd->add_option("--samples", samples);
    simulate_cmd->add_flag("--aggregate", aggregate, "print counts instead of samples");

    auto* zk_cmd = app.add_subcommand("zk-check", "simulator-versus-oracle statistical check");
    zk_cmd->add_option("file", in_path)->required();
    zk_cmd->add_option("--samples", samples);
    zk_cmd->add_option("--max-pairs", max_pairs, "cap on checked question pairs");

    auto* run_cmd = app.add_subcommand("run", "two-prover protocol rounds");
    run_cmd->add_option("file", in_path)->required();
    run_cmd->add_option("--backend", backend_name, "deterministic|honest|simulator")->required();
    run_cmd->add_option("--rounds", rounds);
    run_cmd->add_option("--assignment", assignment_signs,
                        "sign string over the original variables");
    run_cmd->add_option("--transport", transport_name, "inproc|tcp");
    run_cmd->add_option("--schedule", schedule_name, "roundrobin|threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    Limits limits = default_limits();
    if (budget > 0) {
        limits.oracle_budget = static_cast<unsigned long long>(budget);
        limits.search_bound = static_cast<unsigned long long>(budget);
    }

    try {
        if (*validate_cmd) {
            auto [b, pi] = parse_bcs(read_file(in_path));
            std::cout << "ok: " << b.variables.size() << " variables, " << b.m()
                      << " contexts, distribution "
                      << (pi.is_uniform() ? "uniform" : "matrix") << "\n";
            return 0;
        }
        if (*value_cmd) {
            auto [b, pi] = parse_bcs(read_file(in_path));
            Game game = build_game(std::move(b), std::move(pi));
            if (witness) {
                auto w = classical_value_witness(game, limits);
                std::cout << rat_to_string(w.value) << "\n";
                for (int i = 0; i < game.question_count(); ++i)
                    std::cout << "  row " << i + 1 << ": "
                              << w.row_player.answer[i].sign_string(game.bcs().context(i))
                              << "  column " << i + 1 << ": "
                              << w.column_player.answer[i].sign_string(game.bcs().context(i))
                              << "\n";
            } else {
                Rat value = serial ? classical_value_serial(game, limits)
                                   : classical_value(game, limits);
                std::cout << rat_to_string(value) << "\n";
            }
            return 0;
        }
        if (*transform_cmd) return run_transform(in_path, pipeline, out_path, limits);
        if (*repeat_cmd) {
            auto [b, pi] = parse_bcs(read_file(in_path));
            auto [rb, rpi] = parallel_repeat(b, pi, repeat_n, limits);
            out_or_stdout(out_path, serialize_bcs(rb, rpi));
            return 0;
        }
        if (*compile_cmd) {
            auto [b, pi] = parse_bcs(read_file(in_path));
            CompiledGame g = compile_pzk(b, pi, limits);
            out_or_stdout(out_path, serialize_compiled(g));
            return 0;
        }
        if (*simulate_cmd) {
            CompiledGame g = parse_compiled(read_file(in_path), limits);
            auto comma = pair_text.find(',');
            if (comma == std::string::npos) throw UsageError("--pair needs 'a,b'");
            int qa = std::stoi(pair_text.substr(0, comma)) - 1;
            int qb = std::stoi(pair_text.substr(comma + 1)) - 1;
            if (qa < 0 || qb < 0 || qa >= g.question_count() || qb >= g.question_count())
                throw UsageError("pair out of range");
            PairSampler sampler(g, qa, qb);
            std::map<std::pair<std::string, std::string>, std::uint64_t> counts;
            std::string lines;
            for (std::uint64_t k = 0; k < samples; ++k) {
                Rng rng(derive_seed(seed, k));
                auto draw = sampler.sample(rng);
                auto key = std::make_pair(sampler.left_string(draw), sampler.right_string(draw));
                if (aggregate) {
                    ++counts[key];
                } else {
                    Json line;
                    line["phi"] = key.first;
                    line["psi"] = key.second;
                    lines += line.dump() + "\n";
                }
            }
            if (aggregate) {
                Json doc;
                for (const auto& [key, count] : counts)
                    doc[key.first + "|" + key.second] = count;
                out_or_stdout(out_path, doc.dump());
            } else {
                out_or_stdout(out_path, lines);
            }
            return 0;
        }
        if (*zk_cmd) {
            CompiledGame g = parse_compiled(read_file(in_path), limits);
            std::vector<std::pair<int, int>> pairs;
            std::uint64_t all =
                static_cast<std::uint64_t>(g.question_count()) * (g.question_count() + 1) / 2;
            if (all > max_pairs) {
                Rng rng(derive_seed(seed, 0x9a));
                std::set<std::pair<int, int>> chosen;
                while (chosen.size() < max_pairs) {
                    int a = static_cast<int>(rng.below(g.question_count()));
                    int b = static_cast<int>(rng.below(g.question_count()));
                    chosen.insert({std::min(a, b), std::max(a, b)});
                }
                pairs.assign(chosen.begin(), chosen.end());
            }
            ZkReport report = zk_check(g, samples, seed, limits, pairs);
            out_or_stdout(out_path, zk_report_to_json(report));
            return report.all_ok && report.pi_prime_invariant ? 0 : 1;
        }
        if (*run_cmd) {
            Transport transport =
                transport_name == "tcp" ? Transport::TcpLoopback : Transport::InProcess;
            Schedule schedule =
                schedule_name == "threads" ? Schedule::Threads : Schedule::RoundRobin;
            if (transport == Transport::TcpLoopback) schedule = Schedule::Threads;

            std::string text = read_file(in_path);
            ProtocolResult result;
            if (text.find("bcszk-compiled") != std::string::npos) {
                CompiledGame g = parse_compiled(text, limits);
                auto backend = make_backend(backend_name, g, assignment_signs, seed);
                result = run_protocol_compiled(g, backend, rounds, transport, schedule, seed);
            } else {
                auto [b, pi] = parse_bcs(text);
                Game game = build_game(std::move(b), std::move(pi));
                if (backend_name != "deterministic")
                    throw UsageError("plain games support --backend deterministic");
                Assignment star =
                    assignment_signs.empty()
                        ? game.bcs().find_satisfying(limits).value_or(Assignment{})
                        : Assignment::from_sign_string(game.bcs().variables, assignment_signs);
                if (star.empty()) throw NoSatisfyingAssignment("no satisfying assignment found");
                auto backend =
                    deterministic_backend(game, strategy_from_assignment(game.bcs(), star));
                result = run_protocol(game, backend, rounds, transport, schedule, seed);
            }
            std::cout << "acceptance " << result.wins << "/" << result.rounds << " = "
                      << rat_to_string(result.acceptance())
                      << (result.violations ? (" (" + std::to_string(result.violations) +
                                               " protocol violations)")
                                            : "")
                      << "\n";
            if (!out_path.empty()) write_file(out_path, result.transcript_ndjson());
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DistributionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
