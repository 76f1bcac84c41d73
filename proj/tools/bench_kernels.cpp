// Benchmark of the enumeration/sampling kernels against their serial
// reference implementations. The parallel paths must return identical
// results; this tool reports timings and verifies agreement.

#include <chrono>
#include <iomanip>
#include <iostream>

#include "bcszk/bcs_io.hpp"
#include "bcszk/classical_value.hpp"
#include "bcszk/simulator.hpp"

using namespace bcszk;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_call(F&& f) {
    auto start = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void report(const std::string& kernel, double serial, double parallel, bool agree) {
    std::cout << std::left << std::setw(26) << kernel << std::right << std::fixed
              << std::setprecision(3) << std::setw(10) << serial << " s" << std::setw(10)
              << parallel << " s" << std::setw(9) << std::setprecision(2)
              << (parallel > 0 ? serial / parallel : 0.0) << "x   "
              << (agree ? "results agree" : "MISMATCH") << "\n";
}

CompiledGame depth2_game() {
    Bcs b;
    b.variables = {"x", "y"};
    b.constraints.push_back(Constraint::unit({"x", "y"}, "x", -1));
    Perm5 sigma = pinned_cycles().sigma_default;
    Perm5 rho = Perm5::from_cycle({1, 3, 2, 4, 5});
    Pbp p;
    p.sigma = sigma;
    p.instructions.push_back({"x", rho, sigma * rho});
    p.instructions.push_back({"x", rho.inverse(), rho.inverse()});
    std::vector<std::vector<Rat>> w = {{make_rat(1)}};
    return compile_pipeline(b, QuestionDistribution::dense(w), 1, {p});
}

}  // namespace

int main() {
    std::cout << "kernel                        serial   parallel  speedup\n";

    {
        auto [b, pi] = parse_bcs(read_file(FIXTURE_DIR "/magic_square.json"));
        Game game = build_game(std::move(b), std::move(pi));
        Rat serial_value, parallel_value;
        double ts = time_call([&] { serial_value = classical_value_serial(game); });
        double tp = time_call([&] { parallel_value = classical_value(game); });
        report("classical value search", ts, tp, serial_value == parallel_value);
    }

    {
        CompiledGame g = depth2_game();
        SampleCounts serial_counts, parallel_counts;
        const std::uint64_t n = 2'000'000;
        double ts = time_call([&] { serial_counts = sample_counts_serial(g, 3, 9, n, 42); });
        double tp = time_call([&] { parallel_counts = sample_counts(g, 3, 9, n, 42); });
        report("simulator batch sampling", ts, tp, serial_counts == parallel_counts);
    }

    {
        CompiledGame g = depth2_game();
        const TableauSystem& sys = g.tableau();
        CompletionSweep serial_sweep, parallel_sweep;
        double ts = time_call([&] { serial_sweep = completion_sweep(sys, 0, false); });
        double tp = time_call([&] { parallel_sweep = completion_sweep(sys, 0, true); });
        bool agree = serial_sweep.cases == parallel_sweep.cases &&
                     serial_sweep.checker_failures == parallel_sweep.checker_failures &&
                     serial_sweep.perturbations == parallel_sweep.perturbations &&
                     serial_sweep.ok() && parallel_sweep.ok();
        report("tableau completion sweep", ts, tp, agree);
    }

    return 0;
}
