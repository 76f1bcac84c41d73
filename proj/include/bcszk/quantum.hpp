#pragma once

#include <Eigen/Dense>

#include <map>

#include "bcszk/game.hpp"
#include "bcszk/strategy.hpp"

namespace bcszk {

using Mat = Eigen::MatrixXcd;

// Numerical tolerance for the quantum evaluator. Everything else in the
// repo is exact-rational; spectra live here.
constexpr double kNumTol = 1e-9;

// Tracial states available to finite-dimensional strategies: convex
// combinations of per-block normalized traces. All strategy matrices must be
// block diagonal with respect to the partition, which makes the functional
// tracial on the generated algebra by construction. A single block is the
// plain normalized trace.
struct TraceSpec {
    std::vector<int> block_dims;
    std::vector<double> block_weights;

    static TraceSpec normalized(int dim) { return {{dim}, {1.0}}; }

    int dim() const;
    double apply(const Mat& a) const;
    bool respects_blocks(const Mat& a, double tol) const;
};

// A synchronous strategy: one projective measurement per question, outcomes
// indexed by satisfying assignments, evaluated in the tracial state above.
struct QuantumSyncStrategy {
    int dim = 0;
    // Per question, aligned with the answer enumeration order; entries may be
    // zero projectors.
    std::vector<std::vector<Mat>> measurements;
    TraceSpec trace;
};

// Per-context observables (one Hermitian involution per context variable).
// Different contexts may assign the same variable different operators; no
// commutation is assumed.
struct ObservableFamily {
    int dim = 0;
    std::vector<std::map<std::string, Mat>> observables;  // per question
    TraceSpec trace;
};

// Hermiticity, idempotence, completeness and block structure within kNumTol.
// Throws InvalidMeasurement.
void validate_strategy(const Game& game, const QuantumSyncStrategy& s,
                       const Limits& limits = default_limits());
void validate_observables(const Game& game, const ObservableFamily& o);

// p(phi,psi|i,j) = tau(M^i_phi M^j_psi), tiny negatives clamped to zero and
// each pair renormalized. Float tables; rationalization is display-only.
FloatCorrelation correlation_from_quantum(const Game& game, const QuantumSyncStrategy& s,
                                          const Limits& limits = default_limits());

// sum over pairs and disagreeing answers of pi(i,j) * ||M^i_phi M^j_psi||^2
// in the trace norm. Equals 1 - omega up to numerics.
double defect_mu_pi(const Game& game, const QuantumSyncStrategy& s,
                    const Limits& limits = default_limits());

enum class FreeWeight { Inter, Sat, Clause, Comm };

// Defects of the free-algebra weight functions, evaluated on per-context
// observables. Phi projections are ordered products over the context order.
// Clause needs the subdivision's clause lists (SubdivisionPlan::clauses) and
// throws MissingSubdivision without them.
double defect_free(const Game& game, const ObservableFamily& o, FreeWeight which,
                   const std::vector<std::vector<Constraint>>* clause_lists = nullptr,
                   const Limits& limits = default_limits());

// Ordered projector product for an assignment over `vars` under a context's
// observables.
Mat phi_projection(const std::map<std::string, Mat>& observables, const VarList& vars,
                   const SignVec& signs, int dim);

// Builders.
QuantumSyncStrategy strategy_from_observables(const Game& game, const ObservableFamily& o,
                                              const Limits& limits = default_limits());
QuantumSyncStrategy strategy_from_deterministic(const Game& game,
                                                const DeterministicStrategy& s,
                                                const Limits& limits = default_limits());
QuantumSyncStrategy random_projective_strategy(const Game& game, int dim, Rng& rng,
                                               const Limits& limits = default_limits());

// The two-qubit Pauli solution of the magic square fixture (d = 4).
ObservableFamily magic_square_observables();
QuantumSyncStrategy magic_square_strategy(const Game& magic_square_game);

// Fixture format: JSON with base64 row-major complex matrices (interleaved
// re/im little-endian doubles).
std::string strategy_to_json_string(const QuantumSyncStrategy& s);
QuantumSyncStrategy strategy_from_json_string(const std::string& text);

}  // namespace bcszk
