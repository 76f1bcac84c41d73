#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "bcszk/errors.hpp"
#include "bcszk/rational.hpp"
#include "bcszk/rng.hpp"

namespace bcszk {

// Question distribution pi over [m] x [m], exact rationals. Besides the
// dense form there are two implicit forms: uniform, and the subdivision
// product pi_sub(ij,kl) = pi(i,k) / (m_i * m_k), which must stay implicit
// because subdivided games can have far too many question pairs for a dense
// table.
class QuestionDistribution {
  public:
    enum class Kind { Uniform, Dense, Subdivided };

    static QuestionDistribution uniform(int m);
    static QuestionDistribution dense(std::vector<std::vector<Rat>> weights);
    static QuestionDistribution subdivided(QuestionDistribution base,
                                           std::vector<int> clause_counts);

    Kind kind() const { return kind_; }
    int size() const { return m_; }

    Rat weight(int i, int j) const;
    Rat total() const;

    bool is_uniform() const;
    bool is_maximized_on_diagonal() const;
    bool is_strictly_positive() const;

    std::pair<int, int> sample(Rng& rng) const;

    // Dense accessors (Kind::Dense only).
    const std::vector<std::vector<Rat>>& weights() const;
    // Subdivision accessors (Kind::Subdivided only).
    const QuestionDistribution& base() const;
    const std::vector<int>& clause_counts() const;
    std::pair<int, int> flat_to_pair(int flat) const;  // flat question -> (i, j)
    int pair_to_flat(int i, int j) const;

    // Materializes a dense table (guarded by size).
    std::vector<std::vector<Rat>> to_dense(long long max_entries = 1 << 22) const;

  private:
    QuestionDistribution() = default;

    Kind kind_ = Kind::Uniform;
    int m_ = 0;
    std::vector<std::vector<Rat>> dense_;            // Dense
    std::shared_ptr<QuestionDistribution> base_;     // Subdivided
    std::vector<int> clause_counts_;                 // Subdivided
    std::vector<int> offsets_;                       // Subdivided: prefix sums
    mutable std::shared_ptr<std::vector<Int>> sample_weights_;  // Dense sampling cache
};

}  // namespace bcszk
