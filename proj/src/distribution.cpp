#include "bcszk/distribution.hpp"

#include <algorithm>

namespace bcszk {

QuestionDistribution QuestionDistribution::uniform(int m) {
    if (m <= 0) throw DistributionError("uniform distribution needs m >= 1");
    QuestionDistribution d;
    d.kind_ = Kind::Uniform;
    d.m_ = m;
    return d;
}

QuestionDistribution QuestionDistribution::dense(std::vector<std::vector<Rat>> weights) {
    QuestionDistribution d;
    d.kind_ = Kind::Dense;
    d.m_ = static_cast<int>(weights.size());
    if (d.m_ == 0) throw DistributionError("empty weight matrix");
    Rat sum = 0;
    for (const auto& row : weights) {
        if (static_cast<int>(row.size()) != d.m_)
            throw DistributionError("weight matrix is not square");
        for (const auto& w : row) {
            if (w < 0) throw DistributionError("negative weight");
            sum += w;
        }
    }
    if (sum != 1)
        throw DistributionError("weights sum to " + rat_to_string(sum) + ", expected 1");
    d.dense_ = std::move(weights);
    return d;
}

QuestionDistribution QuestionDistribution::subdivided(QuestionDistribution base,
                                                      std::vector<int> clause_counts) {
    if (static_cast<int>(clause_counts.size()) != base.size())
        throw DistributionError("clause count list does not match base distribution");
    QuestionDistribution d;
    d.kind_ = Kind::Subdivided;
    d.base_ = std::make_shared<QuestionDistribution>(std::move(base));
    d.clause_counts_ = std::move(clause_counts);
    d.offsets_.reserve(d.clause_counts_.size() + 1);
    int total = 0;
    for (int c : d.clause_counts_) {
        if (c <= 0) throw DistributionError("clause count must be positive");
        d.offsets_.push_back(total);
        total += c;
    }
    d.offsets_.push_back(total);
    d.m_ = total;
    return d;
}

Rat QuestionDistribution::weight(int i, int j) const {
    if (i < 0 || j < 0 || i >= m_ || j >= m_)
        throw DimensionMismatch("question index out of range");
    switch (kind_) {
        case Kind::Uniform: return Rat(1, static_cast<long>(m_) * m_);
        case Kind::Dense: return dense_[i][j];
        case Kind::Subdivided: {
            auto [bi, _ji] = flat_to_pair(i);
            auto [bk, _jk] = flat_to_pair(j);
            return base_->weight(bi, bk) /
                   (Rat(clause_counts_[bi]) * Rat(clause_counts_[bk]));
        }
    }
    return Rat(0);
}

Rat QuestionDistribution::total() const {
    switch (kind_) {
        case Kind::Uniform: return Rat(1);
        case Kind::Dense: {
            Rat sum = 0;
            for (const auto& row : dense_)
                for (const auto& w : row) sum += w;
            return sum;
        }
        case Kind::Subdivided: return base_->total();
    }
    return Rat(0);
}

bool QuestionDistribution::is_uniform() const {
    switch (kind_) {
        case Kind::Uniform: return true;
        case Kind::Dense: {
            Rat expect(1, static_cast<long>(m_) * m_);
            for (const auto& row : dense_)
                for (const auto& w : row)
                    if (w != expect) return false;
            return true;
        }
        case Kind::Subdivided: {
            // pi_sub is uniform iff pi(i,k)/(m_i m_k) is the same for all i,k.
            Rat expect = base_->weight(0, 0) / (Rat(clause_counts_[0]) * Rat(clause_counts_[0]));
            int mb = base_->size();
            for (int i = 0; i < mb; ++i)
                for (int k = 0; k < mb; ++k)
                    if (base_->weight(i, k) /
                            (Rat(clause_counts_[i]) * Rat(clause_counts_[k])) != expect)
                        return false;
            return true;
        }
    }
    return false;
}

bool QuestionDistribution::is_maximized_on_diagonal() const {
    if (kind_ == Kind::Uniform) return true;
    if (kind_ == Kind::Dense) {
        for (int i = 0; i < m_; ++i)
            for (int j = 0; j < m_; ++j)
                if (dense_[i][i] < dense_[i][j] || dense_[i][i] < dense_[j][i]) return false;
        return true;
    }
    // Subdivided: check via the defining formula on base pairs.
    int mb = base_->size();
    for (int i = 0; i < mb; ++i) {
        Rat diag = base_->weight(i, i) / (Rat(clause_counts_[i]) * Rat(clause_counts_[i]));
        for (int k = 0; k < mb; ++k) {
            Rat off = base_->weight(i, k) / (Rat(clause_counts_[i]) * Rat(clause_counts_[k]));
            Rat off2 = base_->weight(k, i) / (Rat(clause_counts_[k]) * Rat(clause_counts_[i]));
            if (diag < off || diag < off2) return false;
        }
    }
    return true;
}

bool QuestionDistribution::is_strictly_positive() const {
    switch (kind_) {
        case Kind::Uniform: return true;
        case Kind::Dense:
            for (const auto& row : dense_)
                for (const auto& w : row)
                    if (w <= 0) return false;
            return true;
        case Kind::Subdivided: return base_->is_strictly_positive();
    }
    return false;
}

std::pair<int, int> QuestionDistribution::sample(Rng& rng) const {
    switch (kind_) {
        case Kind::Uniform:
            return {static_cast<int>(rng.below(m_)), static_cast<int>(rng.below(m_))};
        case Kind::Dense: {
            if (!sample_weights_) {
                Int lcm = 1;
                for (const auto& row : dense_)
                    for (const auto& w : row)
                        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w.get_den().get_mpz_t());
                auto weights = std::make_shared<std::vector<Int>>();
                weights->reserve(static_cast<std::size_t>(m_) * m_);
                for (const auto& row : dense_)
                    for (const auto& w : row) weights->push_back(w.get_num() * (lcm / w.get_den()));
                sample_weights_ = std::move(weights);
            }
            std::size_t flat = sample_weighted(rng, *sample_weights_);
            return {static_cast<int>(flat / m_), static_cast<int>(flat % m_)};
        }
        case Kind::Subdivided: {
            auto [bi, bk] = base_->sample(rng);
            int j = static_cast<int>(rng.below(clause_counts_[bi]));
            int l = static_cast<int>(rng.below(clause_counts_[bk]));
            return {offsets_[bi] + j, offsets_[bk] + l};
        }
    }
    return {0, 0};
}

const std::vector<std::vector<Rat>>& QuestionDistribution::weights() const {
    if (kind_ != Kind::Dense) throw DimensionMismatch("not a dense distribution");
    return dense_;
}

const QuestionDistribution& QuestionDistribution::base() const {
    if (kind_ != Kind::Subdivided) throw DimensionMismatch("not a subdivided distribution");
    return *base_;
}

const std::vector<int>& QuestionDistribution::clause_counts() const {
    if (kind_ != Kind::Subdivided) throw DimensionMismatch("not a subdivided distribution");
    return clause_counts_;
}

std::pair<int, int> QuestionDistribution::flat_to_pair(int flat) const {
    if (kind_ != Kind::Subdivided) throw DimensionMismatch("not a subdivided distribution");
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
    int i = static_cast<int>(it - offsets_.begin()) - 1;
    return {i, flat - offsets_[i]};
}

int QuestionDistribution::pair_to_flat(int i, int j) const {
    if (kind_ != Kind::Subdivided) throw DimensionMismatch("not a subdivided distribution");
    return offsets_.at(i) + j;
}

std::vector<std::vector<Rat>> QuestionDistribution::to_dense(long long max_entries) const {
    if (static_cast<long long>(m_) * m_ > max_entries)
        throw TooLarge("dense distribution would have " + std::to_string(m_) + "^2 entries");
    std::vector<std::vector<Rat>> out(m_, std::vector<Rat>(m_));
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j) out[i][j] = weight(i, j);
    return out;
}

}  // namespace bcszk
