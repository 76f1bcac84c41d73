#include "bcszk/quantum.hpp"

#include <json.hpp>

#include <cmath>

namespace bcszk {

int TraceSpec::dim() const {
    int d = 0;
    for (int b : block_dims) d += b;
    return d;
}

double TraceSpec::apply(const Mat& a) const {
    double value = 0;
    int offset = 0;
    for (std::size_t b = 0; b < block_dims.size(); ++b) {
        int d = block_dims[b];
        value += block_weights[b] * a.block(offset, offset, d, d).trace().real() / d;
        offset += d;
    }
    return value;
}

bool TraceSpec::respects_blocks(const Mat& a, double tol) const {
    if (block_dims.size() <= 1) return true;
    int offset_r = 0;
    for (int dr : block_dims) {
        int offset_c = 0;
        for (int dc : block_dims) {
            if (offset_r != offset_c &&
                a.block(offset_r, offset_c, dr, dc).cwiseAbs().maxCoeff() > tol)
                return false;
            offset_c += dc;
        }
        offset_r += dr;
    }
    return true;
}

namespace {

void check_trace_spec(const TraceSpec& t, int dim) {
    if (t.block_dims.size() != t.block_weights.size() || t.block_dims.empty())
        throw InvalidMeasurement("malformed trace specification");
    double total = 0;
    for (double w : t.block_weights) {
        if (w < -kNumTol) throw InvalidMeasurement("negative trace weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kNumTol)
        throw InvalidMeasurement("trace weights must be convex");
    if (t.dim() != dim) throw InvalidMeasurement("trace blocks do not tile the dimension");
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace

void validate_strategy(const Game& game, const QuantumSyncStrategy& s, const Limits& limits) {
    check_trace_spec(s.trace, s.dim);
    if (static_cast<int>(s.measurements.size()) != game.question_count())
        throw InvalidMeasurement("one measurement per question required");
    for (int i = 0; i < game.question_count(); ++i) {
        auto answers = game.answers(i).enumerate_satisfying_signs(limits);
        if (answers.size() != s.measurements[i].size())
            throw InvalidMeasurement("measurement " + std::to_string(i + 1) +
                                     " does not match the answer set");
        Mat sum = Mat::Zero(s.dim, s.dim);
        for (const Mat& proj : s.measurements[i]) {
            if (proj.rows() != s.dim || proj.cols() != s.dim)
                throw InvalidMeasurement("projector dimension mismatch");
            if (max_abs(proj - proj.adjoint()) > kNumTol)
                throw InvalidMeasurement("projector is not Hermitian");
            if (max_abs(proj * proj - proj) > kNumTol)
                throw InvalidMeasurement("projector is not idempotent");
            if (!s.trace.respects_blocks(proj, kNumTol))
                throw InvalidMeasurement("projector breaks the trace block structure");
            sum += proj;
        }
        if (max_abs(sum - Mat::Identity(s.dim, s.dim)) > kNumTol)
            throw InvalidMeasurement("measurement " + std::to_string(i + 1) +
                                     " does not sum to the identity");
    }
}

void validate_observables(const Game& game, const ObservableFamily& o) {
    check_trace_spec(o.trace, o.dim);
    if (static_cast<int>(o.observables.size()) != game.question_count())
        throw InvalidMeasurement("one observable set per question required");
    for (int i = 0; i < game.question_count(); ++i) {
        for (const auto& v : game.bcs().context(i)) {
            auto it = o.observables[i].find(v);
            if (it == o.observables[i].end())
                throw InvalidMeasurement("missing observable for " + v + " in context " +
                                         std::to_string(i + 1));
            const Mat& x = it->second;
            if (x.rows() != o.dim || x.cols() != o.dim)
                throw InvalidMeasurement("observable dimension mismatch");
            if (max_abs(x - x.adjoint()) > kNumTol)
                throw InvalidMeasurement("observable is not Hermitian");
            if (max_abs(x * x - Mat::Identity(o.dim, o.dim)) > kNumTol)
                throw InvalidMeasurement("observable squared is not the identity");
            if (!o.trace.respects_blocks(x, kNumTol))
                throw InvalidMeasurement("observable breaks the trace block structure");
        }
    }
}

FloatCorrelation correlation_from_quantum(const Game& game, const QuantumSyncStrategy& s,
                                          const Limits& limits) {
    validate_strategy(game, s, limits);
    FloatCorrelation p;
    int m = game.question_count();
    for (int i = 0; i < m; ++i) {
        auto rows_i = game.answers(i).enumerate_satisfying_signs(limits);
        for (int j = 0; j < m; ++j) {
            auto rows_j = game.answers(j).enumerate_satisfying_signs(limits);
            auto& table = p.tables[{i, j}];
            double total = 0;
            for (std::size_t a = 0; a < rows_i.size(); ++a)
                for (std::size_t b = 0; b < rows_j.size(); ++b) {
                    double value = s.trace.apply(s.measurements[i][a] * s.measurements[j][b]);
                    if (value < 0) {
                        if (value < -kNumTol)
                            throw InvalidMeasurement("correlation entry below -tolerance");
                        value = 0;
                    }
                    if (value == 0) continue;
                    table[{signs_to_string(rows_i[a]), signs_to_string(rows_j[b])}] = value;
                    total += value;
                }
            if (std::abs(total - 1.0) > 1e-6)
                throw InvalidMeasurement("pair table mass " + std::to_string(total));
            for (auto& [key, value] : table) value /= total;  // exact renormalization per pair
        }
    }
    return p;
}

double defect_mu_pi(const Game& game, const QuantumSyncStrategy& s, const Limits& limits) {
    validate_strategy(game, s, limits);
    double defect = 0;
    int m = game.question_count();
    for (int i = 0; i < m; ++i) {
        auto rows_i = game.answers(i).enumerate_satisfying_signs(limits);
        const VarList& ctx_i = game.bcs().context(i);
        for (int j = 0; j < m; ++j) {
            double weight = rat_to_double(game.pi().weight(i, j));
            if (weight == 0) continue;
            auto rows_j = game.answers(j).enumerate_satisfying_signs(limits);
            const VarList& ctx_j = game.bcs().context(j);
            const VarList& shared = game.intersection(i, j);
            for (std::size_t a = 0; a < rows_i.size(); ++a) {
                Assignment phi(ctx_i, rows_i[a]);
                for (std::size_t b = 0; b < rows_j.size(); ++b) {
                    Assignment psi(ctx_j, rows_j[b]);
                    if (phi.agrees_on(psi, shared)) continue;
                    Mat product = s.measurements[i][a] * s.measurements[j][b];
                    defect += weight * s.trace.apply(product.adjoint() * product);
                }
            }
        }
    }
    return defect;
}

Mat phi_projection(const std::map<std::string, Mat>& observables, const VarList& vars,
                   const SignVec& signs, int dim) {
    Mat acc = Mat::Identity(dim, dim);
    for (std::size_t k = 0; k < vars.size(); ++k) {
        const Mat& x = observables.at(vars[k]);
        acc = acc * ((Mat::Identity(dim, dim) + static_cast<double>(signs[k]) * x) / 2.0);
    }
    return acc;
}

double defect_free(const Game& game, const ObservableFamily& o, FreeWeight which,
                   const std::vector<std::vector<Constraint>>* clause_lists,
                   const Limits& limits) {
    validate_observables(game, o);
    const Bcs& b = game.bcs();
    int m = b.m();
    auto norm2 = [&](const Mat& a) { return o.trace.apply(a.adjoint() * a); };
    double defect = 0;

    switch (which) {
        case FreeWeight::Inter: {
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    if (i == j) continue;
                    double weight = rat_to_double(game.pi().weight(i, j));
                    if (weight == 0) continue;
                    for (const auto& x : game.intersection(i, j))
                        defect += weight * norm2(o.observables[i].at(x) - o.observables[j].at(x));
                }
            break;
        }
        case FreeWeight::Sat: {
            for (int i = 0; i < m; ++i) {
                double weight = rat_to_double(game.pi().weight(i, i));
                if (weight == 0) continue;
                const VarList& ctx = b.context(i);
                int k = static_cast<int>(ctx.size());
                if (k > limits.enumeration_bound_vars)
                    throw TooLarge("sat weight needs context enumeration");
                for (std::uint64_t ordinal = 0; ordinal < (1ULL << k); ++ordinal) {
                    SignVec signs = signvec_from_ordinal(ordinal, k);
                    if (b.constraint(i).contains_signs(signs)) continue;
                    defect += weight * norm2(phi_projection(o.observables[i], ctx, signs, o.dim));
                }
            }
            break;
        }
        case FreeWeight::Clause: {
            if (!clause_lists)
                throw MissingSubdivision("clause weight needs the subdivision's clause lists");
            if (static_cast<int>(clause_lists->size()) != m)
                throw MissingSubdivision("clause lists do not match the constraint count");
            for (int i = 0; i < m; ++i) {
                double weight = rat_to_double(game.pi().weight(i, i));
                if (weight == 0) continue;
                double mi = static_cast<double>((*clause_lists)[i].size());
                for (const auto& clause : (*clause_lists)[i]) {
                    const VarList& w = clause.context();
                    int k = static_cast<int>(w.size());
                    if (k > limits.enumeration_bound_vars)
                        throw TooLarge("clause weight needs window enumeration");
                    for (std::uint64_t ordinal = 0; ordinal < (1ULL << k); ++ordinal) {
                        SignVec signs = signvec_from_ordinal(ordinal, k);
                        if (clause.contains_signs(signs)) continue;
                        defect += weight / (mi * mi) *
                                  norm2(phi_projection(o.observables[i], w, signs, o.dim));
                    }
                }
            }
            break;
        }
        case FreeWeight::Comm: {
            for (int i = 0; i < m; ++i) {
                double weight = rat_to_double(game.pi().weight(i, i));
                if (weight == 0) continue;
                const VarList& ctx = b.context(i);
                for (const auto& x : ctx)
                    for (const auto& y : ctx) {
                        if (x == y) continue;
                        const Mat& mx = o.observables[i].at(x);
                        const Mat& my = o.observables[i].at(y);
                        defect += weight * norm2(mx * my - my * mx);
                    }
            }
            break;
        }
    }
    return defect;
}

QuantumSyncStrategy strategy_from_observables(const Game& game, const ObservableFamily& o,
                                              const Limits& limits) {
    validate_observables(game, o);
    QuantumSyncStrategy s;
    s.dim = o.dim;
    s.trace = o.trace;
    for (int i = 0; i < game.question_count(); ++i) {
        const VarList& ctx = game.bcs().context(i);
        std::vector<Mat> projectors;
        for (const auto& signs : game.answers(i).enumerate_satisfying_signs(limits))
            projectors.push_back(phi_projection(o.observables[i], ctx, signs, o.dim));
        s.measurements.push_back(std::move(projectors));
    }
    validate_strategy(game, s, limits);
    return s;
}

QuantumSyncStrategy strategy_from_deterministic(const Game& game,
                                                const DeterministicStrategy& det,
                                                const Limits& limits) {
    det.validate(game);
    QuantumSyncStrategy s;
    s.dim = 1;
    s.trace = TraceSpec::normalized(1);
    for (int i = 0; i < game.question_count(); ++i) {
        auto rows = game.answers(i).enumerate_satisfying_signs(limits);
        SignVec chosen = det.answer[i].signs_in_order(game.bcs().context(i));
        std::vector<Mat> projectors;
        for (const auto& row : rows) {
            Mat p(1, 1);
            p(0, 0) = (row == chosen) ? 1.0 : 0.0;
            projectors.push_back(p);
        }
        s.measurements.push_back(std::move(projectors));
    }
    return s;
}

QuantumSyncStrategy random_projective_strategy(const Game& game, int dim, Rng& rng,
                                               const Limits& limits) {
    auto gaussian = [&]() {
        // Box-Muller on the pinned generator.
        double u1 = std::max(rng.uniform01(), 1e-300);
        double u2 = rng.uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    };
    QuantumSyncStrategy s;
    s.dim = dim;
    s.trace = TraceSpec::normalized(dim);
    for (int i = 0; i < game.question_count(); ++i) {
        Mat g(dim, dim);
        for (int r = 0; r < dim; ++r)
            for (int c = 0; c < dim; ++c) g(r, c) = std::complex<double>(gaussian(), gaussian());
        Eigen::HouseholderQR<Mat> qr(g);
        Mat u = qr.householderQ();
        auto rows = game.answers(i).enumerate_satisfying_signs(limits);
        std::vector<Mat> projectors(rows.size(), Mat::Zero(dim, dim));
        for (int col = 0; col < dim; ++col) {
            std::size_t pick = rng.below(rows.size());
            projectors[pick] += u.col(col) * u.col(col).adjoint();
        }
        s.measurements.push_back(std::move(projectors));
    }
    validate_strategy(game, s, limits);
    return s;
}

ObservableFamily magic_square_observables() {
    Mat I2 = Mat::Identity(2, 2);
    Mat X(2, 2), Y(2, 2), Z(2, 2);
    X << 0, 1, 1, 0;
    Y << 0, std::complex<double>(0, -1), std::complex<double>(0, 1), 0;
    Z << 1, 0, 0, -1;
    auto kron = [](const Mat& a, const Mat& b) {
        Mat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int r = 0; r < a.rows(); ++r)
            for (int c = 0; c < a.cols(); ++c)
                out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
        return out;
    };
    // Row products are +I, column products are -I.
    Mat grid[3][3] = {
        {kron(I2, Z), kron(Z, I2), kron(Z, Z)},
        {kron(X, I2), kron(I2, X), kron(X, X)},
        {-kron(X, Z), -kron(Z, X), kron(Y, Y)},
    };
    ObservableFamily o;
    o.dim = 4;
    o.trace = TraceSpec::normalized(4);
    auto var = [](int r, int c) {
        return "m" + std::to_string(r + 1) + std::to_string(c + 1);
    };
    for (int r = 0; r < 3; ++r) {  // row contexts
        std::map<std::string, Mat> obs;
        for (int c = 0; c < 3; ++c) obs[var(r, c)] = grid[r][c];
        o.observables.push_back(std::move(obs));
    }
    for (int c = 0; c < 3; ++c) {  // column contexts
        std::map<std::string, Mat> obs;
        for (int r = 0; r < 3; ++r) obs[var(r, c)] = grid[r][c];
        o.observables.push_back(std::move(obs));
    }
    return o;
}

QuantumSyncStrategy magic_square_strategy(const Game& magic_square_game) {
    return strategy_from_observables(magic_square_game, magic_square_observables());
}

// --- fixture io -----------------------------------------------------------

namespace {

const char kBase64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<unsigned char>& data) {
    std::string out;
    std::size_t i = 0;
    while (i + 2 < data.size()) {
        unsigned value = (data[i] << 16) | (data[i + 1] << 8) | data[i + 2];
        out.push_back(kBase64Chars[(value >> 18) & 63]);
        out.push_back(kBase64Chars[(value >> 12) & 63]);
        out.push_back(kBase64Chars[(value >> 6) & 63]);
        out.push_back(kBase64Chars[value & 63]);
        i += 3;
    }
    if (i + 1 == data.size()) {
        unsigned value = data[i] << 16;
        out.push_back(kBase64Chars[(value >> 18) & 63]);
        out.push_back(kBase64Chars[(value >> 12) & 63]);
        out += "==";
    } else if (i + 2 == data.size()) {
        unsigned value = (data[i] << 16) | (data[i + 1] << 8);
        out.push_back(kBase64Chars[(value >> 18) & 63]);
        out.push_back(kBase64Chars[(value >> 12) & 63]);
        out.push_back(kBase64Chars[(value >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        if (c == '=') return -1;
        throw FormatError("bad base64 character");
    };
    std::vector<unsigned char> out;
    unsigned buffer = 0;
    int bits = 0;
    for (char c : text) {
        int v = value_of(c);
        if (v < 0) break;
        buffer = (buffer << 6) | static_cast<unsigned>(v);
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((buffer >> bits) & 0xff));
        }
    }
    return out;
}

std::string matrix_to_base64(const Mat& m) {
    std::vector<unsigned char> bytes;
    bytes.reserve(static_cast<std::size_t>(m.size()) * 16);
    for (int r = 0; r < m.rows(); ++r)
        for (int c = 0; c < m.cols(); ++c) {
            double parts[2] = {m(r, c).real(), m(r, c).imag()};
            const auto* raw = reinterpret_cast<const unsigned char*>(parts);
            bytes.insert(bytes.end(), raw, raw + 16);
        }
    return base64_encode(bytes);
}

Mat matrix_from_base64(const std::string& text, int dim) {
    std::vector<unsigned char> bytes = base64_decode(text);
    if (bytes.size() != static_cast<std::size_t>(dim) * dim * 16)
        throw FormatError("matrix payload size mismatch");
    Mat m(dim, dim);
    const double* values = reinterpret_cast<const double*>(bytes.data());
    for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) {
            std::size_t k = (static_cast<std::size_t>(r) * dim + c) * 2;
            m(r, c) = std::complex<double>(values[k], values[k + 1]);
        }
    return m;
}

}  // namespace

std::string strategy_to_json_string(const QuantumSyncStrategy& s) {
    nlohmann::json doc;
    doc["dim"] = s.dim;
    doc["blocks"] = s.trace.block_dims;
    doc["weights"] = s.trace.block_weights;
    nlohmann::json questions = nlohmann::json::array();
    for (const auto& measurement : s.measurements) {
        nlohmann::json projectors = nlohmann::json::array();
        for (const auto& m : measurement) projectors.push_back(matrix_to_base64(m));
        questions.push_back(projectors);
    }
    doc["measurements"] = questions;
    return doc.dump();
}

QuantumSyncStrategy strategy_from_json_string(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("invalid strategy JSON: ") + e.what());
    }
    QuantumSyncStrategy s;
    s.dim = doc.at("dim").get<int>();
    s.trace.block_dims = doc.at("blocks").get<std::vector<int>>();
    s.trace.block_weights = doc.at("weights").get<std::vector<double>>();
    for (const auto& projectors : doc.at("measurements")) {
        std::vector<Mat> measurement;
        for (const auto& payload : projectors)
            measurement.push_back(matrix_from_base64(payload.get<std::string>(), s.dim));
        s.measurements.push_back(std::move(measurement));
    }
    return s;
}

}  // namespace bcszk
