#include "tokenprune/types.hpp"

#include <cmath>
#include <string>

namespace tokenprune {

bool Tensor::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

EmbeddingSequence EmbeddingSequence::from_tensor(Tensor t) {
    if (t.rank() != 2) throw WrongRankError("EmbeddingSequence: expected rank 2");
    if (t.dim(0) == 0 || t.dim(1) == 0) {
        throw ValidationError("EmbeddingSequence: dimensions must be positive");
    }
    if (!t.all_finite()) throw NonFiniteError("EmbeddingSequence: non-finite entries");
    return EmbeddingSequence{std::move(t)};
}

QKTensor QKTensor::from_tensors(Tensor q, Tensor k) {
    if (q.rank() != 3 || k.rank() != 3) throw WrongRankError("QKTensor: expected rank 3");
    if (q.shape() != k.shape()) {
        throw ShapeMismatchError("QKTensor: queries and keys must have identical shapes");
    }
    if (q.dim(0) == 0 || q.dim(1) == 0 || q.dim(2) == 0) {
        throw ValidationError("QKTensor: dimensions must be positive");
    }
    if (!q.all_finite() || !k.all_finite()) {
        throw NonFiniteError("QKTensor: non-finite entries");
    }
    return QKTensor{std::move(q), std::move(k)};
}

AttentionTensor AttentionTensor::from_tensor(Tensor t) {
    if (t.rank() != 3) throw WrongRankError("AttentionTensor: expected rank 3");
    if (t.dim(1) != t.dim(2)) {
        throw ShapeMismatchError("AttentionTensor: token axes must be square");
    }
    if (t.dim(0) == 0 || t.dim(1) == 0) {
        throw ValidationError("AttentionTensor: dimensions must be positive");
    }
    const std::size_t heads = t.dim(0);
    const std::size_t n = t.dim(1);
    for (std::size_t h = 0; h < heads; ++h) {
        for (std::size_t i = 0; i < n; ++i) {
            double row_sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double w = t.at(h, i, j);
                if (!std::isfinite(w)) throw NonFiniteError("AttentionTensor: non-finite entry");
                if (w < 0.0 || w > 1.0) {
                    throw ValidationError("AttentionTensor: entry outside [0, 1] at head " +
                                          std::to_string(h) + " row " + std::to_string(i));
                }
                row_sum += w;
            }
            if (std::abs(row_sum - 1.0) > kRowSumTolerance) {
                throw ValidationError("AttentionTensor: row sum " + std::to_string(row_sum) +
                                      " deviates from 1 at head " + std::to_string(h) +
                                      " row " + std::to_string(i));
            }
        }
    }
    return AttentionTensor{std::move(t)};
}

TokenScores TokenScores::from_vector(std::vector<double> s) {
    if (s.empty()) throw ValidationError("TokenScores: empty score vector");
    for (double v : s) {
        if (!std::isfinite(v)) throw NonFiniteError("TokenScores: non-finite score");
        if (v < 0.0) throw ValidationError("TokenScores: negative score");
    }
    return TokenScores{std::move(s)};
}

}  // namespace tokenprune
