#pragma once

// Masked softmax attention in a fixed-precision format. Every primitive
// operation (product, sum, quotient, exp, square root) is rounded into the
// format; sums run left to right in increasing index order.
//
// Positions are 1-based in the mask definitions and stored 0-based: column
// j of an input matrix is position j+1.

#include <cstdint>
#include <vector>

#include "tal/fp.hpp"

namespace tal {

/// Dense row-major matrix of format values.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<double>& data() const noexcept { return data_; }

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// A·B with per-product rounding and left-to-right rounded sums.
Matrix matmul(const Matrix& a, const Matrix& b, const FpFormat& fp);
/// Elementwise rounded sum.
Matrix add(const Matrix& a, const Matrix& b, const FpFormat& fp);

enum class MaskKind { Global, Local };

/// Strictly causal masks: position n attends to m with m < n (global) or
/// max(1, n-k) ≤ m < n (k-local).
struct Mask {
    MaskKind kind = MaskKind::Global;
    int k = 0;

    static Mask global() { return {MaskKind::Global, 0}; }
    /// k ≥ 1, else ContractError.
    static Mask local(int k);

    /// 1-based positions.
    bool allows(std::size_t n, std::size_t m) const {
        if (m >= n) return false;
        return kind == MaskKind::Global || m + static_cast<std::size_t>(k) >= n;
    }
    /// First attended position for row n (1-based); rows with none return n.
    std::size_t first(std::size_t n) const {
        if (kind == MaskKind::Global || n <= static_cast<std::size_t>(k)) return 1;
        return n - static_cast<std::size_t>(k);
    }

    friend bool operator==(const Mask&, const Mask&) = default;
};

/// size×size 0/1 matrix, row n-1 / column m-1 holding M[n][m].
std::vector<std::vector<std::uint8_t>> materialize(const Mask& mask, std::size_t size);

struct Head {
    Matrix wq;    // dK × d
    Matrix wk;    // dK × d
    Matrix wv;    // dV × d
    Matrix wout;  // d × dV
    Mask mask;

    /// Throws ContractError unless the shapes agree with model width d.
    void validate(std::size_t d) const;
};

/// Optional per-row diagnostics of one head.
struct AttentionDetail {
    Matrix alpha;  // (N+1) × (N+1), alpha(n-1, m-1)
};

/// Head output O (dV × (N+1)) before the output projection. Scores are
/// (q·k) / sqrt(dK); weights are exp(score)·M / Σ exp(score)·M. Rows with no
/// attended position get weight 0 everywhere and a zero output column.
Matrix attention_forward(const Matrix& x, const Head& head, const FpFormat& fp,
                         AttentionDetail* detail = nullptr);

/// Σ_h Wout^h · O^h, heads summed in declaration order.
Matrix multi_head(const Matrix& x, const std::vector<Head>& heads, const FpFormat& fp);

}  // namespace tal
