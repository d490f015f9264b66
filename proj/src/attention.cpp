#include "tal/attention.hpp"

#include "tal/error.hpp"

namespace tal {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw ContractError("matrix data does not match its shape");
}

Matrix matmul(const Matrix& a, const Matrix& b, const FpFormat& fp) {
    if (a.cols() != b.rows())
        throw ContractError("matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                            " times " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) {
                const double aik = a(i, k);
                if (aik == 0.0) continue;  // contributes +-0, which leaves acc unchanged
                acc = fp.add(acc, fp.mul(aik, b(k, j)));
            }
            c(i, j) = acc;
        }
    }
    return c;
}

Matrix add(const Matrix& a, const Matrix& b, const FpFormat& fp) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw ContractError("add: shape mismatch");
    Matrix c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = fp.add(a(i, j), b(i, j));
    return c;
}

Mask Mask::local(int k) {
    if (k < 1) throw ContractError("local mask needs k >= 1");
    return {MaskKind::Local, k};
}

std::vector<std::vector<std::uint8_t>> materialize(const Mask& mask, std::size_t size) {
    std::vector<std::vector<std::uint8_t>> m(size, std::vector<std::uint8_t>(size, 0));
    for (std::size_t n = 1; n <= size; ++n)
        for (std::size_t j = 1; j <= size; ++j) m[n - 1][j - 1] = mask.allows(n, j) ? 1 : 0;
    return m;
}

void Head::validate(std::size_t d) const {
    const std::size_t dk = wq.rows(), dv = wv.rows();
    if (dk == 0 || dv == 0) throw ContractError("head projections must be non-empty");
    if (wq.cols() != d || wk.cols() != d || wv.cols() != d)
        throw ContractError("head input projections must have " + std::to_string(d) + " columns");
    if (wk.rows() != dk) throw ContractError("Wq and Wk must have the same number of rows");
    if (wout.rows() != d || wout.cols() != dv)
        throw ContractError("Wout must be " + std::to_string(d) + "x" + std::to_string(dv));
    if (mask.kind == MaskKind::Local && mask.k < 1) throw ContractError("local mask needs k >= 1");
}

Matrix attention_forward(const Matrix& x, const Head& head, const FpFormat& fp, AttentionDetail* detail) {
    head.validate(x.rows());
    const std::size_t cols = x.cols();
    const std::size_t dk = head.wq.rows(), dv = head.wv.rows();
    const Matrix q = matmul(head.wq, x, fp);
    const Matrix k = matmul(head.wk, x, fp);
    const Matrix v = matmul(head.wv, x, fp);
    const double scale = fp.sqrt(static_cast<double>(dk));
    if (detail) detail->alpha = Matrix(cols, cols);

    Matrix out(dv, cols);
    std::vector<double> weight(cols);
    // Scores repeat heavily; cache the last exp evaluation.
    double last_score = std::numeric_limits<double>::quiet_NaN(), last_exp = 0.0;
    for (std::size_t n = 1; n <= cols; ++n) {
        const std::size_t lo = head.mask.first(n);
        if (lo >= n) continue;  // fully masked row: zero column
        double denom = 0.0;
        for (std::size_t m = lo; m < n; ++m) {
            double dot = 0.0;
            for (std::size_t r = 0; r < dk; ++r) dot = fp.add(dot, fp.mul(q(r, n - 1), k(r, m - 1)));
            const double score = dk == 1 ? dot : fp.div(dot, scale);
            if (score != last_score) {
                last_score = score;
                last_exp = fp.exp(score);
            }
            weight[m - 1] = last_exp;
            denom = fp.add(denom, last_exp);
        }
        if (denom == 0.0) continue;  // every weight underflowed
        for (std::size_t m = lo; m < n; ++m) {
            const double alpha = fp.div(weight[m - 1], denom);
            if (detail) detail->alpha(n - 1, m - 1) = alpha;
            for (std::size_t r = 0; r < dv; ++r)
                out(r, n - 1) = fp.add(out(r, n - 1), fp.mul(alpha, v(r, m - 1)));
        }
    }
    return out;
}

Matrix multi_head(const Matrix& x, const std::vector<Head>& heads, const FpFormat& fp) {
    Matrix total(x.rows(), x.cols());
    for (const Head& h : heads) total = add(total, matmul(h.wout, attention_forward(x, h, fp), fp), fp);
    return total;
}

}  // namespace tal
