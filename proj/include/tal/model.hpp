#pragma once

// Layered fixed-precision transformer recognizers. The input string is
// padded with EOS, embedded column by column, passed through
//   H  = LN(X + att(X))
//   X' = LN(H + ffn(H))
// per layer, and classified from the EOS column.

#include <filesystem>
#include <string>
#include <vector>

#include "tal/alphabet.hpp"
#include "tal/attention.hpp"
#include "tal/json.hpp"

namespace tal {

enum class LnMode { Identity, Standard };

/// Standard layer normalization over each column (no affine terms):
/// (x - mean) / sqrt(var + eps), eps = 1e-5 rounded into the format.
Matrix layer_norm(const Matrix& x, const FpFormat& fp);

/// One step of a columnwise Boolean program. Channels are read from and
/// written to a working copy of the column, in order.
struct Gate {
    enum class Kind { Threshold, Not, And, Or, Const };
    Kind kind = Kind::Const;
    std::size_t out = 0;
    std::size_t a = 0;
    std::size_t b = 0;
    double value = 0.0;  // Const: the value written

    // Threshold writes 1 when channel a exceeds 1/2, else 0.
    static Gate threshold(std::size_t out, std::size_t a) { return {Kind::Threshold, out, a, 0, 0.0}; }
    static Gate negation(std::size_t out, std::size_t a) { return {Kind::Not, out, a, 0, 0.0}; }
    static Gate conjunction(std::size_t out, std::size_t a, std::size_t b) { return {Kind::And, out, a, b, 0.0}; }
    static Gate disjunction(std::size_t out, std::size_t a, std::size_t b) { return {Kind::Or, out, a, b, 0.0}; }
    static Gate constant(std::size_t out, double v) { return {Kind::Const, out, 0, 0, v}; }
};

/// Columnwise feed-forward map. Its output is the difference between the
/// program's final working column and the input column (rounded), so that
/// the residual sum lands on the computed values. Boolean gates treat a
/// channel as true when it exceeds 1/2.
struct Ffn {
    std::vector<Gate> gates;
    Matrix apply(const Matrix& h, const FpFormat& fp) const;
};

struct Layer {
    std::vector<Head> heads;
    Ffn ffn;
    LnMode ln = LnMode::Identity;
};

struct Classifier {
    std::size_t channel = 0;
    double threshold = 0.5;
    bool above = true;  // accept when value > threshold (else value < threshold)
};

struct Model {
    FpFormat fp;
    Alphabet alphabet;
    std::size_t d = 0;
    /// encoder[i] for token i; encoder[alphabet.size()] for EOS.
    std::vector<std::vector<double>> encoder;
    std::vector<Layer> layers;
    Classifier classifier;

    /// Shapes, channel indices and format-exactness of every weight.
    void validate() const;
};

struct ModelTrace {
    std::vector<Matrix> inputs;     // X^0 .. X^L
    std::vector<Matrix> attention;  // att(X^l) per layer
    bool accepted = false;
};

Matrix embed(const Model& m, WordView w);
bool model_run(const Model& m, WordView w);
ModelTrace model_run_traced(const Model& m, WordView w);

/// Model JSON. Numbers are decimal strings that parse to format values.
Json model_to_json(const Model& m);
Model model_from_json(const Json& j);
Model load_model(const std::filesystem::path& path);

/// Shortest decimal string that reads back as x.
std::string decimal(double x);

}  // namespace tal
