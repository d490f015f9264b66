#include "tal/model.hpp"

#include <charconv>
#include <fstream>

#include "tal/error.hpp"

namespace tal {

Matrix layer_norm(const Matrix& x, const FpFormat& fp) {
    const double d = static_cast<double>(x.rows());
    const double eps = fp.round(1e-5L);
    Matrix y(x.rows(), x.cols());
    for (std::size_t c = 0; c < x.cols(); ++c) {
        double sum = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) sum = fp.add(sum, x(r, c));
        const double mean = fp.div(sum, d);
        double sq = 0.0;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double dev = fp.sub(x(r, c), mean);
            sq = fp.add(sq, fp.mul(dev, dev));
        }
        const double scale = fp.sqrt(fp.add(fp.div(sq, d), eps));
        for (std::size_t r = 0; r < x.rows(); ++r) y(r, c) = fp.div(fp.sub(x(r, c), mean), scale);
    }
    return y;
}

Matrix Ffn::apply(const Matrix& h, const FpFormat& fp) const {
    Matrix delta(h.rows(), h.cols());
    std::vector<double> work(h.rows());
    auto truth = [&](std::size_t i) { return work[i] > 0.5; };
    for (std::size_t c = 0; c < h.cols(); ++c) {
        for (std::size_t r = 0; r < h.rows(); ++r) work[r] = h(r, c);
        for (const Gate& g : gates) {
            switch (g.kind) {
                case Gate::Kind::Threshold: work[g.out] = truth(g.a) ? 1.0 : 0.0; break;
                case Gate::Kind::Not: work[g.out] = truth(g.a) ? 0.0 : 1.0; break;
                case Gate::Kind::And: work[g.out] = truth(g.a) && truth(g.b) ? 1.0 : 0.0; break;
                case Gate::Kind::Or: work[g.out] = truth(g.a) || truth(g.b) ? 1.0 : 0.0; break;
                case Gate::Kind::Const: work[g.out] = g.value; break;
            }
        }
        for (std::size_t r = 0; r < h.rows(); ++r) {
            if (work[r] != h(r, c)) delta(r, c) = fp.sub(work[r], h(r, c));
        }
    }
    return delta;
}

void Model::validate() const {
    if (d == 0) throw ContractError("model width must be positive");
    if (encoder.size() != alphabet.size() + 1)
        throw ContractError("encoder needs one vector per token plus EOS");
    auto check_value = [&](double v, const char* what) {
        if (!fp.representable(v))
            throw ContractError(std::string(what) + " value " + decimal(v) + " is not exact in format " + fp.name());
    };
    for (const auto& e : encoder) {
        if (e.size() != d) throw ContractError("encoder vectors must have length d");
        for (double v : e) check_value(v, "encoder");
    }
    for (const Layer& l : layers) {
        for (const Head& h : l.heads) {
            h.validate(d);
            for (const Matrix* w : {&h.wq, &h.wk, &h.wv, &h.wout})
                for (double v : w->data()) check_value(v, "weight");
        }
        for (const Gate& g : l.ffn.gates) {
            if (g.out >= d || g.a >= d || g.b >= d) throw ContractError("gate channel out of range");
            check_value(g.value, "gate constant");
        }
    }
    if (classifier.channel >= d) throw ContractError("classifier channel out of range");
    check_value(classifier.threshold, "classifier threshold");
}

Matrix embed(const Model& m, WordView w) {
    Matrix x(m.d, w.size() + 1);
    for (std::size_t n = 0; n <= w.size(); ++n) {
        const std::size_t idx = n < w.size() ? w[n] : m.alphabet.size();
        if (idx > m.alphabet.size()) throw ContractError("symbol outside the model alphabet");
        for (std::size_t r = 0; r < m.d; ++r) x(r, n) = m.encoder[idx][r];
    }
    return x;
}

namespace {

bool classify(const Model& m, const Matrix& x) {
    const double v = x(m.classifier.channel, x.cols() - 1);
    return m.classifier.above ? v > m.classifier.threshold : v < m.classifier.threshold;
}

template <typename OnLayer>
Matrix forward(const Model& m, WordView w, OnLayer&& on_layer) {
    Matrix x = embed(m, w);
    for (const Layer& l : m.layers) {
        Matrix att = multi_head(x, l.heads, m.fp);
        Matrix h = add(x, att, m.fp);
        if (l.ln == LnMode::Standard) h = layer_norm(h, m.fp);
        Matrix next = add(h, l.ffn.apply(h, m.fp), m.fp);
        if (l.ln == LnMode::Standard) next = layer_norm(next, m.fp);
        on_layer(x, std::move(att));
        x = std::move(next);
    }
    return x;
}

}  // namespace

bool model_run(const Model& m, WordView w) {
    return classify(m, forward(m, w, [](const Matrix&, Matrix&&) {}));
}

ModelTrace model_run_traced(const Model& m, WordView w) {
    ModelTrace t;
    Matrix last = forward(m, w, [&](const Matrix& x, Matrix&& att) {
        t.inputs.push_back(x);
        t.attention.push_back(std::move(att));
    });
    t.accepted = classify(m, last);
    t.inputs.push_back(std::move(last));
    return t;
}

// ---------------------------------------------------------------------------
// Serialization

std::string decimal(double x) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc()) throw Error("cannot format number");
    return std::string(buf, end);
}

namespace {

double parse_number(const Json& j, const FpFormat& fp) {
    if (!j.is_string()) throw FormatError("numbers must be decimal strings, got " + j.dump());
    const std::string s = j.get<std::string>();
    double v = 0.0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) throw FormatError("bad number '" + s + "'");
    if (!fp.representable(v)) throw FormatError("'" + s + "' is not exact in format " + fp.name());
    return v;
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(decimal(m(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from(const Json& j, const FpFormat& fp) {
    if (!j.is_array() || j.empty()) throw FormatError("matrix must be a non-empty array of rows");
    const std::size_t cols = j[0].size();
    Matrix m(j.size(), cols);
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw FormatError("ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_number(j[r][c], fp);
    }
    return m;
}

const char* gate_name(Gate::Kind k) {
    switch (k) {
        case Gate::Kind::Threshold: return "threshold";
        case Gate::Kind::Not: return "not";
        case Gate::Kind::And: return "and";
        case Gate::Kind::Or: return "or";
        case Gate::Kind::Const: return "const";
    }
    return "?";
}

}  // namespace

Json model_to_json(const Model& m) {
    Json j;
    j["format"] = {{"exponent_bits", m.fp.exponent_bits()}, {"mantissa_bits", m.fp.mantissa_bits()}};
    j["alphabet"] = m.alphabet.tokens();
    j["d"] = m.d;
    Json tokens = Json::object();
    auto vec = [](const std::vector<double>& v) {
        Json a = Json::array();
        for (double x : v) a.push_back(decimal(x));
        return a;
    };
    for (Symbol a = 0; a < m.alphabet.size(); ++a) tokens[m.alphabet.token(a)] = vec(m.encoder[a]);
    j["encoder"] = {{"tokens", std::move(tokens)}, {"eos", vec(m.encoder.back())}};
    Json layers = Json::array();
    for (const Layer& l : m.layers) {
        Json heads = Json::array();
        for (const Head& h : l.heads) {
            Json hj;
            hj["mask"] = h.mask.kind == MaskKind::Global ? "global" : "local";
            if (h.mask.kind == MaskKind::Local) hj["k"] = h.mask.k;
            hj["wq"] = matrix_json(h.wq);
            hj["wk"] = matrix_json(h.wk);
            hj["wv"] = matrix_json(h.wv);
            hj["wout"] = matrix_json(h.wout);
            heads.push_back(std::move(hj));
        }
        Json gates = Json::array();
        for (const Gate& g : l.ffn.gates) {
            Json gj{{"op", gate_name(g.kind)}, {"out", g.out}};
            if (g.kind == Gate::Kind::Const) {
                gj["value"] = decimal(g.value);
            } else {
                gj["a"] = g.a;
                if (g.kind == Gate::Kind::And || g.kind == Gate::Kind::Or) gj["b"] = g.b;
            }
            gates.push_back(std::move(gj));
        }
        layers.push_back({{"heads", std::move(heads)},
                          {"ffn", std::move(gates)},
                          {"ln_mode", l.ln == LnMode::Identity ? "identity" : "standard"}});
    }
    j["layers"] = std::move(layers);
    j["classifier"] = {{"channel", m.classifier.channel},
                       {"threshold", decimal(m.classifier.threshold)},
                       {"polarity", m.classifier.above ? "above" : "below"}};
    return j;
}

Model model_from_json(const Json& j) {
    try {
        const Json& f = j.at("format");
        Model m{FpFormat(f.at("exponent_bits").get<int>(), f.at("mantissa_bits").get<int>()),
                Alphabet(j.at("alphabet").get<std::vector<std::string>>()),
                j.at("d").get<std::size_t>(),
                {},
                {},
                {}};
        auto vec = [&](const Json& a) {
            std::vector<double> v;
            for (const auto& x : a) v.push_back(parse_number(x, m.fp));
            return v;
        };
        const Json& enc = j.at("encoder");
        for (const auto& tok : m.alphabet.tokens()) m.encoder.push_back(vec(enc.at("tokens").at(tok)));
        m.encoder.push_back(vec(enc.at("eos")));
        for (const Json& lj : j.at("layers")) {
            Layer l;
            for (const Json& hj : lj.at("heads")) {
                Head h;
                const std::string mask = hj.at("mask").get<std::string>();
                if (mask == "global") h.mask = Mask::global();
                else if (mask == "local") h.mask = Mask::local(hj.at("k").get<int>());
                else throw FormatError("unknown mask kind '" + mask + "'");
                h.wq = matrix_from(hj.at("wq"), m.fp);
                h.wk = matrix_from(hj.at("wk"), m.fp);
                h.wv = matrix_from(hj.at("wv"), m.fp);
                h.wout = matrix_from(hj.at("wout"), m.fp);
                l.heads.push_back(std::move(h));
            }
            for (const Json& gj : lj.at("ffn")) {
                const std::string op = gj.at("op").get<std::string>();
                const auto out = gj.at("out").get<std::size_t>();
                if (op == "threshold") l.ffn.gates.push_back(Gate::threshold(out, gj.at("a").get<std::size_t>()));
                else if (op == "not") l.ffn.gates.push_back(Gate::negation(out, gj.at("a").get<std::size_t>()));
                else if (op == "and")
                    l.ffn.gates.push_back(Gate::conjunction(out, gj.at("a").get<std::size_t>(), gj.at("b").get<std::size_t>()));
                else if (op == "or")
                    l.ffn.gates.push_back(Gate::disjunction(out, gj.at("a").get<std::size_t>(), gj.at("b").get<std::size_t>()));
                else if (op == "const") l.ffn.gates.push_back(Gate::constant(out, parse_number(gj.at("value"), m.fp)));
                else throw FormatError("unknown gate '" + op + "'");
            }
            const std::string ln = lj.at("ln_mode").get<std::string>();
            if (ln == "identity") l.ln = LnMode::Identity;
            else if (ln == "standard") l.ln = LnMode::Standard;
            else throw FormatError("unknown ln_mode '" + ln + "'");
            m.layers.push_back(std::move(l));
        }
        const Json& c = j.at("classifier");
        m.classifier.channel = c.at("channel").get<std::size_t>();
        m.classifier.threshold = parse_number(c.at("threshold"), m.fp);
        const std::string pol = c.at("polarity").get<std::string>();
        if (pol != "above" && pol != "below") throw FormatError("unknown polarity '" + pol + "'");
        m.classifier.above = pol == "above";
        m.validate();
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("malformed model JSON: ") + e.what());
    } catch (const ContractError& e) {
        throw FormatError(std::string("invalid model: ") + e.what());
    }
}

Model load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    try {
        return model_from_json(Json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

}  // namespace tal
