#include "tal/datagen.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "tal/error.hpp"
#include "tal/parallel.hpp"
#include "tal/rng.hpp"

namespace tal {

const char* balance_name(Balance b) noexcept { return b == Balance::Uniform ? "uniform" : "balanced"; }

Balance parse_balance(std::string_view text) {
    if (text == "uniform") return Balance::Uniform;
    if (text == "balanced") return Balance::Balanced;
    throw ContractError("unknown balance mode '" + std::string(text) + "' (expected uniform or balanced)");
}

namespace {

DatasetRecord make_record(const Dfa& dfa, const Word& w) {
    return {dfa.alphabet().render(w), dfa.accepts(w) ? 1 : 0, w.size()};
}

Word uniform_word(std::size_t n, std::size_t sigma, Rng& rng) {
    Word w(n);
    for (Symbol& s : w) s = static_cast<Symbol>(uniform_below(rng, sigma));
    return w;
}

void shuffle(std::vector<DatasetRecord>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_below(rng, i)]);
}

}  // namespace

Dataset generate_split(const BenchmarkLanguage& lang, std::size_t min_len, std::size_t max_len,
                       std::size_t per_length, Balance balance, std::uint64_t seed, unsigned jobs) {
    if (min_len > max_len) throw ContractError("generate_split: empty length range");
    if (balance == Balance::Balanced && per_length < 2)
        throw ContractError("generate_split: balanced mode needs at least 2 strings per length");
    const Dfa& dfa = lang.dfa;
    const std::size_t sigma = dfa.alphabet().size();
    const SliceSampler pos(dfa, max_len), neg(complement(dfa), max_len);

    const std::size_t count = max_len - min_len + 1;
    std::vector<std::vector<DatasetRecord>> by_length(count);
    std::vector<std::string> warnings(count);
    parallel_for(count, jobs, [&](std::size_t i) {
        const std::size_t n = min_len + i;
        Rng rng(seed ^ static_cast<std::uint64_t>(n));
        auto& out = by_length[i];
        out.reserve(per_length);
        const bool balanced = balance == Balance::Balanced && pos.count(n) > 0 && neg.count(n) > 0;
        if (balance == Balance::Balanced && !balanced)
            warnings[i] = "length " + std::to_string(n) + ": no " + (pos.count(n) == 0 ? "positive" : "negative") +
                          " strings, sampled uniformly";
        if (!balanced) {
            for (std::size_t j = 0; j < per_length; ++j) out.push_back(make_record(dfa, uniform_word(n, sigma, rng)));
            return;
        }
        const std::size_t positives = per_length / 2;
        for (std::size_t j = 0; j < positives; ++j) out.push_back(make_record(dfa, pos.sample(n, rng)));
        for (std::size_t j = positives; j < per_length; ++j) out.push_back(make_record(dfa, neg.sample(n, rng)));
        shuffle(out, rng);
    });

    Dataset d;
    d.manifest = Manifest{lang.id, seed, kGeneratorVersion, balance, min_len, max_len, per_length, {}};
    for (std::size_t i = 0; i < count; ++i) {
        if (!warnings[i].empty()) d.manifest.warnings.push_back(warnings[i]);
        for (DatasetRecord& r : by_length[i]) d.records.push_back(std::move(r));
    }
    return d;
}

Json to_json(const Manifest& m) {
    return {{"type", "manifest"},
            {"language", m.language},
            {"seed", m.seed},
            {"generator_version", m.generator_version},
            {"balance", balance_name(m.balance)},
            {"min_len", m.min_len},
            {"max_len", m.max_len},
            {"per_length", m.per_length},
            {"warnings", m.warnings}};
}

Json to_json(const DatasetRecord& r) { return {{"s", r.s}, {"label", r.label}, {"len", r.len}}; }

namespace {

// Empty when the record is consistent with dfa, otherwise the reason.
std::string record_problem(const Dfa& dfa, const DatasetRecord& r) {
    Word w;
    try {
        w = dfa.alphabet().parse_word(r.s);
    } catch (const Error& e) {
        return e.what();
    }
    if (w.size() != r.len) return "len " + std::to_string(r.len) + " but the string has length " + std::to_string(w.size());
    if (r.label != 0 && r.label != 1) return "label must be 0 or 1";
    if (r.label != (dfa.accepts(w) ? 1 : 0))
        return "label " + std::to_string(r.label) + " disagrees with the " + "automaton for \"" + r.s + "\"";
    return {};
}

}  // namespace

void write_dataset(const Dataset& d, std::ostream& out) {
    const Dfa& dfa = benchmark(d.manifest.language).dfa;
    for (std::size_t i = 0; i < d.records.size(); ++i) {
        const std::string problem = record_problem(dfa, d.records[i]);
        if (!problem.empty()) throw ContractError("record " + std::to_string(i) + ": " + problem);
    }
    out << to_json(d.manifest).dump() << '\n';
    for (const DatasetRecord& r : d.records) out << to_json(r).dump() << '\n';
}

void write_dataset(const Dataset& d, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    write_dataset(d, out);
    out.flush();
    if (!out) throw Error("write to " + path.string() + " failed");
}

Dataset read_dataset(std::istream& in) {
    Dataset d;
    const Dfa* dfa = nullptr;
    std::string line;
    std::size_t lineno = 0;
    auto fail = [&](const std::string& why) -> FormatError {
        return FormatError("line " + std::to_string(lineno) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception& e) {
            throw fail(std::string("invalid JSON: ") + e.what());
        }
        try {
            if (!dfa) {
                if (!j.is_object() || j.value("type", "") != "manifest") throw fail("first line must be the manifest");
                Manifest& m = d.manifest;
                m.language = j.at("language").get<std::string>();
                m.seed = j.at("seed").get<std::uint64_t>();
                m.generator_version = j.at("generator_version").get<std::string>();
                m.balance = parse_balance(j.value("balance", "balanced"));
                m.min_len = j.value("min_len", std::size_t{0});
                m.max_len = j.value("max_len", std::size_t{0});
                m.per_length = j.value("per_length", std::size_t{0});
                m.warnings = j.value("warnings", std::vector<std::string>{});
                dfa = &benchmark(m.language).dfa;
                continue;
            }
            DatasetRecord r{j.at("s").get<std::string>(), j.at("label").get<int>(), j.at("len").get<std::size_t>()};
            const std::string problem = record_problem(*dfa, r);
            if (!problem.empty()) throw fail(problem);
            d.records.push_back(std::move(r));
        } catch (const Json::exception& e) {
            throw fail(std::string("bad field: ") + e.what());
        } catch (const ContractError& e) {
            throw fail(e.what());
        }
    }
    if (!dfa) throw FormatError("dataset has no manifest line");
    return d;
}

Dataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    return read_dataset(in);
}

}  // namespace tal
