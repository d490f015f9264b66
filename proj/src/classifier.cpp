#include "tal/classifier.hpp"

#include "tal/error.hpp"

namespace tal {

const char* tri_name(Tri t) noexcept {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::Unknown: return "unknown";
    }
    return "?";
}

const char* pattern_name(MaskPattern p) noexcept {
    switch (p) {
        case MaskPattern::BooleanOnly: return "boolean-only";
        case MaskPattern::LocalOnly: return "local-only";
        case MaskPattern::GlobalOnly: return "global-only";
        case MaskPattern::Hybrid: return "hybrid";
    }
    return "?";
}

std::string MaskRequirement::to_string() const {
    std::string s = pattern_name(pattern);
    if (pattern == MaskPattern::LocalOnly || pattern == MaskPattern::Hybrid)
        s += "(" + std::to_string(k) + ")";
    return s;
}

FragmentReport expected_report(FragmentClass c) {
    FragmentReport r;
    r.star_free = true;
    r.definite = c == FragmentClass::LtlY;
    r.yptl = c != FragmentClass::LtlSOnly;
    r.ltl_p = c == FragmentClass::LtlP ? Tri::Yes : Tri::No;
    return r;
}

FragmentReport classify_benchmark(std::string_view id) {
    const BenchmarkLanguage& b = benchmark(id);
    FragmentReport r = expected_report(b.fragment);
    r.ltl_p_basis = "curated:" + b.id;
    r.minimal_states = b.dfa.size();
    return r;
}

bool same_decidable_fields(const FragmentReport& a, const FragmentReport& b) {
    return a.definite == b.definite && a.yptl == b.yptl && a.star_free == b.star_free;
}

FragmentReport classify_language(const Dfa& d, std::size_t budget) {
    const Dfa m = minimize(d);
    const Semigroup sg = Semigroup::of(m, budget);
    FragmentReport r;
    r.minimal_states = m.size();
    r.semigroup_size = sg.size();
    r.definite_witness = is_definite(sg);
    r.permutation_witness = is_nonpermutational(sg);
    r.r_witness = is_locally_r_trivial(sg);
    r.definite = r.definite_witness.definite;
    r.yptl = r.r_witness.locally_r_trivial;
    r.star_free = is_aperiodic(sg);
    r.config = find_forbidden_config(m, budget);
    r.words.s = sg.witness(r.definite_witness.s);
    r.words.e = sg.witness(r.definite_witness.e);
    r.words.permuting = sg.witness(r.permutation_witness.element);
    r.words.idempotent = sg.witness(r.r_witness.e);
    r.words.x = sg.witness(r.r_witness.x);
    r.words.y = sg.witness(r.r_witness.y);
    if (r.definite != r.permutation_witness.nonpermutational)
        throw Error("definiteness checks disagree");
    if (r.yptl == r.config.has_value()) throw Error("local R-triviality and configuration search disagree");

    if (!r.yptl) {
        r.ltl_p = Tri::No;
        r.ltl_p_basis = "not-yptl";
        return r;
    }
    for (const auto& b : benchmarks()) {
        if (b.alphabet() == m.alphabet() && equivalent(b.dfa, m).equal) {
            r.ltl_p = expected_report(b.fragment).ltl_p;
            r.ltl_p_basis = "curated:" + b.id;
            return r;
        }
    }
    return r;
}

namespace {

void scan(const Formula& f, bool& local, bool& global, int& k) {
    switch (f.op()) {
        case Op::Until: throw ContractError("classify_formula: U is not supported");
        case Op::Since: throw ContractError("classify_formula: S has no mask pattern");
        case Op::Yesterday:
            local = true;
            k = std::max(k, 1);
            break;
        case Op::BoundedYesterday:
            local = true;
            k = std::max(k, f.bound());
            break;
        case Op::Past:
        case Op::StarYesterday: global = true; break;
        default: break;
    }
    if (is_unary(f.op())) scan(f.lhs(), local, global, k);
    if (is_binary(f.op())) {
        scan(f.lhs(), local, global, k);
        scan(f.rhs(), local, global, k);
    }
}

}  // namespace

MaskRequirement classify_formula(const Formula& f) {
    bool local = false, global = false;
    int k = 0;
    scan(f, local, global, k);
    if (local && global) return {MaskPattern::Hybrid, k};
    if (local) return {MaskPattern::LocalOnly, k};
    if (global) return {MaskPattern::GlobalOnly, 0};
    return {MaskPattern::BooleanOnly, 0};
}

Json to_json(const FragmentReport& r, const Alphabet& alphabet) {
    Json j;
    j["definite"] = r.definite ? "yes" : "no";
    j["yptl_definable"] = r.yptl ? "yes" : "no";
    j["star_free"] = r.star_free ? "yes" : "no";
    j["ltl_p_definable"] = tri_name(r.ltl_p);
    j["ltl_p_basis"] = r.ltl_p_basis;
    j["minimal_states"] = r.minimal_states;
    j["semigroup_size"] = r.semigroup_size;
    Json w = Json::object();
    if (r.semigroup_size > 0) {
        if (!r.definite)
            w["right_zero_failure"] = {{"s", alphabet.render(r.words.s)},
                                       {"e", alphabet.render(r.words.e)}};
        if (!r.permutation_witness.nonpermutational)
            w["permutation"] = {{"word", alphabet.render(r.words.permuting)},
                                {"subset", r.permutation_witness.subset}};
        if (!r.yptl)
            w["r_class_collision"] = {{"e", alphabet.render(r.words.idempotent)},
                                      {"x", alphabet.render(r.words.x)},
                                      {"y", alphabet.render(r.words.y)}};
        if (r.config) w["forbidden_configuration"] = to_json(*r.config, alphabet);
    }
    j["witnesses"] = std::move(w);
    return j;
}

}  // namespace tal
