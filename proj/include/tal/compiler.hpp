#pragma once

// Compilation of past-time formulas (Booleans, Y, Y^k, P, Ystar) into
// fixed-precision transformers: P and Ystar become global heads, Y and Y^k
// become k-local heads, Booleans become FFN gates.

#include <cstdint>
#include <map>
#include <vector>

#include "tal/formula.hpp"
#include "tal/json.hpp"
#include "tal/model.hpp"

namespace tal {

struct CompileParams {
    double score_gain = 20.0;         // C: key score on satisfying positions
    std::size_t max_length = 10'000;  // N_max: lengths the margin check covers
    FpFormat fp = FpFormat::binary32();
    std::size_t max_width = 4096;     // ResourceError beyond this many channels
};

/// Where each subformula lives. Channel 0 is the constant 1.
struct ChannelPlan {
    std::vector<Formula> order;           // channel c-1 holds order[c-1]
    std::map<Formula, std::size_t> channel;
    std::map<Formula, int> level;         // operator depth

    std::size_t width() const noexcept { return order.size() + 1; }
};

struct CompiledModel {
    Model model;
    ChannelPlan plan;
};

/// exp(C) / (exp(C) + N_max) with exp(C) taken in the format; 0 when the
/// denominator exceeds the largest finite value.
double concentration_margin(const CompileParams& params);

/// ContractError on U, S or MOD, or when the margin is below 3/4;
/// ResourceError when the plan needs more than max_width channels.
CompiledModel compile(const Formula& f, const Alphabet& alphabet, const CompileParams& params = {});

struct MaskCensus {
    std::size_t global_heads = 0;
    std::vector<int> local_heads;  // k of each local head, in layer/head order
};
MaskCensus mask_census(const Model& m);

struct Mismatch {
    Word word;
    bool expected = false;
};

struct VerifyReport {
    std::size_t exhaustive_len = 0;
    std::size_t spot_len = 0;
    std::size_t spot_count = 0;
    std::uint64_t seed = 0;
    std::size_t checked = 0;
    std::size_t accepted = 0;
    std::vector<Mismatch> mismatches;  // in checking order
    /// Head outputs found in the open band (1/4, 3/4) before thresholding.
    std::size_t margin_violations = 0;

    bool ok() const noexcept { return mismatches.empty() && margin_violations == 0; }
};

/// Compares model_run with accepts(f, ·) on every string of length
/// ≤ exhaustive_len and on spot_count uniform strings of length spot_len.
/// When check_margins is set, also inspects every head output channel.
/// The report does not depend on jobs.
VerifyReport verify_compiled(const Model& model, const Formula& f, std::size_t exhaustive_len,
                             std::size_t spot_len, std::size_t spot_count, std::uint64_t seed,
                             unsigned jobs = 1, bool check_margins = false);

Json to_json(const VerifyReport& r, const Alphabet& alphabet, std::size_t max_mismatches = 20);
Json to_json(const MaskCensus& c);

}  // namespace tal
