#pragma once

// Length-stratified labelled datasets over the benchmark languages, stored as
// JSONL: one manifest line followed by one record per line.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tal/benchmarks.hpp"
#include "tal/json.hpp"

namespace tal {

inline constexpr const char* kGeneratorVersion = "tal-datagen/1";

enum class Balance { Uniform, Balanced };
const char* balance_name(Balance b) noexcept;
Balance parse_balance(std::string_view text);

struct DatasetRecord {
    std::string s;
    int label = 0;
    std::size_t len = 0;

    friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

struct Manifest {
    std::string language;
    std::uint64_t seed = 0;
    std::string generator_version = kGeneratorVersion;
    Balance balance = Balance::Balanced;
    std::size_t min_len = 0;
    std::size_t max_len = 0;
    std::size_t per_length = 0;
    std::vector<std::string> warnings;

    friend bool operator==(const Manifest&, const Manifest&) = default;
};

struct Dataset {
    Manifest manifest;
    std::vector<DatasetRecord> records;  // grouped by length, ascending

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// per_length records for each n in [min_len, max_len]. Balanced mode draws
/// per_length/2 positives and the rest negatives, each uniform within its
/// slice; a length whose positive or negative slice is empty is drawn
/// uniformly from Σ^n instead and noted in the manifest warnings. Each length
/// uses seed XOR n, so the result does not depend on jobs.
Dataset generate_split(const BenchmarkLanguage& lang, std::size_t min_len, std::size_t max_len,
                       std::size_t per_length, Balance balance, std::uint64_t seed, unsigned jobs = 1);

/// Labels are checked against the registry DFA of the manifest's language;
/// a wrong label or length throws ContractError before anything is written.
void write_dataset(const Dataset& d, std::ostream& out);
void write_dataset(const Dataset& d, const std::filesystem::path& path);

/// FormatError naming the 1-based line for malformed JSON, a missing
/// manifest, unknown languages, symbols outside the alphabet, len ≠ |s| or a
/// label that disagrees with the DFA.
Dataset read_dataset(std::istream& in);
Dataset read_dataset(const std::filesystem::path& path);

Json to_json(const Manifest& m);
Json to_json(const DatasetRecord& r);

}  // namespace tal
