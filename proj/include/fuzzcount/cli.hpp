#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fuzzcount/chain_formulas.hpp"
#include "fuzzcount/group_spec.hpp"
#include "fuzzcount/lattice.hpp"
#include "fuzzcount/lattice_json.hpp"
#include "fuzzcount/verify.hpp"

namespace fuzzcount {

/// Structured outcome of one CLI invocation. Serializes with fixed key order
/// and counts as decimal strings; elapsed_ms is emitted only on request so
/// that default output stays byte-identical across runs.
struct RunReport {
    std::string command;
    nlohmann::ordered_json inputs;
    nlohmann::ordered_json results;
    std::optional<bool> oracle_agreement;
    std::int64_t elapsed_ms = 0;
    bool include_timing = false;

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        j["inputs"] = inputs;
        j["results"] = results;
        j["oracle_agreement"] = oracle_agreement ? nlohmann::ordered_json(*oracle_agreement)
                                                 : nlohmann::ordered_json(nullptr);
        if (include_timing) j["elapsed_ms"] = elapsed_ms;
        return j;
    }

    std::string render() const { return to_json().dump(2) + "\n"; }
};

namespace detail {

class Stopwatch {
public:
    std::int64_t elapsed_ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline nlohmann::ordered_json profile_to_json(const ChainProfile& profile) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const Count& c : profile.counts) arr.push_back(c.str());
    return arr;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    out << text;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Gaussian binomial cache persistence. When FUZZCOUNT_CACHE_DIR is set, the
// memo table is seeded from <dir>/gaussian_binomials.txt on startup and
// merged back on exit; absent, the cache is in-memory only.

inline std::optional<std::string> gaussian_cache_path() {
    const char* dir = std::getenv("FUZZCOUNT_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return std::string(dir) + "/gaussian_binomials.txt";
}

inline void load_gaussian_cache() {
    auto path = gaussian_cache_path();
    if (!path) return;
    std::ifstream in(*path);
    if (!in) return;
    GaussianCache& cache = gaussian_cache();
    unsigned n, m;
    std::uint64_t p;
    std::string value;
    while (in >> n >> m >> p >> value) {
        cache.emplace(std::make_tuple(n, m, p), Count(value));
    }
}

inline void save_gaussian_cache() {
    auto path = gaussian_cache_path();
    if (!path) return;
    // Merge with whatever another run wrote in the meantime.
    GaussianCache merged = gaussian_cache();
    {
        std::ifstream in(*path);
        unsigned n, m;
        std::uint64_t p;
        std::string value;
        while (in >> n >> m >> p >> value) {
            merged.emplace(std::make_tuple(n, m, p), Count(value));
        }
    }
    std::error_code ec;
    std::filesystem::create_directories(std::filesystem::path(*path).parent_path(), ec);
    std::ofstream out(*path, std::ios::binary | std::ios::trunc);
    if (!out) return;
    for (const auto& [key, value] : merged) {
        out << std::get<0>(key) << ' ' << std::get<1>(key) << ' ' << std::get<2>(key) << ' '
            << value.str() << '\n';
    }
}

// ---------------------------------------------------------------------------
// count

struct CountArgs {
    GroupSpec spec;
    std::string equivalence = "tilde";  // or "approx"
    std::uint64_t oracle_bound = kDefaultOracleBound;
    bool timing = false;
};

/// Profile for one Sylow part: closed formula when the partition is a single
/// part (cyclic) or all ones (elementary abelian), lattice oracle otherwise.
inline std::pair<ChainProfile, std::string> profile_with_provenance(
    std::uint64_t p, const std::vector<unsigned>& partition, std::uint64_t oracle_bound) {
    if (partition.size() == 1) {
        return {cyclic_profile(partition[0]), "formula-cyclic"};
    }
    if (detail::is_all_ones(partition)) {
        return {elementary_abelian_profile(static_cast<unsigned>(partition.size()), p),
                "formula-elementary-abelian"};
    }
    return {oracle_profile(GroupSpec(p, partition), oracle_bound), "oracle"};
}

inline RunReport cmd_count(const CountArgs& args) {
    detail::Stopwatch watch;
    if (args.equivalence != "tilde" && args.equivalence != "approx") {
        throw std::invalid_argument("unknown equivalence '" + args.equivalence +
                                    "' (expected tilde or approx)");
    }

    RunReport report;
    report.command = "count";
    report.include_timing = args.timing;
    report.inputs = group_spec_to_json(args.spec);
    report.inputs["equivalence"] = args.equivalence;
    report.inputs["oracle_bound"] = args.oracle_bound;

    auto [profile_a, provenance_a] =
        profile_with_provenance(args.spec.p, args.spec.p_partition, args.oracle_bound);

    Count n;
    nlohmann::ordered_json provenance;
    provenance["p_part"] = provenance_a;
    if (args.spec.two_primes()) {
        auto [profile_b, provenance_b] =
            profile_with_provenance(*args.spec.q, args.spec.q_partition, args.oracle_bound);
        provenance["q_part"] = provenance_b;
        n = count_fuzzy_subgroups(args.spec, profile_a, profile_b);
    } else {
        n = single_prime_count(profile_a);
    }

    report.results["n"] = n.str();
    if (args.equivalence == "approx") {
        report.results["n_approx"] = to_weak_equivalence_count(n).str();
    }
    report.results["profiles"] = std::move(provenance);
    report.elapsed_ms = watch.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
    GroupSpec spec;
    std::optional<std::string> dump_path = std::nullopt;
    std::uint64_t oracle_bound = kDefaultOracleBound;
    bool timing = false;
};

inline RunReport cmd_oracle(const OracleArgs& args) {
    detail::Stopwatch watch;
    RunReport report;
    report.command = "oracle";
    report.include_timing = args.timing;
    report.inputs = group_spec_to_json(args.spec);
    report.inputs["oracle_bound"] = args.oracle_bound;
    if (args.dump_path) report.inputs["dump"] = *args.dump_path;

    SubgroupLattice lat = build_lattice(args.spec, args.oracle_bound);
    ChainCounts counts = count_chains(lat);

    report.results["n"] = counts.n.str();
    report.results["h"] = counts.h.str();
    report.results["profile"] = detail::profile_to_json(counts.profile);
    report.results["subgroups"] = Count(lat.subgroups.size()).str();

    if (args.dump_path) {
        detail::write_text_file(*args.dump_path, lattice_to_json(lat).dump(2) + "\n");
    }
    report.elapsed_ms = watch.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
    VerifyOptions options;
    bool timing = false;
};

inline RunReport cmd_verify(const VerifyArgs& args) {
    detail::Stopwatch watch;
    RunReport report;
    report.command = "verify";
    report.include_timing = args.timing;
    report.inputs["max_order"] = args.options.max_order;
    report.inputs["max_ij"] = args.options.max_ij;
    report.inputs["oracle_bound"] = args.options.oracle_bound;
    report.inputs["max_chains"] = args.options.max_chains;
    if (args.options.sabotage) report.inputs["sabotage"] = true;

    std::vector<CheckResult> checks = run_verification(args.options);
    std::size_t failed = 0;
    nlohmann::ordered_json listing = nlohmann::ordered_json::array();
    for (const CheckResult& r : checks) {
        if (!r.passed) ++failed;
        nlohmann::ordered_json entry;
        entry["name"] = r.name;
        entry["passed"] = r.passed;
        entry["detail"] = r.detail;
        listing.push_back(std::move(entry));
    }

    report.results["checks_total"] = Count(checks.size()).str();
    report.results["checks_passed"] = Count(checks.size() - failed).str();
    report.results["checks_failed"] = Count(failed).str();
    report.results["checks"] = std::move(listing);
    report.oracle_agreement = (failed == 0);
    report.elapsed_ms = watch.elapsed_ms();
    return report;
}

// ---------------------------------------------------------------------------
// table

struct TableArgs {
    std::string family;  // ee-ee, cyc-ee, cyc-cyc
    std::uint64_t p = 0;
    std::uint64_t q = 0;
    unsigned n_max = 1;
    unsigned m_max = 1;
    std::string format = "csv";  // or "json"
    std::optional<std::string> out_path;
    bool timing = false;
};

namespace detail {

inline ChainProfile family_profile(char kind, unsigned n, std::uint64_t p) {
    if (kind == 'c') return cyclic_profile(n);
    return elementary_abelian_profile(n, p);
}

inline std::vector<unsigned> family_partition(char kind, unsigned n) {
    if (kind == 'c') return {n};
    return std::vector<unsigned>(n, 1);
}

}  // namespace detail

/// The n(G) grid over 1 <= n <= n_max, 1 <= m <= m_max for one of the two
/// explicit families (and the doubly cyclic one), as decimal strings.
inline std::vector<std::vector<std::string>> table_grid(const TableArgs& args) {
    char kind_a, kind_b;
    if (args.family == "ee-ee") {
        kind_a = 'e';
        kind_b = 'e';
    } else if (args.family == "cyc-ee") {
        kind_a = 'c';
        kind_b = 'e';
    } else if (args.family == "cyc-cyc") {
        kind_a = 'c';
        kind_b = 'c';
    } else {
        throw std::invalid_argument("unknown family '" + args.family +
                                    "' (expected ee-ee, cyc-ee or cyc-cyc)");
    }
    if (args.n_max < 1 || args.m_max < 1) {
        throw std::invalid_argument("table: n-max and m-max must be positive");
    }

    std::vector<std::vector<std::string>> grid(args.n_max);
    for (unsigned n = 1; n <= args.n_max; ++n) {
        ChainProfile profile_a = detail::family_profile(kind_a, n, args.p);
        grid[n - 1].reserve(args.m_max);
        for (unsigned m = 1; m <= args.m_max; ++m) {
            ChainProfile profile_b = detail::family_profile(kind_b, m, args.q);
            GroupSpec spec(args.p, detail::family_partition(kind_a, n), args.q,
                           detail::family_partition(kind_b, m));
            grid[n - 1].push_back(count_fuzzy_subgroups(spec, profile_a, profile_b).str());
        }
    }
    return grid;
}

inline std::string grid_to_csv(const std::vector<std::vector<std::string>>& grid) {
    std::ostringstream os;
    os << "n\\m";
    for (std::size_t m = 1; m <= grid[0].size(); ++m) os << ',' << m;
    os << '\n';
    for (std::size_t n = 1; n <= grid.size(); ++n) {
        os << n;
        for (const std::string& cell : grid[n - 1]) os << ',' << cell;
        os << '\n';
    }
    return os.str();
}

inline RunReport cmd_table(const TableArgs& args) {
    detail::Stopwatch watch;
    if (args.format != "csv" && args.format != "json") {
        throw std::invalid_argument("unknown format '" + args.format +
                                    "' (expected csv or json)");
    }
    if (!is_prime(args.p) || !is_prime(args.q) || args.p == args.q) {
        throw std::invalid_argument("table: p and q must be distinct primes");
    }

    RunReport report;
    report.command = "table";
    report.include_timing = args.timing;
    report.inputs["family"] = args.family;
    report.inputs["p"] = args.p;
    report.inputs["q"] = args.q;
    report.inputs["n_max"] = args.n_max;
    report.inputs["m_max"] = args.m_max;
    report.inputs["format"] = args.format;
    if (args.out_path) report.inputs["out"] = *args.out_path;

    auto grid = table_grid(args);
    nlohmann::ordered_json grid_json = nlohmann::ordered_json::array();
    for (const auto& row : grid) grid_json.push_back(row);
    report.results["grid"] = grid_json;

    if (args.out_path) {
        if (args.format == "csv") {
            detail::write_text_file(*args.out_path, grid_to_csv(grid));
        } else {
            nlohmann::ordered_json artifact;
            artifact["family"] = args.family;
            artifact["p"] = args.p;
            artifact["q"] = args.q;
            artifact["grid"] = grid_json;
            detail::write_text_file(*args.out_path, artifact.dump(2) + "\n");
        }
    }
    report.elapsed_ms = watch.elapsed_ms();
    return report;
}

/// What table prints on stdout: the artifact itself when it is not being
/// written to a file, the run report otherwise.
inline std::string table_stdout(const TableArgs& args, const RunReport& report) {
    if (args.out_path) return report.render();
    if (args.format == "csv") {
        std::vector<std::vector<std::string>> grid;
        for (const auto& row : report.results.at("grid")) {
            grid.push_back(row.get<std::vector<std::string>>());
        }
        return grid_to_csv(grid);
    }
    nlohmann::ordered_json artifact;
    artifact["family"] = args.family;
    artifact["p"] = args.p;
    artifact["q"] = args.q;
    artifact["grid"] = report.results.at("grid");
    return artifact.dump(2) + "\n";
}

}  // namespace fuzzcount
