// Command-line front door: compute fuzzy-subgroup counts from the closed
// formulas, run the brute-force lattice oracle, cross-verify the two, and
// emit n(G) tables for the explicit families.
//
// Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
// 3 resource bound exceeded.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fuzzcount/cli.hpp"

namespace {

struct SpecFlags {
    std::uint64_t p = 0;
    std::string p_partition;
    std::uint64_t q = 0;
    std::string q_partition;
};

void add_spec_flags(CLI::App* cmd, SpecFlags& flags) {
    cmd->add_option("--p", flags.p, "First prime")->required();
    cmd->add_option("--p-partition", flags.p_partition,
                    "Cyclic factor exponents at p, e.g. 2,1 for Z_{p^2} x Z_p")
        ->required();
    cmd->add_option("--q", flags.q, "Second prime (optional)");
    cmd->add_option("--q-partition", flags.q_partition, "Cyclic factor exponents at q");
}

fuzzcount::GroupSpec spec_from_flags(const SpecFlags& flags) {
    if ((flags.q != 0) != !flags.q_partition.empty()) {
        throw std::invalid_argument("--q and --q-partition must be given together");
    }
    if (flags.q != 0) {
        return fuzzcount::GroupSpec(flags.p, fuzzcount::parse_partition(flags.p_partition),
                                    flags.q, fuzzcount::parse_partition(flags.q_partition));
    }
    return fuzzcount::GroupSpec(flags.p, fuzzcount::parse_partition(flags.p_partition));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact fuzzy-subgroup counting for abelian groups of order p^n q^m"};
    app.require_subcommand(1);

    bool timing = false;
    app.add_flag("--timing", timing, "Include elapsed_ms in the report");

    SpecFlags count_spec;
    std::string equivalence = "tilde";
    std::uint64_t count_bound = fuzzcount::kDefaultOracleBound;
    CLI::App* count = app.add_subcommand("count", "Count fuzzy subgroups via the formulas");
    add_spec_flags(count, count_spec);
    count->add_option("--equivalence", equivalence, "tilde (chain count) or approx (2n-1)");
    count->add_option("--oracle-bound", count_bound,
                      "Order bound for oracle-derived profiles of irregular partitions");

    SpecFlags oracle_spec;
    std::string dump_path;
    std::uint64_t oracle_bound = fuzzcount::kDefaultOracleBound;
    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force subgroup lattice counts");
    add_spec_flags(oracle, oracle_spec);
    oracle->add_option("--dump", dump_path, "Write the lattice as JSON to this path");
    oracle->add_option("--oracle-bound", oracle_bound, "Maximum group order");

    fuzzcount::VerifyOptions verify_options;
    CLI::App* verify = app.add_subcommand("verify", "Cross-check formulas against the oracle");
    verify->add_option("--max-order", verify_options.max_order,
                       "Check all two-prime abelian groups up to this order");
    verify->add_option("--max-ij", verify_options.max_ij, "Interleaving identity range");
    verify->add_option("--oracle-bound", verify_options.oracle_bound, "Maximum group order");
    verify->add_option("--max-chains", verify_options.max_chains,
                       "Skip enumeration checks past this many chains");
    verify->add_option("--threads", verify_options.threads, "Worker threads (0 = auto)");
    verify->add_flag("--sabotage", verify_options.sabotage,
                     "Deliberately corrupt one comparison (negative control)")
        ->group("");  // test-only, hidden from help

    fuzzcount::TableArgs table_args;
    CLI::App* table = app.add_subcommand("table", "Emit the n(G) grid for an explicit family");
    table->add_option("--family", table_args.family, "ee-ee, cyc-ee or cyc-cyc")->required();
    table->add_option("--p", table_args.p, "First prime")->required();
    table->add_option("--q", table_args.q, "Second prime")->required();
    table->add_option("--n-max", table_args.n_max, "Rows: 1 <= n <= n-max")->required();
    table->add_option("--m-max", table_args.m_max, "Columns: 1 <= m <= m-max")->required();
    table->add_option("--format", table_args.format, "csv or json");
    table->add_option("--out", table_args.out_path, "Write the grid to this path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    fuzzcount::load_gaussian_cache();

    try {
        if (count->parsed()) {
            fuzzcount::CountArgs args{spec_from_flags(count_spec), equivalence, count_bound,
                                      timing};
            std::cout << fuzzcount::cmd_count(args).render();
        } else if (oracle->parsed()) {
            fuzzcount::OracleArgs args{spec_from_flags(oracle_spec),
                                       dump_path.empty()
                                           ? std::nullopt
                                           : std::optional<std::string>(dump_path),
                                       oracle_bound, timing};
            std::cout << fuzzcount::cmd_oracle(args).render();
        } else if (verify->parsed()) {
            fuzzcount::RunReport report =
                fuzzcount::cmd_verify(fuzzcount::VerifyArgs{verify_options, timing});
            std::cout << report.render();
            fuzzcount::save_gaussian_cache();
            return report.oracle_agreement.value_or(false) ? 0 : 1;
        } else if (table->parsed()) {
            table_args.timing = timing;
            fuzzcount::RunReport report = fuzzcount::cmd_table(table_args);
            std::cout << fuzzcount::table_stdout(table_args, report);
        }
        fuzzcount::save_gaussian_cache();
    } catch (const fuzzcount::BoundExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
