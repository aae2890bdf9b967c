#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fuzzcount/combinatorics.hpp"

namespace fuzzcount {

/// A finite abelian group of order p^n * q^m, described by one or two primes
/// and one partition per prime. Each partition entry e contributes a cyclic
/// factor Z_{p^e}; entries are non-increasing.
///
/// The q part is optional: a single-prime spec describes an abelian p-group.
struct GroupSpec {
    std::uint64_t p = 0;
    std::vector<unsigned> p_partition;
    std::optional<std::uint64_t> q;
    std::vector<unsigned> q_partition;

    GroupSpec(std::uint64_t p_, std::vector<unsigned> p_part)
        : p(p_), p_partition(std::move(p_part)) {
        validate();
    }

    GroupSpec(std::uint64_t p_, std::vector<unsigned> p_part, std::uint64_t q_,
              std::vector<unsigned> q_part)
        : p(p_), p_partition(std::move(p_part)), q(q_), q_partition(std::move(q_part)) {
        validate();
    }

    bool two_primes() const { return q.has_value(); }

    unsigned p_exponent() const {
        return std::accumulate(p_partition.begin(), p_partition.end(), 0u);
    }
    unsigned q_exponent() const {
        return std::accumulate(q_partition.begin(), q_partition.end(), 0u);
    }

    Count order() const {
        Count o = integer_pow(p, p_exponent());
        if (q) o *= integer_pow(*q, q_exponent());
        return o;
    }

    /// The Sylow p-subgroup as its own spec.
    GroupSpec p_part() const { return GroupSpec(p, p_partition); }

    /// The Sylow q-subgroup as its own spec. Requires two primes.
    GroupSpec q_part() const {
        if (!q) throw std::logic_error("GroupSpec::q_part: single-prime spec");
        return GroupSpec(*q, q_partition);
    }

    /// "Z_4 x Z_2 x Z_3" style display name.
    std::string name() const {
        std::ostringstream os;
        bool first = true;
        auto emit = [&](std::uint64_t prime, const std::vector<unsigned>& part) {
            for (unsigned e : part) {
                if (!first) os << " x ";
                os << "Z_" << integer_pow(prime, e).str();
                first = false;
            }
        };
        emit(p, p_partition);
        if (q) emit(*q, q_partition);
        return os.str();
    }

private:
    static void check_partition(const std::vector<unsigned>& part, const char* which) {
        if (part.empty()) {
            throw std::invalid_argument(std::string("GroupSpec: empty ") + which +
                                        " partition");
        }
        for (std::size_t i = 0; i < part.size(); ++i) {
            if (part[i] == 0) {
                throw std::invalid_argument(std::string("GroupSpec: ") + which +
                                            " partition entries must be positive");
            }
            if (i > 0 && part[i] > part[i - 1]) {
                throw std::invalid_argument(std::string("GroupSpec: ") + which +
                                            " partition must be non-increasing");
            }
        }
    }

    void validate() const {
        if (!is_prime(p)) {
            throw std::invalid_argument("GroupSpec: p = " + std::to_string(p) +
                                        " is not prime");
        }
        check_partition(p_partition, "p");
        if (q) {
            if (!is_prime(*q)) {
                throw std::invalid_argument("GroupSpec: q = " + std::to_string(*q) +
                                            " is not prime");
            }
            if (*q == p) {
                throw std::invalid_argument("GroupSpec: p and q must differ");
            }
            check_partition(q_partition, "q");
        } else if (!q_partition.empty()) {
            throw std::invalid_argument("GroupSpec: q partition given without q");
        }
    }
};

/// Parses "2,1,1" into {2,1,1}. Entries may come in any order; the result is
/// normalized to the canonical non-increasing form. Rejects anything but a
/// comma-separated list of positive integers.
inline std::vector<unsigned> parse_partition(const std::string& text) {
    std::vector<unsigned> part;
    std::istringstream is(text);
    std::string token;
    while (std::getline(is, token, ',')) {
        if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos) {
            throw std::invalid_argument("invalid partition entry '" + token + "'");
        }
        unsigned long v = std::stoul(token);
        if (v == 0 || v > 64) {
            throw std::invalid_argument("partition entry out of range: " + token);
        }
        part.push_back(static_cast<unsigned>(v));
    }
    if (part.empty()) {
        throw std::invalid_argument("empty partition");
    }
    std::sort(part.rbegin(), part.rend());
    return part;
}

}  // namespace fuzzcount
