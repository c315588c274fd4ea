#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "izeros/lattice.hpp"
#include "izeros/polynomial.hpp"

namespace izeros {

// Which variable stays symbolic; the other one is frozen at an exact rational.
// For hard squares the symbolic variable is z and `fixed` is ignored.
struct Frozen {
    Variable symbolic = Variable::u;
    mpq_class fixed = 1;
};

struct PartitionOptions {
    // Field weight on the fixed Brascamp-Kunz rows. Only a constant monomial either way.
    bool field_on_fixed_rows = false;
    std::size_t memory_budget_bytes = std::size_t(1) << 30;
};

struct Monomial {
    mpz_class coefficient;
    int exponent = 0;
};

// Row-to-row matrix. Bit k of a state is column k; 1 means a down spin or an occupied site.
// Horizontal bonds and field of the destination row are attached to each entry.
struct SymbolicTransferMatrix {
    struct Entry {
        std::uint32_t row;  // index into states
        std::uint32_t col;
        Monomial weight;
    };
    std::vector<std::uint32_t> states;
    std::vector<Entry> entries;
    std::size_t dimension() const { return states.size(); }
};

void check_frozen(const LatticeSpec& spec, const Frozen& frozen);

SymbolicTransferMatrix build_transfer_matrix(const LatticeSpec& spec, const Frozen& frozen,
                                             const PartitionOptions& options = {});

// Exact low-temperature partition function. Ising specs use a site-by-site sweep in
// multi-modular arithmetic; hard squares contract the explicit row matrix.
ExactPolynomial partition_polynomial(const LatticeSpec& spec, const Frozen& frozen,
                                     const PartitionOptions& options = {});

// Same quantity from powers of the explicit row matrix (small lh only).
ExactPolynomial partition_polynomial_explicit(const LatticeSpec& spec, const Frozen& frozen,
                                              const PartitionOptions& options = {});

// Direct sum over all 2^(lv*lh) configurations from an explicit bond list.
ExactPolynomial brute_force_polynomial(const LatticeSpec& spec, const Frozen& frozen,
                                       const PartitionOptions& options = {});

struct BruteForceReport {
    bool equal = false;
    std::string detail;
};

BruteForceReport verify_against_bruteforce(const LatticeSpec& spec, const Frozen& frozen,
                                           const PartitionOptions& options = {});

// Monic integer polynomial prod_{n,m} (u^4 + 2c u^3 + 2u^2 - 2c u + 1) with
// c = cos((2n-1)pi/lh) + cos(m pi/(lv+1)); its zeros are the zero-field Brascamp-Kunz zeros.
ExactPolynomial bk_free_fermion_polynomial(int lv, int lh);

// Closed-form zero-field Brascamp-Kunz values of s + 1/s, one per (n, m).
std::vector<double> bk_s_plus_inverse(int lv, int lh);

// ln Z_low at real u, x >= 0 by a floating sweep with rescaling (Ising only).
double log_partition_real(const LatticeSpec& spec, double u, double x, const PartitionOptions& options = {});

}  // namespace izeros
