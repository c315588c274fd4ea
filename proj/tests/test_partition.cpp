#include "doctest.h"

#include <cmath>
#include <random>

#include "izeros/errors.hpp"
#include "izeros/partition.hpp"

using namespace izeros;

namespace {

mpq_class exact_eval(const ExactPolynomial& p, const mpq_class& v) {
    mpq_class acc = 0;
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) acc = acc * v + mpq_class(*it);
    return acc * p.prefactor;
}

const Boundary kAll[] = {Boundary::Toroidal, Boundary::Cylindrical, Boundary::FreeFree, Boundary::BrascampKunz};

}  // namespace

TEST_CASE("2x2 torus at zero field") {
    auto p = partition_polynomial({2, 2, Boundary::Toroidal, Model::IsingField}, {Variable::u, 1});
    REQUIRE(p.degree() == 8);
    std::vector<mpz_class> want = {2, 0, 0, 0, 12, 0, 0, 0, 2};
    CHECK(p.coefficients == want);
    CHECK(p.prefactor == 1);
}

TEST_CASE("row matrix shapes") {
    CHECK_THROWS_AS(build_transfer_matrix({2, 1, Boundary::Cylindrical, Model::IsingField}, {Variable::u, 1}),
                    ValidationError);
    auto t2 = build_transfer_matrix({2, 2, Boundary::Toroidal, Model::IsingField}, {Variable::u, 1});
    CHECK(t2.dimension() == 4);
    CHECK(t2.entries.size() == 16);
    auto hs = build_transfer_matrix({3, 3, Boundary::Cylindrical, Model::HardSquares}, {Variable::z, 1});
    CHECK(hs.dimension() == 4);
    for (const auto& e : hs.entries) CHECK(e.weight.coefficient >= 0);
}

TEST_CASE("sweep equals brute force on small lattices") {
    for (Boundary b : kAll)
        for (int lv = 1; lv <= 4; ++lv)
            for (int lh = 2; lh <= 4; ++lh) {
                LatticeSpec spec{lv, lh, b, Model::IsingField};
                if (b == Boundary::BrascampKunz && lh % 2) continue;
                for (const char* x : {"1", "1/2", "1/10"}) {
                    auto rep = verify_against_bruteforce(spec, {Variable::u, mpq_class(x)});
                    CHECK_MESSAGE(rep.equal, rep.detail);
                }
                auto rx = verify_against_bruteforce(spec, {Variable::x, mpq_class(1, 3)});
                CHECK_MESSAGE(rx.equal, rx.detail);
            }
}

TEST_CASE("hard squares equal brute force") {
    for (Boundary b : {Boundary::Toroidal, Boundary::Cylindrical, Boundary::FreeFree})
        for (int lv = 1; lv <= 4; ++lv)
            for (int lh = 2; lh <= 4; ++lh) {
                auto rep = verify_against_bruteforce({lv, lh, b, Model::HardSquares}, {Variable::z, 1});
                CHECK_MESSAGE(rep.equal, rep.detail);
            }
}

TEST_CASE("explicit matrix powers agree with the sweep") {
    for (Boundary b : kAll)
        for (int lh : {2, 4, 5}) {
            if (b == Boundary::BrascampKunz && lh % 2) continue;
            LatticeSpec spec{5, lh, b, Model::IsingField};
            Frozen f{Variable::u, mpq_class(2, 7)};
            CHECK(partition_polynomial(spec, f) == partition_polynomial_explicit(spec, f));
            Frozen g{Variable::x, mpq_class(3, 5)};
            CHECK(partition_polynomial(spec, g) == partition_polynomial_explicit(spec, g));
        }
}

TEST_CASE("u-symbolic and x-symbolic routes give the same Z at random rational points") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(1, 9);
    for (int trial = 0; trial < 12; ++trial) {
        LatticeSpec spec{2 + trial % 3, 2 + 2 * (trial % 2), kAll[trial % 4], Model::IsingField};
        mpq_class u(d(rng), d(rng)), x(d(rng), d(rng));
        u.canonicalize();
        x.canonicalize();
        auto pu = partition_polynomial(spec, {Variable::u, x});
        auto px = partition_polynomial(spec, {Variable::x, u});
        CHECK(exact_eval(pu, u) == exact_eval(px, x));
    }
}

TEST_CASE("transposition symmetry") {
    for (Boundary b : {Boundary::Toroidal, Boundary::FreeFree})
        for (int a = 2; a <= 4; ++a)
            for (int c = 2; c <= 5; ++c) {
                Frozen f{Variable::u, mpq_class(1, 2)};
                CHECK(partition_polynomial({a, c, b, Model::IsingField}, f) ==
                      partition_polynomial({c, a, b, Model::IsingField}, f));
            }
}

TEST_CASE("Brascamp-Kunz zero-field polynomial is even after removing its lowest power") {
    for (int L : {2, 4, 6}) {
        auto p = partition_polynomial({L, L, Boundary::BrascampKunz, Model::IsingField}, {Variable::u, 1});
        CHECK(p.valuation() == L / 2);
        for (std::size_t k = p.valuation() + 1; k < p.coefficients.size(); k += 2) CHECK(p.coefficients[k] == 0);
        CHECK(p.stride() == 2);
    }
}

TEST_CASE("cylinder degree is 2L^2 - L for even L") {
    // odd rings cannot frustrate every horizontal bond, so the count holds for even L
    for (int L = 2; L <= 8; L += 2)
        for (const char* x : {"1", "1/2"}) {
            auto p = partition_polynomial({L, L, Boundary::Cylindrical, Model::IsingField}, {Variable::u, mpq_class(x)});
            CHECK(p.degree() == 2 * L * L - L);
        }
}

TEST_CASE("x-polynomial is palindromic") {
    for (Boundary b : {Boundary::Toroidal, Boundary::Cylindrical, Boundary::FreeFree}) {
        auto p = partition_polynomial({4, 4, b, Model::IsingField}, {Variable::x, mpq_class(3, 10)});
        REQUIRE(p.degree() == 16);
        for (int k = 0; k <= 16; ++k) CHECK(p.coefficients[k] == p.coefficients[16 - k]);
    }
}

TEST_CASE("fixed-row field flag only changes a constant monomial") {
    LatticeSpec spec{4, 4, Boundary::BrascampKunz, Model::IsingField};
    PartitionOptions on;
    on.field_on_fixed_rows = true;
    for (Frozen f : {Frozen{Variable::u, mpq_class(1, 2)}, Frozen{Variable::x, mpq_class(1, 3)}}) {
        auto a = partition_polynomial(spec, f);
        auto b = partition_polynomial(spec, f, on);
        const int shift = b.valuation() - a.valuation();
        REQUIRE(b.degree() - a.degree() == shift);
        // b = K u^shift a with K constant
        mpq_class ratio = mpq_class(b.coefficients[b.valuation()]) / mpq_class(a.coefficients[a.valuation()]);
        for (int k = a.valuation(); k <= a.degree(); ++k)
            CHECK(mpq_class(b.coefficients[k + shift]) == ratio * mpq_class(a.coefficients[k]));
    }
}

TEST_CASE("free-fermion product matches the transfer matrix") {
    for (auto [lv, lh] : {std::pair{2, 2}, {3, 4}, {4, 4}, {4, 6}, {6, 4}, {6, 6}, {5, 8}, {8, 8}}) {
        auto tm = partition_polynomial({lv, lh, Boundary::BrascampKunz, Model::IsingField}, {Variable::u, 1});
        auto ff = bk_free_fermion_polynomial(lv, lh);
        const int v = tm.valuation();
        REQUIRE(tm.degree() - v == ff.degree());
        mpz_class k = tm.coefficients[v];
        for (int i = 0; i <= ff.degree(); ++i) CHECK(tm.coefficients[v + i] == k * ff.coefficients[i]);
    }
}

TEST_CASE("resource guard") {
    PartitionOptions small;
    small.memory_budget_bytes = 1 << 20;
    CHECK_THROWS_AS(partition_polynomial({12, 12, Boundary::BrascampKunz, Model::IsingField}, {Variable::u, 1}, small),
                    ResourceError);
    CHECK_THROWS_AS(brute_force_polynomial({5, 5, Boundary::Toroidal, Model::IsingField}, {Variable::u, 1}),
                    ResourceError);
}

TEST_CASE("floating sweep matches exact evaluation") {
    for (Boundary b : kAll) {
        LatticeSpec spec{4, 4, b, Model::IsingField};
        auto p = partition_polynomial(spec, {Variable::u, mpq_class(1, 2)});
        const double exact = std::log(exact_eval(p, mpq_class(3, 10)).get_d());
        CHECK(log_partition_real(spec, 0.3, 0.5) == doctest::Approx(exact).epsilon(1e-13));
    }
}

TEST_CASE("polynomial json round trip") {
    auto p = partition_polynomial({3, 4, Boundary::Cylindrical, Model::IsingField}, {Variable::u, mpq_class(1, 2)});
    auto q = polynomial_from_json(to_json(p));
    CHECK(q == p);
    CHECK(q.prefactor == p.prefactor);
    CHECK(q.variable == Variable::u);
    CHECK(to_json(q).dump() == to_json(p).dump());
}
