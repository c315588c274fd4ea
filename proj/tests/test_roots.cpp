#include <doctest.h>

#include <cmath>
#include <random>

#include "izeros/errors.hpp"
#include "izeros/partition.hpp"
#include "izeros/roots.hpp"

using namespace izeros;

namespace {

ExactPolynomial poly(std::vector<long> c) {
    ExactPolynomial p;
    for (long v : c) p.coefficients.emplace_back(v);
    return p;
}

ExactPolynomial torus_u(int lv, int lh) {
    return partition_polynomial({lv, lh, Boundary::Toroidal, Model::IsingField}, {Variable::u, 1});
}

// Rigorous-ish residual: |p(z)| small relative to the sum of |a_k||z|^k
double relative_residual(const ExactPolynomial& p, std::complex<double> z) {
    std::complex<double> acc = 0;
    double mag = 0;
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
        acc = acc * z + it->get_d();
        mag = mag * std::abs(z) + std::abs(it->get_d());
    }
    return std::abs(acc) / mag;
}

}  // namespace

TEST_CASE("2x2 torus zeros lie on two circles") {
    const auto p = torus_u(2, 2);
    CHECK(p == poly({2, 0, 0, 0, 12, 0, 0, 0, 2}));
    const auto zs = find_roots(p, 1e-20);
    CHECK(zs.certified);
    CHECK(zs.total_multiplicity() == 8);
    const double r1 = std::sqrt(std::sqrt(2.0) - 1), r2 = std::sqrt(std::sqrt(2.0) + 1);
    int inner = 0, outer = 0;
    for (const auto& z : zs.zeros) {
        CHECK(z.multiplicity == 1);
        CHECK(z.radius <= 1e-20);
        const double m = std::abs(z.location);
        if (std::abs(m - r1) < 1e-14) ++inner;
        else if (std::abs(m - r2) < 1e-14) ++outer;
        // zeros of u^8 + 6u^4 + 1 satisfy u^4 = -3 +- 2 sqrt 2, so arguments are odd multiples of pi/4
        const double a = std::arg(z.location) / (M_PI / 4);
        CHECK(std::abs(a - std::round(a)) < 1e-12);
        CHECK(static_cast<long>(std::lround(a)) % 2 != 0);
    }
    CHECK(inner == 4);
    CHECK(outer == 4);
}

TEST_CASE("exact candidates are deflated before the iteration") {
    // (u+1)^2 (u-1) (u^2+1) (u^2 - 2)
    const auto a = multiply(poly({1, 2, 1}), poly({-1, 1}));
    const auto b = multiply(a, multiply(poly({1, 0, 1}), poly({-2, 0, 1})));
    const auto zs = find_roots(b, 1e-30);
    CHECK(zs.total_multiplicity() == 7);
    int exact = 0;
    for (const auto& z : zs.zeros) {
        if (z.radius == 0) ++exact;
        if (z.re == "-1") CHECK(z.multiplicity == 2);
    }
    CHECK(exact == 4);
    bool found = false;
    for (const auto& z : zs.zeros)
        if (std::abs(z.location.real() - std::sqrt(2.0)) < 1e-15) {
            found = true;
            CHECK(z.re.substr(0, 20) == "1.414213562373095048");
        }
    CHECK(found);
}

TEST_CASE("deflation by rational and Gaussian roots") {
    const auto p = multiply(poly({1, 2, 1}), poly({3, -2}));  // (u+1)^2 (3 - 2u)
    CHECK(exact_multiplicity(p, -1) == 2);
    CHECK(exact_multiplicity(p, mpq_class(3, 2)) == 1);
    const auto q = deflate(p, mpq_class(-1), 2);
    CHECK(q.degree() == 1);
    CHECK_THROWS_AS(deflate(p, mpq_class(-1), 3), NotARootError);
    const auto r = deflate(p, mpq_class(3, 2), 1);
    CHECK(r.degree() == 2);
    CHECK(r.prefactor == 2);
    const auto g = multiply(poly({5, -2, 1}), poly({1, 1}));  // (u - (1+2i))(u - (1-2i)) (u+1)
    const auto h = deflate(g, GaussianRational{1, 2}, 1);
    CHECK(h == poly({1, 1}));
    CHECK_THROWS_AS(deflate(g, GaussianRational{1, 2}, 2), NotARootError);
}

TEST_CASE("cylindrical 8x8 has u = -1 with multiplicity 8") {
    const auto p = partition_polynomial({8, 8, Boundary::Cylindrical, Model::IsingField}, {Variable::u, 1});
    CHECK(exact_multiplicity(p, -1) == 8);
    const auto d = deflate(p, mpq_class(-1), 8);
    CHECK_THROWS_AS(deflate(d, mpq_class(-1), 1), NotARootError);
    try {
        deflate(p, mpq_class(-1), 9);
    } catch (const NotARootError& e) {
        CHECK(std::string(e.what()).find("stage 9") != std::string::npos);
    }
}

TEST_CASE("BK 6x6 zeros in s agree with the free-fermion grid") {
    const auto p = partition_polynomial({6, 6, Boundary::BrascampKunz, Model::IsingField}, {Variable::u, 1});
    const auto zs = find_roots(p, 1e-25);
    CHECK(zs.certified);
    const auto s = map_zeros(zs, Variable::s);
    const auto grid = bk_s_plus_inverse(6, 6);  // values of s + 1/s on the grid
    int matched = 0, total = 0;
    for (const auto& z : s.zeros) {
        total += z.multiplicity;
        const auto w = z.location + 1.0 / z.location;
        double best = 1e9;
        for (double c : grid) best = std::min(best, std::abs(w - c));
        if (best < 1e-12) matched += z.multiplicity;
        CHECK(std::abs(std::abs(z.location) - 1.0) < 1e-12);
    }
    CHECK(total == 36);
    CHECK(matched == 36);
}

TEST_CASE("residual property on random polynomials") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coef(-50, 50);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 5 + trial;
        std::vector<long> c(n + 1);
        for (auto& v : c) v = coef(rng);
        c[n] = c[n] == 0 ? 1 : c[n];
        c[0] = c[0] == 0 ? 3 : c[0];
        const auto p = poly(c);
        const auto zs = find_roots(p, 1e-25);
        CHECK(zs.total_multiplicity() == n);
        for (const auto& z : zs.zeros) CHECK(relative_residual(p, z.location) < 1e-13);
    }
}

TEST_CASE("clusters of a repeated irrational root are merged") {
    // (u^2 - 3)^3
    const auto p = multiply(multiply(poly({-3, 0, 1}), poly({-3, 0, 1})), poly({-3, 0, 1}));
    const auto zs = find_roots(p, 1e-5);
    CHECK(zs.total_multiplicity() == 6);
    int mult3 = 0;
    for (const auto& z : zs.zeros)
        if (z.multiplicity == 3) {
            ++mult3;
            CHECK(std::abs(std::abs(z.location.real()) - std::sqrt(3.0)) <= z.radius + 1e-15);
        }
    CHECK(mult3 == 2);
}

TEST_CASE("output is deterministic") {
    const auto p = torus_u(4, 4);
    const auto a = zeros_csv(find_roots(p, 1e-20));
    const auto b = zeros_csv(find_roots(p, 1e-20));
    CHECK(a == b);
    CHECK(a.rfind("variable,re,im,radius,multiplicity\n", 0) == 0);
}

TEST_CASE("precision cap gives an uncertified partial result") {
    const auto p = torus_u(4, 4);
    RootOptions o;
    o.start_precision_bits = 64;
    o.max_precision_bits = 64;
    const auto zs = find_roots(p, 1e-200, o);
    CHECK_FALSE(zs.certified);
    CHECK_FALSE(zs.flags.empty());
    CHECK(zs.total_multiplicity() == p.degree());
}

TEST_CASE("map to y and z keeps multiplicities") {
    const auto zs = find_roots(torus_u(3, 3), 1e-20);
    const auto y = map_zeros(zs, Variable::y, Convention::BrascampKunz, 0.25);
    CHECK(y.total_multiplicity() == zs.total_multiplicity());
    const auto z = map_zeros(y, Variable::z);
    CHECK(z.total_multiplicity() == zs.total_multiplicity());
    const auto s = map_zeros(find_roots(poly({0, 0, 1, 1}), 1e-20), Variable::s);
    CHECK(s.total_multiplicity() == 1);  // the double zero at u = 0 is dropped
    CHECK_FALSE(s.flags.empty());
}
