#include <doctest.h>

#include <cmath>
#include <random>

#include "izeros/errors.hpp"
#include "izeros/partition.hpp"
#include "izeros/spectrum.hpp"

using namespace izeros;

namespace {

cplx exact_Z(const LatticeSpec& spec, cplx u, const mpq_class& x) {
    const auto p = partition_polynomial(spec, {Variable::u, x});
    return evaluate(p, u);  // includes the prefactor
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

std::vector<cplx> sector_values(const SpectrumRecord& r, Sector s) {
    std::vector<cplx> v;
    for (const auto& e : r.eigenvalues)
        if (e.sector == s) v.push_back(e.value);
    return v;
}

}  // namespace

TEST_CASE("kaufman gamma special values") {
    CHECK(std::abs(kaufman_gamma(1.0, 0, 6)) < 1e-14);
    // s + 1/s - cos(phi) = 1 makes gamma vanish
    const int lh = 6, m = 2;
    const double c = 1 + std::cos(M_PI * m / lh);
    const cplx s = (c + std::sqrt(cplx(c * c - 4))) / 2.0;
    CHECK(std::abs(kaufman_gamma(s, m, lh)) < 1e-7);
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> th(0, 2 * M_PI);
    for (int i = 0; i < 50; ++i) {
        const cplx z = std::polar(1.0, th(rng));
        for (int mm = 1; mm < 2 * lh; ++mm) {
            const cplx cc = z + 1.0 / z - std::cos(M_PI * mm / lh);
            if (std::norm(cc) < 1 && std::abs(cc.imag()) < 1e-12)
                CHECK(std::abs(std::abs(std::exp(kaufman_gamma(z, mm, lh))) - 1) < 1e-9);
        }
    }
    // e^{gamma_0} below one for 0 < s < 1
    CHECK(kaufman_gamma(0.5, 0, 4).real() < 0);
    CHECK(kaufman_gamma(2.0, 0, 4).real() > 0);
}

TEST_CASE("kaufman sector sizes and the largest eigenvalue") {
    const auto r2 = kaufman_spectrum(0.3, 2);
    CHECK(sector_values(r2, Sector::Plus).size() == 2);
    for (int lh : {4, 8}) {
        const auto r = kaufman_spectrum(0.37, lh);
        CHECK(sector_values(r, Sector::Plus).size() == (1u << (lh - 1)));
        CHECK(sector_values(r, Sector::Minus).size() == (1u << (lh - 1)));
    }
    // s > 1: the all-plus Plus eigenvalue dominates
    const cplx u = 0.3;
    const auto r = kaufman_spectrum(u, 4);
    const cplx s = to_s(u);
    cplx top = std::pow(u, 4);
    for (int m : {1}) {
        const cplx c = s + 1.0 / s - std::cos(M_PI * m / 4);
        top *= 2.0 * s * (c + std::sqrt(c * c - 1.0));
    }
    top *= (2.0 * s * ((s + 1.0 / s - std::cos(3 * M_PI / 4)) + std::sqrt(std::pow(s + 1.0 / s - std::cos(3 * M_PI / 4), 2) - 1.0)));
    double best = 0;
    Sector where = Sector::None;
    for (const auto& e : r.eigenvalues)
        if (std::abs(e.value) > best) best = std::abs(e.value), where = e.sector;
    CHECK(where == Sector::Plus);
    CHECK(rel(best, std::abs(top)) < 1e-12);
}

TEST_CASE("kaufman and numeric spectra agree at random complex u") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rad(0.2, 2.0), th(0, 2 * M_PI);
    for (int lh : {4, 6, 8}) {
        double worst = 0, worst_z = 0;
        for (int i = 0; i < 50; ++i) {
            const cplx u = std::polar(rad(rng), th(rng));
            const auto k = kaufman_spectrum(u, lh);
            const auto n = numeric_spectrum({1, lh, Boundary::Toroidal, Model::IsingField}, {u, 1});
            worst = std::max(worst, multiset_distance(values(k), values(n)));
            worst = std::max(worst, multiset_distance(sector_values(k, Sector::Plus), sector_values(n, Sector::Plus)));
            const int lv = 3;
            const cplx z = exact_Z({lv, lh, Boundary::Toroidal, Model::IsingField}, u, 1);
            worst_z = std::max(worst_z, rel(reconstruct_Z(n, lv, Construction::CC), z));
            worst_z = std::max(worst_z, rel(reconstruct_Z(k, lv, Construction::CC), z));
        }
        CHECK(worst < 1e-9);
        CHECK(worst_z < 1e-9);
    }
}

TEST_CASE("numeric momenta reproduce the kaufman momenta") {
    const cplx u(0.4, 0.3);
    const auto k = kaufman_spectrum(u, 6);
    const auto n = numeric_spectrum({1, 6, Boundary::Toroidal, Model::IsingField}, {u, 1});
    for (int p = 0; p < 6; ++p)
        for (Sector s : {Sector::Plus, Sector::Minus}) {
            std::vector<cplx> a, b;
            for (const auto& e : k.eigenvalues)
                if (e.momentum_index == p && e.sector == s) a.push_back(e.value);
            for (const auto& e : n.eigenvalues)
                if (e.momentum_index == p && e.sector == s) b.push_back(e.value);
            CHECK(a.size() == b.size());
            CHECK(multiset_distance(a, b) < 1e-10);
        }
}

TEST_CASE("reconstruction of all four constructions") {
    const cplx u = 1.0 / 3;
    const auto cc = numeric_spectrum({1, 4, Boundary::Toroidal, Model::IsingField}, {u, 1});
    CHECK(rel(reconstruct_Z(cc, 4, Construction::CC), exact_Z({4, 4, Boundary::Toroidal, Model::IsingField}, u, 1)) < 1e-9);
    for (const mpq_class& x : {mpq_class(1), mpq_class(1, 2)}) {
        const cplx w(0.3, 0.5);
        SpectrumOptions o;
        o.overlaps = true;
        const auto tc = numeric_spectrum({1, 4, Boundary::Cylindrical, Model::IsingField}, {w, x}, o);
        const auto tf = numeric_spectrum({1, 4, Boundary::FreeFree, Model::IsingField}, {w, x}, o);
        CHECK(rel(reconstruct_Z(tc, 3, Construction::FC), exact_Z({3, 4, Boundary::Cylindrical, Model::IsingField}, w, x)) < 1e-9);
        CHECK(rel(reconstruct_Z(tf, 3, Construction::FF), exact_Z({3, 4, Boundary::FreeFree, Model::IsingField}, w, x)) < 1e-9);
        // CF: periodic rows, free columns, which is the torus with the roles of the axes swapped
        CHECK(rel(reconstruct_Z(tf, 3, Construction::CF), exact_Z({4, 3, Boundary::Cylindrical, Model::IsingField}, w, x)) < 1e-9);
    }
    CHECK_THROWS_AS(reconstruct_Z(cc, 3, Construction::FF), ValidationError);
    CHECK_THROWS_AS(reconstruct_Z(cc, 3, Construction::FC), ValidationError);
    // lv = 1 gives the trace
    const auto t = numeric_spectrum({1, 3, Boundary::Toroidal, Model::IsingField}, {u, 1});
    CHECK(rel(reconstruct_Z(t, 1, Construction::CC), exact_Z({1, 3, Boundary::Toroidal, Model::IsingField}, u, 1)) < 1e-12);
}

TEST_CASE("equimodular spectrum at u = i") {
    for (int lh : {4, 6}) {
        const auto n = numeric_spectrum({1, lh, Boundary::Toroidal, Model::IsingField}, {cplx(0, 1), 1});
        const double m0 = std::abs(n.eigenvalues[0].value);
        for (const auto& e : n.eigenvalues) CHECK(std::abs(std::abs(e.value) - m0) < 1e-10 * m0);
    }
}

TEST_CASE("doublets have equal modulus away from x = 1") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> rad(0.3, 1.5), th(0, 2 * M_PI);
    for (int i = 0; i < 5; ++i) {
        const cplx u = std::polar(rad(rng), th(rng));
        const auto n = numeric_spectrum({1, 6, Boundary::Toroidal, Model::IsingField}, {u, mpq_class(99, 100)});
        for (int p = 1; p < 3; ++p) {
            std::vector<double> a, b;
            for (const auto& e : n.eigenvalues) {
                if (e.momentum_index == p) a.push_back(std::abs(e.value));
                if (e.momentum_index == 6 - p) b.push_back(std::abs(e.value));
                if (e.momentum_index == p) CHECK(e.degeneracy == 2);
            }
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            REQUIRE(a.size() == b.size());
            for (std::size_t j = 0; j < a.size(); ++j) CHECK(std::abs(a[j] - b[j]) < 1e-9 * a.back());
        }
    }
}

TEST_CASE("jsonl dump is stable") {
    const auto n = numeric_spectrum({1, 3, Boundary::Toroidal, Model::IsingField}, {0.5, 1});
    const auto a = spectrum_jsonl(n);
    CHECK(a == spectrum_jsonl(n));
    CHECK(a.find("\"eigenvalues\"") != std::string::npos);
    CHECK(a.back() == '\n');
}
