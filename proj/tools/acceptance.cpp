// Acceptance run: one PASS/FAIL line per primary criterion. Exit status 0 only if all pass.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "izeros/density.hpp"
#include "izeros/equimodular.hpp"
#include "izeros/errors.hpp"
#include "izeros/partition.hpp"
#include "izeros/roots.hpp"
#include "izeros/spectrum.hpp"

using namespace izeros;
using std::numbers::pi;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

const LatticeSpec ring(int lh) { return {1, lh, Boundary::Toroidal, Model::IsingField}; }

double circle_distance(cplx u) {
    return std::min(std::abs(std::abs(u + 1.0) - std::sqrt(2.0)), std::abs(std::abs(u - 1.0) - std::sqrt(2.0)));
}

Outcome brute_force() {
    const auto t0 = std::chrono::steady_clock::now();
    int checks = 0, failures = 0;
    std::string first_failure;
    for (Model m : {Model::IsingField, Model::HardSquares})
        for (Boundary b : {Boundary::Toroidal, Boundary::Cylindrical, Boundary::FreeFree, Boundary::BrascampKunz})
            for (int lv = 1; lv <= 16; ++lv)
                for (int lh = 1; lv * lh <= 16; ++lh) {
                    const LatticeSpec spec{lv, lh, b, m};
                    try {
                        validate(spec);
                    } catch (const ValidationError&) {
                        continue;
                    }
                    std::vector<Frozen> cases;
                    if (m == Model::HardSquares) cases.push_back({Variable::z, 1});
                    else
                        for (const char* x : {"1", "1/2", "1/10"}) cases.push_back({Variable::u, mpq_class(x)});
                    for (const auto& f : cases) {
                        ++checks;
                        const auto rep = verify_against_bruteforce(spec, f);
                        if (!rep.equal && failures++ == 0) first_failure = describe(spec) + ": " + rep.detail;
                    }
                }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = failures == 0 && secs < 120;
    o.detail = fmt("%d/%d lattices and fields equal, %.1f s", checks - failures, checks, secs);
    if (failures) o.detail += "; first failure " + first_failure;
    return o;
}

// Largest distance from the closed-form grid of s + 1/s and from |s| = 1.
std::pair<double, int> bk_deviation(const ExactPolynomial& p, int lv, int lh) {
    const auto zs = map_zeros(find_roots(p, 1e-25), Variable::s);
    const auto grid = bk_s_plus_inverse(lv, lh);
    double worst = zs.certified ? 0 : INFINITY;
    int count = 0;
    for (const auto& z : zs.zeros) {
        count += z.multiplicity;
        const auto w = z.location + 1.0 / z.location;
        double best = INFINITY;
        for (double c : grid) best = std::min(best, std::abs(w - c));
        worst = std::max({worst, best, std::abs(std::abs(z.location) - 1)});
    }
    return {worst, count};
}

Outcome bk_closed_form() {
    // 6x6 from the transfer-matrix sweep; the sweep is also checked against the free-fermion
    // product, which is the only route that fits in memory at 20x20.
    const auto sweep = partition_polynomial({6, 6, Boundary::BrascampKunz, Model::IsingField}, {Variable::u, 1});
    const auto product = bk_free_fermion_polynomial(6, 6);
    // The sweep carries a power of u and an integer scale in front of the monic product.
    const int v = sweep.valuation();
    bool same = sweep.degree() - v == product.degree();
    for (int i = 0; same && i <= product.degree(); ++i)
        same = sweep.coefficients[v + i] == sweep.coefficients[v] * product.coefficients[i];
    const auto [d6, n6] = bk_deviation(sweep, 6, 6);
    const auto t0 = std::chrono::steady_clock::now();
    const auto [d20, n20] = bk_deviation(bk_free_fermion_polynomial(20, 20), 20, 20);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = same && n6 == 36 && n20 == 400 && d6 < 1e-12 && d20 < 1e-12 && secs < 300;
    o.detail = fmt("6x6: %d zeros, max deviation %.1e, sweep %s product; 20x20: %d zeros, max deviation %.1e, %.1f s", n6,
                   d6, same ? "==" : "!=", n20, d20, secs);
    return o;
}

Outcome cylinder_counts() {
    const LatticeSpec spec{8, 8, Boundary::Cylindrical, Model::IsingField};
    std::string counts;
    bool ok = true;
    for (const char* x : {"1", "1/2", "1/10"}) {
        const auto zs = find_roots(partition_polynomial(spec, {Variable::u, mpq_class(x)}), 1e-12);
        ok = ok && zs.certified && zs.total_multiplicity() == 120;
        counts += fmt("%s x=%s", counts.empty() ? "" : ",", x) + " " + std::to_string(zs.total_multiplicity());
    }
    const int m = exact_multiplicity(partition_polynomial(spec, {Variable::u, 1}), -1);
    Outcome o;
    o.pass = ok && m == 8;
    o.detail = "zeros" + counts + "; multiplicity of u=-1 at x=1: " + std::to_string(m);
    return o;
}

Outcome kaufman_cross_check() {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> rad(0.2, 2.0), th(0, 2 * pi);
    double worst = 0, worst_z = 0;
    for (int lh : {4, 6, 8}) {
        const int lv = 3;
        const auto exact = partition_polynomial({lv, lh, Boundary::Toroidal, Model::IsingField}, {Variable::u, 1});
        for (int i = 0; i < 50; ++i) {
            const cplx u = std::polar(rad(rng), th(rng));
            const auto k = kaufman_spectrum(u, lh);
            const auto n = numeric_spectrum(ring(lh), {u, 1});
            double scale = 0;
            for (auto v : values(k)) scale = std::max(scale, std::abs(v));
            worst = std::max(worst, multiset_distance(values(k), values(n)) / scale);
            const cplx z = evaluate(exact, u);
            worst_z = std::max(worst_z, std::abs(reconstruct_Z(n, lv, Construction::CC) - z) / std::abs(z));
        }
    }
    Outcome o;
    o.pass = worst < 1e-9 && worst_z < 1e-9;
    o.detail = fmt("lh 4,6,8 x 50 points: spectra %.1e, sum of lambda^Lv vs exact Z %.1e", worst, worst_z);
    return o;
}

Outcome lee_yang() {
    const LatticeSpec spec{6, 4, Boundary::Toroidal, Model::IsingField};
    const auto zs = find_roots(partition_polynomial(spec, {Variable::x, mpq_class(3, 10)}), 1e-12);
    double radius = 0, off = 0;
    for (const auto& z : zs.zeros) {
        radius = std::max(radius, z.radius);
        off = std::max(off, std::abs(std::abs(z.location) - 1));
    }
    const double sym = phase_symmetry_defect(sorted_phases(zs));
    const auto hot = lee_yang_density(find_roots(partition_polynomial(spec, {Variable::x, mpq_class(3, 5)}), 1e-12));
    Outcome o;
    o.pass = zs.certified && zs.total_multiplicity() == 24 && radius < 1e-10 && off < 1e-10 && sym < 1e-10 &&
             hot.theta_ly && *hot.theta_ly > 0;
    o.detail = fmt("u=3/10: %d zeros, radius %.1e, ||x|-1| %.1e, symmetry %.1e; u=3/5: theta_LY = %.4f", zs.total_multiplicity(),
                   radius, off, sym, hot.theta_ly ? *hot.theta_ly : 0.0);
    return o;
}

Outcome density_convergence() {
    const auto zs = bk_closed_form_s_zeros(40, 40);
    auto worst = [&](double p) {
        const auto g = scale_dependent_density(zs, 1, p);
        double w = 0, at = 0;
        for (const auto& s : g.samples) {
            const double a = s.abscissa / pi;
            if ((a >= 0.15 && a <= 0.40) || (a >= 0.60 && a <= 0.85)) {
                const double e = std::abs(s.value / lu_wu_density(s.abscissa) - 1);
                if (e > w) w = e, at = a;
            }
        }
        return std::pair{w, at};
    };
    const auto [w_sqrt, a_sqrt] = worst(0.5);
    const auto [w_one, a_one] = worst(0.0);
    Outcome o;
    o.pass = w_sqrt < 0.05 && w_one > 0.2;
    o.detail = fmt("a=40: worst relative error %.4f at alpha=%.3f pi; a=1: %.4f at alpha=%.3f pi", w_sqrt, a_sqrt, w_one,
                   a_one);
    return o;
}

std::string seq(const std::vector<int>& v) {
    std::string s;
    for (int m : v) s += (s.empty() ? "" : ",") + std::to_string(m);
    return s;
}

Outcome equimodular_profiles() {
    const auto t0 = std::chrono::steady_clock::now();
    EquimodularOptions o0;
    o0.momentum_index = 0;
    auto profile = [&](int lh, Branch b) { return multiplicity_profile(circle_branch(lh, b, 4000, o0), ring(lh), 1, o0); };
    const auto f10 = profile(10, Branch::Ferromagnetic), a10 = profile(10, Branch::Antiferromagnetic),
               f12 = profile(12, Branch::Ferromagnetic);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool f10ok = f10 == std::vector<int>{2, 2, 4, 4, 8, 8, 18, 28};
    const bool a10ok = a10 == std::vector<int>{2, 4, 8, 4, 18, 24};
    const bool f12ok = f12 == std::vector<int>{2, 2, 4, 4, 8, 8, 18, 26, 52, 88};
    Outcome o;
    o.pass = f10ok && a10ok && f12ok && secs < 600;
    o.detail = "lh=10 ferro " + seq(f10) + (f10ok ? "" : " (expected 2,2,4,4,8,8,18,28)") + "; antiferro " + seq(a10) +
               (a10ok ? "" : " (expected 2,4,8,4,18,24)") + "; lh=12 ferro " + seq(f12) +
               (f12ok ? "" : " (expected 2,2,4,4,8,8,18,26,52,88)") + fmt("; %.1f s", secs);
    return o;
}

Outcome circle_property() {
    EquimodularOptions o;
    o.max_steps = 30;
    double worst = 0;
    int intra = 0;
    for (int lh : {6, 8}) {
        for (const auto& s : grid_scan(ring(lh), 1, {{-2.2, 0.05}, {2.2, 2.2}}, 23, o)) {
            for (const auto& p : trace_curve(s, ring(lh), 1, {{-3, 0.01}, {3, 3}}, o).points) {
                if (p.sectors.size() < 2) continue;
                if (std::all_of(p.sectors.begin(), p.sectors.end(), [&](Sector q) { return q == p.sectors[0]; })) {
                    ++intra;
                    worst = std::max(worst, circle_distance(p.u));
                }
            }
        }
    }
    EquimodularOptions tight;
    tight.count_tol = 1e-10;
    bool full = true;
    for (int lh : {6, 8, 10})
        for (cplx u : {cplx(0, 1), cplx(0, -1)}) full = full && classify(ring(lh), 1, u, tight).multiplicity == (1 << lh);
    Outcome r;
    r.pass = intra > 0 && worst < 1e-8 && full;
    r.detail = fmt("%d intra-sector points, max distance from |u-+1|=sqrt2 %.1e; u=+-i fully equimodular (lh 6,8,10): %s",
                   intra, worst, full ? "yes" : "no");
    return r;
}

Outcome inner_loop() {
    // The criterion is stated at 22x22; the symbolic sweep there is far beyond the memory budget.
    std::string guard;
    try {
        partition_polynomial({22, 22, Boundary::BrascampKunz, Model::IsingField}, {Variable::u, mpq_class(4, 5)});
        guard = "22x22 sweep completed";
    } catch (const ResourceError& e) {
        guard = std::string("22x22 not computed (") + e.what() + ")";
    }
    const LatticeSpec spec{12, 12, Boundary::BrascampKunz, Model::IsingField};
    auto rough = [&](const mpq_class& x) {
        const auto zu = find_roots(partition_polynomial(spec, {Variable::u, x}), 1e-12);
        InnerLoopOptions o;
        o.x = x.get_d();
        o.fit = false;
        return roughness(inner_loop_density(map_zeros(zu, Variable::y, Convention::BrascampKunz, x.get_d()), o));
    };
    const double smooth = rough(mpq_class(4, 5)), ragged = rough(mpq_class(47, 50));
    Outcome o;
    o.pass = false;
    o.detail = guard + fmt("; 12x12 supplement: max |ln(D_j+1/D_j)| %.3f at x=0.8 vs %.3f at x=0.94, ratio %.2f (needs 3)",
                           smooth, ragged, ragged / smooth);
    return o;
}

Outcome onsager() {
    const double f = onsager_free_energy(3.0), g = lu_wu_free_energy(3.0);
    const double target = onsager_free_energy(2.0);
    std::string gaps;
    double prev = INFINITY;
    bool monotone = true;
    for (int L : {8, 12, 16}) {
        const double d = std::abs(finite_free_energy({L, L, Boundary::BrascampKunz, Model::IsingField}, 2.0) - target);
        monotone = monotone && d < prev;
        prev = d;
        gaps += fmt("%sL=%d %.2e", gaps.empty() ? "" : ", ", L, d);
    }
    Outcome o;
    o.pass = std::abs(f - g) < 1e-8 && monotone;
    o.detail = fmt("s=3: one-dimensional %.15f, double integral %.15f, difference %.1e; s=2 finite-lattice gaps ", g,
                   f, std::abs(f - g)) + gaps;
    return o;
}

Outcome hard_square_exponent() {
    auto zs = find_roots(partition_polynomial({12, 12, Boundary::Cylindrical, Model::HardSquares}, {Variable::z, 1}), 1e-12);
    zs.variable = Variable::z;
    const auto d = inner_loop_density(zs, {});
    if (!d.endpoint_fit) return {false, "no endpoint fit"};
    const auto& f = *d.endpoint_fit;
    Outcome o;
    o.pass = f.sigma >= 0.08 && f.sigma <= 0.30 && f.ci_low <= 1.0 / 6 && f.ci_high >= 1.0 / 6;
    o.detail = fmt("12x12 cylinder: sigma %.4f, 95%% CI [%.4f, %.4f], points %d..%d", f.sigma, f.ci_low, f.ci_high,
                   f.first, f.first + f.count - 1);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"brute-force equivalence", brute_force},
        {"Brascamp-Kunz closed form", bk_closed_form},
        {"cylindrical counts", cylinder_counts},
        {"Kaufman cross-check", kaufman_cross_check},
        {"Lee-Yang circle", lee_yang},
        {"density convergence", density_convergence},
        {"equimodular multiplicities", equimodular_profiles},
        {"circle property", circle_property},
        {"inner-loop behavior", inner_loop},
        {"Onsager consistency", onsager},
        {"hard-square endpoint exponent", hard_square_exponent},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failed += !o.pass;
        std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria pass\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
    return failed ? 1 : 0;
}
