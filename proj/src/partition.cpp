#include "izeros/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mpfr.h>
#include <sstream>

#include "izeros/errors.hpp"

namespace izeros {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

struct Ring {
    u64 p;
    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= p ? s - p : s;
    }
    u64 mul(u64 a, u64 b) const { return static_cast<u64>(static_cast<u128>(a) * b % p); }
    u64 reduce(const mpz_class& v) const { return mpz_fdiv_ui(v.get_mpz_t(), p); }
};

const std::vector<u64>& primes(std::size_t count) {
    static std::vector<u64> list = [] {
        std::vector<u64> out;
        mpz_class c = (mpz_class(1) << 62) - 1;
        while (out.size() < 4096) {
            if (mpz_probab_prime_p(c.get_mpz_t(), 40)) out.push_back(c.get_ui());
            c -= 2;
        }
        return out;
    }();
    if (count > list.size()) throw ResourceError("coefficient bound needs more than 4096 CRT primes");
    return list;
}

// Small exact rational split into numerator/denominator.
struct Frac {
    u64 p = 1, q = 1;
};

Frac split(const mpq_class& v) {
    if (v < 0) throw ValidationError("frozen parameter must be nonnegative");
    if (!v.get_num().fits_ulong_p() || !v.get_den().fits_ulong_p() || v.get_num() > (1u << 30) ||
        v.get_den() > (1u << 30))
        throw ValidationError("frozen rational too large (numerator and denominator must be < 2^30)");
    return {v.get_num().get_ui(), v.get_den().get_ui()};
}

// Integer weight description: bond and site factors as (coefficient, exponent).
struct WeightRule {
    Variable symbolic = Variable::u;
    Frac f;
    // Monomial of `unsat` unsatisfied bonds out of `bonds`, and `down` down spins out of `sites`.
    Monomial combine(int unsat, int bonds, int down, int sites) const {
        Monomial m;
        mpz_class a, b;
        if (symbolic == Variable::u) {
            mpz_ui_pow_ui(a.get_mpz_t(), f.p, down);
            mpz_ui_pow_ui(b.get_mpz_t(), f.q, sites - down);
            m.coefficient = a * b;
            m.exponent = unsat;
        } else {
            mpz_ui_pow_ui(a.get_mpz_t(), f.p, unsat);
            mpz_ui_pow_ui(b.get_mpz_t(), f.q, bonds - unsat);
            m.coefficient = a * b;
            m.exponent = down;
        }
        return m;
    }
};

int horizontal_unsat(std::uint32_t s, int lh, bool periodic) {
    int n = 0;
    for (int c = 0; c + 1 < lh; ++c) n += ((s >> c) ^ (s >> (c + 1))) & 1u;
    if (periodic) n += ((s >> (lh - 1)) ^ s) & 1u;
    return n;
}

int horizontal_bonds(int lh, bool periodic) { return periodic ? lh : lh - 1; }

std::uint32_t alternating_row(int lh) {
    std::uint32_t s = 0;
    for (int c = 1; c < lh; c += 2) s |= 1u << c;
    return s;
}

std::size_t degree_bound(const LatticeSpec& spec, Variable symbolic) {
    if (spec.model == Model::HardSquares) return site_count(spec);
    return symbolic == Variable::u ? bond_count(spec) : site_count(spec);
}

void fill_metadata(ExactPolynomial& p, const LatticeSpec& spec, const Frozen& frozen) {
    p.fixed_params["lv"] = std::to_string(spec.lv);
    p.fixed_params["lh"] = std::to_string(spec.lh);
    p.fixed_params["boundary"] = to_string(spec.boundary);
    p.fixed_params["model"] = to_string(spec.model);
    if (spec.model == Model::IsingField) {
        p.fixed_params[frozen.symbolic == Variable::u ? "x" : "u"] = frozen.fixed.get_str();
        std::ostringstream mono;
        mono << "u^(-" << bond_count(spec) << "/2) x^(-" << site_count(spec) << "/2)";
        p.fixed_params["physical_monomial"] = mono.str();
    }
}

ExactPolynomial finish(std::vector<mpz_class> coeffs, const LatticeSpec& spec, const Frozen& frozen,
                       const PartitionOptions& options) {
    ExactPolynomial p;
    p.variable = spec.model == Model::HardSquares ? Variable::z : frozen.symbolic;
    p.coefficients = std::move(coeffs);
    p.trim();
    if (spec.model == Model::IsingField) {
        const Frac f = split(frozen.fixed);
        mpz_class den;
        const auto n = frozen.symbolic == Variable::u ? site_count(spec) : bond_count(spec);
        mpz_ui_pow_ui(den.get_mpz_t(), f.q, n);
        p.prefactor = mpq_class(1, den);
        p.prefactor.canonicalize();
        if (options.field_on_fixed_rows && spec.boundary == Boundary::BrascampKunz) {
            const int downs = spec.lh / 2;
            if (frozen.symbolic == Variable::u) {
                mpz_class a, b;
                mpz_ui_pow_ui(a.get_mpz_t(), f.p, downs);
                mpz_ui_pow_ui(b.get_mpz_t(), f.q, downs);
                for (auto& c : p.coefficients) c *= a;
                p.prefactor /= b;
            } else {
                p.coefficients.insert(p.coefficients.begin(), downs, mpz_class(0));
            }
        }
    }
    fill_metadata(p, spec, frozen);
    return p;
}

void check_memory(std::size_t bytes, const PartitionOptions& options, const std::string& what) {
    if (bytes > options.memory_budget_bytes) {
        std::ostringstream os;
        os << what << " needs " << bytes / (1024 * 1024) << " MiB, budget is "
           << options.memory_budget_bytes / (1024 * 1024) << " MiB; reduce lh or raise the budget";
        throw ResourceError(os.str());
    }
}

// ---- multi-modular site sweep (Ising) ----

struct SiteTable {
    // [old bit][new bit][left bit][wrap bit]
    Monomial m[2][2][2][2];
    int max_exponent = 0;
};

SiteTable site_table(const WeightRule& rule, bool vertical, bool left, bool wrap) {
    SiteTable t;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int l = 0; l < 2; ++l)
                for (int r = 0; r < 2; ++r) {
                    int bonds = 0, unsat = 0;
                    if (vertical) { ++bonds; unsat += a != b; }
                    if (left) { ++bonds; unsat += l != b; }
                    if (wrap) { ++bonds; unsat += r != b; }
                    t.m[a][b][l][r] = rule.combine(unsat, bonds, b, 1);
                    t.max_exponent = std::max(t.max_exponent, t.m[a][b][l][r].exponent);
                }
    return t;
}

struct ModMono {
    u64 c;
    int e;
};

void axpy(u64* dst, const u64* src, ModMono m, int upto, const Ring& R) {
    if (m.c == 0) return;
    if (m.c == 1) {
        for (int j = m.e; j <= upto; ++j) dst[j] = R.add(dst[j], src[j - m.e]);
    } else {
        for (int j = m.e; j <= upto; ++j) dst[j] = R.add(dst[j], R.mul(m.c, src[j - m.e]));
    }
}

class ModularSweep {
public:
    ModularSweep(const LatticeSpec& spec, const WeightRule& rule, const Ring& ring, int width)
        : spec_(spec), rule_(rule), R_(ring), W_(width), S_(std::size_t(1) << spec.lh),
          buf_(S_ * W_, 0), t0_(W_), t1_(W_) {
        const bool per = periodic_h(spec.boundary);
        for (int vertical = 0; vertical < 2; ++vertical) {
            for (int k = 0; k < spec.lh; ++k) {
                auto t = site_table(rule, vertical, k > 0, per && k == spec.lh - 1 && spec.lh > 1);
                auto& dst = tables_[vertical].emplace_back();
                dst.max_exponent = t.max_exponent;
                for (int a = 0; a < 2; ++a)
                    for (int b = 0; b < 2; ++b)
                        for (int l = 0; l < 2; ++l)
                            for (int r = 0; r < 2; ++r)
                                dst.m[a][b][l][r] = {R_.reduce(t.m[a][b][l][r].coefficient), t.m[a][b][l][r].exponent};
            }
        }
    }

    void reset(std::uint32_t state) {
        std::fill(buf_.begin(), buf_.end(), 0);
        buf_[state * W_] = 1;
        deg_ = 0;
    }

    void row(bool vertical) {
        const bool per = periodic_h(spec_.boundary);
        for (int k = 0; k < spec_.lh; ++k) site(k, vertical, per && k == spec_.lh - 1);
    }

    const u64* poly(std::size_t state) const { return &buf_[state * W_]; }
    int degree() const { return deg_; }

private:
    struct ModTable {
        ModMono m[2][2][2][2];
        int max_exponent = 0;
    };

    void site(int k, bool vertical, bool wrap) {
        const ModTable& t = tables_[vertical][k];
        const int nd = std::min(deg_ + t.max_exponent, W_ - 1);
        const std::size_t bit = std::size_t(1) << k;
        for (std::size_t i0 = 0; i0 < S_; ++i0) {
            if (i0 & bit) continue;
            const std::size_t i1 = i0 | bit;
            const int l = k > 0 ? static_cast<int>((i0 >> (k - 1)) & 1u) : 0;
            const int r = wrap ? static_cast<int>(i0 & 1u) : 0;
            u64* v0 = &buf_[i0 * W_];
            u64* v1 = &buf_[i1 * W_];
            std::fill(t0_.begin(), t0_.begin() + nd + 1, 0);
            std::fill(t1_.begin(), t1_.begin() + nd + 1, 0);
            axpy(t0_.data(), v0, t.m[0][0][l][r], nd, R_);
            axpy(t0_.data(), v1, t.m[1][0][l][r], nd, R_);
            axpy(t1_.data(), v0, t.m[0][1][l][r], nd, R_);
            axpy(t1_.data(), v1, t.m[1][1][l][r], nd, R_);
            std::copy(t0_.begin(), t0_.begin() + nd + 1, v0);
            std::copy(t1_.begin(), t1_.begin() + nd + 1, v1);
        }
        deg_ = nd;
    }

    const LatticeSpec& spec_;
    const WeightRule& rule_;
    Ring R_;
    int W_;
    std::size_t S_;
    std::vector<u64> buf_;
    std::vector<u64> t0_, t1_;
    std::vector<ModTable> tables_[2];
    int deg_ = 0;
};

std::vector<u64> sweep_mod(const LatticeSpec& spec, const WeightRule& rule, const Ring& R, int width) {
    ModularSweep sw(spec, rule, R, width);
    std::vector<u64> out(width, 0);
    const std::size_t S = std::size_t(1) << spec.lh;
    switch (spec.boundary) {
        case Boundary::Toroidal: {
            for (std::uint32_t s = 0; s < S; ++s) {
                // orbit representative under cyclic column shifts
                std::uint32_t rot = s, best = s;
                int period = spec.lh;
                for (int t = 1; t < spec.lh; ++t) {
                    rot = ((rot >> 1) | ((rot & 1u) << (spec.lh - 1)));
                    if (rot < best) best = rot;
                    if (rot == s && period == spec.lh) period = t;
                }
                if (best != s) continue;
                sw.reset(s);
                for (int r = 0; r < spec.lv; ++r) sw.row(true);
                const u64* p = sw.poly(s);
                const u64 w = static_cast<u64>(period) % R.p;
                for (int j = 0; j <= sw.degree(); ++j) out[j] = R.add(out[j], R.mul(w, p[j]));
            }
            break;
        }
        case Boundary::Cylindrical:
        case Boundary::FreeFree: {
            sw.reset(0);
            sw.row(false);
            for (int r = 1; r < spec.lv; ++r) sw.row(true);
            for (std::size_t s = 0; s < S; ++s) {
                const u64* p = sw.poly(s);
                for (int j = 0; j <= sw.degree(); ++j) out[j] = R.add(out[j], p[j]);
            }
            break;
        }
        case Boundary::BrascampKunz: {
            sw.reset(0);  // fixed all-up row above row 1
            for (int r = 0; r < spec.lv; ++r) sw.row(true);
            const std::uint32_t alt = alternating_row(spec.lh);
            for (std::uint32_t s = 0; s < S; ++s) {
                const int mism = std::popcount(s ^ alt);
                Monomial m = rule.combine(mism, spec.lh, 0, 0);
                const ModMono mm{R.reduce(m.coefficient), m.exponent};
                axpy(out.data(), sw.poly(s), mm, width - 1, R);
            }
            break;
        }
    }
    return out;
}

// Upper bound on log2 of Z at symbolic variable = 1; every coefficient is below it.
double log2_coefficient_bound(const LatticeSpec& spec, const Frozen& frozen) {
    const Frac f = split(frozen.fixed);
    const double N = static_cast<double>(site_count(spec));
    const double B = static_cast<double>(bond_count(spec));
    if (frozen.symbolic == Variable::u) return N * std::log2(static_cast<double>(f.p + f.q));
    return N + B * std::log2(static_cast<double>(std::max(f.p, f.q)));
}

std::vector<mpz_class> crt(const std::vector<std::vector<u64>>& residues, const std::vector<u64>& ps) {
    const std::size_t width = residues.front().size();
    std::vector<mpz_class> out(width, 0);
    // Garner: x = r0 + p0 (t1 + p1 (t2 + ...))
    std::vector<mpz_class> mods(ps.size());
    mpz_class M = 1;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        mods[i] = M;
        M *= ps[i];
    }
    std::vector<u64> inv(ps.size(), 1);
    for (std::size_t i = 1; i < ps.size(); ++i) {
        mpz_class m = mods[i] % ps[i], r, p = ps[i];
        mpz_invert(r.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        inv[i] = r.get_ui();
    }
    for (std::size_t j = 0; j < width; ++j) {
        mpz_class x = residues[0][j];
        for (std::size_t i = 1; i < ps.size(); ++i) {
            Ring R{ps[i]};
            const u64 xr = mpz_fdiv_ui(x.get_mpz_t(), ps[i]);
            const u64 diff = residues[i][j] >= xr ? residues[i][j] - xr : residues[i][j] + ps[i] - xr;
            const u64 t = R.mul(diff, inv[i]);
            x += mods[i] * t;
        }
        out[j] = x;
    }
    return out;
}

ExactPolynomial ising_sweep_polynomial(const LatticeSpec& spec, const Frozen& frozen,
                                       const PartitionOptions& options) {
    const std::size_t D = degree_bound(spec, frozen.symbolic);
    const std::size_t states = std::size_t(1) << spec.lh;
    check_memory(states * (D + 1) * sizeof(u64), options, "transfer-matrix sweep (" + describe(spec) + ")");
    WeightRule rule{frozen.symbolic, split(frozen.fixed)};
    const double bits = log2_coefficient_bound(spec, frozen) + 2.0;
    const std::size_t count = static_cast<std::size_t>(std::ceil(bits / 61.0));
    const auto& plist = primes(count);
    std::vector<u64> ps(plist.begin(), plist.begin() + count);
    std::vector<std::vector<u64>> residues;
    for (u64 p : ps) residues.push_back(sweep_mod(spec, rule, Ring{p}, static_cast<int>(D + 1)));
    auto coeffs = crt(residues, ps);
    if (frozen.symbolic == Variable::u) {
        // Z(u=1) = (p+q)^N exactly.
        mpz_class total = 0, expect;
        for (auto& c : coeffs) total += c;
        const Frac f = split(frozen.fixed);
        mpz_ui_pow_ui(expect.get_mpz_t(), f.p + f.q, site_count(spec));
        if (total != expect) throw NumericError("partition sweep failed its Z(u=1) checksum");
    }
    return finish(std::move(coeffs), spec, frozen, options);
}

// ---- explicit row matrix ----

using PolyVec = std::vector<std::vector<mpz_class>>;

std::vector<std::uint32_t> row_states(const LatticeSpec& spec) {
    std::vector<std::uint32_t> out;
    const std::uint32_t S = 1u << spec.lh;
    const bool per = periodic_h(spec.boundary);
    for (std::uint32_t s = 0; s < S; ++s) {
        if (spec.model == Model::HardSquares) {
            if (s & (s >> 1)) continue;
            if (per && spec.lh > 1 && (s & 1u) && ((s >> (spec.lh - 1)) & 1u)) continue;
        }
        out.push_back(s);
    }
    return out;
}

// Weight of one row with no vertical bonds: horizontal bonds and field.
Monomial row_weight(const LatticeSpec& spec, const WeightRule& rule, std::uint32_t s) {
    if (spec.model == Model::HardSquares) return {1, std::popcount(s)};
    const bool per = periodic_h(spec.boundary);
    return rule.combine(horizontal_unsat(s, spec.lh, per), horizontal_bonds(spec.lh, per), std::popcount(s),
                        spec.lh);
}

void add_scaled(std::vector<mpz_class>& dst, const std::vector<mpz_class>& src, const Monomial& m) {
    if (m.coefficient == 0) return;
    for (std::size_t j = 0; j + m.exponent < dst.size(); ++j)
        if (src[j] != 0) dst[j + m.exponent] += src[j] * m.coefficient;
}

PolyVec apply_matrix(const SymbolicTransferMatrix& T, const PolyVec& v) {
    PolyVec w(v.size(), std::vector<mpz_class>(v.front().size(), 0));
    for (const auto& e : T.entries) add_scaled(w[e.col], v[e.row], e.weight);
    return w;
}

WeightRule rule_for(const LatticeSpec& spec, const Frozen& frozen) {
    if (spec.model == Model::HardSquares) return {Variable::z, {1, 1}};
    return {frozen.symbolic, split(frozen.fixed)};
}

}  // namespace

void check_frozen(const LatticeSpec& spec, const Frozen& frozen) {
    validate(spec);
    if (spec.model == Model::HardSquares) {
        if (frozen.symbolic != Variable::z) throw ValidationError("hard squares use the symbolic fugacity z");
        return;
    }
    if (frozen.symbolic != Variable::u && frozen.symbolic != Variable::x)
        throw ValidationError("Ising polynomials are symbolic in u or x");
    split(frozen.fixed);
}

SymbolicTransferMatrix build_transfer_matrix(const LatticeSpec& spec, const Frozen& frozen,
                                             const PartitionOptions& options) {
    check_frozen(spec, frozen);
    if (spec.lh > 20) throw ResourceError("explicit row matrix limited to lh <= 20");
    SymbolicTransferMatrix T;
    T.states = row_states(spec);
    const std::size_t n = T.states.size();
    check_memory(n * n * (sizeof(SymbolicTransferMatrix::Entry) + 16), options,
                 "explicit row matrix (" + describe(spec) + ")");
    const WeightRule rule = rule_for(spec, frozen);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = 0; j < n; ++j) {
            const std::uint32_t a = T.states[i], b = T.states[j];
            Monomial w;
            if (spec.model == Model::HardSquares) {
                if (a & b) continue;
                w = {1, std::popcount(b)};
            } else {
                const bool per = periodic_h(spec.boundary);
                const int unsat = std::popcount(a ^ b) + horizontal_unsat(b, spec.lh, per);
                w = rule.combine(unsat, spec.lh + horizontal_bonds(spec.lh, per), std::popcount(b), spec.lh);
            }
            T.entries.push_back({i, j, std::move(w)});
        }
    }
    return T;
}

ExactPolynomial partition_polynomial_explicit(const LatticeSpec& spec, const Frozen& frozen,
                                              const PartitionOptions& options) {
    const auto T = build_transfer_matrix(spec, frozen, options);
    const WeightRule rule = rule_for(spec, frozen);
    const std::size_t D = degree_bound(spec, frozen.symbolic);
    const std::size_t n = T.dimension();
    check_memory(n * (D + 1) * 24, options, "explicit contraction");
    std::vector<mpz_class> total(D + 1, 0);
    if (spec.boundary == Boundary::Toroidal && spec.lv == 1) {
        std::vector<mpz_class> unit(D + 1, 0);
        unit[0] = 1;
        for (const auto& e : T.entries)
            if (e.row == e.col) add_scaled(total, unit, e.weight);
    } else if (spec.boundary == Boundary::Toroidal) {
        for (std::size_t i = 0; i < n; ++i) {
            PolyVec v(n, std::vector<mpz_class>(D + 1, 0));
            v[i][0] = 1;
            for (int r = 0; r < spec.lv; ++r) v = apply_matrix(T, v);
            for (std::size_t j = 0; j <= D; ++j) total[j] += v[i][j];
        }
    } else {
        PolyVec v(n, std::vector<mpz_class>(D + 1, 0));
        for (std::size_t i = 0; i < n; ++i) {
            Monomial w = row_weight(spec, rule, T.states[i]);
            if (spec.boundary == Boundary::BrascampKunz) {
                const int down = std::popcount(T.states[i]);
                Monomial top = rule.combine(down, spec.lh, 0, 0);
                w.coefficient *= top.coefficient;
                w.exponent += top.exponent;
            }
            std::vector<mpz_class> unit(D + 1, 0);
            unit[0] = 1;
            add_scaled(v[i], unit, w);
        }
        for (int r = 1; r < spec.lv; ++r) v = apply_matrix(T, v);
        const std::uint32_t alt = alternating_row(spec.lh);
        for (std::size_t i = 0; i < n; ++i) {
            Monomial close{1, 0};
            if (spec.boundary == Boundary::BrascampKunz)
                close = rule.combine(std::popcount(T.states[i] ^ alt), spec.lh, 0, 0);
            add_scaled(total, v[i], close);
        }
    }
    return finish(std::move(total), spec, frozen, options);
}

ExactPolynomial partition_polynomial(const LatticeSpec& spec, const Frozen& frozen,
                                     const PartitionOptions& options) {
    check_frozen(spec, frozen);
    if (spec.model == Model::HardSquares) {
        if (spec.boundary == Boundary::Toroidal && spec.lv >= 2 && spec.lv < spec.lh)
            return partition_polynomial_explicit({spec.lh, spec.lv, spec.boundary, spec.model}, frozen, options);
        return partition_polynomial_explicit(spec, frozen, options);
    }
    // The torus sweep traces over a first row of 2^lh states; run it along the narrow side.
    // A single periodic row only adds always-satisfied self bonds, i.e. it is the cylinder.
    if (spec.boundary == Boundary::Toroidal && spec.lv == 1) {
        auto p = ising_sweep_polynomial({1, spec.lh, Boundary::Cylindrical, spec.model}, frozen, options);
        if (frozen.symbolic == Variable::x) {
            // keep the integer normalisation: each satisfied bond at u = a/q carries q
            mpz_class q;
            mpz_pow_ui(q.get_mpz_t(), frozen.fixed.get_den_mpz_t(), static_cast<unsigned long>(spec.lh));
            for (auto& c : p.coefficients) c *= q;
            p.prefactor /= q;
        }
        return p;
    }
    if (spec.boundary == Boundary::Toroidal && spec.lv < spec.lh)
        return ising_sweep_polynomial({spec.lh, spec.lv, spec.boundary, spec.model}, frozen, options);
    return ising_sweep_polynomial(spec, frozen, options);
}

ExactPolynomial brute_force_polynomial(const LatticeSpec& spec, const Frozen& frozen,
                                       const PartitionOptions& options) {
    check_frozen(spec, frozen);
    const int lv = spec.lv, lh = spec.lh;
    const int N = lv * lh;
    if (N > 24) throw ResourceError("brute force limited to 24 sites");
    struct Bond { int a, b; };  // b < 0 encodes a fixed spin: -1 up, -2 down
    std::vector<Bond> bonds;
    auto id = [lh](int r, int c) { return r * lh + c; };
    const bool per = periodic_h(spec.boundary);
    for (int r = 0; r < lv; ++r) {
        for (int c = 0; c + 1 < lh; ++c) bonds.push_back({id(r, c), id(r, c + 1)});
        if (per) bonds.push_back({id(r, lh - 1), id(r, 0)});
    }
    for (int r = 0; r + 1 < lv; ++r)
        for (int c = 0; c < lh; ++c) bonds.push_back({id(r, c), id(r + 1, c)});
    if (spec.boundary == Boundary::Toroidal)
        for (int c = 0; c < lh; ++c) bonds.push_back({id(lv - 1, c), id(0, c)});
    if (spec.boundary == Boundary::BrascampKunz) {
        for (int c = 0; c < lh; ++c) bonds.push_back({id(0, c), -1});
        for (int c = 0; c < lh; ++c) bonds.push_back({id(lv - 1, c), (c % 2) ? -2 : -1});
    }
    const int B = static_cast<int>(bonds.size());
    std::vector<std::vector<u64>> hist(B + 1, std::vector<u64>(N + 1, 0));
    const std::uint64_t total = std::uint64_t(1) << N;
    for (std::uint64_t cfg = 0; cfg < total; ++cfg) {
        int unsat = 0;
        bool allowed = true;
        for (const auto& bd : bonds) {
            const int sa = (cfg >> bd.a) & 1u;
            if (spec.model == Model::HardSquares) {
                if (sa && ((cfg >> bd.b) & 1u)) { allowed = false; break; }
                continue;
            }
            const int sb = bd.b >= 0 ? static_cast<int>((cfg >> bd.b) & 1u) : (bd.b == -2 ? 1 : 0);
            unsat += sa != sb;
        }
        if (!allowed) continue;
        ++hist[unsat][std::popcount(cfg)];
    }
    const std::size_t D = degree_bound(spec, frozen.symbolic);
    std::vector<mpz_class> coeffs(D + 1, 0);
    if (spec.model == Model::HardSquares) {
        for (int d = 0; d <= N; ++d) coeffs[d] = mpz_class(std::to_string(hist[0][d]));
    } else {
        const WeightRule rule{frozen.symbolic, split(frozen.fixed)};
        for (int e = 0; e <= B; ++e)
            for (int d = 0; d <= N; ++d) {
                if (!hist[e][d]) continue;
                Monomial m = rule.combine(e, B, d, N);
                coeffs[m.exponent] += m.coefficient * mpz_class(std::to_string(hist[e][d]));
            }
    }
    return finish(std::move(coeffs), spec, frozen, options);
}

BruteForceReport verify_against_bruteforce(const LatticeSpec& spec, const Frozen& frozen,
                                           const PartitionOptions& options) {
    BruteForceReport rep;
    const auto a = partition_polynomial(spec, frozen, options);
    const auto b = brute_force_polynomial(spec, frozen, options);
    std::ostringstream os;
    if (a.coefficients.size() != b.coefficients.size()) {
        os << describe(spec) << ": degree " << a.degree() << " vs brute force " << b.degree();
    } else if (a.prefactor != b.prefactor) {
        os << describe(spec) << ": prefactor " << a.prefactor << " vs " << b.prefactor;
    } else {
        for (std::size_t k = 0; k < a.coefficients.size(); ++k)
            if (a.coefficients[k] != b.coefficients[k]) {
                os << describe(spec) << ": coefficient " << k << " is " << a.coefficients[k] << ", brute force "
                   << b.coefficients[k];
                break;
            }
    }
    rep.detail = os.str();
    rep.equal = rep.detail.empty();
    if (rep.equal) rep.detail = describe(spec) + ": equal (degree " + std::to_string(a.degree()) + ")";
    return rep;
}

std::vector<double> bk_s_plus_inverse(int lv, int lh) {
    if (lh % 2 || lh < 2 || lv < 1) throw ValidationError("Brascamp-Kunz closed form needs even lh and lv >= 1");
    std::vector<double> out;
    for (int n = 1; n <= lh / 2; ++n)
        for (int m = 1; m <= lv; ++m)
            out.push_back(std::cos((2.0 * n - 1) * M_PI / lh) + std::cos(m * M_PI / (lv + 1.0)));
    return out;
}

ExactPolynomial bk_free_fermion_polynomial(int lv, int lh) {
    if (lh % 2 || lh < 2 || lv < 1) throw ValidationError("Brascamp-Kunz closed form needs even lh and lv >= 1");
    const int factors = lv * lh / 2;
    const int deg = 4 * factors;
    // |coefficients| <= 12^factors
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(factors * 3.6 + 128);
    std::vector<mpfr_t> acc(deg + 1), nxt(deg + 1);
    for (int i = 0; i <= deg; ++i) {
        mpfr_init2(acc[i], prec);
        mpfr_init2(nxt[i], prec);
        mpfr_set_ui(acc[i], 0, MPFR_RNDN);
    }
    mpfr_set_ui(acc[0], 1, MPFR_RNDN);
    mpfr_t pi, c, t, f[5];
    mpfr_inits2(prec, pi, c, t, f[0], f[1], f[2], f[3], f[4], static_cast<mpfr_ptr>(nullptr));
    mpfr_const_pi(pi, MPFR_RNDN);
    int cur = 0;
    for (int n = 1; n <= lh / 2; ++n) {
        for (int m = 1; m <= lv; ++m) {
            mpfr_mul_ui(c, pi, 2 * n - 1, MPFR_RNDN);
            mpfr_div_ui(c, c, lh, MPFR_RNDN);
            mpfr_cos(c, c, MPFR_RNDN);
            mpfr_mul_ui(t, pi, m, MPFR_RNDN);
            mpfr_div_ui(t, t, lv + 1, MPFR_RNDN);
            mpfr_cos(t, t, MPFR_RNDN);
            mpfr_add(c, c, t, MPFR_RNDN);
            // ascending: 1, -2c, 2, 2c, 1
            mpfr_set_ui(f[0], 1, MPFR_RNDN);
            mpfr_mul_si(f[1], c, -2, MPFR_RNDN);
            mpfr_set_ui(f[2], 2, MPFR_RNDN);
            mpfr_mul_ui(f[3], c, 2, MPFR_RNDN);
            mpfr_set_ui(f[4], 1, MPFR_RNDN);
            for (int i = 0; i <= cur + 4; ++i) mpfr_set_ui(nxt[i], 0, MPFR_RNDN);
            for (int i = 0; i <= cur; ++i)
                for (int k = 0; k < 5; ++k) {
                    mpfr_mul(t, acc[i], f[k], MPFR_RNDN);
                    mpfr_add(nxt[i + k], nxt[i + k], t, MPFR_RNDN);
                }
            cur += 4;
            for (int i = 0; i <= cur; ++i) mpfr_swap(acc[i], nxt[i]);
        }
    }
    ExactPolynomial p;
    p.variable = Variable::u;
    p.coefficients.resize(deg + 1);
    for (int i = 0; i <= deg; ++i) {
        mpfr_get_z(p.coefficients[i].get_mpz_t(), acc[i], MPFR_RNDN);
        mpfr_sub_z(t, acc[i], p.coefficients[i].get_mpz_t(), MPFR_RNDN);
        if (!mpfr_zero_p(t) && mpfr_get_exp(t) > -40) {
            for (int k = 0; k <= deg; ++k) { mpfr_clear(acc[k]); mpfr_clear(nxt[k]); }
            mpfr_clears(pi, c, t, f[0], f[1], f[2], f[3], f[4], static_cast<mpfr_ptr>(nullptr));
            throw NumericError("free-fermion product did not round to integers");
        }
    }
    for (int k = 0; k <= deg; ++k) { mpfr_clear(acc[k]); mpfr_clear(nxt[k]); }
    mpfr_clears(pi, c, t, f[0], f[1], f[2], f[3], f[4], static_cast<mpfr_ptr>(nullptr));
    p.trim();
    p.fixed_params = {{"lv", std::to_string(lv)}, {"lh", std::to_string(lh)}, {"boundary", "bk"},
                      {"model", "ising"}, {"x", "1"}, {"construction", "free-fermion product"}};
    return p;
}

double log_partition_real(const LatticeSpec& spec, double u, double x, const PartitionOptions& options) {
    validate(spec);
    if (spec.model != Model::IsingField) throw ValidationError("log_partition_real: Ising only");
    if (u < 0 || x < 0) throw DomainError("log_partition_real: u and x must be nonnegative");
    const int lh = spec.lh;
    const std::size_t S = std::size_t(1) << lh;
    check_memory(S * sizeof(long double), options, "real sweep");
    const bool per = periodic_h(spec.boundary);
    std::vector<long double> v(S);
    double logscale = 0;
    auto bond = [u](int unsat) { return unsat ? static_cast<long double>(u) : 1.0L; };
    auto site_step = [&](int k, bool vertical) {
        const std::size_t bit = std::size_t(1) << k;
        const bool wrap = per && k == lh - 1;
        for (std::size_t i0 = 0; i0 < S; ++i0) {
            if (i0 & bit) continue;
            const std::size_t i1 = i0 | bit;
            const int l = k > 0 ? static_cast<int>((i0 >> (k - 1)) & 1u) : -1;
            const int r = wrap ? static_cast<int>(i0 & 1u) : -1;
            long double w[2][2];
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    long double m = b ? x : 1.0L;
                    if (vertical) m *= bond(a != b);
                    if (l >= 0) m *= bond(l != b);
                    if (r >= 0) m *= bond(r != b);
                    w[a][b] = m;
                }
            const long double v0 = v[i0], v1 = v[i1];
            v[i0] = w[0][0] * v0 + w[1][0] * v1;
            v[i1] = w[0][1] * v0 + w[1][1] * v1;
        }
    };
    auto rescale_now = [&] {
        long double m = 0;
        for (auto e : v) m = std::max(m, std::abs(e));
        if (m > 0) {
            for (auto& e : v) e /= m;
            logscale += std::log(static_cast<double>(m));
        }
    };
    auto run = [&](bool first_vertical) {
        for (int r = 0; r < spec.lv; ++r) {
            const bool vertical = r > 0 || first_vertical;
            for (int k = 0; k < lh; ++k) site_step(k, vertical);
            rescale_now();
        }
    };
    long double total = 0;
    double total_log = -std::numeric_limits<double>::infinity();
    if (spec.boundary == Boundary::Toroidal) {
        // sum of per-start contributions in log space
        for (std::uint32_t s = 0; s < S; ++s) {
            std::fill(v.begin(), v.end(), 0.0L);
            v[s] = 1;
            logscale = 0;
            run(true);
            const double term = std::log(static_cast<double>(v[s])) + logscale;
            if (v[s] <= 0) continue;
            total_log = total_log == -std::numeric_limits<double>::infinity()
                            ? term
                            : std::max(total_log, term) + std::log1p(std::exp(-std::abs(total_log - term)));
        }
        return total_log;
    }
    std::fill(v.begin(), v.end(), 0.0L);
    v[0] = 1;
    logscale = 0;
    run(spec.boundary == Boundary::BrascampKunz);
    const std::uint32_t alt = alternating_row(lh);
    for (std::uint32_t s = 0; s < S; ++s) {
        long double w = v[s];
        if (spec.boundary == Boundary::BrascampKunz) w *= std::pow(static_cast<long double>(u), std::popcount(s ^ alt));
        total += w;
    }
    return std::log(static_cast<double>(total)) + logscale;
}

}  // namespace izeros
