#include "izeros/roots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "izeros/errors.hpp"
#include "mpc.hpp"

namespace izeros {

int ZeroSet::total_multiplicity() const {
    int t = 0;
    for (const auto& z : zeros) t += z.multiplicity;
    return t;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log2_abs(const mpz_class& v) {
    if (v == 0) return kNegInf;
    long e;
    const double d = mpz_get_d_2exp(&e, v.get_mpz_t());
    return std::log2(std::abs(d)) + static_cast<double>(e);
}

double log2_of(const mpfr_t v) {
    if (mpfr_zero_p(v)) return kNegInf;
    long e;
    const double d = mpfr_get_d_2exp(&e, v, MPFR_RNDN);
    return std::log2(std::abs(d)) + static_cast<double>(e);
}

// log2(2^a + 2^b)
double log2_add(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log2(1.0 + std::exp2(std::min(a, b) - m));
}

mpq_class exact_value(const ExactPolynomial& p, const mpq_class& v) {
    mpq_class acc = 0;
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) acc = acc * v + mpq_class(*it);
    return acc;
}

// Exact division of integer coefficients by an integer divisor polynomial (ascending).
// Returns false when the division is not exact.
bool divide_exact(const std::vector<mpz_class>& num, const std::vector<mpz_class>& den, std::vector<mpz_class>& quot) {
    const int n = static_cast<int>(num.size()) - 1, m = static_cast<int>(den.size()) - 1;
    if (n < m) return false;
    std::vector<mpz_class> rem = num;
    quot.assign(n - m + 1, 0);
    for (int k = n - m; k >= 0; --k) {
        const mpz_class& top = rem[k + m];
        if (!mpz_divisible_p(top.get_mpz_t(), den[m].get_mpz_t())) return false;
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), top.get_mpz_t(), den[m].get_mpz_t());
        quot[k] = q;
        for (int j = 0; j <= m; ++j) rem[k + j] -= q * den[j];
    }
    for (int j = 0; j < m; ++j)
        if (rem[j] != 0) return false;
    return true;
}

std::vector<mpz_class> linear_factor(const mpq_class& r) {
    // q v - p for r = p/q
    return {-r.get_num(), r.get_den()};
}

std::vector<mpz_class> quadratic_factor(const GaussianRational& r) {
    // v^2 - 2a v + (a^2 + b^2), scaled to a primitive integer polynomial
    const mpq_class c1 = -2 * r.re, c0 = r.re * r.re + r.im * r.im;
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), c1.get_den().get_mpz_t(), c0.get_den().get_mpz_t());
    return {mpz_class(c0 * l), mpz_class(c1 * l), l};
}

struct Cluster {
    mp::Complex center;
    double log2_radius;
    int multiplicity;
};

class AberthSolver {
public:
    explicit AberthSolver(std::vector<mpz_class> coeffs) : a_(std::move(coeffs)), n_(static_cast<int>(a_.size()) - 1) {}

    // Returns clusters and the final precision; `ok` is false if the target was not reached.
    std::vector<Cluster> solve(double target_log2, long start_prec, long max_prec, long& final_prec, bool& ok) {
        long prec = start_prec;
        init_points(prec);
        for (;;) {
            set_precision(prec);
            iterate(prec);
            auto clusters = certify(prec);
            bool done = std::all_of(clusters.begin(), clusters.end(),
                                    [&](const Cluster& c) { return c.log2_radius <= target_log2; });
            if (done || prec * 2 > max_prec) {
                final_prec = prec;
                ok = done;
                return clusters;
            }
            prec *= 2;
        }
    }

private:
    void init_points(long prec) {
        std::vector<double> L(n_ + 1);
        for (int k = 0; k <= n_; ++k) L[k] = log2_abs(a_[k]);
        // upper convex hull of (k, L_k)
        std::vector<int> hull;
        for (int k = 0; k <= n_; ++k) {
            if (L[k] == kNegInf) continue;
            while (hull.size() >= 2) {
                const int i = hull[hull.size() - 2], j = hull.back();
                // j lies on or below the segment i-k
                if ((L[j] - L[i]) * (k - i) <= (L[k] - L[i]) * (j - i)) hull.pop_back();
                else break;
            }
            hull.push_back(k);
        }
        z_.clear();
        int placed = 0;
        for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
            const int i = hull[e], j = hull[e + 1], cnt = j - i;
            const double lr = (L[i] - L[j]) / cnt;
            for (int m = 0; m < cnt; ++m) {
                const double theta = 2 * M_PI * m / cnt + 2 * M_PI * placed / n_ + 0.7;
                mp::Complex z(prec);
                mpfr_t r;
                mpfr_init2(r, prec);
                mpfr_set_d(r, lr, MPFR_RNDN);
                mpfr_exp2(r, r, MPFR_RNDN);
                mpfr_mul_d(z.re.v, r, std::cos(theta), MPFR_RNDN);
                mpfr_mul_d(z.im.v, r, std::sin(theta), MPFR_RNDN);
                mpfr_clear(r);
                z_.push_back(std::move(z));
            }
            placed += cnt;
        }
    }

    void set_precision(long prec) {
        A_.clear();
        for (const auto& c : a_) {
            mp::Real r(prec);
            mpfr_set_z(r.v, c.get_mpz_t(), MPFR_RNDN);
            A_.push_back(std::move(r));
        }
        for (auto& z : z_) z.round_to(prec);
    }

    // p(z), p'(z) and sum |a_k||z|^k
    void horner(const mp::Complex& z, mp::Complex& p, mp::Complex& dp, mp::Real& sabs, mp::Real& az, mp::Scratch& s) {
        mpfr_set(p.re.v, A_[n_].v, MPFR_RNDN);
        mpfr_set_zero(p.im.v, 1);
        mpfr_set_zero(dp.re.v, 1);
        mpfr_set_zero(dp.im.v, 1);
        mpfr_hypot(az.v, z.re.v, z.im.v, MPFR_RNDU);
        mpfr_abs(sabs.v, A_[n_].v, MPFR_RNDU);
        for (int k = n_ - 1; k >= 0; --k) {
            mp::mul(dp, dp, z, s);
            mp::add(dp, dp, p);
            mp::mul(p, p, z, s);
            mpfr_add(p.re.v, p.re.v, A_[k].v, MPFR_RNDN);
            mpfr_mul(sabs.v, sabs.v, az.v, MPFR_RNDU);
            if (mpfr_sgn(A_[k].v) >= 0) mpfr_add(sabs.v, sabs.v, A_[k].v, MPFR_RNDU);
            else mpfr_sub(sabs.v, sabs.v, A_[k].v, MPFR_RNDU);
        }
    }

    // log2 of the Horner rounding bound
    double noise_log2(const mp::Real& sabs, long prec) const {
        return log2_of(sabs.v) + std::log2(8.0 * (n_ + 2)) - static_cast<double>(prec);
    }

    void iterate(long prec) {
        mp::Scratch s(prec);
        mp::Complex p(prec), dp(prec), N(prec), sum(prec), d(prec), w(prec);
        mp::Real sabs(prec), az(prec), t(prec);
        std::vector<char> done(n_, 0);
        const int max_iter = std::max(200, 4 * n_);
        for (int it = 0; it < max_iter; ++it) {
            bool moved = false;
            for (int i = 0; i < n_; ++i) {
                if (done[i]) continue;
                horner(z_[i], p, dp, sabs, az, s);
                mp::norm(t.v, p, s);
                const double lp = 0.5 * log2_of(t.v);
                if (lp <= noise_log2(sabs, prec)) { done[i] = 1; continue; }
                if (mpfr_zero_p(dp.re.v) && mpfr_zero_p(dp.im.v)) {
                    mpfr_mul_d(z_[i].re.v, z_[i].re.v, 1.0 + 1e-6, MPFR_RNDN);
                    continue;
                }
                mp::div(N, p, dp, s);
                mpfr_set_zero(sum.re.v, 1);
                mpfr_set_zero(sum.im.v, 1);
                for (int j = 0; j < n_; ++j) {
                    if (j == i) continue;
                    mp::sub(d, z_[i], z_[j]);
                    if (mpfr_zero_p(d.re.v) && mpfr_zero_p(d.im.v)) continue;
                    mp::add_inverse(sum, d, s);
                }
                // w = N / (1 - N * sum)
                mp::mul(d, N, sum, s);
                mpfr_ui_sub(d.re.v, 1, d.re.v, MPFR_RNDN);
                mpfr_neg(d.im.v, d.im.v, MPFR_RNDN);
                mp::div(w, N, d, s);
                if (!mpfr_number_p(w.re.v) || !mpfr_number_p(w.im.v)) { done[i] = 1; continue; }
                mp::sub(z_[i], z_[i], w);
                moved = true;
                mp::norm(t.v, w, s);
                const double lw = 0.5 * log2_of(t.v);
                mp::norm(t.v, z_[i], s);
                const double lz = 0.5 * log2_of(t.v);
                if (lw <= lz - static_cast<double>(prec) + 6) done[i] = 1;
            }
            if (!moved) break;
        }
    }

    std::vector<Cluster> certify(long prec) {
        mp::Scratch s(prec);
        mp::Complex p(prec), dp(prec), d(prec);
        mp::Real sabs(prec), az(prec), t(prec);
        std::vector<std::vector<double>> ld(n_, std::vector<double>(n_, 0.0));
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j) {
                mp::sub(d, z_[i], z_[j]);
                mpfr_hypot(t.v, d.re.v, d.im.v, MPFR_RNDN);
                ld[i][j] = ld[j][i] = log2_of(t.v);
            }
        const double lan = log2_abs(a_[n_]);
        std::vector<double> lr(n_);
        for (int i = 0; i < n_; ++i) {
            horner(z_[i], p, dp, sabs, az, s);
            mpfr_hypot(t.v, p.re.v, p.im.v, MPFR_RNDU);
            const double lp = log2_add(log2_of(t.v), noise_log2(sabs, prec));
            double lprod = lan;
            for (int j = 0; j < n_; ++j)
                if (j != i) lprod += ld[i][j];
            // inflate for rounding of the logs and of the product
            lr[i] = lp - lprod + std::log2(static_cast<double>(n_)) + 1e-6;
            if (std::isnan(lr[i])) lr[i] = std::numeric_limits<double>::infinity();
        }
        // connected components of overlapping disks
        std::vector<int> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](int x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (int i = 0; i < n_; ++i)
            for (int j = i + 1; j < n_; ++j)
                if (ld[i][j] <= log2_add(lr[i], lr[j])) parent[find(i)] = find(j);
        std::vector<std::vector<int>> groups(n_);
        for (int i = 0; i < n_; ++i) groups[find(i)].push_back(i);
        std::vector<Cluster> out;
        for (const auto& g : groups) {
            if (g.empty()) continue;
            Cluster c{mp::Complex(prec), 0.0, static_cast<int>(g.size())};
            if (g.size() == 1) {
                c.center = z_[g[0]];
                c.log2_radius = lr[g[0]];
            } else {
                for (int i : g) mp::add(c.center, c.center, z_[i]);
                mpfr_div_ui(c.center.re.v, c.center.re.v, g.size(), MPFR_RNDN);
                mpfr_div_ui(c.center.im.v, c.center.im.v, g.size(), MPFR_RNDN);
                double lrad = kNegInf;
                for (int i : g) {
                    mp::sub(d, c.center, z_[i]);
                    mpfr_hypot(t.v, d.re.v, d.im.v, MPFR_RNDU);
                    lrad = std::max(lrad, log2_add(log2_of(t.v), lr[i]));
                }
                c.log2_radius = lrad + 1e-6;
            }
            out.push_back(std::move(c));
        }
        return out;
    }

    std::vector<mpz_class> a_;
    int n_;
    std::vector<mp::Real> A_;
    std::vector<mp::Complex> z_;
};

int decimal_digits(double log2_mag, double log2_radius, long prec) {
    const int max_digits = static_cast<int>(prec * 0.30103) + 1;
    if (log2_radius == kNegInf) return std::min(max_digits, 40);
    const int d = static_cast<int>(std::ceil((log2_mag - log2_radius) * 0.30103)) + 3;
    return std::clamp(d, 17, std::max(17, max_digits));
}

double radius_to_double(double log2_radius) {
    if (log2_radius == kNegInf) return 0.0;
    if (log2_radius < -1070) return std::numeric_limits<double>::denorm_min();
    const double r = std::exp2(log2_radius);
    return std::nextafter(r, std::numeric_limits<double>::infinity());
}

Zero exact_zero(std::complex<double> z, const std::string& re, const std::string& im, int mult) {
    return {z, re, im, 0.0, mult};
}

// u and -1/u give the same s. When the u-zeros come in such pairs (self-dual
// polynomials, e.g. the BK lattice) each pair is one zero of the polynomial in s.
ZeroSet pair_s_zeros(const ZeroSet& uz, const ZeroSet& mapped) {
    std::vector<const Zero*> src;
    for (const auto& z : uz.zeros)
        if (std::abs(z.location) != 0) src.push_back(&z);
    const std::size_t n = src.size();
    std::vector<int> partner(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (partner[i] != -1) continue;
        const auto u = src[i]->location;
        const auto target = -1.0 / u;
        const double tol = src[i]->radius * 2 / std::norm(u) + 1e-12 * std::abs(target);
        for (std::size_t j = i; j < n; ++j) {
            if (partner[j] != -1 || src[j]->multiplicity != src[i]->multiplicity) continue;
            if (std::abs(src[j]->location - target) <= tol + src[j]->radius) {
                partner[i] = static_cast<int>(j);
                partner[j] = static_cast<int>(i);
                break;
            }
        }
    }
    ZeroSet out = mapped;
    out.zeros.clear();
    bool all_paired = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Zero& m = mapped.zeros[i];
        if (partner[i] == -1) {
            all_paired = false;
            out.zeros.push_back(m);
        } else if (partner[i] == static_cast<int>(i)) {
            if (m.multiplicity % 2 != 0) {
                all_paired = false;
                out.zeros.push_back(m);
            } else {
                Zero h = m;
                h.multiplicity /= 2;
                out.zeros.push_back(h);
            }
        } else if (partner[i] > static_cast<int>(i)) {
            Zero h = m;
            h.radius = std::max(m.radius, mapped.zeros[partner[i]].radius);
            out.zeros.push_back(h);
        }
    }
    out.flags.push_back(all_paired ? "u-zeros paired under u -> -1/u; multiplicities are in s"
                                   : "u-zeros not fully paired under u -> -1/u; unpaired images kept");
    return out;
}

}  // namespace

int exact_multiplicity(const ExactPolynomial& p, const mpq_class& root) {
    int k = 0;
    std::vector<mpz_class> cur = p.coefficients, q;
    const auto lin = linear_factor(root);
    while (cur.size() > 1 && divide_exact(cur, lin, q)) {
        cur.swap(q);
        ++k;
    }
    return k;
}

ExactPolynomial deflate(const ExactPolynomial& p, const mpq_class& root, int multiplicity) {
    ExactPolynomial r = p;
    const auto lin = linear_factor(root);
    for (int k = 0; k < multiplicity; ++k) {
        std::vector<mpz_class> q;
        if (!divide_exact(r.coefficients, lin, q)) {
            const mpq_class rem = exact_value(r, root);
            const double l2 = rem == 0 ? kNegInf : log2_abs(rem.get_num()) - log2_abs(rem.get_den());
            std::ostringstream os;
            os << "deflate: " << root << " is not a root of multiplicity " << multiplicity << " (stage " << k + 1
               << ", remainder 2^" << l2 << ")";
            throw NotARootError(os.str(), l2);
        }
        r.coefficients.swap(q);
        r.prefactor *= root.get_den();
    }
    r.trim();
    return r;
}

ExactPolynomial deflate(const ExactPolynomial& p, const GaussianRational& root, int multiplicity) {
    if (root.im == 0) return deflate(p, root.re, multiplicity);
    ExactPolynomial r = p;
    const auto quad = quadratic_factor(root);
    for (int k = 0; k < multiplicity; ++k) {
        std::vector<mpz_class> q;
        if (!divide_exact(r.coefficients, quad, q)) {
            std::ostringstream os;
            os << "deflate: " << root.re << "+" << root.im << "i is not a root of multiplicity " << multiplicity
               << " (stage " << k + 1 << ")";
            throw NotARootError(os.str(), 0.0);
        }
        r.coefficients.swap(q);
        r.prefactor *= quad.back();
    }
    r.trim();
    return r;
}

ZeroSet find_roots(const ExactPolynomial& input, double target_radius, const RootOptions& options) {
    if (!(target_radius > 0)) throw ValidationError("find_roots: target radius must be positive");
    ExactPolynomial p = input;
    p.trim();
    if (p.degree() < 1) throw ValidationError("find_roots: polynomial of degree < 1");
    ZeroSet out;
    out.variable = p.variable;
    out.source = "degree " + std::to_string(p.degree());
    for (const auto& [k, v] : p.fixed_params) out.source += " " + k + "=" + v;

    // zero roots
    const int val = p.valuation();
    if (val > 0) {
        out.zeros.push_back(exact_zero(0.0, "0", "0", val));
        p.coefficients.erase(p.coefficients.begin(), p.coefficients.begin() + val);
    }
    // known exact roots on the unit circle
    for (int r : {-1, 1}) {
        const int k = exact_multiplicity(p, r);
        if (k > 0) {
            p = deflate(p, mpq_class(r), k);
            out.zeros.push_back(exact_zero(double(r), std::to_string(r), "0", k));
        }
    }
    {
        int k = 0;
        std::vector<mpz_class> q;
        const std::vector<mpz_class> quad = {1, 0, 1};
        while (p.degree() >= 2 && divide_exact(p.coefficients, quad, q)) {
            p.coefficients.swap(q);
            ++k;
        }
        if (k > 0) {
            out.zeros.push_back(exact_zero({0, 1}, "0", "1", k));
            out.zeros.push_back(exact_zero({0, -1}, "0", "-1", k));
        }
    }
    if (p.degree() >= 1) {
        const int g = p.stride();
        std::vector<mpz_class> red;
        for (int k = 0; k <= p.degree(); k += g) red.push_back(p.coefficients[k]);
        double maxbits = 0;
        for (const auto& c : red) maxbits = std::max(maxbits, log2_abs(c));
        const int n = static_cast<int>(red.size()) - 1;
        long prec = options.start_precision_bits > 0 ? options.start_precision_bits
                                                     : 64 + static_cast<long>(std::ceil(maxbits / n));
        // target in the reduced variable w = v^g: |dv| ~ |dw| |w|^(1/g - 1) / g
        AberthSolver solver(red);
        long final_prec = prec;
        bool ok = false;
        // Target in w is tightened so that the mapped radius meets the request.
        const double target_w = std::log2(target_radius) - 4.0;
        auto clusters = solver.solve(target_w, prec, options.max_precision_bits, final_prec, ok);
        out.precision_bits = final_prec;
        mp::Scratch s(final_prec);
        for (auto& c : clusters) {
            mp::Real mag(final_prec), arg(final_prec), root(final_prec), ang(final_prec), sn(final_prec), cs(final_prec);
            mpfr_hypot(mag.v, c.center.re.v, c.center.im.v, MPFR_RNDN);
            mpfr_atan2(arg.v, c.center.im.v, c.center.re.v, MPFR_RNDN);
            const double lmag = log2_of(mag.v);
            double lrad = c.log2_radius;
            if (g > 1) {
                mpfr_rootn_ui(root.v, mag.v, g, MPFR_RNDN);
                if (lrad < lmag - 1) lrad = lrad + (1.0 / g - 1.0) * (lmag - 1) - std::log2(double(g));
                else lrad = (log2_add(lmag, lrad)) / g;
            } else {
                mpfr_set(root.v, mag.v, MPFR_RNDN);
            }
            for (int k = 0; k < g; ++k) {
                mp::Complex z(final_prec);
                if (g == 1) {
                    z = c.center;
                } else {
                    mpfr_const_pi(ang.v, MPFR_RNDN);
                    mpfr_mul_ui(ang.v, ang.v, 2 * k, MPFR_RNDN);
                    mpfr_add(ang.v, ang.v, arg.v, MPFR_RNDN);
                    mpfr_div_ui(ang.v, ang.v, g, MPFR_RNDN);
                    mpfr_sin_cos(sn.v, cs.v, ang.v, MPFR_RNDN);
                    mpfr_mul(z.re.v, root.v, cs.v, MPFR_RNDN);
                    mpfr_mul(z.im.v, root.v, sn.v, MPFR_RNDN);
                }
                const double lz = log2_of(root.v);
                const int digits = decimal_digits(lz, lrad, final_prec);
                Zero zz;
                zz.location = z.d();
                zz.re = mp::to_decimal(z.re.v, digits);
                zz.im = mp::to_decimal(z.im.v, digits);
                zz.radius = radius_to_double(lrad);
                zz.multiplicity = c.multiplicity;
                if (zz.radius > target_radius) {
                    out.certified = false;
                    std::ostringstream os;
                    os << "cluster at " << zz.location << " multiplicity " << zz.multiplicity << " radius " << zz.radius
                       << " exceeds target";
                    out.flags.push_back(os.str());
                }
                out.zeros.push_back(std::move(zz));
            }
        }
        if (!ok && out.flags.empty()) out.flags.push_back("target not reached in the reduced variable");
        if (!ok) out.certified = false;
    }
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    if (out.total_multiplicity() != input.degree()) throw NumericError("find_roots: root count does not match degree");
    return out;
}

ZeroSet map_zeros(const ZeroSet& zs, Variable target, Convention convention, double x) {
    ZeroSet out = zs;
    out.variable = target;
    out.zeros.clear();
    auto fmt = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (const auto& z : zs.zeros) {
        std::complex<double> w;
        double deriv = 0;
        const auto u = z.location;
        if (zs.variable == Variable::u && target == Variable::s) {
            if (std::abs(u) == 0) {
                out.flags.push_back("zero at u=0 maps to s=infinity; omitted");
                continue;
            }
            w = to_s(u);
            deriv = std::abs(1.0 / (u * u) + 1.0) / 2.0;
        } else if (zs.variable == Variable::u && target == Variable::y) {
            w = rescale(u, x, convention);
            deriv = convention == Convention::BrascampKunz ? 2 * std::abs(u) * std::sqrt(x) : std::pow(x, 0.25);
        } else if ((zs.variable == Variable::y || zs.variable == Variable::u) && target == Variable::z) {
            const auto y = zs.variable == Variable::y ? u : rescale(u, x, convention);
            w = y * y;
            const double dy = zs.variable == Variable::y ? 1.0
                              : convention == Convention::BrascampKunz ? 2 * std::abs(u) * std::sqrt(x)
                                                                       : std::pow(x, 0.25);
            deriv = 2 * std::abs(y) * dy;
        } else if (zs.variable == target) {
            out.zeros.push_back(z);
            continue;
        } else {
            throw ValidationError("map_zeros: unsupported map " + to_string(zs.variable) + " -> " + to_string(target));
        }
        Zero m;
        m.location = w;
        m.re = fmt(w.real());
        m.im = fmt(w.imag());
        m.radius = z.radius == 0 ? 0.0 : 2 * deriv * z.radius + 4 * std::numeric_limits<double>::epsilon() * std::abs(w);
        m.multiplicity = z.multiplicity;
        out.zeros.push_back(m);
    }
    if (zs.variable == Variable::u && target == Variable::s) out = pair_s_zeros(zs, out);
    std::sort(out.zeros.begin(), out.zeros.end(), [](const Zero& a, const Zero& b) {
        if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
        return a.location.imag() < b.location.imag();
    });
    return out;
}

std::string zeros_csv(const ZeroSet& zs) {
    std::ostringstream os;
    os << "variable,re,im,radius,multiplicity\n";
    char buf[64];
    for (const auto& z : zs.zeros) {
        std::snprintf(buf, sizeof buf, "%.6e", z.radius == 0 ? 0.0 : std::nextafter(z.radius * (1 + 1e-6), 1e308));
        os << to_string(zs.variable) << "," << z.re << "," << z.im << "," << buf << "," << z.multiplicity << "\n";
    }
    return os.str();
}

}  // namespace izeros
