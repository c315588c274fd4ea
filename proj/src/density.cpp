#include "izeros/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "izeros/errors.hpp"
#include "izeros/partition.hpp"

namespace izeros {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double wrap_2pi(double t) {
    t = std::fmod(t, 2 * kPi);
    return t < 0 ? t + 2 * kPi : t;
}

// Phases in [0, 2pi), repeated by multiplicity, after an on-circle check.
std::vector<double> circle_phases(const ZeroSet& zeros, double tol, const char* who) {
    std::vector<double> out;
    for (const auto& z : zeros.zeros) {
        if (std::abs(std::abs(z.location) - 1.0) > tol + z.radius)
            throw ValidationError(std::string(who) + ": zero off the unit circle at |z| = " +
                                  std::to_string(std::abs(z.location)));
        for (int k = 0; k < z.multiplicity; ++k) out.push_back(wrap_2pi(std::arg(z.location)));
    }
    std::sort(out.begin(), out.end());
    return out;
}

double inv_spacing(double num, double d) { return d > 0 ? num / d : kInf; }

// Quadrature nodes can land so close to a logarithmic singularity that the argument underflows.
double safe_log(double v) { return std::log(std::max(v, std::numeric_limits<double>::min())); }

void sort_samples(DensitySeries& s) {
    std::stable_sort(s.samples.begin(), s.samples.end(),
                     [](const DensitySample& a, const DensitySample& b) { return a.abscissa < b.abscissa; });
}

}  // namespace

std::string to_string(Estimator e) {
    switch (e) {
        case Estimator::LeeYangNN: return "lee_yang_nn";
        case Estimator::ScaleDependent: return "scale_dependent";
        case Estimator::InnerLoopNN: return "inner_loop_nn";
    }
    return "?";
}

std::string to_string(DensityVariable v) {
    switch (v) {
        case DensityVariable::theta_x: return "theta_x";
        case DensityVariable::alpha_s: return "alpha_s";
        case DensityVariable::arclength_y: return "arclength_y";
    }
    return "?";
}

// ---------------------------------------------------------------- Lee-Yang

std::vector<double> sorted_phases(const ZeroSet& zeros) {
    std::vector<double> out;
    for (const auto& z : zeros.zeros)
        for (int k = 0; k < z.multiplicity; ++k) out.push_back(std::arg(z.location));
    std::sort(out.begin(), out.end());
    return out;
}

double phase_symmetry_defect(const std::vector<double>& phases) {
    double worst = 0;
    const std::size_t n = phases.size();
    for (std::size_t i = 0; i < n; ++i) {
        double d = phases[i] + phases[n - 1 - i];
        // a zero at x = -1 may be reported with phase +pi or -pi
        if (std::abs(std::abs(phases[i]) - kPi) < 1e-9) d = std::abs(std::abs(phases[n - 1 - i]) - kPi);
        worst = std::max(worst, std::abs(d));
    }
    return worst;
}

DensitySeries lee_yang_density(const ZeroSet& zeros, double circle_tol) {
    if (zeros.variable != Variable::x) throw ValidationError("lee_yang_density: zeros must be in x");
    auto th = circle_phases(zeros, circle_tol, "lee_yang_density");
    const int n = static_cast<int>(th.size());
    if (n < 2) throw ValidationError("lee_yang_density: need at least two zeros");

    DensitySeries s;
    s.estimator = Estimator::LeeYangNN;
    s.variable = DensityVariable::theta_x;
    s.window = {1, 0, 1, n};

    std::vector<double> gap(n);
    for (int i = 0; i + 1 < n; ++i) gap[i] = th[i + 1] - th[i];
    gap[n - 1] = th[0] + 2 * kPi - th[n - 1];

    // The gap across theta = 0 is an edge when it clearly exceeds the neighbouring spacings.
    bool edge = false;
    if (n >= 3 && th[0] > 0) {
        const double neighbours = 0.5 * (gap[0] + gap[n - 2]);
        edge = gap[n - 1] > 1.5 * neighbours;
    }
    if (edge) s.theta_ly = th[0];

    double total = 0;
    for (int i = 0; i < n; ++i) {
        if (edge && i == n - 1) continue;
        const double v = inv_spacing(2 * kPi / n, gap[i]);
        s.samples.push_back({wrap_2pi(th[i] + 0.5 * gap[i]), v});
        if (std::isfinite(v)) total += v * gap[i] / (2 * kPi);
    }
    sort_samples(s);
    s.normalization = total;
    s.normalization_error = 1.0 / n;
    return s;
}

Regime regime_of(double u) { return u < kUcFerro ? Regime::BelowTc : Regime::AboveTc; }

double reference_D_pi(double u) {
    if (!(u >= 0 && u < 1)) throw DomainError("reference_D: u must lie in [0, 1)");
    const double u2 = u * u;
    const double inner = (1 + u2) * (1 + u2) / (1 - u2) / std::sqrt(1 + 6 * u2 + u2 * u2);
    return std::pow(inner, 0.25);
}

double reference_D_0(double u, Regime regime) {
    if (!(u >= 0 && u < 1)) throw DomainError("reference_D: u must lie in [0, 1)");
    if (regime == Regime::AboveTc) return 0;
    const double u2 = u * u;
    const double disc = 1 - 6 * u2 + u2 * u2;
    if (disc < 0) throw DomainError("reference_D: u is above T_c, the low-temperature form does not apply");
    return std::pow((1 + u2) / ((1 - u2) * (1 - u2)) * std::sqrt(disc), 0.25);
}

// ---------------------------------------------------------------- scale-dependent

DensitySeries scale_dependent_density(const ZeroSet& zeros, double c, double p, double circle_tol) {
    if (zeros.variable != Variable::s) throw ValidationError("scale_dependent_density: zeros must be in s");
    if (!(p >= 0 && p < 1)) throw ValidationError("scale_dependent_density: p must lie in [0, 1)");
    auto al = circle_phases(zeros, circle_tol, "scale_dependent_density");
    const int n = static_cast<int>(al.size());
    const int a = static_cast<int>(std::floor(c * std::pow(double(n), p) + 1e-9));
    if (a < 1) throw ValidationError("scale_dependent_density: window a = [c N^p] is below 1");
    if (a >= n) throw ValidationError("scale_dependent_density: window a = " + std::to_string(a) + " >= N");

    DensitySeries s;
    s.estimator = Estimator::ScaleDependent;
    s.variable = DensityVariable::alpha_s;
    s.window = {c, p, a, n};
    double total = 0;
    for (int j = 0; j < n; ++j) {
        const double lo = al[j];
        const double hi = j + a < n ? al[j + a] : al[j + a - n] + 2 * kPi;
        const double v = inv_spacing(double(a) / n, hi - lo);
        s.samples.push_back({wrap_2pi(0.5 * (lo + hi)), v});
        if (std::isfinite(v)) total += v * (hi - lo) / a;
    }
    sort_samples(s);
    s.normalization = total;
    s.normalization_error = double(a) / n;
    return s;
}

double roughness(const DensitySeries& series) {
    double worst = 0;
    for (std::size_t i = 1; i < series.samples.size(); ++i) {
        const double a = series.samples[i - 1].value, b = series.samples[i].value;
        if (!std::isfinite(a) || !std::isfinite(b)) return kInf;
        worst = std::max(worst, std::abs(std::log(b / a)));
    }
    return worst;
}

double max_adjacent_ratio(const DensitySeries& series) { return std::exp(roughness(series)); }

// ---------------------------------------------------------------- Lu-Wu

double elliptic_k_complement(double kp) {
    if (!(kp >= 0 && kp <= 1)) throw DomainError("elliptic_k: complementary modulus outside [0, 1]");
    if (kp == 0) return kInf;
    double a = 1, b = kp;
    while (std::abs(a - b) > 4 * std::numeric_limits<double>::epsilon() * a) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return kPi / (a + b);
}

double elliptic_k(double k) {
    k = std::abs(k);
    if (k > 1) throw DomainError("elliptic_k: modulus above 1");
    return elliptic_k_complement(std::sqrt((1 - k) * (1 + k)));
}

namespace {

// g with both sin and cos supplied, so callers near alpha = pi/2 can pass an accurate cos.
double lu_wu_sc(double sn, double cs) {
    sn = std::abs(sn);
    cs = std::abs(cs);
    if (cs == 0) return kInf;
    return sn * elliptic_k_complement(std::min(cs, 1.0)) / (kPi * kPi);
}

// Integral over [0, pi/2] of g(a) h(a); the log peak sits at the upper end.
template <class H>
double lu_wu_quarter(H h) {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto f = [&](double t, double tc) {
        const double cs = t > kPi / 4 ? std::sin(tc) : std::cos(t);
        return lu_wu_sc(std::sin(t), cs) * h(t);
    };
    return ts.integrate(f, 0.0, kPi / 2, 1e-14);
}

}  // namespace

double lu_wu_density(double alpha) {
    const double sn = std::sin(alpha);
    // cos(pi/2) rounds to 6e-17 while sin rounds to exactly 1; the latter marks the peak
    if (std::abs(sn) == 1) return kInf;
    return lu_wu_sc(sn, std::cos(alpha));
}

double lu_wu_normalization() {
    return 4 * lu_wu_quarter([](double) { return 1.0; });
}

double lu_wu_free_energy(double s) {
    if (!(s > 0)) throw DomainError("lu_wu_free_energy: s must be positive");
    // Re ln(s - e^{ia}) = 1/2 ln(s^2 - 2 s cos a + 1); g is even about 0 and pi/2.
    auto lg = [s](double a) { return 0.5 * safe_log((s - 1) * (s - 1) + 4 * s * std::sin(a / 2) * std::sin(a / 2)); };
    const double lo = lu_wu_quarter(lg);
    const double hi = lu_wu_quarter([&](double a) { return lg(kPi - a); });
    return std::log(2.0) + 2 * (lo + hi);
}

// ---------------------------------------------------------------- Onsager

double onsager_free_energy(double s) {
    if (!(s > 0)) throw DomainError("onsager_free_energy: s must be positive");
    // s + 1/s - cos t1 - cos t2 written without cancellation near the critical corner.
    const double d = (s - 1) * (s - 1) / s;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto outer = [&](double t1) {
        const double a = d + 2 * std::sin(t1 / 2) * std::sin(t1 / 2);
        auto inner = [a](double t2) { return safe_log(a + 2 * std::sin(t2 / 2) * std::sin(t2 / 2)); };
        return ts.integrate(inner, 0.0, kPi, 1e-13);
    };
    const double quarter = ts.integrate(outer, 0.0, kPi, 1e-12);
    return 0.5 * std::log(4 * s) + 4 * quarter / (8 * kPi * kPi);
}

double finite_free_energy(const LatticeSpec& spec, double s) {
    if (!(s > 0)) throw DomainError("finite_free_energy: s must be positive");
    const double u = 1 / (s + std::hypot(s, 1.0));
    const double K = -0.5 * std::log(u);
    const double lz = log_partition_real(spec, u, 1.0);
    return (double(bond_count(spec)) * K + lz) / double(site_count(spec));
}

ZeroSet bk_closed_form_s_zeros(int lv, int lh) {
    ZeroSet zs;
    zs.variable = Variable::s;
    zs.source = "closed form " + std::to_string(lv) + "x" + std::to_string(lh);
    for (double v : bk_s_plus_inverse(lv, lh)) {
        const double re = 0.5 * v, im = 0.5 * std::sqrt(std::max(0.0, 4 - v * v));
        for (double sign : {1.0, -1.0}) {
            Zero z;
            z.location = {re, sign * im};
            z.radius = 4 * std::numeric_limits<double>::epsilon();
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", re);
            z.re = buf;
            std::snprintf(buf, sizeof buf, "%.17g", sign * im);
            z.im = buf;
            zs.zeros.push_back(z);
        }
    }
    std::sort(zs.zeros.begin(), zs.zeros.end(), [](const Zero& a, const Zero& b) {
        return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                      : a.location.imag() < b.location.imag();
    });
    return zs;
}

// ---------------------------------------------------------------- inner loop

std::vector<cplx> inner_loop_zeros(const ZeroSet& zeros, const InnerLoopOptions& options, int* total) {
    std::vector<cplx> pts;
    if (zeros.variable == Variable::z) {
        for (const auto& z : zeros.zeros) {
            const cplx q = z.location;
            if (q.real() < 0 && std::abs(q.imag()) <= options.line_tol * std::abs(q) + z.radius)
                for (int k = 0; k < z.multiplicity; ++k) pts.push_back(q.real());
        }
        std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) { return a.real() > b.real(); });
        if (total) *total = static_cast<int>(pts.size());
        return pts;
    }
    if (zeros.variable != Variable::y) throw ValidationError("inner_loop_density: zeros must be in y or z");

    std::vector<cplx> distinct;
    for (const auto& z : zeros.zeros) {
        if (std::abs(z.location) == 0) continue;
        bool seen = false;
        for (cplx d : distinct)
            if (std::abs(d - z.location) <= 1e-9 * std::abs(d)) seen = true;
        if (!seen) distinct.push_back(z.location);
    }
    const int n = static_cast<int>(distinct.size());
    if (n < 8) throw ValidationError("inner_loop_density: too few zeros to separate the loops");
    std::vector<double> r(n);
    for (int i = 0; i < n; ++i) r[i] = std::abs(distinct[i]);
    std::sort(r.begin(), r.end());
    int best = n / 4;
    for (int i = n / 4; i < 3 * n / 4; ++i)
        if (std::log(r[i + 1] / r[i]) > std::log(r[best + 1] / r[best])) best = i;
    const double cut = std::sqrt(r[best] * r[best + 1]);

    int count = 0;
    for (cplx q : distinct) {
        if (std::abs(q) >= cut) continue;
        ++count;
        if (q.imag() >= -1e-12 * std::abs(q)) pts.push_back(q);
    }
    std::sort(pts.begin(), pts.end(), [](cplx a, cplx b) { return std::arg(a) < std::arg(b); });
    if (total) *total = count;
    return pts;
}

EndpointFit fit_endpoint_exponent(const DensitySeries& series, int count, int skip) {
    const int m = static_cast<int>(series.samples.size());
    const int first = std::max(0, skip);
    const int last = std::min(m, first + count);
    const int k = last - first;
    if (k < 3) throw ValidationError("fit_endpoint_exponent: fewer than three points in the window");
    double sx = 0, sy = 0;
    std::vector<double> lx, ly;
    for (int i = first; i < last; ++i) {
        const auto& p = series.samples[i];
        if (!std::isfinite(p.value) || p.value <= 0) throw NumericError("fit_endpoint_exponent: degenerate density");
        lx.push_back(std::log(p.abscissa));
        ly.push_back(std::log(p.value));
        sx += lx.back();
        sy += ly.back();
    }
    sx /= k;
    sy /= k;
    double sxx = 0, sxy = 0;
    for (int i = 0; i < k; ++i) {
        sxx += (lx[i] - sx) * (lx[i] - sx);
        sxy += (lx[i] - sx) * (ly[i] - sy);
    }
    const double slope = sxy / sxx;
    double ssr = 0;
    for (int i = 0; i < k; ++i) {
        const double e = ly[i] - sy - slope * (lx[i] - sx);
        ssr += e * e;
    }
    const double se = std::sqrt(ssr / (k - 2) / sxx);
    const double tq = boost::math::quantile(boost::math::students_t(k - 2), 0.975);
    auto sigma = [](double b) { return b / (1 + b); };
    const double b = -slope;
    EndpointFit f;
    f.sigma = sigma(b);
    f.ci_low = sigma(b - tq * se);
    f.ci_high = sigma(b + tq * se);
    f.first = first;
    f.count = k;
    return f;
}

DensitySeries inner_loop_density(const ZeroSet& zeros, const InnerLoopOptions& options) {
    int n = 0;
    auto pts = inner_loop_zeros(zeros, options, &n);
    if (pts.size() < 2) throw ValidationError("inner_loop_density: fewer than two inner-loop zeros");
    DensitySeries s;
    s.estimator = Estimator::InnerLoopNN;
    s.variable = DensityVariable::arclength_y;
    s.window = {1, 0, 1, n};
    for (std::size_t j = 0; j + 1 < pts.size(); ++j)
        s.samples.push_back({double(j + 1), inv_spacing(1.0 / n, std::abs(pts[j + 1] - pts[j]))});
    if (zeros.variable == Variable::y && options.x > 0.95)
        s.flags.push_back("x > 0.95: loop is not a smooth curve, one-dimensional density is inappropriate");
    if (options.fit) {
        const int count = options.fit_points > 0 ? options.fit_points : std::max(8, n / 20);
        try {
            s.endpoint_fit = fit_endpoint_exponent(s, count, options.fit_skip);
        } catch (const std::exception& e) {
            s.flags.push_back(std::string("endpoint fit skipped: ") + e.what());
        }
    }
    return s;
}

// ---------------------------------------------------------------- output

std::string density_csv(const DensitySeries& series) {
    std::string out = "abscissa,value,a,N,estimator\n";
    char buf[160];
    for (const auto& p : series.samples) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,%s\n", p.abscissa, p.value, series.window.a,
                      series.window.N, to_string(series.estimator).c_str());
        out += buf;
    }
    return out;
}

std::string lu_wu_reference_csv(const std::vector<double>& grid) {
    std::string out = "abscissa,value\n";
    char buf[96];
    for (double a : grid) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", a, lu_wu_density(a));
        out += buf;
    }
    return out;
}

}  // namespace izeros
