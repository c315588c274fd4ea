#include "izeros/equimodular.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "izeros/errors.hpp"

namespace izeros {

std::string to_string(CrossingClass c) {
    switch (c) {
        case CrossingClass::SingletSinglet: return "singlet-singlet";
        case CrossingClass::SingletDoublet: return "singlet-doublet";
        case CrossingClass::DoubletDoublet: return "doublet-doublet";
        default: return "higher";
    }
}

std::string to_string(Endpoint e) {
    switch (e) {
        case Endpoint::Start: return "start";
        case Endpoint::Junction: return "junction";
        case Endpoint::WindowBoundary: return "window";
        case Endpoint::Closure: return "closure";
        case Endpoint::StepLimit: return "step-limit";
        default: return "truncated";
    }
}

std::vector<Eigenvalue> spectrum_at(const LatticeSpec& spec, const mpq_class& x, cplx u, const EquimodularOptions& options) {
    SpectrumRecord rec;
    if (x == 1 && periodic_h(spec.boundary) && !options.force_numeric) {
        rec = kaufman_spectrum(u, spec.lh);
    } else {
        SpectrumOptions so;
        so.momentum_index = options.momentum_index;
        so.split_flip = false;
        rec = numeric_spectrum(spec, {u, x}, so);
    }
    if (!options.momentum_index) return std::move(rec.eigenvalues);
    std::vector<Eigenvalue> out;
    for (auto& e : rec.eigenvalues)
        if (e.momentum_index == *options.momentum_index) out.push_back(std::move(e));
    return out;
}

namespace {

// Ranking ignores the -P partner of a doublet so that a dominant doublet is one unit.
bool ranked(const Eigenvalue& e, int lh) { return 2 * e.momentum_index <= lh; }

struct Ranked {
    std::vector<int> order;  // indices into the spectrum, by decreasing modulus
    std::vector<double> logmod;
};

Ranked rank(const std::vector<Eigenvalue>& ev) {
    Ranked r;
    r.logmod.resize(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) r.logmod[i] = std::log(std::abs(ev[i].value));
    r.order.resize(ev.size());
    for (std::size_t i = 0; i < ev.size(); ++i) r.order[i] = static_cast<int>(i);
    std::stable_sort(r.order.begin(), r.order.end(), [&](int a, int b) { return r.logmod[a] > r.logmod[b]; });
    return r;
}

EquimodularPoint make_point(const std::vector<Eigenvalue>& ev, cplx u, const EquimodularOptions& options) {
    EquimodularPoint p;
    p.u = u;
    p.sector_filter = options.momentum_index;
    if (ev.empty()) return p;
    const Ranked r = rank(ev);
    const double top = r.logmod[r.order[0]];
    const double cut = top + std::log1p(-options.count_tol);
    int m = 0;
    std::set<double> moms;
    int singlets = 0, doublet_entries = 0;
    for (int i : r.order) {
        if (r.logmod[i] < cut) {
            p.gap = r.logmod[i] - top;
            break;
        }
        ++m;
        p.dominant.push_back(ev[i].value);
        if (ev[i].label >= 0) p.labels.push_back(ev[i].label);
        p.sectors.push_back(ev[i].sector);
        moms.insert(ev[i].momentum);
        if (ev[i].degeneracy == 2) ++doublet_entries;
        else ++singlets;
    }
    if (m == static_cast<int>(ev.size())) p.gap = -std::numeric_limits<double>::infinity();
    std::sort(p.labels.begin(), p.labels.end());
    p.modulus = std::exp(top);
    p.multiplicity = m;
    p.dominant_momenta.assign(moms.begin(), moms.end());
    const int doublets = doublet_entries / 2;
    if (singlets == 2 && doublets == 0) p.crossing_class = CrossingClass::SingletSinglet;
    else if (singlets == 1 && doublets == 1) p.crossing_class = CrossingClass::SingletDoublet;
    else if (singlets == 0 && doublets == 2) p.crossing_class = CrossingClass::DoubletDoublet;
    else p.crossing_class = CrossingClass::Higher;
    return p;
}

// Two leading units: the top ranked eigenvalue and the next one that is not its doublet partner.
std::pair<int, int> top_two(const std::vector<Eigenvalue>& ev, int lh) {
    const Ranked r = rank(ev);
    int a = -1, b = -1;
    for (int i : r.order) {
        if (!ranked(ev[i], lh)) continue;
        if (a < 0) a = i;
        else {
            b = i;
            break;
        }
    }
    return {a, b};
}

int nearest(const std::vector<Eigenvalue>& ev, cplx target, int exclude = -1) {
    int best = -1;
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (static_cast<int>(i) == exclude) continue;
        const double di = std::abs(ev[i].value - target);
        if (di < d) d = di, best = static_cast<int>(i);
    }
    return best;
}

struct Tracked {
    cplx a, b;
};

// log(lambda_a / lambda_b) at u, continuing the pair from `ref`.
struct PairFunction {
    const LatticeSpec& spec;
    const mpq_class& x;
    const EquimodularOptions& options;

    cplx operator()(cplx u, Tracked& ref) const {
        const auto ev = spectrum_at(spec, x, u, options);
        const int ia = nearest(ev, ref.a);
        const int ib = nearest(ev, ref.b, ia);
        ref = {ev[ia].value, ev[ib].value};
        return std::log(ref.a / ref.b);
    }
};

}  // namespace

EquimodularPoint classify(const LatticeSpec& spec, const mpq_class& x, cplx u, const EquimodularOptions& options) {
    return make_point(spectrum_at(spec, x, u, options), u, options);
}

std::vector<EquimodularPoint> grid_scan(const LatticeSpec& spec, const mpq_class& x, const Window& window,
                                        int resolution, const EquimodularOptions& options) {
    if (resolution < 2) throw ValidationError("grid_scan: resolution must be at least 2");
    const int n = resolution;
    const double dx = (window.hi.real() - window.lo.real()) / (n - 1);
    const double dy = (window.hi.imag() - window.lo.imag()) / (n - 1);
    auto node = [&](int i, int j) { return window.lo + cplx(i * dx, j * dy); };
    std::vector<std::vector<Eigenvalue>> spec_grid(static_cast<std::size_t>(n) * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) spec_grid[j * n + i] = spectrum_at(spec, x, node(i, j), options);
    std::vector<EquimodularPoint> seeds;
    auto add = [&](const EquimodularPoint& p) {
        for (const auto& q : seeds)
            if (std::abs(q.u - p.u) < 0.25 * std::min(dx, dy)) return;
        seeds.push_back(p);
    };
    const PairFunction f{spec, x, options};
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const auto& ev = spec_grid[j * n + i];
            const auto [a, b] = top_two(ev, spec.lh);
            if (a < 0 || b < 0) continue;
            const double la = std::abs(ev[a].value), lb = std::abs(ev[b].value);
            if (lb >= (1 - options.seed_tol) * la) add(make_point(ev, node(i, j), options));
            // sign change of the tracked log-ratio along the +x and +y edges
            for (auto [di, dj] : {std::pair{1, 0}, std::pair{0, 1}}) {
                if (i + di >= n || j + dj >= n) continue;
                cplx u0 = node(i, j), u1 = node(i + di, j + dj);
                Tracked t0{ev[a].value, ev[b].value};
                Tracked t1 = t0;
                if (f(u1, t1).real() >= 0) continue;
                // bisection, carrying the identity from the positive side
                for (int it = 0; it < 40; ++it) {
                    const cplx um = 0.5 * (u0 + u1);
                    Tracked tm = t0;
                    if (f(um, tm).real() >= 0) u0 = um, t0 = tm;
                    else u1 = um;
                }
                auto p = classify(spec, x, 0.5 * (u0 + u1), options);
                if (p.multiplicity >= 2 || -p.gap < std::log1p(options.seed_tol)) {
                    const auto& e2 = spectrum_at(spec, x, p.u, options);
                    const auto [a2, b2] = top_two(e2, spec.lh);
                    if (a2 >= 0 && b2 >= 0 && std::abs(e2[b2].value) >= (1 - options.seed_tol) * std::abs(e2[a2].value))
                        add(p);
                }
            }
        }
    std::sort(seeds.begin(), seeds.end(), [](const auto& p, const auto& q) {
        return p.u.real() != q.u.real() ? p.u.real() < q.u.real() : p.u.imag() < q.u.imag();
    });
    return seeds;
}

EquimodularSegment trace_curve(const EquimodularPoint& seed, const LatticeSpec& spec, const mpq_class& x,
                               const Window& window, const EquimodularOptions& options, cplx heading) {
    EquimodularSegment seg;
    const PairFunction f{spec, x, options};
    const auto ev0 = spectrum_at(spec, x, seed.u, options);
    const auto [a0, b0] = top_two(ev0, spec.lh);
    if (a0 < 0 || b0 < 0) throw DomainError("trace_curve: fewer than two eigenvalue units at the seed");
    Tracked ref{ev0[a0].value, ev0[b0].value};

    auto correct = [&](cplx u, Tracked& t, double h, bool& ok) {
        ok = false;
        for (int it = 0; it < 40; ++it) {
            Tracked tc = t;
            const cplx g = f(u, tc);
            Tracked tp = tc, tm = tc;
            const double fd = std::max(1e-7, 1e-4 * h);
            const cplx dg = (f(u + fd, tp) - f(u - fd, tm)) / (2 * fd);
            if (std::abs(dg) == 0) return u;
            t = tc;
            if (std::abs(g.real()) < 1e-13) {
                ok = true;
                return u;
            }
            const cplx delta = -g.real() * std::conj(dg) / std::norm(dg);
            u += std::abs(delta) > h ? delta * (h / std::abs(delta)) : delta;
        }
        Tracked tc = t;
        ok = std::abs(f(u, tc).real()) < 1e-10;
        t = tc;
        return u;
    };

    bool ok;
    cplx u = correct(seed.u, ref, 0.05, ok);
    if (!ok) {
        seg.end = Endpoint::Truncated;
        seg.flag = "corrector failed at the seed";
        return seg;
    }
    // Points on the traced curve carry the tracked pair even when rounding leaves
    // their moduli a hair outside the counting tolerance.
    auto on_curve = [](EquimodularPoint p, const Tracked& t, const std::vector<Eigenvalue>& ev) {
        if (p.multiplicity < 2) {
            p.multiplicity = 2;
            p.dominant = {t.a, t.b};
            p.modulus = std::max(std::abs(t.a), std::abs(t.b));
            const auto& ea = ev[nearest(ev, t.a)];
            const auto& eb = ev[nearest(ev, t.b)];
            p.sectors = {ea.sector, eb.sector};
            p.labels.clear();
            if (ea.label >= 0) p.labels = {std::min(ea.label, eb.label), std::max(ea.label, eb.label)};
            p.crossing_class = ea.degeneracy == 1 && eb.degeneracy == 1 ? CrossingClass::SingletSinglet
                               : ea.degeneracy == 2 && eb.degeneracy == 2 ? CrossingClass::DoubletDoublet
                                                                          : CrossingClass::SingletDoublet;
        }
        return p;
    };
    {
        const auto ev = spectrum_at(spec, x, u, options);
        seg.points.push_back(on_curve(make_point(ev, u, options), ref, ev));
    }
    const std::size_t units0 = 2;
    cplx prev_dir = heading / std::abs(heading);
    double h = options.step;
    for (int step = 0; step < options.max_steps; ++step) {
        Tracked tp = ref, tm = ref;
        const double fd = std::max(1e-7, 1e-4 * h);
        const cplx dg = (f(u + fd, tp) - f(u - fd, tm)) / (2 * fd);
        cplx tangent = cplx(0, 1) * std::conj(dg);
        if (std::abs(tangent) == 0) {
            seg.end = Endpoint::Truncated;
            seg.flag = "degenerate gradient";
            return seg;
        }
        tangent /= std::abs(tangent);
        if ((tangent * std::conj(prev_dir)).real() < 0) tangent = -tangent;
        Tracked t = ref;
        const cplx up = u + h * tangent;
        cplx un = correct(up, t, h, ok);
        if (!ok || std::abs(un - u) > 2 * h) {
            h *= 0.5;
            if (h < 1e-10) {
                seg.end = Endpoint::Truncated;
                seg.flag = "corrector diverged";
                return seg;
            }
            continue;
        }
        if (!window.contains(un)) {
            seg.end = Endpoint::WindowBoundary;
            return seg;
        }
        // still the dominant pair?
        const auto ev = spectrum_at(spec, x, un, options);
        auto p = make_point(ev, un, options);
        const double mine = std::max(std::abs(t.a), std::abs(t.b));
        std::size_t units = 0;
        for (const auto& e : ev)
            if (ranked(e, spec.lh) && std::abs(e.value) >= (1 - options.seed_tol) * mine) ++units;
        p = on_curve(p, t, ev);
        if (p.modulus > mine * (1 + options.seed_tol) || units > units0) {
            seg.points.push_back(p);
            seg.end = Endpoint::Junction;
            return seg;
        }
        prev_dir = tangent;
        u = un;
        ref = t;
        seg.points.push_back(p);
        if (seg.points.size() > 20 && std::abs(u - seg.points.front().u) < 1.5 * h) {
            seg.end = Endpoint::Closure;
            return seg;
        }
        h = std::min(options.step, h * 1.5);
    }
    seg.end = Endpoint::StepLimit;
    return seg;
}

EquimodularSegment circle_branch(int lh, Branch branch, int samples, const EquimodularOptions& options) {
    if (samples < 2) throw ValidationError("circle_branch: need at least two samples");
    const double c0 = branch == Branch::Ferromagnetic ? -1.0 : 1.0;
    const double tmax = branch == Branch::Ferromagnetic ? M_PI / 4 : 3 * M_PI / 4;
    const double t0 = 1e-5 * tmax, t1 = tmax * (1 - 1e-5);
    const LatticeSpec spec{1, lh, Boundary::Toroidal, Model::IsingField};
    EquimodularSegment seg;
    for (int i = 0; i < samples; ++i) {
        const double t = t0 + (t1 - t0) * i / (samples - 1);
        const cplx u = c0 + std::polar(std::sqrt(2.0), t);
        seg.points.push_back(classify(spec, 1, u, options));
    }
    seg.end = Endpoint::Junction;  // u = i
    return seg;
}

std::vector<int> multiplicity_profile(const EquimodularSegment& segment, const LatticeSpec& spec, const mpq_class& x,
                                      const EquimodularOptions& options) {
    const auto& pts = segment.points;
    if (pts.empty()) return {};
    // Stretch identity: the dominant label set when labels exist, otherwise the multiplicity
    // plus splits where a further eigenvalue touches the dominant modulus.
    struct Stretch {
        int multiplicity;
        std::vector<int> labels;
        std::size_t first, last;
    };
    std::vector<Stretch> st;
    const bool labelled = !pts.front().labels.empty();
    auto same = [&](const EquimodularPoint& a, const EquimodularPoint& b) {
        return a.multiplicity == b.multiplicity && (!labelled || a.labels == b.labels);
    };
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!st.empty() && same(pts[st.back().first], pts[i])) {
            st.back().last = i;
            continue;
        }
        st.push_back({pts[i].multiplicity, pts[i].labels, i, i});
    }
    if (!labelled) {
        // touch points: local maxima of the gap that refine to zero
        std::vector<Stretch> split;
        for (const auto& s : st) {
            std::size_t begin = s.first;
            for (std::size_t i = s.first + 1; i + 1 <= s.last; ++i) {
                if (!(pts[i].gap > pts[i - 1].gap && pts[i].gap >= pts[i + 1].gap && pts[i].gap > -0.05)) continue;
                // golden-section on the polyline between the neighbours
                // distance of the next modulus below the m-th; robust to the chord leaving the curve
                const int m = s.multiplicity;
                auto g = [&](double t) {
                    const cplx u = t < 0 ? pts[i].u + t * (pts[i].u - pts[i - 1].u) : pts[i].u + t * (pts[i + 1].u - pts[i].u);
                    const auto ev = spectrum_at(spec, x, u, options);
                    if (static_cast<int>(ev.size()) <= m) return -1.0;
                    std::vector<double> lm(ev.size());
                    for (std::size_t k = 0; k < ev.size(); ++k) lm[k] = std::log(std::abs(ev[k].value));
                    std::nth_element(lm.begin(), lm.begin() + m, lm.end(), std::greater<>());
                    const double next = lm[m];
                    const double mth = *std::min_element(lm.begin(), lm.begin() + m);
                    return next - mth;
                };
                double lo = -1, hi = 1;
                const double r = 0.5 * (std::sqrt(5.0) - 1);
                double c = hi - r * (hi - lo), d = lo + r * (hi - lo), gc = g(c), gd = g(d);
                for (int it = 0; it < 60; ++it) {
                    if (gc > gd) hi = d, d = c, gd = gc, c = hi - r * (hi - lo), gc = g(c);
                    else lo = c, c = d, gc = gd, d = lo + r * (hi - lo), gd = g(d);
                }
                if (std::max(gc, gd) > -1e-6) {
                    split.push_back({s.multiplicity, {}, begin, i});
                    begin = i + 1;
                }
            }
            split.push_back({s.multiplicity, {}, begin, s.last});
        }
        st.swap(split);
    }
    // Isolated samples at crossings are junction points, not stretches.
    std::vector<Stretch> kept;
    bool dropped = false;
    for (std::size_t k = 0; k < st.size(); ++k) {
        const bool interior = k > 0 && k + 1 < st.size();
        if ((interior && st[k].first == st[k].last) || st[k].multiplicity < 2) {
            dropped = true;
            continue;
        }
        const bool rejoin = dropped && !kept.empty() && kept.back().multiplicity == st[k].multiplicity &&
                            kept.back().labels == st[k].labels;
        dropped = false;
        if (rejoin) {
            kept.back().last = st[k].last;
            continue;
        }
        kept.push_back(st[k]);
    }
    std::vector<int> out;
    for (const auto& s : kept) out.push_back(s.multiplicity);
    return out;
}

std::vector<cplx> two_eigenvalue_zero_density(const EquimodularSegment& segment, int n,
                                              const std::vector<std::array<cplx, 2>>& weights) {
    if (n < 1) throw ValidationError("two_eigenvalue_zero_density: exponent must be positive");
    const auto& pts = segment.points;
    if (!weights.empty() && weights.size() != pts.size())
        throw ValidationError("two_eigenvalue_zero_density: one weight pair per point");
    for (const auto& p : pts)
        if (p.dominant.size() != 2)
            throw DomainError("two_eigenvalue_zero_density: needs exactly two equimodular eigenvalues, found " +
                              std::to_string(p.dominant.size()));
    std::vector<double> phase(pts.size());
    cplx ref1 = pts.empty() ? cplx{} : pts[0].dominant[0];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        // keep the labelling continuous along the path
        cplx l1 = pts[i].dominant[0], l2 = pts[i].dominant[1];
        cplx w1 = 1, w2 = 1;
        if (!weights.empty()) w1 = weights[i][0], w2 = weights[i][1];
        if (i > 0 && std::abs(l2 - ref1) < std::abs(l1 - ref1)) {
            std::swap(l1, l2);
            std::swap(w1, w2);
        }
        ref1 = l1;
        double ph = n * std::arg(l1 / l2) + std::arg(w1 / w2);
        if (i > 0) ph += 2 * M_PI * std::round((phase[i - 1] - ph) / (2 * M_PI));
        phase[i] = ph;
    }
    std::vector<cplx> out;
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const double a = phase[i - 1], b = phase[i];
        if (a == b) continue;
        const double lo = std::min(a, b), hi = std::max(a, b);
        // odd multiples of pi in (lo, hi]
        for (double k = std::floor((lo - M_PI) / (2 * M_PI)) + 1; (2 * k + 1) * M_PI <= hi; k += 1) {
            const double target = (2 * k + 1) * M_PI;
            if (target <= lo) continue;
            const double t = (target - a) / (b - a);
            out.push_back(pts[i - 1].u + t * (pts[i].u - pts[i - 1].u));
        }
    }
    return out;
}

std::vector<Junction> stitch(const std::vector<EquimodularSegment>& segments, double tol) {
    std::vector<Junction> out;
    for (const auto& s : segments) {
        if (s.points.empty()) continue;
        std::vector<cplx> ends;
        if (s.end == Endpoint::Junction) ends.push_back(s.points.back().u);
        if (s.start == Endpoint::Junction) ends.push_back(s.points.front().u);
        for (const cplx& e : ends) {
            auto it = std::find_if(out.begin(), out.end(), [&](const Junction& j) { return std::abs(j.u - e) <= tol; });
            if (it == out.end()) {
                out.push_back({static_cast<int>(out.size()), e, {s.id}});
            } else if (std::find(it->segments.begin(), it->segments.end(), s.id) == it->segments.end()) {
                it->segments.push_back(s.id);
            }
        }
    }
    return out;
}

std::string segments_csv(const std::vector<EquimodularSegment>& segments) {
    std::ostringstream os;
    os << "u_re,u_im,modulus,multiplicity,crossing_class,segment_id\n";
    char buf[128];
    for (const auto& s : segments)
        for (const auto& p : s.points) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", p.u.real(), p.u.imag(), p.modulus);
            os << buf << p.multiplicity << "," << to_string(p.crossing_class) << "," << s.id << "\n";
        }
    return os.str();
}

std::string junctions_json(const std::vector<Junction>& junctions) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& j : junctions) {
        nlohmann::ordered_json o;
        o["id"] = j.id;
        o["u_re"] = j.u.real();
        o["u_im"] = j.u.imag();
        o["segments"] = j.segments;
        arr.push_back(o);
    }
    return arr.dump(1) + "\n";
}

}  // namespace izeros
