#include "cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <boost/version.hpp>
#include <gmp.h>
#include <mpfr.h>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "izeros/density.hpp"
#include "izeros/equimodular.hpp"
#include "izeros/errors.hpp"
#include "izeros/partition.hpp"
#include "izeros/roots.hpp"
#include "izeros/spectrum.hpp"

namespace izeros::cli {

namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "1.0.0";

struct OutputFile {
    std::string name;
    std::string content;
};

// Result of one (command, x) job.
struct JobResult {
    std::vector<OutputFile> files;
    std::vector<std::string> summary;
    int status = kOk;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string file_tag(const std::string& rational) {
    std::string t = rational;
    std::replace(t.begin(), t.end(), '/', '-');
    return t;
}

std::string canonical_rational(const std::string& text) {
    return parse_rational(text).get_str();
}

std::string lattice_text(const RunConfig& c) {
    return "lv=" + std::to_string(c.spec.lv) + ";lh=" + std::to_string(c.spec.lh) + ";bc=" +
           to_string(c.spec.boundary) + ";model=" + to_string(c.spec.model);
}

std::string precision_text(const RunConfig& c) {
    return ";precision=" + std::to_string(c.precision_digits) + ";max_bits=" + std::to_string(c.max_bits);
}

RootOptions root_options(const RunConfig& c) {
    RootOptions o;
    o.max_precision_bits = c.max_bits;
    return o;
}

std::string header(const std::string& command, const std::string& canonical, const std::string& precision,
                   const std::vector<std::string>& extra = {}) {
    std::string h = "# izeros " + command + "\n";
    h += "# config_hash " + config_hash(canonical) + "\n";
    h += "# config " + canonical + "\n";
    h += "# versions " + module_versions() + "\n";
    h += "# precision " + precision + "\n";
    for (const auto& e : extra) h += "# " + e + "\n";
    return h;
}

std::string output_name(const std::string& command, const std::string& tag, const std::string& canonical,
                        const std::string& ext) {
    std::string n = command;
    if (!tag.empty()) n += "_" + tag;
    return n + "_" + config_hash(canonical) + ext;
}

// Independent jobs over a small worker pool; results keep input order.
std::vector<JobResult> run_jobs(std::size_t n, int threads, const std::function<JobResult(std::size_t)>& job) {
    std::vector<JobResult> results(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < n;) {
            try {
                results[i] = job(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int t = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    std::vector<std::thread> pool;
    for (int k = 1; k < t; ++k) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

double target_radius(const RunConfig& c) { return std::pow(10.0, -c.precision_digits); }

// ---------------------------------------------------------------- zeros

ZeroSet zeros_in(const RunConfig& c, const std::string& fixed, long* bits) {
    const double target = target_radius(c);
    if (c.spec.model == Model::HardSquares) {
        if (c.variable != Variable::z) throw ValidationError("hard squares are solved in z; use --var z");
        auto zs = find_roots(partition_polynomial(c.spec, {Variable::z, 1}), target, root_options(c));
        zs.variable = Variable::z;
        *bits = zs.precision_bits;
        return zs;
    }
    if (c.variable == Variable::x) {
        auto zs = find_roots(partition_polynomial(c.spec, {Variable::x, parse_rational(fixed)}), target, root_options(c));
        *bits = zs.precision_bits;
        return zs;
    }
    const mpq_class x = parse_rational(fixed);
    // Zero-field Brascamp-Kunz: the integer free-fermion product has the same zeros and
    // avoids the symbolic sweep, which is out of reach beyond lh ~ 16.
    const bool product = c.spec.boundary == Boundary::BrascampKunz && x == 1;
    auto zs = find_roots(product ? bk_free_fermion_polynomial(c.spec.lv, c.spec.lh)
                                 : partition_polynomial(c.spec, {Variable::u, x}),
                         target, root_options(c));
    *bits = zs.precision_bits;
    switch (c.variable) {
        case Variable::u: return zs;
        case Variable::s:
            if (x != 1) throw ValidationError("--var s is the zero-field variable; use --x 1");
            return map_zeros(zs, Variable::s);
        case Variable::y: return map_zeros(zs, Variable::y, c.convention, x.get_d());
        case Variable::z: return map_zeros(map_zeros(zs, Variable::y, c.convention, x.get_d()), Variable::z);
        default: break;
    }
    throw ValidationError("unsupported --var");
}

std::vector<std::string> fixed_values(const RunConfig& c) {
    if (c.spec.model == Model::HardSquares) return {"1"};
    if (c.variable == Variable::x) return {c.u};
    return c.x_list;
}

int cmd_zeros(const RunConfig& c, std::vector<JobResult>& results) {
    const auto fixed = fixed_values(c);
    results = run_jobs(fixed.size(), c.threads, [&](std::size_t i) {
        const std::string f = canonical_rational(fixed[i]);
        const bool lee_yang = c.variable == Variable::x;
        std::string canonical = "command=zeros;" + lattice_text(c) + ";var=" + to_string(c.variable) +
                                ";convention=" + (c.convention == Convention::Torus ? "torus" : "bk") +
                                precision_text(c);
        if (c.spec.model == Model::IsingField) canonical += (lee_yang ? ";u=" : ";x=") + f;
        long bits = 0;
        auto zs = zeros_in(c, f, &bits);
        std::vector<std::string> extra{"zeros " + std::to_string(zs.total_multiplicity()),
                                       std::string("certified ") + (zs.certified ? "yes" : "no")};
        for (const auto& fl : zs.flags) extra.push_back("flag " + fl);
        JobResult r;
        const std::string tag = c.spec.model == Model::HardSquares ? "" : (lee_yang ? "u" : "x") + file_tag(f);
        const std::string name = output_name("zeros", tag, canonical, ".csv");
        r.files.push_back({name, header("zeros", canonical, std::to_string(bits) + " bits", extra) + zeros_csv(zs)});
        r.summary.push_back(name + ": " + std::to_string(zs.total_multiplicity()) + " zeros in " +
                            to_string(zs.variable) + (zs.certified ? "" : " (not certified)"));
        if (!zs.certified) r.status = kNumeric;
        return r;
    });
    return kOk;
}

// ---------------------------------------------------------------- density

std::string fit_line(const DensitySeries& d) {
    if (!d.endpoint_fit) return "endpoint_fit none";
    const auto& f = *d.endpoint_fit;
    return "endpoint_fit sigma " + fmt("%.6f", f.sigma) + " ci95 [" + fmt("%.6f", f.ci_low) + ", " +
           fmt("%.6f", f.ci_high) + "] points " + std::to_string(f.first) + ".." + std::to_string(f.first + f.count - 1);
}

int cmd_density(const RunConfig& c, std::vector<JobResult>& results) {
    const std::string base = "command=density;estimator=" + c.estimator + ";" + lattice_text(c);
    if (c.estimator == "scale") {
        if (c.spec.boundary != Boundary::BrascampKunz || c.spec.model != Model::IsingField)
            throw ValidationError("the scale-dependent estimator uses zero-field Brascamp-Kunz s-zeros; use --bc bk");
        if (c.source != "closed" && c.source != "roots") throw ValidationError("--source must be closed or roots");
        const std::string canonical = base + ";p=" + fmt("%.17g", c.p) + ";c=" + fmt("%.17g", c.c) +
                                      ";source=" + c.source + precision_text(c);
        ZeroSet zs;
        std::string precision = "double";
        if (c.source == "closed") {
            zs = bk_closed_form_s_zeros(c.spec.lv, c.spec.lh);
        } else {
            auto zu = find_roots(partition_polynomial(c.spec, {Variable::u, 1}), target_radius(c), root_options(c));
            precision = std::to_string(zu.precision_bits) + " bits";
            zs = map_zeros(zu, Variable::s);
        }
        auto d = scale_dependent_density(zs, c.c, c.p);
        std::vector<double> grid;
        for (const auto& s : d.samples) grid.push_back(s.abscissa);
        JobResult r;
        const std::vector<std::string> extra{"window c " + fmt("%.17g", c.c) + " p " + fmt("%.17g", c.p) + " a " +
                                                 std::to_string(d.window.a) + " N " + std::to_string(d.window.N),
                                             "normalization " + fmt("%.12f", d.normalization),
                                             "roughness " + fmt("%.6f", roughness(d))};
        r.files.push_back({output_name("density", "", canonical, ".csv"),
                           header("density", canonical, precision, extra) + density_csv(d)});
        r.files.push_back({output_name("reference", "", canonical, ".csv"),
                           header("density", canonical, "double", {"lu_wu reference on the sample abscissae"}) +
                               lu_wu_reference_csv(grid)});
        r.summary.push_back(r.files[0].name + ": " + std::to_string(d.samples.size()) + " samples, a = " +
                            std::to_string(d.window.a));
        results = {r};
        return kOk;
    }
    if (c.estimator == "leeyang") {
        if (c.spec.model != Model::IsingField) throw ValidationError("Lee-Yang zeros need the Ising model");
        const std::string u = canonical_rational(c.u);
        const std::string canonical = base + ";u=" + u + precision_text(c);
        auto zs = find_roots(partition_polynomial(c.spec, {Variable::x, parse_rational(u)}), target_radius(c), root_options(c));
        auto d = lee_yang_density(zs);
        const double ud = parse_rational(u).get_d();
        std::vector<std::string> extra{"theta_ly " + (d.theta_ly ? fmt("%.12f", *d.theta_ly) : std::string("none")),
                                       "normalization " + fmt("%.12f", d.normalization)};
        if (ud >= 0 && ud < 1) {
            extra.push_back("reference D(pi) " + fmt("%.12f", reference_D_pi(ud)));
            extra.push_back("reference D(0) " + fmt("%.12f", reference_D_0(ud, regime_of(ud))));
        }
        JobResult r;
        r.files.push_back({output_name("density", "u" + file_tag(u), canonical, ".csv"),
                           header("density", canonical, std::to_string(zs.precision_bits) + " bits", extra) +
                               density_csv(d)});
        r.summary.push_back(r.files[0].name + ": " + std::to_string(d.samples.size()) + " samples");
        if (!zs.certified) r.status = kNumeric;
        results = {r};
        return kOk;
    }
    if (c.estimator == "inner") {
        const auto fixed = fixed_values(c);
        results = run_jobs(fixed.size(), c.threads, [&](std::size_t i) {
            const std::string f = canonical_rational(fixed[i]);
            std::string canonical = base + ";convention=" + (c.convention == Convention::Torus ? "torus" : "bk") +
                                    precision_text(c);
            RunConfig cc = c;
            if (c.spec.model == Model::IsingField) {
                canonical += ";x=" + f;
                cc.variable = Variable::y;
            } else {
                cc.variable = Variable::z;
            }
            long bits = 0;
            auto zs = zeros_in(cc, f, &bits);
            InnerLoopOptions o;
            o.x = parse_rational(f).get_d();
            auto d = inner_loop_density(zs, o);
            std::vector<std::string> extra{"loop_zeros " + std::to_string(d.window.N), fit_line(d),
                                           "roughness " + fmt("%.6f", roughness(d))};
            for (const auto& fl : d.flags) extra.push_back("flag " + fl);
            JobResult r;
            const std::string tag = c.spec.model == Model::HardSquares ? "" : "x" + file_tag(f);
            r.files.push_back({output_name("density", tag, canonical, ".csv"),
                               header("density", canonical, std::to_string(bits) + " bits", extra) + density_csv(d)});
            r.summary.push_back(r.files[0].name + ": " + std::to_string(d.samples.size()) + " samples, " + fit_line(d));
            if (!zs.certified) r.status = kNumeric;
            return r;
        });
        return kOk;
    }
    throw ValidationError("--estimator must be scale, leeyang or inner");
}

// ---------------------------------------------------------------- equimodular

int cmd_equimodular(const RunConfig& c, std::vector<JobResult>& results) {
    if (c.spec.model != Model::IsingField) throw ValidationError("equimodular curves use the Ising transfer matrix");
    LatticeSpec row{1, c.spec.lh, c.spec.boundary, Model::IsingField};
    if (row.boundary == Boundary::BrascampKunz) throw ValidationError("use --bc torus, cyl or free for equimodular curves");
    const Window w = c.window.value_or(Window{{-3, -3}, {3, 3}});
    results = run_jobs(c.x_list.size(), c.threads, [&](std::size_t i) {
        const std::string f = canonical_rational(c.x_list[i]);
        const mpq_class x = parse_rational(f);
        EquimodularOptions o;
        o.momentum_index = c.momentum;
        std::string canonical = "command=equimodular;lh=" + std::to_string(c.spec.lh) + ";bc=" +
                                to_string(c.spec.boundary) + ";x=" + f + ";momentum=" +
                                (c.momentum ? std::to_string(*c.momentum) : std::string("all"));
        JobResult r;
        if (c.profile) {
            if (x != 1 || !periodic_h(row.boundary))
                throw ValidationError("--profile follows the zero-field circles; needs --x 1 and periodic rows");
            canonical += ";profile=4000";
            std::vector<EquimodularSegment> segs;
            nlohmann::ordered_json j;
            for (Branch b : {Branch::Ferromagnetic, Branch::Antiferromagnetic}) {
                auto seg = circle_branch(c.spec.lh, b, 4000, o);
                seg.id = static_cast<int>(segs.size());
                j[b == Branch::Ferromagnetic ? "ferromagnetic" : "antiferromagnetic"] =
                    multiplicity_profile(seg, row, x, o);
                segs.push_back(std::move(seg));
            }
            r.files.push_back({output_name("equimodular", "x" + file_tag(f), canonical, ".csv"),
                               header("equimodular", canonical, "double") + segments_csv(segs)});
            r.files.push_back({output_name("profile", "x" + file_tag(f), canonical, ".json"),
                               header("equimodular", canonical, "double") + j.dump(2) + "\n"});
            r.summary.push_back(r.files[1].name + ": ferromagnetic " + j["ferromagnetic"].dump() +
                                ", antiferromagnetic " + j["antiferromagnetic"].dump());
            return r;
        }
        canonical += ";window=" + fmt("%.17g", w.lo.real()) + "," + fmt("%.17g", w.hi.real()) + "," +
                     fmt("%.17g", w.lo.imag()) + "," + fmt("%.17g", w.hi.imag()) +
                     ";resolution=" + std::to_string(c.resolution) + ";max_segments=" + std::to_string(c.max_segments);
        auto seeds = grid_scan(row, x, w, c.resolution, o);
        std::vector<EquimodularSegment> segs;
        const double near = 4 * o.step;
        for (const auto& s : seeds) {
            if (static_cast<int>(segs.size()) >= c.max_segments) break;
            bool covered = false;
            for (const auto& g : segs)
                for (const auto& p : g.points)
                    if (std::abs(p.u - s.u) < near) covered = true;
            if (covered) continue;
            for (cplx heading : {cplx(0, 1), cplx(0, -1)}) {
                auto seg = trace_curve(s, row, x, w, o, heading);
                seg.id = static_cast<int>(segs.size());
                segs.push_back(std::move(seg));
            }
        }
        const auto junctions = stitch(segs, 10 * o.step);
        const std::vector<std::string> extra{"seeds " + std::to_string(seeds.size()),
                                             "segments " + std::to_string(segs.size())};
        r.files.push_back({output_name("equimodular", "x" + file_tag(f), canonical, ".csv"),
                           header("equimodular", canonical, "double", extra) + segments_csv(segs)});
        r.files.push_back({output_name("junctions", "x" + file_tag(f), canonical, ".json"),
                           header("equimodular", canonical, "double") + junctions_json(junctions) + "\n"});
        r.summary.push_back(r.files[0].name + ": " + std::to_string(segs.size()) + " segments from " +
                            std::to_string(seeds.size()) + " seeds");
        return r;
    });
    return kOk;
}

// ---------------------------------------------------------------- spectrum

std::vector<cplx> spectrum_points(const RunConfig& c) {
    std::vector<cplx> pts;
    for (const auto& p : c.points) {
        const auto k = p.find(',');
        if (k == std::string::npos) throw ValidationError("--point expects re,im");
        try {
            pts.emplace_back(std::stod(p.substr(0, k)), std::stod(p.substr(k + 1)));
        } catch (const std::exception&) {
            throw ValidationError("--point expects re,im, got '" + p + "'");
        }
    }
    if (pts.empty() && c.window) {
        const int n = c.resolution;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double fa = n > 1 ? double(a) / (n - 1) : 0, fb = n > 1 ? double(b) / (n - 1) : 0;
                pts.emplace_back(c.window->lo.real() + fb * (c.window->hi.real() - c.window->lo.real()),
                                 c.window->lo.imag() + fa * (c.window->hi.imag() - c.window->lo.imag()));
            }
    }
    if (pts.empty()) throw ValidationError("spectrum needs --point re,im or --window with --resolution");
    return pts;
}

int cmd_spectrum(const RunConfig& c, std::vector<JobResult>& results) {
    if (c.spec.model != Model::IsingField) throw ValidationError("spectra are for the Ising model");
    if (c.method != "auto" && c.method != "kaufman" && c.method != "numeric")
        throw ValidationError("--method must be auto, kaufman or numeric");
    const auto pts = spectrum_points(c);
    LatticeSpec row{1, c.spec.lh, c.spec.boundary, Model::IsingField};
    results = run_jobs(c.x_list.size(), c.threads, [&](std::size_t i) {
        const std::string f = canonical_rational(c.x_list[i]);
        const mpq_class x = parse_rational(f);
        const bool closed = c.method == "kaufman" || (c.method == "auto" && x == 1 && periodic_h(row.boundary));
        if (closed && (x != 1 || !periodic_h(row.boundary)))
            throw ValidationError("the closed-form spectrum needs --x 1 and periodic rows");
        std::string canonical = "command=spectrum;lh=" + std::to_string(c.spec.lh) + ";bc=" +
                                to_string(row.boundary) + ";x=" + f + ";method=" + (closed ? "kaufman" : "numeric") +
                                ";momentum=" + (c.momentum ? std::to_string(*c.momentum) : std::string("all")) +
                                ";points=";
        for (auto p : pts) canonical += fmt("%.17g", p.real()) + "," + fmt("%.17g", p.imag()) + " ";
        nlohmann::ordered_json h;
        h["header"] = {{"command", "spectrum"}, {"config_hash", config_hash(canonical)},
                       {"versions", module_versions()}, {"precision", "double"}};
        std::string body = h.dump() + "\n";
        for (cplx u : pts) {
            SpectrumRecord rec;
            if (closed) {
                rec = kaufman_spectrum(u, c.spec.lh);
                if (c.momentum)
                    std::erase_if(rec.eigenvalues, [&](const Eigenvalue& e) { return e.momentum_index != *c.momentum; });
            } else {
                SpectrumOptions so;
                so.momentum_index = c.momentum;
                so.overlaps = !periodic_h(row.boundary);
                rec = numeric_spectrum(row, {u, x}, so);
            }
            body += spectrum_jsonl(rec);
            if (body.back() != '\n') body += "\n";
        }
        JobResult r;
        r.files.push_back({output_name("spectrum", "x" + file_tag(f), canonical, ".jsonl"), body});
        r.summary.push_back(r.files[0].name + ": " + std::to_string(pts.size()) + " points");
        return r;
    });
    return kOk;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const RunConfig& c, std::vector<JobResult>& results, std::ostream& out) {
    const std::string canonical = "command=verify;max_sites=" + std::to_string(c.max_sites);
    std::string report;
    int failures = 0, checks = 0;
    auto line = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) ++failures;
        report += std::string(ok ? "PASS " : "FAIL ") + what + "\n";
    };
    const Boundary all[] = {Boundary::Toroidal, Boundary::Cylindrical, Boundary::FreeFree, Boundary::BrascampKunz};
    for (Model m : {Model::IsingField, Model::HardSquares})
        for (Boundary b : all)
            for (int lv = 1; lv <= c.max_sites; ++lv)
                for (int lh = 1; lv * lh <= c.max_sites; ++lh) {
                    LatticeSpec spec{lv, lh, b, m};
                    try {
                        validate(spec);
                    } catch (const ValidationError&) {
                        continue;
                    }
                    const std::string name = "brute-force " + describe(spec);
                    if (m == Model::HardSquares) {
                        auto rep = verify_against_bruteforce(spec, {Variable::z, 1});
                        line(rep.equal, name + (rep.equal ? "" : ": " + rep.detail));
                        continue;
                    }
                    for (const char* x : {"1", "1/2", "1/10"}) {
                        auto rep = verify_against_bruteforce(spec, {Variable::u, mpq_class(x)});
                        line(rep.equal, name + " x=" + x + (rep.equal ? "" : ": " + rep.detail));
                    }
                }
    // Transfer-matrix constructions against the exact polynomial at fixed complex points.
    std::mt19937 rng(20240611);
    std::uniform_real_distribution<double> rad(0.2, 1.2), ang(0, 2 * std::acos(-1.0));
    auto rel = [](cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); };
    for (int lh = 2; lh <= std::min(8, c.max_sites); ++lh)
        for (int lv = 1; lv * lh <= c.max_sites; ++lv)
            for (const char* xs : {"1", "1/2"}) {
                const mpq_class x(xs);
                const cplx u = std::polar(rad(rng), ang(rng));
                auto exact = [&](LatticeSpec s) { return evaluate(partition_polynomial(s, {Variable::u, x}), u); };
                SpectrumOptions so;
                so.overlaps = true;
                const auto tc = numeric_spectrum({1, lh, Boundary::Toroidal, Model::IsingField}, {u, x});
                const auto tcy = numeric_spectrum({1, lh, Boundary::Cylindrical, Model::IsingField}, {u, x}, so);
                const auto tf = numeric_spectrum({1, lh, Boundary::FreeFree, Model::IsingField}, {u, x}, so);
                const std::string at = " " + std::to_string(lv) + "x" + std::to_string(lh) + " x=" + xs;
                line(rel(reconstruct_Z(tc, lv, Construction::CC), exact({lv, lh, Boundary::Toroidal, Model::IsingField})) < 1e-9,
                     "construction CC" + at);
                if (lv >= 2)
                    line(rel(reconstruct_Z(tf, lv, Construction::CF), exact({lh, lv, Boundary::Cylindrical, Model::IsingField})) < 1e-9,
                         "construction CF" + at);
                line(rel(reconstruct_Z(tcy, lv, Construction::FC), exact({lv, lh, Boundary::Cylindrical, Model::IsingField})) < 1e-9,
                     "construction FC" + at);
                line(rel(reconstruct_Z(tf, lv, Construction::FF), exact({lv, lh, Boundary::FreeFree, Model::IsingField})) < 1e-9,
                     "construction FF" + at);
            }
    report += "summary " + std::to_string(checks - failures) + "/" + std::to_string(checks) + " passed\n";
    JobResult r;
    r.files.push_back({output_name("verify", "", canonical, ".txt"), header("verify", canonical, "exact") + report});
    r.summary.push_back(r.files[0].name + ": " + std::to_string(checks - failures) + "/" + std::to_string(checks) +
                        " passed");
    if (failures) {
        r.status = kNumeric;
        std::istringstream is(report);
        for (std::string l; std::getline(is, l);)
            if (l.rfind("FAIL", 0) == 0) out << l << "\n";
    }
    results = {r};
    return kOk;
}

std::string resource_hint(const RunConfig& c) {
    if (c.spec.boundary == Boundary::BrascampKunz && c.command == "zeros")
        return " (hint: zero-field Brascamp-Kunz zeros are available in closed form, e.g. density --source closed; "
               "otherwise reduce --lh, the sweep stores 2^lh states)";
    return " (hint: reduce --lh, the transfer matrix has 2^lh states)";
}

}  // namespace

std::string config_hash(const std::string& canonical) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(canonical.data(), canonical.size(), md, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < 8 && i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string module_versions() {
    return std::string("izeros ") + kVersion + ", gmp " + gmp_version + ", mpfr " + MPFR_VERSION_STRING + ", eigen " +
           std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
           std::to_string(EIGEN_MINOR_VERSION) + ", boost " + std::to_string(BOOST_VERSION / 100000) + "." +
           std::to_string(BOOST_VERSION / 100 % 1000);
}

Window parse_window(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(part, &used));
            if (used != part.size()) throw std::invalid_argument(part);
        } catch (const std::exception&) {
            throw ValidationError("--window expects re0,re1,im0,im1, got '" + text + "'");
        }
    }
    if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
        throw ValidationError("--window expects re0,re1,im0,im1 with re0 < re1 and im0 < im1");
    return Window{{v[0], v[2]}, {v[1], v[3]}};
}

Boundary parse_boundary(const std::string& t) {
    if (t == "torus") return Boundary::Toroidal;
    if (t == "cyl") return Boundary::Cylindrical;
    if (t == "free") return Boundary::FreeFree;
    if (t == "bk") return Boundary::BrascampKunz;
    throw ValidationError("--bc must be torus, cyl, free or bk");
}

Model parse_model(const std::string& t) {
    if (t == "ising") return Model::IsingField;
    if (t == "hardsquares") return Model::HardSquares;
    throw ValidationError("--model must be ising or hardsquares");
}

Convention parse_convention(const std::string& t) {
    if (t == "bk") return Convention::BrascampKunz;
    if (t == "torus") return Convention::Torus;
    throw ValidationError("--convention must be bk or torus");
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig c;
    std::string bc = "torus", model = "ising", var = "u", convention = "bk", window;
    int momentum = -1;

    CLI::App app{"Partition function zeros of the square-lattice Ising model and hard squares", "izeros"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    auto common = [&](CLI::App* s) {
        s->add_option("--lv", c.spec.lv, "rows")->check(CLI::PositiveNumber);
        s->add_option("--lh", c.spec.lh, "columns (transfer direction width)")->check(CLI::PositiveNumber);
        s->add_option("--bc", bc, "torus, cyl, free or bk");
        s->add_option("--model", model, "ising or hardsquares");
        s->add_option("--x", c.x_list, "field fugacity, rational p/q (repeatable)");
        s->add_option("--var", var, "u, s, x, y or z");
        s->add_option("--convention", convention, "rescaling convention for y: bk or torus");
        s->add_option("--window", window, "re0,re1,im0,im1");
        s->add_option("--resolution", c.resolution, "grid points per side")->check(CLI::PositiveNumber);
        s->add_option("--momentum", momentum, "momentum index P (2 pi P / lh)");
        s->add_option("--precision", c.precision_digits, "certified digits")->check(CLI::Range(1, 300));
        s->add_option("--max-bits", c.max_bits, "working precision ceiling of the root finder")
            ->check(CLI::Range(64, 1 << 22));
        s->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
        s->add_option("--out", c.out, "output directory");
    };
    auto* zeros = app.add_subcommand("zeros", "certified zeros of the exact partition function");
    common(zeros);
    zeros->add_option("--u", c.u, "fixed u for Lee-Yang zeros (--var x)");
    auto* density = app.add_subcommand("density", "zero densities");
    common(density);
    density->add_option("--estimator", c.estimator, "scale, leeyang or inner");
    density->add_option("--p", c.p, "window exponent, a = [c N^p]");
    density->add_option("--c", c.c, "window prefactor");
    density->add_option("--u", c.u, "fixed u for the Lee-Yang estimator");
    density->add_option("--source", c.source, "closed or roots (scale estimator)");
    auto* equi = app.add_subcommand("equimodular", "equimodular curves of the transfer matrix");
    common(equi);
    equi->add_flag("--profile", c.profile, "multiplicity profiles along the zero-field circles");
    equi->add_option("--max-segments", c.max_segments, "cap on traced segments")->check(CLI::PositiveNumber);
    auto* spec = app.add_subcommand("spectrum", "transfer-matrix spectra");
    common(spec);
    spec->add_option("--point", c.points, "u as re,im (repeatable)");
    spec->add_option("--method", c.method, "auto, kaufman or numeric");
    auto* verify = app.add_subcommand("verify", "brute-force and construction cross-checks");
    verify->add_option("--max-sites", c.max_sites, "largest lv*lh checked")->check(CLI::Range(2, 20));
    verify->add_option("--out", c.out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion& e) {
        out << kVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    }

    try {
        c.command = app.get_subcommands().front()->get_name();
        c.spec.boundary = parse_boundary(bc);
        c.spec.model = parse_model(model);
        c.variable = variable_from_string(var);
        c.convention = parse_convention(convention);
        if (!window.empty()) c.window = parse_window(window);
        if (momentum >= 0) {
            if (momentum >= c.spec.lh) throw ValidationError("--momentum must lie in 0..lh-1");
            c.momentum = momentum;
        }
        for (const auto& x : c.x_list)
            if (parse_rational(x) <= 0) throw ValidationError("--x must be positive");
        if (c.spec.model == Model::HardSquares && c.command == "zeros") c.variable = Variable::z;
        const bool closed_bk = c.command == "density" && c.estimator == "scale" && c.source == "closed" &&
                               c.spec.boundary == Boundary::BrascampKunz;
        if (closed_bk) validate_shape(c.spec);
        else validate(c.spec);

        std::vector<JobResult> results;
        if (c.command == "zeros") cmd_zeros(c, results);
        else if (c.command == "density") cmd_density(c, results);
        else if (c.command == "equimodular") cmd_equimodular(c, results);
        else if (c.command == "spectrum") cmd_spectrum(c, results);
        else cmd_verify(c, results, out);

        fs::create_directories(c.out);
        int status = kOk;
        for (const auto& r : results) {
            for (const auto& f : r.files) {
                std::ofstream os(fs::path(c.out) / f.name, std::ios::binary);
                if (!os) throw ResourceError("cannot write " + (fs::path(c.out) / f.name).string());
                os << f.content;
            }
            for (const auto& s : r.summary) out << s << "\n";
            status = std::max(status, r.status);
        }
        if (status == kNumeric) err << "error: numeric failure (uncertified zeros or failed checks)\n";
        return status;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << resource_hint(c) << "\n";
        return kResource;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory" << resource_hint(c) << "\n";
        return kResource;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kNumeric;
    }
}

}  // namespace izeros::cli
