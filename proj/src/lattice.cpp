#include "izeros/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "izeros/errors.hpp"

namespace izeros {

bool periodic_h(Boundary b) { return b != Boundary::FreeFree; }
bool periodic_v(Boundary b) { return b == Boundary::Toroidal; }

void validate_shape(const LatticeSpec& spec) {
    if (spec.lv < 1 || spec.lh < 1)
        throw ValidationError("lattice dimensions must be positive");
    if (periodic_h(spec.boundary) && spec.lh < 2)
        throw ValidationError("lh >= 2 required for a periodic horizontal direction");
    if (spec.boundary == Boundary::BrascampKunz) {
        if (spec.lh % 2 != 0) throw ValidationError("Brascamp-Kunz boundary requires even lh");
        if (spec.model == Model::HardSquares)
            throw ValidationError("Brascamp-Kunz boundary is defined for the Ising model only");
    }
}

void validate(const LatticeSpec& spec) {
    validate_shape(spec);
    if (spec.lh > 30 || spec.lv > 4096) throw ValidationError("lattice dimensions out of range");
}

std::size_t site_count(const LatticeSpec& spec) {
    return static_cast<std::size_t>(spec.lv) * static_cast<std::size_t>(spec.lh);
}

std::size_t bond_count(const LatticeSpec& spec) {
    const std::size_t lv = spec.lv, lh = spec.lh;
    std::size_t horiz = periodic_h(spec.boundary) ? lv * lh : lv * (lh - 1);
    std::size_t vert = 0;
    switch (spec.boundary) {
        case Boundary::Toroidal: vert = lv * lh; break;
        case Boundary::Cylindrical:
        case Boundary::FreeFree: vert = (lv - 1) * lh; break;
        case Boundary::BrascampKunz: vert = (lv + 1) * lh; break;
    }
    return horiz + vert;
}

std::string to_string(Boundary b) {
    switch (b) {
        case Boundary::Toroidal: return "torus";
        case Boundary::Cylindrical: return "cyl";
        case Boundary::FreeFree: return "free";
        case Boundary::BrascampKunz: return "bk";
    }
    return "?";
}

std::string to_string(Model m) { return m == Model::IsingField ? "ising" : "hardsquares"; }

std::string describe(const LatticeSpec& spec) {
    std::ostringstream os;
    os << spec.lv << "x" << spec.lh << " " << to_string(spec.boundary) << " " << to_string(spec.model);
    return os.str();
}

cplx to_s(cplx u) {
    if (u == cplx(0.0, 0.0)) throw DomainError("to_s: u = 0");
    return (1.0 / u - u) / 2.0;
}

cplx rescale(cplx u, double x, Convention convention) {
    if (x < 0) throw DomainError("rescale: x must be nonnegative");
    if (convention == Convention::BrascampKunz) return u * u * std::sqrt(x);
    return u * std::pow(x, 0.25);
}

mpq_class parse_rational(const std::string& text) {
    if (text.empty()) throw ValidationError("empty rational");
    auto dot = text.find('.');
    try {
        if (dot == std::string::npos) {
            mpq_class q(text, 10);
            if (q.get_den() == 0) throw ValidationError("zero denominator in '" + text + "'");
            q.canonicalize();
            return q;
        }
        std::string digits = text.substr(0, dot) + text.substr(dot + 1);
        if (digits.empty() || digits == "-") throw ValidationError("bad decimal '" + text + "'");
        mpz_class num(digits, 10);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, text.size() - dot - 1);
        mpq_class q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw ValidationError("cannot parse rational '" + text + "'");
    }
}

std::vector<NickelSingularity> nickel_singularities(int j) {
    if (j < 1) throw DomainError("nickel_singularities: j must be positive");
    std::vector<NickelSingularity> out;
    const Regime regime = (j % 2 == 1) ? Regime::AboveTc : Regime::BelowTc;
    std::ostringstream desc;
    if (j % 2 == 1) desc << 2 * j * (j - 1) - 1 << ", log";
    else desc << 4 * j * j - 3 << "/2";
    for (int m = 0; m < j; ++m) {
        for (int n = 0; n < j; ++n) {
            if (m == 0 && n == 0) continue;
            const double c = std::cos(2 * std::numbers::pi * m / j) + std::cos(2 * std::numbers::pi * n / j);
            // s^2 - c s + 1 = 0 with |c| <= 2: roots are exp(+-i acos(c/2)).
            const double phi = std::acos(std::clamp(c / 2.0, -1.0, 1.0));
            for (double sign : {1.0, -1.0}) {
                cplx s = std::polar(1.0, sign * phi);
                bool dup = std::any_of(out.begin(), out.end(),
                                       [&](const NickelSingularity& e) { return std::abs(e.s_value - s) < 1e-12; });
                if (!dup) out.push_back({j, m, n, s, regime, desc.str()});
            }
        }
    }
    return out;
}

}  // namespace izeros
