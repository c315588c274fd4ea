#include "izeros/polynomial.hpp"

#include <cmath>
#include <numeric>

#include "izeros/errors.hpp"

namespace izeros {

std::string to_string(Variable v) {
    switch (v) {
        case Variable::u: return "u";
        case Variable::s: return "s";
        case Variable::x: return "x";
        case Variable::y: return "y";
        case Variable::z: return "z";
    }
    return "?";
}

Variable variable_from_string(const std::string& name) {
    if (name == "u") return Variable::u;
    if (name == "s") return Variable::s;
    if (name == "x") return Variable::x;
    if (name == "y") return Variable::y;
    if (name == "z") return Variable::z;
    throw ValidationError("unknown variable '" + name + "'");
}

void ExactPolynomial::trim() {
    while (coefficients.size() > 1 && coefficients.back() == 0) coefficients.pop_back();
    if (coefficients.empty()) coefficients.push_back(0);
}

int ExactPolynomial::valuation() const {
    for (std::size_t k = 0; k < coefficients.size(); ++k)
        if (coefficients[k] != 0) return static_cast<int>(k);
    return 0;
}

int ExactPolynomial::stride() const {
    const int v = valuation();
    int g = 0;
    for (std::size_t k = v + 1; k < coefficients.size(); ++k)
        if (coefficients[k] != 0) g = std::gcd(g, static_cast<int>(k) - v);
    return g == 0 ? 1 : g;
}

ExactPolynomial multiply(const ExactPolynomial& a, const ExactPolynomial& b) {
    ExactPolynomial r;
    r.variable = a.variable;
    r.prefactor = a.prefactor * b.prefactor;
    r.coefficients.assign(a.coefficients.size() + b.coefficients.size() - 1, 0);
    for (std::size_t i = 0; i < a.coefficients.size(); ++i) {
        if (a.coefficients[i] == 0) continue;
        for (std::size_t j = 0; j < b.coefficients.size(); ++j)
            r.coefficients[i + j] += a.coefficients[i] * b.coefficients[j];
    }
    r.trim();
    return r;
}

namespace {

// Complex mantissa with a separate binary exponent.
struct Scaled {
    std::complex<double> m;
    long e = 0;
    void normalize() {
        double a = std::max(std::abs(m.real()), std::abs(m.imag()));
        if (a == 0.0) { e = 0; return; }
        int k;
        std::frexp(a, &k);
        m = {std::ldexp(m.real(), -k), std::ldexp(m.imag(), -k)};
        e += k;
    }
};

Scaled add(const Scaled& a, const Scaled& b) {
    if (a.m == 0.0) return b;
    if (b.m == 0.0) return a;
    Scaled r;
    if (a.e >= b.e) {
        long d = a.e - b.e;
        auto bm = d > 1100 ? std::complex<double>(0) : std::complex<double>(std::ldexp(b.m.real(), -d), std::ldexp(b.m.imag(), -d));
        r = {a.m + bm, a.e};
    } else {
        long d = b.e - a.e;
        auto am = d > 1100 ? std::complex<double>(0) : std::complex<double>(std::ldexp(a.m.real(), -d), std::ldexp(a.m.imag(), -d));
        r = {b.m + am, b.e};
    }
    r.normalize();
    return r;
}

Scaled from_mpz(const mpz_class& c) {
    long e;
    double d = mpz_get_d_2exp(&e, c.get_mpz_t());
    Scaled s{{d, 0.0}, e};
    s.normalize();
    return s;
}

double log_abs(const mpz_class& c) {
    long e;
    double d = mpz_get_d_2exp(&e, c.get_mpz_t());
    return std::log(std::abs(d)) + e * std::log(2.0);
}

std::complex<double> log_of(const Scaled& s) {
    return std::log(s.m) + std::complex<double>(s.e * std::log(2.0), 0.0);
}

}  // namespace

std::complex<double> log_evaluate(const ExactPolynomial& p, std::complex<double> z) {
    Scaled zs{z, 0};
    zs.normalize();
    Scaled acc{{0.0, 0.0}, 0};
    for (auto it = p.coefficients.rbegin(); it != p.coefficients.rend(); ++it) {
        if (acc.m != 0.0) {
            acc = {acc.m * zs.m, acc.e + zs.e};
            acc.normalize();
        }
        if (*it != 0) acc = add(acc, from_mpz(*it));
    }
    if (acc.m == 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
    const double logpref = log_abs(p.prefactor.get_num()) - log_abs(p.prefactor.get_den());
    std::complex<double> r = log_of(acc) + logpref;
    if (p.prefactor < 0) r += std::complex<double>(0.0, M_PI);
    return r;
}

std::complex<double> evaluate(const ExactPolynomial& p, std::complex<double> z) {
    return std::exp(log_evaluate(p, z));
}

nlohmann::json to_json(const ExactPolynomial& p) {
    nlohmann::json j;
    j["variable"] = to_string(p.variable);
    j["prefactor"] = {{"num", p.prefactor.get_num().get_str()}, {"den", p.prefactor.get_den().get_str()}};
    auto& c = j["coefficients"] = nlohmann::json::array();
    for (const auto& v : p.coefficients) c.push_back(v.get_str());
    j["fixed_params"] = p.fixed_params;
    return j;
}

ExactPolynomial polynomial_from_json(const nlohmann::json& j) {
    ExactPolynomial p;
    try {
        p.variable = variable_from_string(j.at("variable").get<std::string>());
        p.prefactor = mpq_class(mpz_class(j.at("prefactor").at("num").get<std::string>()),
                                mpz_class(j.at("prefactor").at("den").get<std::string>()));
        p.prefactor.canonicalize();
        for (const auto& c : j.at("coefficients")) p.coefficients.emplace_back(c.get<std::string>());
        if (j.contains("fixed_params")) p.fixed_params = j["fixed_params"].get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("polynomial json: ") + e.what());
    } catch (const std::invalid_argument&) {
        throw ValidationError("polynomial json: malformed integer");
    }
    p.trim();
    return p;
}

}  // namespace izeros
