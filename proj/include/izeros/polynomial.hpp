#pragma once

#include <complex>
#include <map>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <nlohmann/json.hpp>

namespace izeros {

enum class Variable { u, s, x, y, z };

std::string to_string(Variable v);
Variable variable_from_string(const std::string& name);

// Dense integer polynomial times an exact rational prefactor.
struct ExactPolynomial {
    Variable variable = Variable::u;
    std::vector<mpz_class> coefficients;  // ascending powers
    mpq_class prefactor = 1;
    std::map<std::string, std::string> fixed_params;

    int degree() const { return static_cast<int>(coefficients.size()) - 1; }
    // Drops trailing zero coefficients; the zero polynomial keeps one entry.
    void trim();
    // Lowest power with nonzero coefficient.
    int valuation() const;
    // Largest g with coefficients nonzero only at multiples of g.
    int stride() const;
    bool operator==(const ExactPolynomial& other) const { return coefficients == other.coefficients; }
};

ExactPolynomial multiply(const ExactPolynomial& a, const ExactPolynomial& b);

// log p(z), including the prefactor. Works for coefficients far outside double range.
std::complex<double> log_evaluate(const ExactPolynomial& p, std::complex<double> z);
std::complex<double> evaluate(const ExactPolynomial& p, std::complex<double> z);

nlohmann::json to_json(const ExactPolynomial& p);
ExactPolynomial polynomial_from_json(const nlohmann::json& j);

}  // namespace izeros
