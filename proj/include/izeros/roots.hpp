#pragma once

#include <complex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "izeros/lattice.hpp"
#include "izeros/polynomial.hpp"

namespace izeros {

struct Zero {
    std::complex<double> location;
    std::string re, im;  // decimal strings carrying the certified digits
    double radius = 0;   // certified inclusion radius; 0 for exactly known roots
    int multiplicity = 1;
};

struct ZeroSet {
    Variable variable = Variable::u;
    std::vector<Zero> zeros;
    std::string source;
    long precision_bits = 0;
    bool certified = true;  // false: some clusters exceeded the target at maximal precision
    std::vector<std::string> flags;

    int total_multiplicity() const;
};

struct RootOptions {
    long max_precision_bits = 1 << 16;
    // Start precision; 0 selects 64 bits above the coefficient bit-length per degree.
    long start_precision_bits = 0;
};

struct GaussianRational {
    mpq_class re, im;
};

ZeroSet find_roots(const ExactPolynomial& p, double target_radius, const RootOptions& options = {});

// Exact division by (v - root)^multiplicity; a complex root removes its conjugate pair
// (degree drops by 2 per multiplicity). Throws NotARootError on a nonzero remainder.
ExactPolynomial deflate(const ExactPolynomial& p, const mpq_class& root, int multiplicity);
ExactPolynomial deflate(const ExactPolynomial& p, const GaussianRational& root, int multiplicity);

// Largest k with (v - root)^k dividing p.
int exact_multiplicity(const ExactPolynomial& p, const mpq_class& root);

// Image of a zero set under u -> s, u -> y = rescale(u, x), or y -> z = y^2.
// Radii are propagated to first order with a factor-2 safety margin.
ZeroSet map_zeros(const ZeroSet& zs, Variable target, Convention convention = Convention::BrascampKunz,
                  double x = 1.0);

std::string zeros_csv(const ZeroSet& zs);

}  // namespace izeros
