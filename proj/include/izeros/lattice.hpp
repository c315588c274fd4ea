#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace izeros {

using cplx = std::complex<double>;

enum class Boundary { Toroidal, Cylindrical, FreeFree, BrascampKunz };
enum class Model { IsingField, HardSquares };
enum class Convention { BrascampKunz, Torus };

struct LatticeSpec {
    int lv = 1;
    int lh = 2;
    Boundary boundary = Boundary::Toroidal;
    Model model = Model::IsingField;
};

// Periodic horizontal direction (columns wrap).
bool periodic_h(Boundary b);
// Periodic vertical direction (rows wrap).
bool periodic_v(Boundary b);

// Throws ValidationError on inconsistent specs.
void validate(const LatticeSpec& spec);
// Same checks without the transfer-matrix size cap; for routes that never build T.
void validate_shape(const LatticeSpec& spec);

std::size_t site_count(const LatticeSpec& spec);
// Bonds carrying a u weight, including bonds to fixed Brascamp-Kunz rows.
std::size_t bond_count(const LatticeSpec& spec);

std::string to_string(Boundary b);
std::string to_string(Model m);
std::string describe(const LatticeSpec& spec);

inline const double kSqrt2 = 1.4142135623730950488;
inline const double kUcFerro = kSqrt2 - 1.0;
inline const double kUcAntiferro = kSqrt2 + 1.0;

cplx to_s(cplx u);
cplx rescale(cplx u, double x, Convention convention);

// Parses "p/q", "p" or a decimal such as "0.94" into an exact rational.
mpq_class parse_rational(const std::string& text);

struct ModelPoint {
    cplx u;
    mpq_class x = 1;

    double x_value() const { return x.get_d(); }
    cplx s() const { return to_s(u); }
    cplx y(Convention c) const { return rescale(u, x_value(), c); }
    cplx z(Convention c) const { auto v = y(c); return v * v; }
};

enum class Regime { AboveTc, BelowTc };

struct NickelSingularity {
    int j = 1;
    int m = 0;
    int n = 0;
    cplx s_value;
    Regime regime = Regime::AboveTc;
    std::string exponent_descriptor;
};

std::vector<NickelSingularity> nickel_singularities(int j);

}  // namespace izeros
