#pragma once

#include <optional>
#include <string>
#include <vector>

#include "izeros/lattice.hpp"
#include "izeros/roots.hpp"

namespace izeros {

enum class Estimator { LeeYangNN, ScaleDependent, InnerLoopNN };
enum class DensityVariable { theta_x, alpha_s, arclength_y };
std::string to_string(Estimator e);
std::string to_string(DensityVariable v);

struct DensitySample {
    double abscissa = 0;
    double value = 0;  // +inf marks coincident zeros
};

struct DensityWindow {
    double c = 1;
    double p = 0;
    int a = 1;
    int N = 0;
};

// Log-log fit of the endpoint divergence D ~ |y - y_e|^(-sigma), done on the index
// scale D_j ~ j^(-sigma/(1-sigma)) so the unknown endpoint position drops out.
struct EndpointFit {
    double sigma = 0;
    double ci_low = 0;  // 95% Student-t interval
    double ci_high = 0;
    int first = 0;      // first sample used
    int count = 0;
};

struct DensitySeries {
    Estimator estimator = Estimator::LeeYangNN;
    DensityVariable variable = DensityVariable::theta_x;
    DensityWindow window;
    std::vector<DensitySample> samples;  // ordered by abscissa
    // Sum of value * spacing for angular estimators, normalised to 1.
    double normalization = 0;
    double normalization_error = 0;
    std::optional<double> theta_ly;
    std::optional<EndpointFit> endpoint_fit;
    std::vector<std::string> flags;
};

// Nearest-neighbour density 2pi/(N dtheta) at phase midpoints of x-zeros on |x| = 1,
// so that (2pi)^-1 Int D dtheta = 1. Zeros are counted with multiplicity.
DensitySeries lee_yang_density(const ZeroSet& zeros, double circle_tol = 1e-8);

// Sorted phases in (-pi, pi], each zero repeated by its multiplicity.
std::vector<double> sorted_phases(const ZeroSet& zeros);
// max_n |theta_n + theta_(N+1-n)|
double phase_symmetry_defect(const std::vector<double>& phases);

// Closed-form D(pi), D(0) for 0 <= u < 1. D(0) needs the regime and is 0 above T_c.
double reference_D_pi(double u);
double reference_D_0(double u, Regime regime);
Regime regime_of(double u);

// g = a/(N(alpha_(j+a) - alpha_j)) with a = [c N^p]; s-zeros must lie on |s| = 1.
DensitySeries scale_dependent_density(const ZeroSet& zeros, double c, double p, double circle_tol = 1e-8);
// Largest |ln(g_(j+1)/g_j)| along the window index j.
double roughness(const DensitySeries& series);
// Largest adjacent ratio max(g_(j+1)/g_j, g_j/g_(j+1)).
double max_adjacent_ratio(const DensitySeries& series);

// Complete elliptic integral of the first kind through the AGM; k' = sqrt(1-k^2) is
// taken as the argument so the logarithmic peak at k -> 1 keeps full precision.
double elliptic_k_complement(double kp);
double elliptic_k(double k);
// g(alpha) = |sin alpha| K(|sin alpha|)/pi^2, +inf at |sin alpha| = 1.
double lu_wu_density(double alpha);
// Int_0^2pi g(alpha) d alpha by quadrature (should be 1).
double lu_wu_normalization();

struct InnerLoopOptions {
    double x = 1;          // field fugacity the zeros belong to; x > 0.95 raises a flag
    bool fit = true;
    int fit_points = 0;    // 0: max(8, N/20)
    int fit_skip = 2;      // edge samples excluded next to the endpoint
    double line_tol = 1e-8;
};

// Ising y-zeros: the inner loop is |y| < y_cut, y_cut the widest log-gap in |y| among the
// middle half of the sorted radii; the upper half of the loop is walked by arg y starting
// at the right endpoint. Hard-square z-zeros: the loop is the negative real line, walked
// from its right end. u and -u share a y image; such duplicates are counted once.
// Samples are D_j = 1/(N |y_(j+1) - y_j|) against j + 1/2.
DensitySeries inner_loop_density(const ZeroSet& zeros, const InnerLoopOptions& options = {});
// The inner-loop zeros in walk order (upper half for loops).
std::vector<cplx> inner_loop_zeros(const ZeroSet& zeros, const InnerLoopOptions& options, int* total = nullptr);
EndpointFit fit_endpoint_exponent(const DensitySeries& series, int count, int skip);

// -F/kT = 1/2 ln(4s) + (1/8pi^2) Int Int ln(s + 1/s - cos t1 - cos t2).
double onsager_free_energy(double s);
// -F/kT = ln 2 + Re Int_0^2pi g(alpha) ln(s - e^{i alpha}) d alpha.
double lu_wu_free_energy(double s);
// (1/N) ln Z for a finite Ising lattice at zero field with couplings K, s = sinh 2K.
double finite_free_energy(const LatticeSpec& spec, double s);

// Zero-field Brascamp-Kunz s-zeros from the closed form, exact double-precision grid.
ZeroSet bk_closed_form_s_zeros(int lv, int lh);

// "abscissa,value,a,N,estimator"
std::string density_csv(const DensitySeries& series);
// "abscissa,value" for g(alpha) on a caller grid; the divergence prints as inf.
std::string lu_wu_reference_csv(const std::vector<double>& grid);

}  // namespace izeros
