#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "izeros/lattice.hpp"
#include "izeros/spectrum.hpp"

namespace izeros {

enum class CrossingClass { SingletSinglet, SingletDoublet, DoubletDoublet, Higher };
std::string to_string(CrossingClass c);

struct EquimodularPoint {
    cplx u;
    double modulus = 0;
    int multiplicity = 1;
    CrossingClass crossing_class = CrossingClass::Higher;
    std::vector<double> dominant_momenta;  // sorted, distinct
    std::optional<int> sector_filter;      // momentum index restriction
    std::vector<cplx> dominant;            // the equimodular eigenvalues
    std::vector<int> labels;               // their closed-form labels, when available
    std::vector<Sector> sectors;
    double gap = 0;                        // log|lambda_(m+1)| - log|lambda_1|, <= 0
};

enum class Endpoint { Start, Junction, WindowBoundary, Closure, Truncated, StepLimit };
std::string to_string(Endpoint e);

struct EquimodularSegment {
    int id = 0;
    std::vector<EquimodularPoint> points;
    Endpoint start = Endpoint::Start;
    Endpoint end = Endpoint::Truncated;
    std::string flag;
};

struct Window {
    cplx lo, hi;  // lower-left and upper-right corners
    bool contains(cplx u) const {
        return u.real() >= lo.real() && u.real() <= hi.real() && u.imag() >= lo.imag() && u.imag() <= hi.imag();
    }
};

struct EquimodularOptions {
    std::optional<int> momentum_index;
    double count_tol = 1e-9;   // relative modulus gap for multiplicity counting
    double seed_tol = 1e-4;    // relative gap for grid seeds
    bool force_numeric = false;  // never use the closed-form spectrum
    double step = 2e-3;
    int max_steps = 20000;
};

// Spectrum at u, filtered by momentum. Closed form at x = 1 on T_C, numeric otherwise.
std::vector<Eigenvalue> spectrum_at(const LatticeSpec& spec, const mpq_class& x, cplx u, const EquimodularOptions& options);

EquimodularPoint classify(const LatticeSpec& spec, const mpq_class& x, cplx u, const EquimodularOptions& options);

// Grid nodes whose two largest moduli agree to seed_tol, plus refined sign changes of
// log|lambda_1/lambda_2| between identity-tracked eigenvalues along grid edges.
std::vector<EquimodularPoint> grid_scan(const LatticeSpec& spec, const mpq_class& x, const Window& window,
                                        int resolution, const EquimodularOptions& options);

// Predictor-corrector continuation of log|lambda_a| = log|lambda_b| from a seed,
// in the direction whose tangent has positive cross product with `heading`.
EquimodularSegment trace_curve(const EquimodularPoint& seed, const LatticeSpec& spec, const mpq_class& x,
                               const Window& window, const EquimodularOptions& options, cplx heading = {0, 1});

enum class Branch { Ferromagnetic, Antiferromagnetic };

// Samples of the H = 0 circle arc |u -+ 1| = sqrt 2 from the real axis to u = i.
EquimodularSegment circle_branch(int lh, Branch branch, int samples, const EquimodularOptions& options);

// Multiplicities of the maximal stretches with a fixed dominant set, ordered along the segment.
std::vector<int> multiplicity_profile(const EquimodularSegment& segment, const LatticeSpec& spec, const mpq_class& x,
                                      const EquimodularOptions& options);

// Zeros of w_1 lambda_1^n + w_2 lambda_2^n along a path, i.e. where the phase
// n arg(lambda_1/lambda_2) + arg(w_1/w_2) crosses an odd multiple of pi. Use n = lv
// without weights for periodic rows and n = lv - 1 with boundary overlaps for free rows.
// Weights, when given, pair with the two dominant eigenvalues of each point.
// Throws DomainError if a point does not have exactly two equimodular eigenvalues.
std::vector<cplx> two_eigenvalue_zero_density(const EquimodularSegment& segment, int n,
                                              const std::vector<std::array<cplx, 2>>& weights = {});

struct Junction {
    int id = 0;
    cplx u;
    std::vector<int> segments;
};

// Groups segment endpoints that end at junctions within `tol` of each other.
std::vector<Junction> stitch(const std::vector<EquimodularSegment>& segments, double tol);

std::string segments_csv(const std::vector<EquimodularSegment>& segments);
std::string junctions_json(const std::vector<Junction>& junctions);

}  // namespace izeros
