#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "izeros/lattice.hpp"

namespace izeros {

enum class Sector { Plus, Minus, None };
std::string to_string(Sector s);

struct Eigenvalue {
    cplx value;
    int momentum_index = 0;  // P = 2 pi momentum_index / lh
    double momentum = 0;
    Sector sector = Sector::None;
    int degeneracy = 1;  // 2 when paired with -P
    std::optional<cplx> boundary_overlap;
    int label = -1;  // stable mode-occupation index for closed-form spectra
};

// Eigenvalues are normalized like the low-temperature partition function:
// Tr T^lv equals the exact polynomial at the same point.
struct SpectrumRecord {
    ModelPoint point;
    int lh = 0;
    bool free_rows = false;  // T_F rather than T_C
    std::vector<Eigenvalue> eigenvalues;
};

// gamma_m with e^{+-gamma_m} = s + 1/s - cos(pi m / lh). The principal square
// root is used, which is the positive branch for real s > 1.
cplx kaufman_gamma(cplx s, int m, int lh);

// Closed-form spectrum of T_C at x = 1 for s = (1/u - u)/2.
SpectrumRecord kaufman_spectrum(cplx u, int lh);

struct SpectrumOptions {
    std::optional<int> momentum_index;  // restrict to one block (T_C only)
    bool overlaps = false;              // fill boundary_overlap
    bool split_flip = true;             // Plus/Minus labels at x = 1
};

// Dense spectra: T_C block-diagonalized by translations, T_F in full.
SpectrumRecord numeric_spectrum(const LatticeSpec& spec, const ModelPoint& point, const SpectrumOptions& options = {});

enum class Construction { CC, CF, FC, FF };

// Z from a spectrum: sum lambda^lv for periodic rows, sum c_k lambda^(lv-1) for free rows.
cplx reconstruct_Z(const SpectrumRecord& record, int lv, Construction construction);

// max over a of min |a - b| over the other multiset (one-to-one), relative to max |a|.
double multiset_distance(std::vector<cplx> a, std::vector<cplx> b);

std::vector<cplx> values(const SpectrumRecord& record);

// One JSON line {u_re, u_im, x, eigenvalues: [{re, im, P, sector, deg}]}.
std::string spectrum_jsonl(const SpectrumRecord& record);

}  // namespace izeros
