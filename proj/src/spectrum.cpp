#include "izeros/spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <json.hpp>

#include "izeros/errors.hpp"

namespace izeros {

std::string to_string(Sector s) {
    switch (s) {
        case Sector::Plus: return "plus";
        case Sector::Minus: return "minus";
        default: return "none";
    }
}

cplx kaufman_gamma(cplx s, int m, int lh) {
    if (lh < 1) throw ValidationError("kaufman_gamma: lh must be positive");
    if (m < 0 || m > 2 * lh - 1) throw ValidationError("kaufman_gamma: m out of range");
    if (s == 0.0) throw DomainError("kaufman_gamma: s = 0");
    cplx e;
    if (m == 0) {
        e = s + 1.0 / s - 1.0 + (s - 1.0) * std::sqrt(1.0 / (s * s) + 1.0);
    } else {
        const cplx c = s + 1.0 / s - std::cos(M_PI * m / lh);
        e = c + std::sqrt(c - 1.0) * std::sqrt(c + 1.0);
    }
    if (e == 0.0) throw DomainError("kaufman_gamma: branch point");
    return std::log(e);
}

namespace {

struct ModeState {
    cplx value;
    int parity;
    int momentum;  // units of pi / lh
};

void enumerate(const std::vector<std::vector<ModeState>>& modes, std::size_t i, cplx v, int parity, int mom,
               int lh, Sector sector, std::vector<Eigenvalue>& out) {
    if (i == modes.size()) {
        if (parity % 2 != 0) return;
        Eigenvalue e;
        e.value = v;
        const int idx = ((mom % (2 * lh)) + 2 * lh) % (2 * lh);
        e.momentum_index = idx / 2;
        e.momentum = M_PI * idx / lh;
        e.sector = sector;
        e.degeneracy = (idx == 0 || idx == lh) ? 1 : 2;
        e.label = static_cast<int>(out.size());
        out.push_back(e);
        return;
    }
    for (const auto& st : modes[i])
        enumerate(modes, i + 1, v * st.value, parity + st.parity, mom + st.momentum, lh, sector, out);
}

}  // namespace

SpectrumRecord kaufman_spectrum(cplx u, int lh) {
    if (lh < 2 || lh > 22) throw ResourceError("kaufman_spectrum: lh must be in [2, 22]");
    if (u == 0.0) throw DomainError("kaufman_spectrum: u = 0");
    const cplx s = to_s(u);
    SpectrumRecord rec;
    rec.point.u = u;
    rec.lh = lh;
    for (Sector sector : {Sector::Plus, Sector::Minus}) {
        std::vector<std::vector<ModeState>> modes;
        const int first = sector == Sector::Plus ? 1 : 0;
        for (int m = first; m < 2 * lh; m += 2) {
            const int mm = (2 * lh - m) % (2 * lh);
            if (mm < m) continue;
            if (mm == m) {
                // unpaired modes m = 0 and m = lh
                if (m == 0) modes.push_back({{(1.0 - u) / u, 0, 0}, {1.0 + u, 1, 0}});
                else modes.push_back({{(1.0 + u) / u, 0, 0}, {1.0 - u, 1, m}});
            } else {
                // the pair (m, 2lh - m) contributes 2s e^{+-gamma}, or 2s for mixed signs
                const cplx c = s + 1.0 / s - std::cos(M_PI * m / lh);
                const cplx r = std::sqrt(c * c - 1.0);
                modes.push_back({{2.0 * s * (c + r), 0, 0}, {2.0 * s * (c - r), 0, 0}, {2.0 * s, 1, mm}, {2.0 * s, 1, m}});
            }
        }
        enumerate(modes, 0, std::pow(u, lh), 0, 0, lh, sector, rec.eigenvalues);
    }
    return rec;
}

namespace {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

struct RowWeights {
    int L;
    bool periodic;
    std::vector<cplx> upow;
    std::vector<cplx> row;  // horizontal bonds and field for each state

    RowWeights(int L_, bool periodic_, cplx u, double x) : L(L_), periodic(periodic_) {
        upow.resize(2 * L + 2);
        upow[0] = 1;
        for (std::size_t k = 1; k < upow.size(); ++k) upow[k] = upow[k - 1] * u;
        std::vector<double> xpow(L + 1, 1.0);
        for (int k = 1; k <= L; ++k) xpow[k] = xpow[k - 1] * x;
        const unsigned n = 1u << L, mask = n - 1;
        row.resize(n);
        for (unsigned b = 0; b < n; ++b) {
            int h;
            if (periodic) h = std::popcount((b ^ ((b << 1) | (b >> (L - 1)))) & mask);
            else h = std::popcount((b ^ (b >> 1)) & (mask >> 1));
            row[b] = upow[h] * xpow[std::popcount(b)];
        }
    }
    cplx T(unsigned a, unsigned b) const { return upow[std::popcount(a ^ b)] * row[b]; }
};

unsigned rotate(unsigned b, int L) {
    const unsigned mask = (1u << L) - 1;
    return ((b << 1) | (b >> (L - 1))) & mask;
}

struct Orbits {
    std::vector<unsigned> reps;
    std::vector<int> size;
    std::vector<int> rep_index;  // state -> index of its representative
    std::vector<int> shift;      // state = rotate^shift(rep)
};

Orbits orbits(int L) {
    const unsigned n = 1u << L;
    Orbits o;
    o.rep_index.assign(n, -1);
    o.shift.assign(n, 0);
    for (unsigned b = 0; b < n; ++b) {
        if (o.rep_index[b] != -1) continue;
        const int idx = static_cast<int>(o.reps.size());
        unsigned c = b;
        int j = 0;
        do {
            o.rep_index[c] = idx;
            o.shift[c] = j;
            c = rotate(c, L);
            ++j;
        } while (c != b);
        o.reps.push_back(b);
        o.size.push_back(j);
    }
    return o;
}

struct Block {
    CMat H;
    CVec left, right;  // row functional and column vector of the free boundaries
    Sector sector = Sector::None;
    int momentum_index = 0;
};

void solve_block(const Block& b, int L, bool overlaps, bool periodic, SpectrumRecord& rec) {
    if (b.H.rows() == 0) return;
    Eigen::ComplexEigenSolver<CMat> es(b.H, overlaps);
    if (es.info() != Eigen::Success) {
        std::ostringstream os;
        os << "numeric_spectrum: eigensolver failed at u=" << rec.point.u;
        throw NumericError(os.str());
    }
    CVec lw, rw;
    if (overlaps) {
        const CMat& V = es.eigenvectors();
        Eigen::PartialPivLU<CMat> lu(V);
        lw = b.left.transpose() * V;
        rw = lu.solve(b.right);
    }
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        Eigenvalue e;
        e.value = es.eigenvalues()[k];
        e.sector = b.sector;
        if (periodic) {
            e.momentum_index = b.momentum_index;
            e.momentum = 2 * M_PI * b.momentum_index / L;
            e.degeneracy = (2 * b.momentum_index == L || b.momentum_index == 0) ? 1 : 2;
        }
        if (overlaps) e.boundary_overlap = lw[k] * rw[k];
        rec.eigenvalues.push_back(e);
    }
}

}  // namespace

SpectrumRecord numeric_spectrum(const LatticeSpec& spec, const ModelPoint& point, const SpectrumOptions& options) {
    if (spec.model != Model::IsingField) throw ValidationError("numeric_spectrum: Ising model only");
    const int L = spec.lh;
    if (L < 2 || L > 14) throw ResourceError("numeric_spectrum: lh must be in [2, 14] for dense eigensolving");
    const bool periodic = periodic_h(spec.boundary);
    const double x = point.x_value();
    const RowWeights W(L, periodic, point.u, x);
    SpectrumRecord rec;
    rec.point = point;
    rec.lh = L;
    rec.free_rows = !periodic;
    const unsigned n = 1u << L, mask = n - 1;

    if (!periodic) {
        Block b;
        b.H.resize(n, n);
        for (unsigned a = 0; a < n; ++a)
            for (unsigned c = 0; c < n; ++c) b.H(a, c) = W.T(a, c);
        b.left.resize(n);
        for (unsigned a = 0; a < n; ++a) b.left[a] = W.row[a];
        b.right = CVec::Ones(n);
        solve_block(b, L, options.overlaps, false, rec);
        return rec;
    }

    const Orbits O = orbits(L);
    const int R = static_cast<int>(O.reps.size());
    const bool flip = options.split_flip && point.x == 1;
    for (int k = 0; k < L; ++k) {
        if (options.momentum_index && *options.momentum_index != k) continue;
        const cplx w = std::polar(1.0, -2 * M_PI * k / L);
        // basis |r,k> exists when e^{ik|O_r|} = 1
        std::vector<int> basis;
        std::vector<int> pos(R, -1);
        for (int r = 0; r < R; ++r)
            if ((static_cast<long>(k) * O.size[r]) % L == 0) {
                pos[r] = static_cast<int>(basis.size());
                basis.push_back(r);
            }
        const int d = static_cast<int>(basis.size());
        CMat H = CMat::Zero(d, d);
        for (int col = 0; col < d; ++col) {
            const int r = basis[col];
            unsigned c = O.reps[r];
            for (int j = 0; j < O.size[r]; ++j, c = rotate(c, L)) {
                const cplx ph = std::pow(w, j);
                for (int row = 0; row < d; ++row) {
                    const int rp = basis[row];
                    H(row, col) += ph * W.T(O.reps[rp], c);
                }
            }
            for (int row = 0; row < d; ++row)
                H(row, col) *= std::sqrt(static_cast<double>(O.size[basis[row]]) / O.size[r]);
        }
        CVec left = CVec::Zero(d), right = CVec::Zero(d);
        if (k == 0)
            for (int i = 0; i < d; ++i) {
                const double sq = std::sqrt(static_cast<double>(O.size[basis[i]]));
                left[i] = W.row[O.reps[basis[i]]] * sq;
                right[i] = sq;
            }
        if (!flip) {
            solve_block({H, left, right, Sector::None, k}, L, options.overlaps, true, rec);
            continue;
        }
        // spin flip: F|r,k> = e^{ik t}|rbar,k> with r ^ mask = rotate^t(rbar)
        std::vector<std::pair<int, cplx>> F(d);
        for (int i = 0; i < d; ++i) {
            const unsigned f = O.reps[basis[i]] ^ mask;
            const int rb = O.rep_index[f];
            F[i] = {pos[rb], std::pow(std::conj(w), O.shift[f])};
        }
        for (int parity : {+1, -1}) {
            std::vector<CVec> cols;
            std::vector<char> seen(d, 0);
            for (int i = 0; i < d; ++i) {
                if (seen[i]) continue;
                const auto [j, ph] = F[i];
                seen[i] = seen[j] = 1;
                CVec v = CVec::Zero(d);
                if (j == i) {
                    if (std::abs(ph - static_cast<double>(parity)) < 1e-9) v[i] = 1;
                    else continue;
                } else {
                    v[i] = M_SQRT1_2;
                    v[j] = static_cast<double>(parity) * ph * M_SQRT1_2;
                }
                cols.push_back(v);
            }
            CMat B(d, static_cast<Eigen::Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) B.col(static_cast<Eigen::Index>(c)) = cols[c];
            Block b{B.adjoint() * H * B, left.transpose() * B, B.adjoint() * right,
                    parity > 0 ? Sector::Plus : Sector::Minus, k};
            solve_block(b, L, options.overlaps, true, rec);
        }
    }
    return rec;
}

cplx reconstruct_Z(const SpectrumRecord& record, int lv, Construction construction) {
    if (lv < 1) throw ValidationError("reconstruct_Z: lv must be positive");
    const bool free_v = construction == Construction::FC || construction == Construction::FF;
    const bool free_h = construction == Construction::CF || construction == Construction::FF;
    if (free_h != record.free_rows) throw ValidationError("reconstruct_Z: construction does not match the transfer matrix");
    cplx z = 0;
    for (const auto& e : record.eigenvalues) {
        if (free_v) {
            if (!e.boundary_overlap) throw ValidationError("reconstruct_Z: boundary overlaps missing");
            z += *e.boundary_overlap * std::pow(e.value, lv - 1);
        } else {
            z += std::pow(e.value, lv);
        }
    }
    return z;
}

double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    if (a.empty()) return 0;
    double scale = 0;
    for (const auto& v : a) scale = std::max(scale, std::abs(v));
    for (const auto& v : b) scale = std::max(scale, std::abs(v));
    if (scale == 0) return 0;
    auto key = [](const cplx& p, const cplx& q) {
        return std::abs(p) != std::abs(q) ? std::abs(p) > std::abs(q) : std::arg(p) < std::arg(q);
    };
    std::sort(a.begin(), a.end(), key);
    std::vector<char> used(b.size(), 0);
    double worst = 0;
    for (const auto& v : a) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(v - b[j]) < best) {
                best = std::abs(v - b[j]);
                bi = j;
            }
        used[bi] = 1;
        worst = std::max(worst, best);
    }
    return worst / scale;
}

std::vector<cplx> values(const SpectrumRecord& record) {
    std::vector<cplx> v;
    for (const auto& e : record.eigenvalues) v.push_back(e.value);
    return v;
}

std::string spectrum_jsonl(const SpectrumRecord& record) {
    nlohmann::ordered_json j;
    j["u_re"] = record.point.u.real();
    j["u_im"] = record.point.u.imag();
    j["x"] = record.point.x.get_str();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& e : record.eigenvalues) {
        nlohmann::ordered_json ej;
        ej["re"] = e.value.real();
        ej["im"] = e.value.imag();
        ej["P"] = e.momentum;
        ej["sector"] = to_string(e.sector);
        ej["deg"] = e.degeneracy;
        if (e.boundary_overlap) {
            ej["c_re"] = e.boundary_overlap->real();
            ej["c_im"] = e.boundary_overlap->imag();
        }
        arr.push_back(ej);
    }
    j["eigenvalues"] = arr;
    return j.dump() + "\n";
}

}  // namespace izeros
