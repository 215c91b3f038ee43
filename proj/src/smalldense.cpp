#include "levylab/smalldense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace levylab {

namespace {

constexpr double kMachEps = std::numeric_limits<double>::epsilon();

void check_dims(int rows, int cols) {
    if (rows < 1 || cols < 1 || rows > kMaxDim || cols > kMaxDim)
        throw std::invalid_argument("matrix dimensions must be in [1, 16]");
}

bool finite(complexd z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_finite(const std::vector<complexd>& data) {
    for (complexd z : data)
        if (!finite(z)) throw std::invalid_argument("matrix entries must be finite");
}

}  // namespace

ComplexMatrix::ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    data_.assign(static_cast<size_t>(rows) * cols, complexd(0.0, 0.0));
}

ComplexMatrix::ComplexMatrix(int rows, int cols, std::initializer_list<complexd> entries)
    : ComplexMatrix(rows, cols, std::vector<complexd>(entries)) {}

ComplexMatrix::ComplexMatrix(int rows, int cols, const std::vector<complexd>& entries)
    : rows_(rows), cols_(cols) {
    check_dims(rows, cols);
    if (entries.size() != static_cast<size_t>(rows) * cols)
        throw std::invalid_argument("entry count does not match dimensions");
    check_finite(entries);
    data_ = entries;
}

ComplexMatrix ComplexMatrix::identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<complexd>& d) {
    ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
    check_finite(d);
    for (size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return m;
}

double ComplexMatrix::max_norm() const {
    double v = 0.0;
    for (complexd z : data_) v = std::max(v, std::abs(z));
    return v;
}

double ComplexMatrix::frobenius_norm() const {
    double v = 0.0;
    for (complexd z : data_) v += std::norm(z);
    return std::sqrt(v);
}

complexd ComplexMatrix::trace() const {
    if (!is_square()) throw std::invalid_argument("trace requires a square matrix");
    complexd t = 0.0;
    for (int i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
    ComplexMatrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            const complexd aik = a(i, k);
            if (aik == complexd(0.0, 0.0)) continue;
            for (int j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("add: dimension mismatch");
    ComplexMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
    return c;
}

ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("subtract: dimension mismatch");
    ComplexMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
    return c;
}

ComplexMatrix scale(const ComplexMatrix& a, complexd s) {
    ComplexMatrix c(a.rows(), a.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(i, j) = s * a(i, j);
    return c;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) c(j, i) = std::conj(a(i, j));
    return c;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument("max_abs_diff: dimension mismatch");
    double v = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) v = std::max(v, std::abs(a(i, j) - b(i, j)));
    return v;
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

namespace {

struct PluFactors {
    ComplexMatrix lu;        // unit L strictly below the diagonal, U on/above
    std::vector<int> perm;   // row i of lu corresponds to row perm[i] of the input
    int sign = 1;
    double min_pivot = 0.0;
    double max_entry = 0.0;
};

PluFactors plu_factor(const ComplexMatrix& m, double zero_pivot_fill = 0.0) {
    const int n = m.rows();
    PluFactors f{m, std::vector<int>(n), 1, std::numeric_limits<double>::infinity(), m.max_norm()};
    std::iota(f.perm.begin(), f.perm.end(), 0);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            const double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
            f.sign = -f.sign;
        }
        if (best == 0.0 && zero_pivot_fill > 0.0) {
            f.lu(k, k) = zero_pivot_fill;
            best = zero_pivot_fill;
        }
        f.min_pivot = std::min(f.min_pivot, best);
        if (best == 0.0) continue;  // column already eliminated; rank-deficient
        for (int i = k + 1; i < n; ++i) {
            const complexd l = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = l;
            if (l == complexd(0.0, 0.0)) continue;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

void plu_solve(const PluFactors& f, std::vector<complexd>& b) {
    const int n = f.lu.rows();
    std::vector<complexd> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    b = std::move(x);
}

}  // namespace

ComplexMatrix lu_invert(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("lu_invert requires a square matrix");
    const int n = m.rows();
    PluFactors f = plu_factor(m);
    const double threshold = 100.0 * kMachEps * f.max_entry;
    if (f.min_pivot <= threshold)
        throw SingularMatrixError("lu_invert: matrix is singular to working precision", f.min_pivot);

    ComplexMatrix inv(n, n);
    std::vector<complexd> col(n);
    for (int j = 0; j < n; ++j) {
        std::fill(col.begin(), col.end(), complexd(0.0, 0.0));
        col[j] = 1.0;
        plu_solve(f, col);
        for (int i = 0; i < n; ++i) inv(i, j) = col[i];
    }

    // Newton refinement X <- X + X(I - MX) knocks the residual of graded or
    // moderately ill-conditioned inputs down to rounding level.
    const ComplexMatrix id = ComplexMatrix::identity(n);
    double resid = max_abs_diff(matmul(m, inv), id);
    for (int it = 0; it < 3 && resid > 4.0 * n * kMachEps; ++it) {
        ComplexMatrix r = subtract(id, matmul(m, inv));
        ComplexMatrix next = add(inv, matmul(inv, r));
        const double next_resid = max_abs_diff(matmul(m, next), id);
        if (next_resid >= resid) break;
        inv = std::move(next);
        resid = next_resid;
    }
    return inv;
}

// ---------------------------------------------------------------------------
// Column-pivoted QR (rank decisions and pencil compression)
// ---------------------------------------------------------------------------

namespace {

struct Qr {
    ComplexMatrix q;             // rows x rows, unitary
    ComplexMatrix r;             // rows x cols, upper triangular
    std::vector<int> col_perm;   // r = q^H * a * P with P stacking col_perm
};

// Householder QR; with `pivot` set, columns are swapped so the diagonal of R
// is non-increasing in magnitude.
Qr qr_factor(const ComplexMatrix& a, bool pivot) {
    const int m = a.rows(), n = a.cols();
    Qr f{ComplexMatrix::identity(m), a, std::vector<int>(n)};
    std::iota(f.col_perm.begin(), f.col_perm.end(), 0);
    std::vector<complexd> v(m);
    for (int k = 0; k < std::min(m, n); ++k) {
        if (pivot) {
            int best = k;
            double best_norm = -1.0;
            for (int j = k; j < n; ++j) {
                double s = 0.0;
                for (int i = k; i < m; ++i) s += std::norm(f.r(i, j));
                if (s > best_norm) { best_norm = s; best = j; }
            }
            if (best != k) {
                for (int i = 0; i < m; ++i) std::swap(f.r(i, k), f.r(i, best));
                std::swap(f.col_perm[k], f.col_perm[best]);
            }
        }
        double colnorm = 0.0;
        for (int i = k; i < m; ++i) colnorm += std::norm(f.r(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;
        const complexd akk = f.r(k, k);
        const complexd phase = (akk == complexd(0.0, 0.0)) ? complexd(1.0, 0.0) : akk / std::abs(akk);
        double vnorm2 = 0.0;
        for (int i = k; i < m; ++i) {
            v[i] = f.r(i, k);
            if (i == k) v[i] += phase * colnorm;
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        // reflect r columns k..n-1 and accumulate q
        for (int j = k; j < n; ++j) {
            complexd dot = 0.0;
            for (int i = k; i < m; ++i) dot += std::conj(v[i]) * f.r(i, j);
            dot *= 2.0 / vnorm2;
            for (int i = k; i < m; ++i) f.r(i, j) -= dot * v[i];
        }
        // accumulate q = q * H (H hermitian): q(:, k..m-1) -= (q v) 2/v'v v^H
        for (int row = 0; row < m; ++row) {
            complexd dot = 0.0;
            for (int i = k; i < m; ++i) dot += f.q(row, i) * v[i];
            dot *= 2.0 / vnorm2;
            for (int i = k; i < m; ++i) f.q(row, i) -= dot * std::conj(v[i]);
        }
        for (int i = k + 1; i < m; ++i) f.r(i, k) = 0.0;
    }
    return f;
}

int qr_rank(const Qr& f, double rel_threshold) {
    const int d = std::min(f.r.rows(), f.r.cols());
    double largest = 0.0;
    for (int i = 0; i < d; ++i) largest = std::max(largest, std::abs(f.r(i, i)));
    if (largest == 0.0) return 0;
    int rank = 0;
    for (int i = 0; i < d; ++i)
        if (std::abs(f.r(i, i)) > rel_threshold * largest) ++rank;
    return rank;
}

constexpr double kRankThreshold = 1e-10;

}  // namespace

DetRank det_rank(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("det_rank requires a square matrix");
    PluFactors f = plu_factor(m);
    complexd det = static_cast<double>(f.sign);
    for (int i = 0; i < m.rows(); ++i) det *= f.lu(i, i);
    const Qr qr = qr_factor(m, /*pivot=*/true);
    return DetRank{det, qr_rank(qr, kRankThreshold)};
}

// ---------------------------------------------------------------------------
// Eigenvalues: Hessenberg reduction + explicit shifted QR
// ---------------------------------------------------------------------------

namespace {

void hessenberg_reduce(ComplexMatrix& h) {
    const int n = h.rows();
    std::vector<complexd> v(n);
    for (int k = 0; k < n - 2; ++k) {
        double colnorm = 0.0;
        for (int i = k + 1; i < n; ++i) colnorm += std::norm(h(i, k));
        colnorm = std::sqrt(colnorm);
        if (colnorm == 0.0) continue;
        const complexd pivot = h(k + 1, k);
        const complexd phase = (pivot == complexd(0.0, 0.0)) ? complexd(1.0, 0.0) : pivot / std::abs(pivot);
        double vnorm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
            if (i == k + 1) v[i] += phase * colnorm;
            vnorm2 += std::norm(v[i]);
        }
        if (vnorm2 == 0.0) continue;
        // H <- P H P with P = I - 2 v v^H / v^H v acting on rows/cols k+1..n-1
        for (int j = 0; j < n; ++j) {
            complexd dot = 0.0;
            for (int i = k + 1; i < n; ++i) dot += std::conj(v[i]) * h(i, j);
            dot *= 2.0 / vnorm2;
            for (int i = k + 1; i < n; ++i) h(i, j) -= dot * v[i];
        }
        for (int i = 0; i < n; ++i) {
            complexd dot = 0.0;
            for (int j = k + 1; j < n; ++j) dot += h(i, j) * v[j];
            dot *= 2.0 / vnorm2;
            for (int j = k + 1; j < n; ++j) h(i, j) -= dot * std::conj(v[j]);
        }
        for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
    }
}

// Both eigenvalues of [[a, b], [c, d]]; the smaller-magnitude root comes from
// the determinant to dodge cancellation.
void eig_2x2(complexd a, complexd b, complexd c, complexd d, complexd& r1, complexd& r2) {
    const complexd t = 0.5 * (a + d);
    const complexd delta = 0.5 * (a - d);
    const complexd s = std::sqrt(delta * delta + b * c);
    const complexd big = (std::abs(t + s) >= std::abs(t - s)) ? t + s : t - s;
    if (big == complexd(0.0, 0.0)) {
        r1 = r2 = complexd(0.0, 0.0);
        return;
    }
    r1 = big;
    r2 = (a * d - b * c) / big;
}

complexd wilkinson_shift(const ComplexMatrix& h, int hi) {
    complexd r1, r2;
    eig_2x2(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi), r1, r2);
    return (std::abs(r1 - h(hi, hi)) < std::abs(r2 - h(hi, hi))) ? r1 : r2;
}

constexpr double kDeflation = 1e-14;

// Shifted QR on the Hessenberg matrix. Returns false when the sweep cap is
// reached; `values` then holds whatever was deflated plus the diagonal of the
// unresolved block.
bool qr_eigenvalues(ComplexMatrix h, std::vector<complexd>& values) {
    const int n = h.rows();
    values.assign(n, complexd(0.0, 0.0));
    const int sweep_cap = 30 * n;
    int sweeps = 0;
    int hi = n - 1;
    int stagnation = 0;
    while (hi >= 0) {
        // deflate negligible subdiagonals
        for (int k = hi; k >= 1; --k) {
            if (std::abs(h(k, k - 1)) <= kDeflation * (std::abs(h(k - 1, k - 1)) + std::abs(h(k, k))))
                h(k, k - 1) = 0.0;
        }
        int lo = hi;
        while (lo > 0 && h(lo, lo - 1) != complexd(0.0, 0.0)) --lo;
        if (lo == hi) {
            values[hi] = h(hi, hi);
            --hi;
            stagnation = 0;
            continue;
        }
        if (lo == hi - 1) {
            eig_2x2(h(lo, lo), h(lo, hi), h(hi, lo), h(hi, hi), values[lo], values[hi]);
            hi -= 2;
            stagnation = 0;
            continue;
        }
        if (sweeps >= sweep_cap) {
            for (int k = 0; k <= hi; ++k) values[k] = h(k, k);
            return false;
        }
        complexd mu;
        if (stagnation > 0 && stagnation % 10 == 0) {
            // exceptional shift to break cycles
            mu = h(hi, hi) + complexd(std::abs(h(hi, hi - 1)) + std::abs(h(hi - 1, hi - 2)), 0.0);
        } else {
            mu = wilkinson_shift(h, hi);
        }
        for (int k = lo; k <= hi; ++k) h(k, k) -= mu;
        // QR factor the shifted block with Givens rotations, then form RQ.
        std::vector<double> cs(hi);
        std::vector<complexd> sn(hi);
        for (int k = lo; k < hi; ++k) {
            const complexd a = h(k, k), b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            double c;
            complexd s;
            if (r == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (a == complexd(0.0, 0.0)) {
                c = 0.0;
                s = std::conj(b) / std::abs(b);
            } else {
                c = std::abs(a) / r;
                s = (a / std::abs(a)) * std::conj(b) / r;
            }
            cs[k] = c;
            sn[k] = s;
            for (int j = k; j <= hi; ++j) {
                const complexd t1 = h(k, j), t2 = h(k + 1, j);
                h(k, j) = c * t1 + s * t2;
                h(k + 1, j) = -std::conj(s) * t1 + c * t2;
            }
        }
        for (int k = lo; k < hi; ++k) {
            const double c = cs[k];
            const complexd s = sn[k];
            const int top = std::min(k + 1, hi);
            for (int i = lo; i <= top; ++i) {
                const complexd t1 = h(i, k), t2 = h(i, k + 1);
                h(i, k) = c * t1 + std::conj(s) * t2;
                h(i, k + 1) = -s * t1 + c * t2;
            }
        }
        for (int k = lo; k <= hi; ++k) h(k, k) += mu;
        ++sweeps;
        ++stagnation;
    }
    return true;
}

// Residual ||Mv - lambda v||_2 / ||M||_F for the eigenvector reached by a few
// steps of inverse iteration.
double certify_eigenvalue(const ComplexMatrix& m, complexd lambda, double norm_f) {
    const int n = m.rows();
    if (norm_f == 0.0) return std::abs(lambda);
    ComplexMatrix shifted = m;
    for (int i = 0; i < n; ++i) shifted(i, i) -= lambda;
    PluFactors f = plu_factor(shifted, /*zero_pivot_fill=*/kMachEps * norm_f);
    // protect against badly tiny (but nonzero) pivots amplifying noise
    double best = std::numeric_limits<double>::infinity();
    for (int attempt = 0; attempt < 2 && best > 1e-12; ++attempt) {
        std::vector<complexd> v(n);
        for (int i = 0; i < n; ++i)
            v[i] = (attempt == 0) ? complexd(1.0, 0.0) : complexd(i == attempt % n ? 1.0 : 0.1, 0.05 * i);
        for (int iter = 0; iter < 3; ++iter) {
            plu_solve(f, v);
            double nv = 0.0;
            for (complexd z : v) nv += std::norm(z);
            nv = std::sqrt(nv);
            if (nv == 0.0 || !std::isfinite(nv)) break;
            for (complexd& z : v) z /= nv;
            double r = 0.0;
            for (int i = 0; i < n; ++i) {
                complexd row = -lambda * v[i];
                for (int j = 0; j < n; ++j) row += m(i, j) * v[j];
                r += std::norm(row);
            }
            best = std::min(best, std::sqrt(r) / norm_f);
            if (best <= 1e-13) break;
        }
    }
    return best;
}

void sort_values(std::vector<complexd>& v) {
    std::sort(v.begin(), v.end(), [](complexd a, complexd b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

EigenResult finish_eigen(const ComplexMatrix& m, std::vector<complexd> values, bool qr_ok) {
    sort_values(values);
    EigenResult out;
    out.values = std::move(values);
    out.residuals.reserve(out.values.size());
    const double norm_f = m.frobenius_norm();
    bool certified = true;
    for (complexd lambda : out.values) {
        const double r = certify_eigenvalue(m, lambda, norm_f);
        out.residuals.push_back(r);
        certified = certified && r <= 1e-10;
    }
    out.converged = qr_ok && certified;
    return out;
}

}  // namespace

EigenResult eigenvalues(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("eigenvalues requires a square matrix");
    const int n = m.rows();
    if (n == 1) {
        EigenResult out;
        out.values = {m(0, 0)};
        out.residuals = {0.0};
        out.converged = true;
        return out;
    }
    ComplexMatrix h = m;
    hessenberg_reduce(h);
    std::vector<complexd> values;
    const bool ok = qr_eigenvalues(std::move(h), values);
    EigenResult out = finish_eigen(m, std::move(values), ok);
    if (!ok)
        throw ConvergenceError("eigenvalues: QR iteration exceeded 30n sweeps", std::move(out));
    return out;
}

EigenResult pencil_finite_eigs(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows())
        throw std::invalid_argument("pencil_finite_eigs requires square matrices of equal dimension");
    const int n = a.rows();

    const Qr bqr = qr_factor(b, /*pivot=*/true);
    const int r = qr_rank(bqr, kRankThreshold);
    if (r == 0) {
        EigenResult out;
        out.converged = true;
        return out;
    }

    // Column-permuted copy of a aligned with b's pivoting.
    ComplexMatrix ap(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) ap(i, j) = a(i, bqr.col_perm[j]);

    const ComplexMatrix qh = adjoint(bqr.q);
    ComplexMatrix a_bar = matmul(qh, ap);
    ComplexMatrix b11(r, r);

    if (r == n) {
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) b11(i, j) = bqr.r(i, j);
    } else {
        // Compress the significant rows of R so b becomes [[B11, 0], [0, 0]].
        ComplexMatrix top_adj(n, r);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < n; ++j) top_adj(j, i) = std::conj(bqr.r(i, j));
        const Qr zqr = qr_factor(top_adj, /*pivot=*/false);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) b11(i, j) = std::conj(zqr.r(j, i));
        a_bar = matmul(a_bar, zqr.q);
    }

    ComplexMatrix reduced(r, r);
    if (r == n) {
        reduced = a_bar;
    } else {
        const int t = n - r;
        ComplexMatrix a11(r, r), a12(r, t), a21(t, r), a22(t, t);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j) a11(i, j) = a_bar(i, j);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < t; ++j) a12(i, j) = a_bar(i, r + j);
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < r; ++j) a21(i, j) = a_bar(r + i, j);
        for (int i = 0; i < t; ++i)
            for (int j = 0; j < t; ++j) a22(i, j) = a_bar(r + i, r + j);
        ComplexMatrix a22_inv(t, t);
        try {
            a22_inv = lu_invert(a22);
        } catch (const SingularMatrixError&) {
            throw NotReducibleError(
                "pencil_finite_eigs: trailing block of a is singular in the reduction basis");
        }
        reduced = subtract(a11, matmul(a12, matmul(a22_inv, a21)));
    }
    return eigenvalues(matmul(lu_invert(b11), reduced));
}

LaurentFit fit_laurent(const std::vector<LaurentSample>& samples) {
    const size_t n = samples.size();
    if (n < 4) throw std::invalid_argument("fit_laurent requires at least 4 samples");
    for (const LaurentSample& s : samples) {
        if (!(s.eps > 0.0) || !std::isfinite(s.eps) || !finite(s.value))
            throw std::invalid_argument("fit_laurent: samples must have finite value and eps > 0");
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j)
            if (samples[i].eps == samples[j].eps)
                throw std::invalid_argument("fit_laurent: eps values must be distinct");

    // Design [1/eps, 1, eps]; equilibrate columns, then solve the 3x3 normal
    // equations with the complex right-hand side.
    double col[3] = {0.0, 0.0, 0.0};
    for (const LaurentSample& s : samples) {
        col[0] += 1.0 / (s.eps * s.eps);
        col[1] += 1.0;
        col[2] += s.eps * s.eps;
    }
    double sc[3];
    for (int j = 0; j < 3; ++j) sc[j] = std::sqrt(col[j]);

    double g[3][3] = {};
    complexd rhs[3] = {};
    for (const LaurentSample& s : samples) {
        const double f[3] = {1.0 / (s.eps * sc[0]), 1.0 / sc[1], s.eps / sc[2]};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) g[i][j] += f[i] * f[j];
            rhs[i] += f[i] * s.value;
        }
    }

    // Gaussian elimination with partial pivoting on the scaled 3x3 system.
    int idx[3] = {0, 1, 2};
    for (int k = 0; k < 3; ++k) {
        int piv = k;
        for (int i = k + 1; i < 3; ++i)
            if (std::abs(g[idx[i]][k]) > std::abs(g[idx[piv]][k])) piv = i;
        std::swap(idx[k], idx[piv]);
        if (std::abs(g[idx[k]][k]) < 1e-10)
            throw std::invalid_argument("fit_laurent: rank-deficient design matrix");
        for (int i = k + 1; i < 3; ++i) {
            const double l = g[idx[i]][k] / g[idx[k]][k];
            for (int j = k; j < 3; ++j) g[idx[i]][j] -= l * g[idx[k]][j];
            rhs[idx[i]] -= l * rhs[idx[k]];
        }
    }
    complexd y[3];
    for (int i = 2; i >= 0; --i) {
        complexd acc = rhs[idx[i]];
        for (int j = i + 1; j < 3; ++j) acc -= g[idx[i]][j] * y[j];
        y[i] = acc / g[idx[i]][i];
    }

    LaurentFit fit;
    fit.c_minus1 = y[0] / sc[0];
    fit.c0 = y[1] / sc[1];
    fit.c1 = y[2] / sc[2];
    double ss = 0.0;
    for (const LaurentSample& s : samples) {
        const complexd model = fit.c_minus1 / s.eps + fit.c0 + fit.c1 * s.eps;
        ss += std::norm(s.value - model);
    }
    fit.rms_residual = std::sqrt(ss / static_cast<double>(n));
    return fit;
}

}  // namespace levylab
