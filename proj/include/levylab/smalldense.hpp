#pragma once

#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace levylab {

using complexd = std::complex<double>;

/// Hard cap on matrix dimensions; everything in this toolkit is 4x4 or a
/// reduction of something 4x4.
inline constexpr int kMaxDim = 16;

/// Dense row-major complex matrix. Construction rejects non-finite entries
/// and dimensions outside [1, kMaxDim].
class ComplexMatrix {
public:
    ComplexMatrix(int rows, int cols);
    ComplexMatrix(int rows, int cols, std::initializer_list<complexd> entries);
    ComplexMatrix(int rows, int cols, const std::vector<complexd>& entries);

    static ComplexMatrix identity(int n);
    static ComplexMatrix diagonal(const std::vector<complexd>& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    complexd& operator()(int r, int c) { return data_[static_cast<size_t>(r) * cols_ + c]; }
    const complexd& operator()(int r, int c) const { return data_[static_cast<size_t>(r) * cols_ + c]; }

    double max_norm() const;        // max |entry|
    double frobenius_norm() const;
    complexd trace() const;

private:
    int rows_;
    int cols_;
    std::vector<complexd> data_;
};

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix add(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix subtract(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix scale(const ComplexMatrix& a, complexd s);
ComplexMatrix adjoint(const ComplexMatrix& a);

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) { return matmul(a, b); }
inline ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) { return add(a, b); }
inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) { return subtract(a, b); }
inline ComplexMatrix operator*(complexd s, const ComplexMatrix& a) { return scale(a, s); }
inline ComplexMatrix operator*(const ComplexMatrix& a, complexd s) { return scale(a, s); }

/// Largest |a(i,j) - b(i,j)|; dimensions must match.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Raised when a factorization meets a pivot too small to proceed.
class SingularMatrixError : public std::runtime_error {
public:
    SingularMatrixError(const std::string& what, double pivot)
        : std::runtime_error(what), pivot_magnitude(pivot) {}
    double pivot_magnitude;
};

/// Raised by pencil_finite_eigs when the trailing block of the transformed
/// pencil is not invertible (a genuinely degenerate pencil).
class NotReducibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EigenResult {
    std::vector<complexd> values;    // sorted by (re, im) ascending
    std::vector<double> residuals;   // ||Mv - lambda v||_2 / ||M||_F per value
    bool converged = false;
};

/// Raised when the QR iteration exceeds its sweep cap; carries whatever
/// eigenvalues had deflated by then.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, EigenResult partial_result)
        : std::runtime_error(what), partial(std::move(partial_result)) {}
    EigenResult partial;
};

/// Inverse via partially pivoted LU with iterative refinement.
ComplexMatrix lu_invert(const ComplexMatrix& m);

struct DetRank {
    complexd det;
    int rank;
};

/// Determinant from the pivot product (sign-tracked partial pivoting) and
/// rank from column-pivoted QR with threshold 1e-10 x largest pivot.
DetRank det_rank(const ComplexMatrix& m);

/// All eigenvalues of a general complex matrix: Hessenberg reduction plus
/// shifted QR with deflation, each value certified by an inverse-iteration
/// residual.
EigenResult eigenvalues(const ComplexMatrix& m);

/// Finite eigenvalues of the pencil (a - lambda b) with b possibly singular.
/// b is compressed to [[B11, 0], [0, 0]] by two unitary factorizations; the
/// lambda-free rows then eliminate the trailing unknowns (the trailing block
/// of a must be invertible) and the reduced r x r problem is solved densely.
/// Returns rank(b) values.
EigenResult pencil_finite_eigs(const ComplexMatrix& a, const ComplexMatrix& b);

struct LaurentSample {
    double eps;
    complexd value;
};

struct LaurentFit {
    complexd c_minus1;
    complexd c0;
    complexd c1;
    double rms_residual = 0.0;
};

/// Least-squares fit of value(eps) ~ c_minus1/eps + c0 + c1*eps via
/// column-equilibrated normal equations. Requires >= 4 samples with
/// distinct positive eps.
LaurentFit fit_laurent(const std::vector<LaurentSample>& samples);

}  // namespace levylab
