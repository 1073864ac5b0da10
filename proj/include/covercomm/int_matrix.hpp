#pragma once

#include "covercomm/numeric.hpp"

#include <string>
#include <vector>

namespace covercomm {

using IntVector = std::vector<Integer>;
using RatVector = std::vector<Rational>;

/// Dense row-major matrix over Integer or Rational.
template <class T>
class Mat {
public:
    Mat() = default;
    Mat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, T(0)) {}
    Mat(int rows, int cols, std::vector<T> entries) : rows_(rows), cols_(cols), a_(std::move(entries)) {}

    static Mat identity(int n)
    {
        Mat m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1;
        return m;
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    T& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const T& operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    const std::vector<T>& entries() const noexcept { return a_; }

    std::vector<T> row(int i) const { return {a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_}; }
    std::vector<T> column(int j) const
    {
        std::vector<T> c(rows_);
        for (int i = 0; i < rows_; ++i)
            c[i] = (*this)(i, j);
        return c;
    }
    void set_column(int j, const std::vector<T>& c)
    {
        for (int i = 0; i < rows_; ++i)
            (*this)(i, j) = c[i];
    }

    Mat transpose() const
    {
        Mat t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                t(j, i) = (*this)(i, j);
        return t;
    }

    std::vector<T> apply(const std::vector<T>& v) const
    {
        std::vector<T> out(rows_, T(0));
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j)
                out[i] += (*this)(i, j) * v[j];
        return out;
    }

    friend Mat operator*(const Mat& x, const Mat& y)
    {
        Mat out(x.rows_, y.cols_);
        for (int i = 0; i < x.rows_; ++i)
            for (int k = 0; k < x.cols_; ++k) {
                if (x(i, k) == 0)
                    continue;
                for (int j = 0; j < y.cols_; ++j)
                    out(i, j) += x(i, k) * y(k, j);
            }
        return out;
    }
    friend Mat operator+(Mat x, const Mat& y)
    {
        for (std::size_t i = 0; i < x.a_.size(); ++i)
            x.a_[i] += y.a_[i];
        return x;
    }
    friend Mat operator-(Mat x, const Mat& y)
    {
        for (std::size_t i = 0; i < x.a_.size(); ++i)
            x.a_[i] -= y.a_[i];
        return x;
    }
    friend Mat operator*(const T& s, Mat x)
    {
        for (T& e : x.a_)
            e *= s;
        return x;
    }
    bool operator==(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }
    bool operator!=(const Mat& o) const { return !(*this == o); }
    bool operator<(const Mat& o) const { return a_ < o.a_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<T> a_;
};

using IntMatrix = Mat<Integer>;
using RatMatrix = Mat<Rational>;

IntMatrix int_matrix(int rows, int cols, std::initializer_list<long> entries);
Integer determinant(const IntMatrix& m);
Rational determinant(const RatMatrix& m);
RatMatrix to_rational(const IntMatrix& m);
/// Throws PreconditionError when an entry is not an integer.
IntMatrix to_integer(const RatMatrix& m);
bool is_integral(const RatMatrix& m);
/// Throws PreconditionError for a singular matrix.
RatMatrix inverse(const RatMatrix& m);
IntMatrix power(const IntMatrix& m, long e);
Integer trace(const IntMatrix& m);

/// "[[0,-1],[1,0]]".
std::string matrix_text(const IntMatrix& m);
std::string matrix_text(const RatMatrix& m);
std::string vector_text(const IntVector& v);
std::string vector_text(const RatVector& v);

/// Row Hermite normal form of the lattice spanned by the rows: nonzero rows
/// only, positive pivots, entries above a pivot reduced into [0, pivot).
IntMatrix hermite_rows(const IntMatrix& a);
/// Membership of v in the row lattice of a matrix already in hermite_rows form.
bool in_row_lattice(const IntMatrix& hnf, IntVector v);

/// U A V = S with U, V unimodular and S diagonal, s_i | s_{i+1}.
struct SmithForm {
    IntMatrix u, s, v;
    int rank = 0;
};
SmithForm smith_form(const IntMatrix& a);

/// Basis of {x in Z^n : A x = 0} as the columns of the returned matrix.
IntMatrix integer_kernel(const IntMatrix& a);

/// Full-rank lattice (1/D) B Z^d in Q^d, with B's rows in Hermite form and
/// D as small as possible.
class Lattice {
public:
    static Lattice from_generators(int dim, const std::vector<RatVector>& generators);
    static Lattice standard(int dim);

    int dim() const noexcept { return basis_.cols(); }
    const Integer& denominator() const noexcept { return den_; }
    const IntMatrix& integer_basis() const noexcept { return basis_; }
    std::vector<RatVector> basis() const;

    bool contains(const RatVector& v) const;
    bool contains(const Lattice& other) const;
    /// |det| of a basis.
    Rational covolume() const;
    /// [this : sub]; throws PreconditionError unless sub is contained.
    Integer index_of(const Lattice& sub) const;

    bool operator==(const Lattice& o) const { return den_ == o.den_ && basis_ == o.basis_; }

private:
    Integer den_ = 1;
    IntMatrix basis_;
};

/// Z^r + Z/t_1 + ... + Z/t_k written in coordinates; torsion coordinates are
/// kept reduced into [0, t_i).
struct FGAbelian {
    int free_rank = 0;
    IntVector torsion;

    int size() const { return free_rank + static_cast<int>(torsion.size()); }
    IntVector reduce(IntVector v) const;
    /// Reduces every column (the image of each basis vector).
    IntMatrix reduce(IntMatrix m) const;
    bool is_zero(const IntVector& v) const;
    /// The matrix maps relations to relations (descends to M).
    bool is_endomorphism(const IntMatrix& m) const;
    /// Relation vectors t_i e_{r+i}.
    std::vector<IntVector> relations() const;
};

/// Subgroup of an FGAbelian spanned by given vectors.
class Subgroup {
public:
    Subgroup(FGAbelian m, std::vector<IntVector> generators);

    const FGAbelian& ambient() const noexcept { return m_; }
    const std::vector<IntVector>& generators() const noexcept { return gens_; }
    bool contains(const IntVector& v) const;

private:
    FGAbelian m_;
    std::vector<IntVector> gens_;
    IntMatrix hnf_;
};

} // namespace covercomm
