#include "covercomm/int_matrix.hpp"

#include "covercomm/error.hpp"

#include <algorithm>
#include <utility>

namespace covercomm {

namespace {

Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Integer mod(const Integer& a, const Integer& b)
{
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

template <class T>
std::string entry_text(const T& x)
{
    return to_string(x);
}

template <class T>
std::string text(const Mat<T>& m)
{
    std::string out = "[";
    for (int i = 0; i < m.rows(); ++i) {
        out += i ? ",[" : "[";
        for (int j = 0; j < m.cols(); ++j)
            out += (j ? "," : "") + entry_text(m(i, j));
        out += "]";
    }
    return out + "]";
}

template <class T>
std::string vtext(const std::vector<T>& v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + entry_text(v[i]);
    return out + ")";
}

} // namespace

IntMatrix int_matrix(int rows, int cols, std::initializer_list<long> entries)
{
    if (static_cast<int>(entries.size()) != rows * cols)
        throw PreconditionError("wrong number of matrix entries");
    std::vector<Integer> a;
    for (long x : entries)
        a.emplace_back(x);
    return IntMatrix(rows, cols, std::move(a));
}

Rational determinant(const RatMatrix& m)
{
    if (m.rows() != m.cols())
        throw PreconditionError("determinant of a non-square matrix");
    RatMatrix a = m;
    const int n = a.rows();
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            return 0;
        if (p != c) {
            for (int j = 0; j < n; ++j)
                std::swap(a(p, j), a(c, j));
            det = -det;
        }
        det *= a(c, c);
        for (int i = c + 1; i < n; ++i) {
            if (a(i, c) == 0)
                continue;
            const Rational f = a(i, c) / a(c, c);
            for (int j = c; j < n; ++j)
                a(i, j) -= f * a(c, j);
        }
    }
    return det;
}

Integer determinant(const IntMatrix& m)
{
    return determinant(to_rational(m)).get_num();
}

RatMatrix to_rational(const IntMatrix& m)
{
    std::vector<Rational> a;
    for (const Integer& x : m.entries())
        a.emplace_back(x);
    return RatMatrix(m.rows(), m.cols(), std::move(a));
}

bool is_integral(const RatMatrix& m)
{
    return std::all_of(m.entries().begin(), m.entries().end(), [](const Rational& q) { return q.get_den() == 1; });
}

IntMatrix to_integer(const RatMatrix& m)
{
    if (!is_integral(m))
        throw PreconditionError("matrix " + matrix_text(m) + " is not integral");
    std::vector<Integer> a;
    for (const Rational& q : m.entries())
        a.push_back(q.get_num());
    return IntMatrix(m.rows(), m.cols(), std::move(a));
}

RatMatrix inverse(const RatMatrix& m)
{
    const int n = m.rows();
    if (n != m.cols())
        throw PreconditionError("inverse of a non-square matrix");
    RatMatrix a = m, inv = RatMatrix::identity(n);
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a(p, c) == 0)
            ++p;
        if (p == n)
            throw PreconditionError("matrix " + matrix_text(m) + " is singular");
        for (int j = 0; j < n; ++j) {
            std::swap(a(p, j), a(c, j));
            std::swap(inv(p, j), inv(c, j));
        }
        const Rational piv = a(c, c);
        for (int j = 0; j < n; ++j) {
            a(c, j) /= piv;
            inv(c, j) /= piv;
        }
        for (int i = 0; i < n; ++i) {
            if (i == c || a(i, c) == 0)
                continue;
            const Rational f = a(i, c);
            for (int j = 0; j < n; ++j) {
                a(i, j) -= f * a(c, j);
                inv(i, j) -= f * inv(c, j);
            }
        }
    }
    return inv;
}

IntMatrix power(const IntMatrix& m, long e)
{
    if (e < 0)
        throw PreconditionError("negative matrix power");
    IntMatrix result = IntMatrix::identity(m.rows()), base = m;
    for (; e > 0; e >>= 1) {
        if (e & 1)
            result = result * base;
        base = base * base;
    }
    return result;
}

Integer trace(const IntMatrix& m)
{
    Integer t = 0;
    for (int i = 0; i < std::min(m.rows(), m.cols()); ++i)
        t += m(i, i);
    return t;
}

std::string matrix_text(const IntMatrix& m) { return text(m); }
std::string matrix_text(const RatMatrix& m) { return text(m); }
std::string vector_text(const IntVector& v) { return vtext(v); }
std::string vector_text(const RatVector& v) { return vtext(v); }

// ---------------------------------------------------------------------------

IntMatrix hermite_rows(const IntMatrix& a)
{
    std::vector<IntVector> rows;
    for (int i = 0; i < a.rows(); ++i)
        rows.push_back(a.row(i));
    const int m = a.rows(), n = a.cols();
    int r = 0;
    auto sub = [](IntVector& x, const Integer& q, const IntVector& y) {
        for (std::size_t k = 0; k < x.size(); ++k)
            x[k] -= q * y[k];
    };
    for (int j = 0; j < n && r < m; ++j) {
        for (;;) {
            int best = -1;
            for (int k = r; k < m; ++k)
                if (rows[k][j] != 0 && (best < 0 || abs(rows[k][j]) < abs(rows[best][j])))
                    best = k;
            if (best < 0)
                break;
            std::swap(rows[r], rows[best]);
            bool clear = true;
            for (int k = r + 1; k < m; ++k) {
                if (rows[k][j] == 0)
                    continue;
                sub(rows[k], floor_div(rows[k][j], rows[r][j]), rows[r]);
                clear = clear && rows[k][j] == 0;
            }
            if (clear)
                break;
        }
        if (rows[r][j] == 0)
            continue;
        if (rows[r][j] < 0)
            for (Integer& x : rows[r])
                x = -x;
        for (int k = 0; k < r; ++k)
            sub(rows[k], floor_div(rows[k][j], rows[r][j]), rows[r]);
        ++r;
    }
    IntMatrix h(r, n);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < n; ++j)
            h(i, j) = rows[i][j];
    return h;
}

bool in_row_lattice(const IntMatrix& hnf, IntVector v)
{
    int col = 0;
    for (int i = 0; i < hnf.rows(); ++i) {
        int p = col;
        while (hnf(i, p) == 0)
            ++p;
        for (; col < p; ++col)
            if (v[col] != 0)
                return false;
        if (mod(v[p], hnf(i, p)) != 0)
            return false;
        const Integer q = v[p] / hnf(i, p);
        for (int j = p; j < hnf.cols(); ++j)
            v[j] -= q * hnf(i, j);
        col = p + 1;
    }
    for (; col < static_cast<int>(v.size()); ++col)
        if (v[col] != 0)
            return false;
    return true;
}

SmithForm smith_form(const IntMatrix& a)
{
    const int m = a.rows(), n = a.cols();
    SmithForm f{IntMatrix::identity(m), a, IntMatrix::identity(n), 0};
    IntMatrix& s = f.s;
    auto swap_rows = [&](int i, int k) {
        for (int j = 0; j < n; ++j)
            std::swap(s(i, j), s(k, j));
        for (int j = 0; j < m; ++j)
            std::swap(f.u(i, j), f.u(k, j));
    };
    auto swap_cols = [&](int j, int k) {
        for (int i = 0; i < m; ++i)
            std::swap(s(i, j), s(i, k));
        for (int i = 0; i < n; ++i)
            std::swap(f.v(i, j), f.v(i, k));
    };
    // row_i -= q row_k
    auto row_op = [&](int i, int k, const Integer& q) {
        for (int j = 0; j < n; ++j)
            s(i, j) -= q * s(k, j);
        for (int j = 0; j < m; ++j)
            f.u(i, j) -= q * f.u(k, j);
    };
    // col_j -= q col_k
    auto col_op = [&](int j, int k, const Integer& q) {
        for (int i = 0; i < m; ++i)
            s(i, j) -= q * s(i, k);
        for (int i = 0; i < n; ++i)
            f.v(i, j) -= q * f.v(i, k);
    };

    int t = 0;
    for (; t < std::min(m, n); ++t) {
        int bi = -1, bj = -1;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j)
                if (s(i, j) != 0 && (bi < 0 || abs(s(i, j)) < abs(s(bi, bj)))) {
                    bi = i;
                    bj = j;
                }
        if (bi < 0)
            break;
        swap_rows(t, bi);
        swap_cols(t, bj);
        for (;;) {
            bool dirty = false;
            for (int i = t + 1; i < m; ++i)
                if (s(i, t) != 0) {
                    row_op(i, t, s(i, t) / s(t, t));
                    dirty = dirty || s(i, t) != 0;
                }
            for (int j = t + 1; j < n; ++j)
                if (s(t, j) != 0) {
                    col_op(j, t, s(t, j) / s(t, t));
                    dirty = dirty || s(t, j) != 0;
                }
            if (dirty) {
                // Bring the smallest remainder in row/column t to the pivot.
                int pi = t, pj = t;
                for (int i = t + 1; i < m; ++i)
                    if (s(i, t) != 0 && abs(s(i, t)) < abs(s(pi, pj))) {
                        pi = i;
                        pj = t;
                    }
                for (int j = t + 1; j < n; ++j)
                    if (s(t, j) != 0 && abs(s(t, j)) < abs(s(pi, pj))) {
                        pi = t;
                        pj = j;
                    }
                swap_rows(t, pi);
                swap_cols(t, pj);
                continue;
            }
            int bad = -1;
            for (int i = t + 1; i < m && bad < 0; ++i)
                for (int j = t + 1; j < n; ++j)
                    if (mod(s(i, j), s(t, t)) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0)
                break;
            row_op(t, bad, -1);
        }
        if (s(t, t) < 0) {
            for (int j = 0; j < n; ++j)
                s(t, j) = -s(t, j);
            for (int j = 0; j < m; ++j)
                f.u(t, j) = -f.u(t, j);
        }
    }
    f.rank = t;
    return f;
}

IntMatrix integer_kernel(const IntMatrix& a)
{
    const SmithForm f = smith_form(a);
    const int n = a.cols();
    IntMatrix k(n, n - f.rank);
    for (int j = f.rank; j < n; ++j)
        k.set_column(j - f.rank, f.v.column(j));
    return k;
}

// ---------------------------------------------------------------------------

Lattice Lattice::from_generators(int dim, const std::vector<RatVector>& generators)
{
    Integer den = 1;
    for (const RatVector& g : generators) {
        if (static_cast<int>(g.size()) != dim)
            throw PreconditionError("lattice generator of the wrong dimension");
        for (const Rational& q : g)
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q.get_den_mpz_t());
    }
    IntMatrix rows(static_cast<int>(generators.size()), dim);
    for (int i = 0; i < rows.rows(); ++i)
        for (int j = 0; j < dim; ++j) {
            const Rational x = generators[i][j] * Rational(den);
            rows(i, j) = x.get_num();
        }
    IntMatrix h = hermite_rows(rows);
    if (h.rows() != dim)
        throw PreconditionError("lattice generators do not span Q^" + std::to_string(dim));
    Integer g = den;
    for (const Integer& x : h.entries())
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    Lattice l;
    l.den_ = den / g;
    std::vector<Integer> a;
    for (const Integer& x : h.entries())
        a.push_back(x / g);
    l.basis_ = IntMatrix(dim, dim, std::move(a));
    return l;
}

Lattice Lattice::standard(int dim)
{
    Lattice l;
    l.basis_ = IntMatrix::identity(dim);
    return l;
}

std::vector<RatVector> Lattice::basis() const
{
    std::vector<RatVector> out;
    for (int i = 0; i < dim(); ++i) {
        RatVector v;
        for (int j = 0; j < dim(); ++j) {
            Rational q(basis_(i, j), den_);
            q.canonicalize();
            v.push_back(q);
        }
        out.push_back(std::move(v));
    }
    return out;
}

bool Lattice::contains(const RatVector& v) const
{
    IntVector w;
    for (const Rational& q : v) {
        const Rational x = q * Rational(den_);
        if (x.get_den() != 1)
            return false;
        w.push_back(x.get_num());
    }
    return in_row_lattice(basis_, w);
}

bool Lattice::contains(const Lattice& other) const
{
    for (const RatVector& b : other.basis())
        if (!contains(b))
            return false;
    return true;
}

Rational Lattice::covolume() const
{
    Integer scale = 1;
    for (int i = 0; i < dim(); ++i)
        scale *= den_;
    Rational c(abs(determinant(basis_)), scale);
    c.canonicalize();
    return c;
}

Integer Lattice::index_of(const Lattice& sub) const
{
    if (!contains(sub))
        throw PreconditionError("index_of: not a sublattice");
    const Rational q = sub.covolume() / covolume();
    if (q.get_den() != 1)
        throw PreconditionError("index_of: non-integral covolume ratio");
    return q.get_num();
}

// ---------------------------------------------------------------------------

IntVector FGAbelian::reduce(IntVector v) const
{
    for (std::size_t k = 0; k < torsion.size(); ++k)
        v[free_rank + k] = mod(v[free_rank + k], torsion[k]);
    return v;
}

IntMatrix FGAbelian::reduce(IntMatrix m) const
{
    for (int j = 0; j < m.cols(); ++j)
        m.set_column(j, reduce(m.column(j)));
    return m;
}

bool FGAbelian::is_zero(const IntVector& v) const
{
    const IntVector r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](const Integer& x) { return x == 0; });
}

bool FGAbelian::is_endomorphism(const IntMatrix& m) const
{
    if (m.rows() != size() || m.cols() != size())
        return false;
    for (std::size_t k = 0; k < torsion.size(); ++k) {
        IntVector c = m.column(free_rank + static_cast<int>(k));
        for (Integer& x : c)
            x *= torsion[k];
        if (!is_zero(c))
            return false;
    }
    return true;
}

std::vector<IntVector> FGAbelian::relations() const
{
    std::vector<IntVector> out;
    for (std::size_t k = 0; k < torsion.size(); ++k) {
        IntVector r(size(), 0);
        r[free_rank + k] = torsion[k];
        out.push_back(std::move(r));
    }
    return out;
}

Subgroup::Subgroup(FGAbelian m, std::vector<IntVector> generators) : m_(std::move(m)), gens_(std::move(generators))
{
    std::vector<IntVector> rows = gens_;
    for (IntVector& r : m_.relations())
        rows.push_back(std::move(r));
    IntMatrix a(static_cast<int>(rows.size()), m_.size());
    for (int i = 0; i < a.rows(); ++i) {
        if (static_cast<int>(rows[i].size()) != m_.size())
            throw PreconditionError("subgroup generator of the wrong length");
        for (int j = 0; j < a.cols(); ++j)
            a(i, j) = rows[i][j];
    }
    hnf_ = hermite_rows(a);
}

bool Subgroup::contains(const IntVector& v) const
{
    return in_row_lattice(hnf_, v);
}

} // namespace covercomm
