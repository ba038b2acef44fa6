#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "mfsing/linalg.hpp"
#include "mfsing/ring.hpp"
#include "mfsing/singularity.hpp"

namespace mfsing {

/// Dense matrix of polynomials over one ring. Shapes may be 0 x 0.
class PolyMatrix {
 public:
  PolyMatrix() = default;
  PolyMatrix(Ring ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols, Poly(ring_)) {}

  static PolyMatrix identity(const Ring& ring, std::size_t n) { return scalar(ring, n, Poly::constant(ring, 1)); }
  static PolyMatrix scalar(const Ring& ring, std::size_t n, const Poly& p) {
    PolyMatrix m(ring, n, n);
    for (std::size_t j = 0; j < n; ++j) m(j, j) = p;
    return m;
  }
  static PolyMatrix from_rows(const Ring& ring, const std::vector<std::vector<Poly>>& rows) {
    const std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    PolyMatrix m(ring, r, c);
    for (std::size_t a = 0; a < r; ++a) {
      if (rows[a].size() != c) precondition_failed("matrix rows have different lengths");
      for (std::size_t b = 0; b < c; ++b) {
        if (!same_ring(rows[a][b].ring(), ring)) precondition_failed("matrix entry from a different ring");
        m(a, b) = rows[a][b];
      }
    }
    return m;
  }

  const Ring& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Poly& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Poly& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  friend PolyMatrix operator*(const PolyMatrix& a, const PolyMatrix& b) {
    if (a.cols_ != b.rows_) precondition_failed("matrix shape mismatch in product");
    PolyMatrix out(a.ring_, a.rows_, b.cols_);
    for (std::size_t r = 0; r < a.rows_; ++r)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Poly& x = a(r, k);
        if (x.is_zero()) continue;
        for (std::size_t c = 0; c < b.cols_; ++c)
          if (!b(k, c).is_zero()) out(r, c) += x * b(k, c);
      }
    return out;
  }
  friend PolyMatrix operator+(PolyMatrix a, const PolyMatrix& b) {
    a.check_shape(b);
    for (std::size_t j = 0; j < a.data_.size(); ++j) a.data_[j] += b.data_[j];
    return a;
  }
  friend PolyMatrix operator-(PolyMatrix a, const PolyMatrix& b) {
    a.check_shape(b);
    for (std::size_t j = 0; j < a.data_.size(); ++j) a.data_[j] -= b.data_[j];
    return a;
  }
  PolyMatrix operator-() const {
    PolyMatrix out(*this);
    for (auto& p : out.data_) p = -p;
    return out;
  }
  friend bool operator==(const PolyMatrix& a, const PolyMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  /// Matrix with entries mapped through fn (e.g. embedding or substitution).
  template <class Fn>
  PolyMatrix map(const Ring& ring, Fn&& fn) const {
    PolyMatrix out(ring, rows_, cols_);
    for (std::size_t j = 0; j < data_.size(); ++j) out.data_[j] = fn(data_[j]);
    return out;
  }

  /// Copy without row r and column c.
  PolyMatrix minor(std::size_t r, std::size_t c) const {
    PolyMatrix out(ring_, rows_ - 1, cols_ - 1);
    for (std::size_t a = 0, oa = 0; a < rows_; ++a) {
      if (a == r) continue;
      for (std::size_t b = 0, ob = 0; b < cols_; ++b) {
        if (b == c) continue;
        out(oa, ob++) = (*this)(a, b);
      }
      ++oa;
    }
    return out;
  }

  /// [[tl, tr], [bl, br]]
  static PolyMatrix blocks(const PolyMatrix& tl, const PolyMatrix& tr, const PolyMatrix& bl, const PolyMatrix& br) {
    PolyMatrix out(tl.ring_, tl.rows_ + bl.rows_, tl.cols_ + tr.cols_);
    auto put = [&](const PolyMatrix& m, std::size_t r0, std::size_t c0) {
      for (std::size_t r = 0; r < m.rows_; ++r)
        for (std::size_t c = 0; c < m.cols_; ++c) out(r0 + r, c0 + c) = m(r, c);
    };
    put(tl, 0, 0);
    put(tr, 0, tl.cols_);
    put(bl, tl.rows_, 0);
    put(br, tl.rows_, tl.cols_);
    return out;
  }

  PolyMatrix permuted(const std::vector<std::size_t>& row_perm, const std::vector<std::size_t>& col_perm) const {
    PolyMatrix out(ring_, rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) out(r, c) = (*this)(row_perm[r], col_perm[c]);
    return out;
  }

  std::uint32_t max_degree() const {
    std::uint32_t d = 0;
    for (const auto& p : data_) d = std::max(d, p.degree());
    return d;
  }

 private:
  void check_shape(const PolyMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) precondition_failed("matrix shape mismatch");
  }

  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Poly> data_;
};

/// A pair (A, B) of square matrices with A B = B A = f I. Size 0 is the zero object.
class MatrixFactorization {
 public:
  /// Builds the factorization iff A B = B A = f I exactly.
  static MatrixFactorization validate(PolyMatrix A, PolyMatrix B, Poly f) {
    if (!A.square() || !B.square() || A.rows() != B.rows())
      precondition_failed("matrix factorization needs square matrices of equal size");
    if (A.rows() > 0 && (!same_ring(A.ring(), f.ring()) || !same_ring(B.ring(), f.ring())))
      precondition_failed("matrix factorization entries live in a different ring than f");
    const std::size_t s = A.rows();
    auto check = [&](const PolyMatrix& prod, const char* which) {
      for (std::size_t r = 0; r < s; ++r)
        for (std::size_t c = 0; c < s; ++c) {
          const Poly want = r == c ? f : Poly(f.ring());
          if (prod(r, c) != want)
            precondition_failed(std::string("not a matrix factorization: entry (") + std::to_string(r) + "," +
                                std::to_string(c) + ") of " + which + " differs from f*I");
        }
    };
    check(A * B, "A*B");
    check(B * A, "B*A");
    return MatrixFactorization(std::move(A), std::move(B), std::move(f));
  }

  static MatrixFactorization zero(const Poly& f) {
    return MatrixFactorization(PolyMatrix(f.ring(), 0, 0), PolyMatrix(f.ring(), 0, 0), f);
  }

  const PolyMatrix& A() const { return a_; }
  const PolyMatrix& B() const { return b_; }
  const Poly& f() const { return f_; }
  const Ring& ring() const { return f_.ring(); }
  std::size_t size() const { return a_.rows(); }

  /// Every entry of A and B lies in the maximal ideal.
  bool is_reduced() const {
    for (std::size_t r = 0; r < size(); ++r)
      for (std::size_t c = 0; c < size(); ++c)
        if (!a_(r, c).constant_term().is_zero() || !b_(r, c).constant_term().is_zero()) return false;
    return true;
  }

  friend bool operator==(const MatrixFactorization& x, const MatrixFactorization& y) {
    return x.f_ == y.f_ && x.a_ == y.a_ && x.b_ == y.b_;
  }

 private:
  MatrixFactorization(PolyMatrix a, PolyMatrix b, Poly f) : a_(std::move(a)), b_(std::move(b)), f_(std::move(f)) {}

  PolyMatrix a_;
  PolyMatrix b_;
  Poly f_;
};

inline MatrixFactorization validate(PolyMatrix A, PolyMatrix B, Poly f) {
  return MatrixFactorization::validate(std::move(A), std::move(B), std::move(f));
}

/// (1, f) and (f, 1).
inline std::pair<MatrixFactorization, MatrixFactorization> trivial_pair(const Poly& f) {
  if (f.is_zero()) precondition_failed("trivial_pair: f must be nonzero");
  const Ring& R = f.ring();
  auto one = PolyMatrix::identity(R, 1), ff = PolyMatrix::scalar(R, 1, f);
  return {validate(one, ff, f), validate(ff, one, f)};
}

inline MatrixFactorization shift(const MatrixFactorization& m) { return validate(m.B(), m.A(), m.f()); }

inline MatrixFactorization direct_sum(const MatrixFactorization& m, const MatrixFactorization& n) {
  if (m.f() != n.f()) precondition_failed("direct_sum: factorizations of different polynomials");
  const Ring& R = m.ring();
  auto za = PolyMatrix(R, m.size(), n.size()), zb = PolyMatrix(R, n.size(), m.size());
  return validate(PolyMatrix::blocks(m.A(), za, zb, n.A()), PolyMatrix::blocks(m.B(), za, zb, n.B()), m.f());
}

/// A morphism source -> target: v A_src = A_tgt u and u B_src = B_tgt v.
struct MFMorphism {
  MatrixFactorization source;
  MatrixFactorization target;
  PolyMatrix u;  // target.size() x source.size()
  PolyMatrix v;

  static MFMorphism make(MatrixFactorization source, MatrixFactorization target, PolyMatrix u, PolyMatrix v) {
    if (source.f() != target.f()) precondition_failed("morphism between factorizations of different polynomials");
    const std::size_t s = source.size(), t = target.size();
    if (u.rows() != t || u.cols() != s || v.rows() != t || v.cols() != s)
      precondition_failed("morphism matrices have the wrong shape");
    if (v * source.A() != target.A() * u || u * source.B() != target.B() * v)
      precondition_failed("not a morphism of matrix factorizations: squares do not commute");
    return {std::move(source), std::move(target), std::move(u), std::move(v)};
  }

  static MFMorphism identity(const MatrixFactorization& m) {
    auto id = PolyMatrix::identity(m.ring(), m.size());
    return make(m, m, id, id);
  }
  static MFMorphism zero(const MatrixFactorization& src, const MatrixFactorization& tgt) {
    PolyMatrix z(src.ring(), tgt.size(), src.size());
    return make(src, tgt, z, z);
  }
};

/// Witness for u = k A_src + B_tgt h and v = h B_src + A_tgt k.
struct Homotopy {
  PolyMatrix h;
  PolyMatrix k;
};

inline bool witnesses(const Homotopy& w, const MFMorphism& phi) {
  return phi.u == w.k * phi.source.A() + phi.target.B() * w.h &&
         phi.v == w.h * phi.source.B() + phi.target.A() * w.k;
}

/// C_A = [[A', v], [0, -B]], C_B = [[B', u], [0, -A]] for phi: (A, B) -> (A', B').
inline MatrixFactorization cone(const MFMorphism& phi) {
  const auto& src = phi.source;
  const auto& tgt = phi.target;
  PolyMatrix zero(src.ring(), src.size(), tgt.size());
  auto ca = PolyMatrix::blocks(tgt.A(), phi.v, zero, -src.B());
  auto cb = PolyMatrix::blocks(tgt.B(), phi.u, zero, -src.A());
  try {
    return validate(std::move(ca), std::move(cb), src.f());
  } catch (const Error& e) {
    internal_error(std::string("cone failed to validate: ") + e.what());
  }
}

namespace detail {
inline Ring extend_ring(const Ring& ring, const std::vector<std::string>& fresh) {
  std::vector<std::string> names = ring->var_names();
  for (const auto& n : fresh) {
    if (ring->index_of(n)) precondition_failed("variable name '" + n + "' already used by the ring");
    names.push_back(n);
  }
  return make_ring(std::move(names));
}
}  // namespace detail

/// Knoerrer's functor MF(f) -> MF(f + x y):
/// K_A = [[A, -y I], [x I, B]], K_B = [[B, y I], [-x I, A]].
inline MatrixFactorization knoerrer(const MatrixFactorization& m, const std::string& x_name,
                                    const std::string& y_name) {
  if (x_name == y_name) precondition_failed("knoerrer: the two new variables need distinct names");
  Ring big = detail::extend_ring(m.ring(), {x_name, y_name});
  const std::size_t s = m.size();
  Poly x = Poly::variable(big, big->var_count() - 2), y = Poly::variable(big, big->var_count() - 1);
  Poly F = embed(m.f(), big) + x * y;
  auto lift = [&](const PolyMatrix& mat) { return mat.map(big, [&](const Poly& p) { return embed(p, big); }); };
  auto A = lift(m.A()), B = lift(m.B());
  auto xi = PolyMatrix::scalar(big, s, x), yi = PolyMatrix::scalar(big, s, y);
  return validate(PolyMatrix::blocks(A, -yi, xi, B), PolyMatrix::blocks(B, yi, -xi, A), F);
}

/// Knoerrer's functor into f + u^2 + v^2, via x = u + i v, y = u - i v.
inline MatrixFactorization knoerrer_squares(const MatrixFactorization& m, const std::string& u_name,
                                            const std::string& v_name) {
  MatrixFactorization k = knoerrer(m, u_name, v_name);
  const Ring& R = k.ring();
  const std::size_t n = R->var_count();
  Poly u = Poly::variable(R, n - 2), v = Poly::variable(R, n - 1);
  Poly iv = v.scaled(Coefficient::i());
  std::vector<Poly> images = detail::identity_images(R);
  images[n - 2] = u + iv;
  images[n - 1] = u - iv;
  auto sub = [&](const Poly& p) { return substitute(p, images); };
  return validate(k.A().map(R, sub), k.B().map(R, sub), sub(k.f()));
}

namespace detail {

/// Monomials of total degree <= d.
inline std::vector<Monomial> monomials_up_to(std::size_t n, std::uint32_t d) {
  std::vector<Monomial> out;
  for (std::uint32_t e = 0; e <= d; ++e)
    for (auto& m : monomials_of_degree(n, e)) out.push_back(std::move(m));
  return out;
}

/// Clears column q and row p of A around the pivot A(p, q), whose constant term
/// c is nonzero, by the row/column operations row_k -= (A(k, q) / c) row_p and
/// col_l -= (A(p, l) / c) col_q; B receives the inverse operations. With
/// constants_only the multipliers are the constant terms of those quotients,
/// which keeps every operation invertible over the polynomial ring when the
/// pivot itself is not constant.
inline MatrixFactorization clear_around_pivot(const MatrixFactorization& m, std::size_t p, std::size_t q,
                                              bool constants_only) {
  const Ring& R = m.ring();
  const std::size_t s = m.size();
  const Coefficient inv = m.A()(p, q).constant_term().inverse();
  auto multiplier = [&](const Poly& e) {
    return constants_only ? Poly::constant(R, e.constant_term() * inv) : e.scaled(inv);
  };
  auto Rm = PolyMatrix::identity(R, s), Rinv = Rm, Cm = Rm, Cinv = Rm;
  for (std::size_t k = 0; k < s; ++k) {
    if (k == p) continue;
    Poly t = multiplier(m.A()(k, q));
    Rm(k, p) = -t;
    Rinv(k, p) = t;
  }
  for (std::size_t l = 0; l < s; ++l) {
    if (l == q) continue;
    Poly t = multiplier(m.A()(p, l));
    Cm(q, l) = -t;
    Cinv(q, l) = t;
  }
  try {
    return validate(Rm * m.A() * Cm, Cinv * m.B() * Rinv, m.f());
  } catch (const Error& e) {
    internal_error(std::string("reduce: pivot elimination broke the factorization: ") + e.what());
  }
}

/// Eliminates the constant pivot A(p, q) and drops the split-off (c, f/c) summand.
inline MatrixFactorization split_constant_pivot(const MatrixFactorization& m, std::size_t p, std::size_t q) {
  MatrixFactorization cleared = clear_around_pivot(m, p, q, false);
  try {
    return validate(cleared.A().minor(p, q), cleared.B().minor(q, p), m.f());
  } catch (const Error& e) {
    internal_error(std::string("reduce: dropping the trivial summand broke the factorization: ") + e.what());
  }
}

/// Polynomials t_j with deg t_j <= deg(target) and sum t_j * gens[j] = target, if any.
inline std::optional<std::vector<Poly>> combination_of(const Poly& target, const std::vector<Poly>& gens) {
  const Ring& R = target.ring();
  if (gens.empty()) return std::nullopt;
  auto monos = monomials_up_to(R->var_count(), target.degree());
  std::map<Monomial, std::size_t, GradedLexLess> row_of;
  auto row = [&](const Monomial& m) { return row_of.try_emplace(m, row_of.size()).first->second; };
  for (const auto& [m, c] : target.terms()) row(m);
  std::vector<std::vector<std::pair<std::size_t, Coefficient>>> cols;
  for (const auto& g : gens)
    for (const auto& t : monos) {
      std::vector<std::pair<std::size_t, Coefficient>> col;
      for (const auto& [m, c] : g.terms()) col.emplace_back(row(t * m), c);
      cols.push_back(std::move(col));
    }
  DenseMatrix M(row_of.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, c] : cols[j]) M(r, j) = c;
  std::vector<Coefficient> b(row_of.size());
  for (const auto& [m, c] : target.terms()) b[row_of.at(m)] = c;
  auto x = solve(M, b);
  if (!x) return std::nullopt;
  std::vector<Poly> out(gens.size(), Poly(R));
  for (std::size_t g = 0; g < gens.size(); ++g)
    for (std::size_t t = 0; t < monos.size(); ++t) {
      const auto& c = (*x)[g * monos.size() + t];
      if (!c.is_zero()) out[g] += Poly::term(R, monos[t], c);
    }
  return out;
}

/// Tries to turn a unit entry A(p, q) = c + r into the constant c by
/// subtracting polynomial multiples of the other columns (or rows), which
/// works whenever r lies in the ideal of the other entries of its row (or column).
inline std::optional<MatrixFactorization> make_pivot_constant(const MatrixFactorization& m, std::size_t p,
                                                              std::size_t q) {
  const Ring& R = m.ring();
  const std::size_t s = m.size();
  const Poly& entry = m.A()(p, q);
  const Poly rest = entry - Poly::constant(R, entry.constant_term());

  std::vector<std::size_t> idx;
  std::vector<Poly> gens;
  for (std::size_t l = 0; l < s; ++l)
    if (l != q && !m.A()(p, l).is_zero()) {
      idx.push_back(l);
      gens.push_back(m.A()(p, l));
    }
  if (auto t = combination_of(rest, gens)) {
    // column q -= sum t_l * column l
    auto Cm = PolyMatrix::identity(R, s), Cinv = Cm;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Cm(idx[j], q) = -(*t)[j];
      Cinv(idx[j], q) = (*t)[j];
    }
    return validate(m.A() * Cm, Cinv * m.B(), m.f());
  }

  idx.clear();
  gens.clear();
  for (std::size_t k = 0; k < s; ++k)
    if (k != p && !m.A()(k, q).is_zero()) {
      idx.push_back(k);
      gens.push_back(m.A()(k, q));
    }
  if (auto t = combination_of(rest, gens)) {
    // row p -= sum t_k * row k
    auto Lm = PolyMatrix::identity(R, s), Linv = Lm;
    for (std::size_t j = 0; j < idx.size(); ++j) {
      Lm(p, idx[j]) = -(*t)[j];
      Linv(p, idx[j]) = (*t)[j];
    }
    return validate(Lm * m.A(), m.B() * Linv, m.f());
  }
  return std::nullopt;
}

inline std::optional<std::pair<std::size_t, std::size_t>> find_entry(const PolyMatrix& a, bool constant_only) {
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const Poly& e = a(r, c);
      if (e.constant_term().is_zero()) continue;
      if (!constant_only || e.degree() == 0) return std::pair{r, c};
    }
  return std::nullopt;
}

}  // namespace detail

/// Splits off trivial summands: while A or B has a unit entry, pivot on it.
/// Units with a non-constant part are first made constant when the non-constant
/// part lies in the ideal of the rest of the row or column; otherwise the local
/// inverse has no polynomial representative and an Unsupported error is raised.
inline MatrixFactorization reduce(const MatrixFactorization& input) {
  MatrixFactorization m = input;
  bool flipped = false;  // true while working on shift(m)
  auto orient = [&](bool want_flipped) {
    if (flipped != want_flipped) {
      m = shift(m);
      flipped = want_flipped;
    }
  };
  while (m.size() > 0) {
    orient(false);
    if (auto pq = detail::find_entry(m.A(), true)) {
      m = detail::split_constant_pivot(m, pq->first, pq->second);
      continue;
    }
    orient(true);
    if (auto pq = detail::find_entry(m.A(), true)) {
      m = detail::split_constant_pivot(m, pq->first, pq->second);
      continue;
    }
    bool progressed = false;
    for (bool side : {false, true}) {
      orient(side);
      if (auto pq = detail::find_entry(m.A(), false)) {
        m = detail::clear_around_pivot(m, pq->first, pq->second, true);
        if (auto fixed = detail::make_pivot_constant(m, pq->first, pq->second)) {
          m = *fixed;
          progressed = true;
          break;
        }
        throw Error(ErrorKind::Unsupported,
                    "reduce: unit entry with non-constant part cannot be split off exactly over the "
                    "polynomial ring");
      }
    }
    if (!progressed) break;
  }
  orient(false);
  return m;
}

namespace detail {

/// Coordinates for pairs of t x s polynomial matrices: (which matrix, row, col, monomial).

using PairKey = std::tuple<int, std::size_t, std::size_t, Monomial>;

struct PairKeyLess {
  bool operator()(const PairKey& a, const PairKey& b) const {
    auto head = [](const PairKey& k) { return std::tie(std::get<0>(k), std::get<1>(k), std::get<2>(k)); };
    if (head(a) != head(b)) return head(a) < head(b);
    return GradedLexLess{}(std::get<3>(a), std::get<3>(b));
  }
};

struct PairCoordinates {
  std::map<PairKey, std::size_t, PairKeyLess> index;
  std::vector<PairKey> keys;

  std::size_t at(int which, std::size_t r, std::size_t c, const Monomial& m) {
    auto key = std::make_tuple(which, r, c, m);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    index.emplace(key, keys.size());
    keys.push_back(key);
    return keys.size() - 1;
  }

  SparseVector encode(const PolyMatrix& first, const PolyMatrix& second) {
    SparseVector v;
    const PolyMatrix* mats[2] = {&first, &second};
    for (int w = 0; w < 2; ++w)
      for (std::size_t r = 0; r < mats[w]->rows(); ++r)
        for (std::size_t c = 0; c < mats[w]->cols(); ++c)
          for (const auto& [m, coef] : (*mats[w])(r, c).terms()) v[at(w, r, c, m)] += coef;
    std::erase_if(v, [](const auto& kv) { return kv.second.is_zero(); });
    return v;
  }
};

/// Elementary t x s matrix pair with a single monomial entry.
struct Elementary {
  int which;  // 0 = first matrix, 1 = second
  std::size_t r, c;
  Monomial m;
};

inline std::vector<Elementary> elementary_basis(std::size_t t, std::size_t s, std::size_t nvars, std::uint32_t d) {
  std::vector<Elementary> out;
  auto monos = monomials_up_to(nvars, d);
  for (int w = 0; w < 2; ++w)
    for (std::size_t r = 0; r < t; ++r)
      for (std::size_t c = 0; c < s; ++c)
        for (const auto& m : monos) out.push_back({w, r, c, m});
  return out;
}

inline std::pair<PolyMatrix, PolyMatrix> elementary_pair(const Ring& R, std::size_t t, std::size_t s,
                                                         const Elementary& e) {
  PolyMatrix a(R, t, s), b(R, t, s);
  (e.which == 0 ? a : b)(e.r, e.c) = Poly::term(R, e.m, Coefficient(1));
  return {std::move(a), std::move(b)};
}

/// Image of (h, k) under the homotopy map (h, k) -> (k A + B' h, h B + A' k).
inline std::pair<PolyMatrix, PolyMatrix> homotopy_image(const MatrixFactorization& src,
                                                        const MatrixFactorization& tgt, const PolyMatrix& h,
                                                        const PolyMatrix& k) {
  return {k * src.A() + tgt.B() * h, h * src.B() + tgt.A() * k};
}

inline void require_isolated(const Poly& f, const char* what) {
  if (!tyurina_number(Germ(f))) precondition_failed(std::string(what) + ": f is not an isolated singularity");
}

}  // namespace detail

struct NullhomotopyResult {
  bool nullhomotopic = false;
  std::optional<Homotopy> witness;
  /// A negative answer is only conclusive once the search space has stabilized.
  bool conclusive = false;
};

/// Searches for h, k with entries of degree <= degree_bound realizing phi as
/// nullhomotopic, by exact linear algebra on the coefficients.
inline NullhomotopyResult is_nullhomotopic(const MFMorphism& phi, std::uint32_t degree_bound) {
  if (degree_bound < 1) precondition_failed("is_nullhomotopic: degree_bound must be >= 1");
  const auto& src = phi.source;
  const auto& tgt = phi.target;
  const Ring& R = src.ring();
  const std::size_t t = tgt.size(), s = src.size();
  if (t == 0 || s == 0) {
    PolyMatrix z(R, t, s);
    return {true, Homotopy{z, z}, true};
  }

  auto attempt = [&](std::uint32_t D, std::optional<Homotopy>& found) -> std::size_t {
    detail::PairCoordinates coords;
    SparseVector rhs = coords.encode(phi.u, phi.v);
    auto basis = detail::elementary_basis(t, s, R->var_count(), D);
    std::vector<SparseVector> cols;
    for (const auto& e : basis) {
      auto [h, k] = detail::elementary_pair(R, t, s, e);
      auto [iu, iv] = detail::homotopy_image(src, tgt, h, k);
      cols.push_back(coords.encode(iu, iv));
    }
    DenseMatrix M(coords.keys.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (const auto& [r, val] : cols[j]) M(r, j) = val;
    std::vector<Coefficient> b(coords.keys.size());
    for (const auto& [r, val] : rhs) b[r] = val;
    if (auto x = solve(M, b)) {
      PolyMatrix h(R, t, s), k(R, t, s);
      for (std::size_t j = 0; j < basis.size(); ++j) {
        if ((*x)[j].is_zero()) continue;
        (basis[j].which == 0 ? h : k)(basis[j].r, basis[j].c) += Poly::term(R, basis[j].m, (*x)[j]);
      }
      found = Homotopy{std::move(h), std::move(k)};
    }
    // dimension of nullhomotopic morphisms of degree <= deg(phi) reachable at this bound
    const std::uint32_t d0 = std::max(phi.u.max_degree(), phi.v.max_degree());
    EchelonSpace all, high;
    for (const auto& col : cols) {
      all.insert(col);
      SparseVector hi;
      for (const auto& [r, val] : col)
        if (std::get<3>(coords.keys[r]).degree() > d0) hi.emplace(r, val);
      high.insert(std::move(hi));
    }
    return all.dimension() - high.dimension();
  };

  std::optional<Homotopy> found;
  std::size_t dim_low = attempt(degree_bound, found);
  if (found) {
    if (!witnesses(*found, phi)) internal_error("is_nullhomotopic: solver returned an invalid homotopy");
    return {true, std::move(found), true};
  }
  std::optional<Homotopy> found_next;
  std::size_t dim_high = attempt(degree_bound + 1, found_next);
  if (found_next) {
    if (!witnesses(*found_next, phi)) internal_error("is_nullhomotopic: solver returned an invalid homotopy");
    return {true, std::move(found_next), true};
  }
  bool isolated = tyurina_number(Germ(src.f())).has_value();
  return {false, std::nullopt, isolated && dim_low == dim_high};
}

struct StableHomDimension {
  std::size_t value = 0;
  bool stabilized = false;
};

namespace detail {

/// dim of (polynomial morphisms M -> N of degree <= D) modulo those that are
/// nullhomotopic via homotopies of degree <= D.
inline std::size_t stable_hom_at(const MatrixFactorization& M, const MatrixFactorization& N, std::uint32_t D) {
  const Ring& R = M.ring();
  const std::size_t t = N.size(), s = M.size();
  if (t == 0 || s == 0) return 0;
  auto basis = elementary_basis(t, s, R->var_count(), D);

  // Morphism constraints: (u, v) -> (v A - A' u, u B - B' v) must vanish.
  PairCoordinates eq;
  std::vector<SparseVector> cols;
  for (const auto& e : basis) {
    auto [u, v] = elementary_pair(R, t, s, e);
    cols.push_back(eq.encode(v * M.A() - N.A() * u, u * M.B() - N.B() * v));
  }
  DenseMatrix L(eq.keys.size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (const auto& [r, val] : cols[j]) L(r, j) = val;
  auto kernel = nullspace(L);

  PairCoordinates uv;
  EchelonSpace image;
  for (const auto& e : basis) {
    auto [h, k] = elementary_pair(R, t, s, e);
    auto [iu, iv] = homotopy_image(M, N, h, k);
    image.insert(uv.encode(iu, iv));
  }
  const std::size_t image_dim = image.dimension();
  for (const auto& z : kernel) {
    PolyMatrix u(R, t, s), v(R, t, s);
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (z[j].is_zero()) continue;
      (basis[j].which == 0 ? u : v)(basis[j].r, basis[j].c) += Poly::term(R, basis[j].m, z[j]);
    }
    image.insert(uv.encode(u, v));
  }
  return image.dimension() - image_dim;
}

}  // namespace detail

/// Dimension of Hom(M, N) in the homotopy category, computed on polynomial
/// jets of degree <= degree_bound; stabilized iff the value at degree_bound + 1
/// agrees.
inline StableHomDimension stable_hom_dimension(const MatrixFactorization& M, const MatrixFactorization& N,
                                               std::uint32_t degree_bound) {
  if (M.f() != N.f()) precondition_failed("stable_hom_dimension: factorizations of different polynomials");
  detail::require_isolated(M.f(), "stable_hom_dimension");
  std::size_t a = detail::stable_hom_at(M, N, degree_bound);
  std::size_t b = detail::stable_hom_at(M, N, degree_bound + 1);
  return {a, a == b};
}

}  // namespace mfsing
