#include "qtwist/tensor.hpp"

#include <algorithm>
#include <cstdint>

namespace qtwist {

namespace {
std::size_t ipow(int n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= static_cast<std::size_t>(n);
  return r;
}
}  // namespace

Mat::Mat(int n, int legs) : n_(n), legs_(legs), dim_(ipow(n, legs)), data_(dim_ * dim_) {
  if (n < 1 || legs < 1) throw Error("matrix needs positive size and leg count");
}

Mat Mat::identity(int n, int legs) {
  Mat m(n, legs);
  for (std::size_t i = 0; i < m.dim_; ++i) m(i, i) = Ratio(1);
  return m;
}

Mat Mat::unit(int n, int i, int j) {
  if (i < 1 || i > n || j < 1 || j > n) throw Error("matrix unit index out of range");
  Mat m(n, 1);
  m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = Ratio(1);
  return m;
}

Mat Mat::diagonal(const std::vector<Ratio>& d) {
  Mat m(static_cast<int>(d.size()), 1);
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

std::size_t Mat::flatten(const std::vector<int>& idx) const {
  if (static_cast<int>(idx.size()) != legs_) throw Error("multi-index has the wrong number of legs");
  std::size_t f = 0;
  for (int i : idx) {
    if (i < 1 || i > n_) throw Error("multi-index out of range");
    f = f * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i - 1);
  }
  return f;
}

std::vector<int> Mat::unflatten(std::size_t flat) const {
  std::vector<int> idx(static_cast<std::size_t>(legs_));
  for (int k = legs_ - 1; k >= 0; --k) {
    idx[static_cast<std::size_t>(k)] = static_cast<int>(flat % static_cast<std::size_t>(n_)) + 1;
    flat /= static_cast<std::size_t>(n_);
  }
  return idx;
}

const Ratio& Mat::at(const std::vector<int>& row, const std::vector<int>& col) const {
  return (*this)(flatten(row), flatten(col));
}

Ratio& Mat::at(const std::vector<int>& row, const std::vector<int>& col) { return (*this)(flatten(row), flatten(col)); }

Mat& Mat::operator+=(const Mat& o) {
  if (dim_ != o.dim_) throw Error("matrix dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!o.data_[i].is_zero()) data_[i] += o.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  if (dim_ != o.dim_) throw Error("matrix dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!o.data_[i].is_zero()) data_[i] -= o.data_[i];
  return *this;
}

Mat operator*(const Mat& x, const Mat& y) {
  if (x.dim_ != y.dim_) throw Error("matrix dimension mismatch");
  const std::size_t d = x.dim_;
  // Row-sparse view of y.
  std::vector<std::vector<std::size_t>> ynz(d);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t j = 0; j < d; ++j)
      if (!y(k, j).is_zero()) ynz[k].push_back(j);
  Mat r(x.n_, x.legs_);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const Ratio& xik = x(i, k);
      if (xik.is_zero()) continue;
      for (std::size_t j : ynz[k]) r(i, j) += xik * y(k, j);
    }
  return r;
}

Mat operator*(const Ratio& c, const Mat& m) {
  Mat r(m.n_, m.legs_);
  if (c.is_zero()) return r;
  for (std::size_t i = 0; i < m.data_.size(); ++i)
    if (!m.data_[i].is_zero()) r.data_[i] = c * m.data_[i];
  return r;
}

bool Mat::operator==(const Mat& o) const {
  if (dim_ != o.dim_) return false;
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!(data_[i] == o.data_[i])) return false;
  return true;
}

bool Mat::is_zero() const {
  for (const auto& x : data_)
    if (!x.is_zero()) return false;
  return true;
}

std::size_t Mat::nonzero_count() const {
  std::size_t c = 0;
  for (const auto& x : data_) c += x.is_zero() ? 0 : 1;
  return c;
}

std::size_t Mat::max_terms() const {
  std::size_t m = 0;
  for (const auto& x : data_)
    if (!x.is_zero()) m = std::max(m, x.term_count());
  return m;
}

Mat Mat::transpose() const {
  Mat r(n_, legs_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) r(j, i) = (*this)(i, j);
  return r;
}

Mat Mat::inverse() const {
  const std::size_t d = dim_;
  Mat a = *this, inv = identity(n_, legs_);
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t piv = c;
    while (piv < d && a(piv, c).is_zero()) ++piv;
    if (piv == d) throw Error("singular matrix");
    if (piv != c)
      for (std::size_t j = 0; j < d; ++j) {
        std::swap(a(piv, j), a(c, j));
        std::swap(inv(piv, j), inv(c, j));
      }
    Ratio f = a(c, c).inverse();
    for (std::size_t j = 0; j < d; ++j) {
      if (!a(c, j).is_zero()) a(c, j) *= f;
      if (!inv(c, j).is_zero()) inv(c, j) *= f;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c || a(r, c).is_zero()) continue;
      Ratio g = a(r, c);
      for (std::size_t j = 0; j < d; ++j) {
        if (!a(c, j).is_zero()) a(r, j) -= g * a(c, j);
        if (!inv(c, j).is_zero()) inv(r, j) -= g * inv(c, j);
      }
    }
  }
  return inv;
}

namespace {
std::string idx_str(const std::vector<int>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}
}  // namespace

std::string Mat::first_nonzero(const ParamSpace& space) const {
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      if (!(*this)(i, j).is_zero())
        return "row " + idx_str(unflatten(i)) + " col " + idx_str(unflatten(j)) + ": " +
               (*this)(i, j).to_string(space);
  return {};
}

nlohmann::json Mat::to_json(const ParamSpace& space) const {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < dim_; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < dim_; ++j) row.push_back((*this)(i, j).to_string(space));
    rows.push_back(std::move(row));
  }
  return {{"n", n_}, {"legs", legs_}, {"convention", "big-endian"}, {"entries", rows}};
}

Mat kron(const Mat& a, const Mat& b) {
  if (a.n() != b.n()) throw Error("leg dimension mismatch");
  Mat r(a.n(), a.legs() + b.legs());
  const std::size_t db = b.dim();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) {
      const Ratio& x = a(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) {
          const Ratio& y = b(k, l);
          if (!y.is_zero()) r(i * db + k, j * db + l) = x * y;
        }
    }
  return r;
}

Mat embed(const Mat& r, int p, int q, int t) {
  if (r.legs() != 2) throw Error("embed expects a two-leg operator");
  if (!(1 <= p && p < q && q <= t)) throw Error("embedding position out of range");
  Mat out(r.n(), t);
  const std::size_t d = out.dim();
  for (std::size_t row = 0; row < d; ++row) {
    auto ri = out.unflatten(row);
    for (int k = 1; k <= r.n(); ++k)
      for (int l = 1; l <= r.n(); ++l) {
        const Ratio& v = r.at({ri[static_cast<std::size_t>(p - 1)], ri[static_cast<std::size_t>(q - 1)]}, {k, l});
        if (v.is_zero()) continue;
        auto ci = ri;
        ci[static_cast<std::size_t>(p - 1)] = k;
        ci[static_cast<std::size_t>(q - 1)] = l;
        out(row, out.flatten(ci)) = v;
      }
  }
  return out;
}

Mat mat_poly(const Mat& m, const std::vector<Ratio>& roots) {
  Mat result = Mat::identity(m.n(), m.legs());
  Mat id = result;
  for (const auto& r : roots) result = result * (m - r * id);
  return result;
}

Mat flip(int n) {
  Mat f(n, 2);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) f.at({i, j}, {j, i}) = Ratio(1);
  return f;
}

std::vector<std::size_t> row_reduce(std::vector<RVec>& rows) {
  std::vector<std::size_t> pivots;
  if (rows.empty()) return pivots;
  const std::size_t ncols = rows[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
    std::size_t piv = r;
    // prefer the sparsest usable pivot entry to limit coefficient growth
    std::size_t best = SIZE_MAX;
    for (std::size_t i = r; i < rows.size(); ++i)
      if (!rows[i][c].is_zero() && rows[i][c].term_count() < best) {
        best = rows[i][c].term_count();
        piv = i;
      }
    if (best == SIZE_MAX) continue;
    std::swap(rows[r], rows[piv]);
    Ratio inv = rows[r][c].inverse();
    for (auto& x : rows[r])
      if (!x.is_zero()) x *= inv;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c].is_zero()) continue;
      Ratio f = rows[i][c];
      for (std::size_t j = c; j < ncols; ++j)
        if (!rows[r][j].is_zero()) rows[i][j] -= f * rows[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

std::size_t rank(std::vector<RVec> rows) { return row_reduce(rows).size(); }

std::vector<RVec> nullspace(std::vector<RVec> rows, std::size_t ncols) {
  auto pivots = row_reduce(rows);
  std::vector<bool> is_pivot(ncols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<RVec> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    RVec v(ncols);
    v[f] = Ratio(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -rows[r][f];
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace qtwist
