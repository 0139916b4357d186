#pragma once

// Dense square matrices over Ratio acting on V^{⊗k}, dim V = n.
// Row and column multi-indices (i_1, ..., i_k) are flattened big-endian:
// leg 1 is the most significant digit. Indices in the public API are 1-based.

#include <string>
#include <vector>

#include "json.hpp"
#include "qtwist/ring.hpp"

namespace qtwist {

class Mat {
 public:
  Mat() = default;
  Mat(int n, int legs);

  static Mat identity(int n, int legs = 1);
  /// Matrix unit with 1 in row i, column j (1-based, single leg).
  static Mat unit(int n, int i, int j);
  static Mat diagonal(const std::vector<Ratio>& d);

  int n() const { return n_; }
  int legs() const { return legs_; }
  std::size_t dim() const { return dim_; }

  Ratio& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Ratio& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  /// Entry addressed by 1-based multi-indices.
  const Ratio& at(const std::vector<int>& row, const std::vector<int>& col) const;
  Ratio& at(const std::vector<int>& row, const std::vector<int>& col);
  std::size_t flatten(const std::vector<int>& idx) const;
  std::vector<int> unflatten(std::size_t flat) const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  friend Mat operator+(Mat x, const Mat& y) { return x += y; }
  friend Mat operator-(Mat x, const Mat& y) { return x -= y; }
  friend Mat operator*(const Mat& x, const Mat& y);
  friend Mat operator*(const Ratio& c, const Mat& m);
  bool operator==(const Mat& o) const;

  bool is_zero() const;
  std::size_t nonzero_count() const;
  /// Largest Ratio::term_count over entries.
  std::size_t max_terms() const;
  Mat transpose() const;
  /// Gauss-Jordan inverse; throws on a singular matrix.
  Mat inverse() const;
  /// Applies f to every entry.
  template <class F>
  Mat map(F&& f) const {
    Mat r(n_, legs_);
    for (std::size_t i = 0; i < data_.size(); ++i) r.data_[i] = f(data_[i]);
    return r;
  }

  /// First nonzero entry as "row (i,j) col (k,l): value", empty if zero.
  std::string first_nonzero(const ParamSpace& space) const;
  nlohmann::json to_json(const ParamSpace& space) const;

 private:
  int n_ = 0;
  int legs_ = 0;
  std::size_t dim_ = 0;
  std::vector<Ratio> data_;
};

Mat kron(const Mat& a, const Mat& b);
/// Places a two-leg operator on legs (p, q) of a t-leg space, identity elsewhere.
Mat embed(const Mat& r, int p, int q, int t);
/// Product of (M - r I) over the given roots.
Mat mat_poly(const Mat& m, const std::vector<Ratio>& roots);
/// The flip e_i⊗e_j -> e_j⊗e_i.
Mat flip(int n);

// Dense linear algebra over Ratio on row lists.
using RVec = std::vector<Ratio>;
/// Reduced row echelon form; returns pivot columns, rows are overwritten.
std::vector<std::size_t> row_reduce(std::vector<RVec>& rows);
std::size_t rank(std::vector<RVec> rows);
/// Basis of {v : rows * v = 0}.
std::vector<RVec> nullspace(std::vector<RVec> rows, std::size_t ncols);

}  // namespace qtwist
