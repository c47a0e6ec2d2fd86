#include "ftlab/numerics/vector_metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ftlab/errors.hpp"

namespace ftlab {

double l2_norm(std::span<const double> values) {
  if (!all_finite(values)) throw NumericError("l2_norm: non-finite entry");
  double ss = 0.0;
  for (double v : values) ss += v * v;
  return std::sqrt(ss);
}

double l2_norm(const Tensor& t) { return l2_norm(t.data()); }

double rmsd(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw ShapeError("rmsd: shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
  double ss = 0.0;
  for (std::size_t i = 0; i < a.numel(); ++i) {
    const double d = a[i] - b[i];
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(a.numel()));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ShapeError("cosine_similarity: length mismatch");
  // sqrt(aa) * sqrt(bb) can round away from aa, so equal inputs short-circuit to exactly 1.
  if (std::equal(a.begin(), a.end(), b.begin())) return 1.0;
  double dot = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  const bool a_zero = aa == 0.0;
  const bool b_zero = bb == 0.0;
  if (a_zero && b_zero) return 1.0;
  if (a_zero || b_zero) return 0.0;
  return std::clamp(dot / (std::sqrt(aa) * std::sqrt(bb)), -1.0, 1.0);
}

double cosine_similarity(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    throw ShapeError("cosine_similarity: shape mismatch " + shape_string(a.shape()) + " vs " +
                     shape_string(b.shape()));
  return cosine_similarity(a.data(), b.data());
}

}  // namespace ftlab
