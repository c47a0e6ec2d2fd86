#pragma once

#include <span>

#include "ftlab/numerics/tensor.hpp"

namespace ftlab {

// Euclidean norm of the flattened values; 0 for an all-zero input.
double l2_norm(std::span<const double> values);
double l2_norm(const Tensor& t);

// sqrt(mean((a-b)^2)); shapes must match.
double rmsd(const Tensor& a, const Tensor& b);

// dot(a,b)/(|a||b|) over flattened values. Two zero vectors compare as 1
// (no change); exactly one zero vector gives 0.
double cosine_similarity(const Tensor& a, const Tensor& b);
double cosine_similarity(std::span<const double> a, std::span<const double> b);

}  // namespace ftlab
