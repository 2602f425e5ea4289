#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace rtnlab {

/// Dense complex tensor with named axes, row-major (first axis slowest).
/// Axis ids are wire ids in the network contraction; contract() sums over
/// every axis the two operands share.
struct Tensor {
  std::vector<int> axes;
  std::vector<long> dims;
  std::vector<std::complex<double>> data;

  long element_count() const;
  int axis_position(int axis) const;  // -1 if absent

  /// Reorders the axes; pure data permutation.
  Tensor permuted(const std::vector<int>& new_axis_order) const;

  /// Multiplies slices along one axis by the given weights (diagonal matrix
  /// applied on that axis).
  void scale_axis(int axis, const std::vector<double>& weights);

  /// Renames an axis in place. The new id must not be present already.
  void rename_axis(int from, int to);
};

/// Contraction over all shared axes; throws if the result would exceed
/// max_elements.
Tensor contract(const Tensor& a, const Tensor& b, long max_elements);

/// Outer product of tensors with disjoint axes.
Tensor outer(const Tensor& a, const Tensor& b, long max_elements);

}  // namespace rtnlab
