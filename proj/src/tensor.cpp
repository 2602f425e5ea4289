#include "rtnlab/tensor.hpp"

#include "rtnlab/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <stdexcept>

namespace rtnlab {

namespace {
using RowMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
}

long Tensor::element_count() const {
  long n = 1;
  for (long d : dims) n *= d;
  return n;
}

int Tensor::axis_position(int axis) const {
  for (size_t i = 0; i < axes.size(); ++i)
    if (axes[i] == axis) return static_cast<int>(i);
  return -1;
}

Tensor Tensor::permuted(const std::vector<int>& new_axis_order) const {
  const int r = static_cast<int>(axes.size());
  if (static_cast<int>(new_axis_order.size()) != r)
    throw std::invalid_argument("Tensor::permuted: axis count mismatch");
  std::vector<int> pos(r);
  for (int j = 0; j < r; ++j) {
    pos[j] = axis_position(new_axis_order[j]);
    if (pos[j] < 0) throw std::invalid_argument("Tensor::permuted: unknown axis");
  }
  std::vector<long> old_stride(r, 1);
  for (int i = r - 2; i >= 0; --i) old_stride[i] = old_stride[i + 1] * dims[i + 1];

  Tensor out;
  out.axes = new_axis_order;
  out.dims.resize(r);
  for (int j = 0; j < r; ++j) out.dims[j] = dims[pos[j]];
  out.data.resize(data.size());

  std::vector<long> idx(r, 0);
  long src = 0;
  const long total = element_count();
  for (long t = 0; t < total; ++t) {
    out.data[t] = data[src];
    for (int j = r - 1; j >= 0; --j) {
      ++idx[j];
      src += old_stride[pos[j]];
      if (idx[j] < out.dims[j]) break;
      src -= out.dims[j] * old_stride[pos[j]];
      idx[j] = 0;
    }
  }
  return out;
}

void Tensor::scale_axis(int axis, const std::vector<double>& weights) {
  int p = axis_position(axis);
  if (p < 0) throw std::invalid_argument("Tensor::scale_axis: unknown axis");
  if (static_cast<long>(weights.size()) != dims[p])
    throw std::invalid_argument("Tensor::scale_axis: weight count mismatch");
  long outer = 1, inner = 1;
  for (int i = 0; i < p; ++i) outer *= dims[i];
  for (size_t i = p + 1; i < dims.size(); ++i) inner *= dims[i];
  const long d = dims[p];
  for (long o = 0; o < outer; ++o)
    for (long j = 0; j < d; ++j) {
      std::complex<double>* base = data.data() + (o * d + j) * inner;
      for (long i = 0; i < inner; ++i) base[i] *= weights[j];
    }
}

void Tensor::rename_axis(int from, int to) {
  if (axis_position(to) >= 0) throw std::invalid_argument("Tensor::rename_axis: target id already present");
  int p = axis_position(from);
  if (p < 0) throw std::invalid_argument("Tensor::rename_axis: unknown axis");
  axes[p] = to;
}

Tensor contract(const Tensor& a, const Tensor& b, long max_elements) {
  std::vector<int> shared;
  for (int ax : a.axes)
    if (b.axis_position(ax) >= 0) shared.push_back(ax);
  std::sort(shared.begin(), shared.end());

  std::vector<int> a_free, b_free;
  for (int ax : a.axes)
    if (!std::binary_search(shared.begin(), shared.end(), ax)) a_free.push_back(ax);
  for (int ax : b.axes)
    if (!std::binary_search(shared.begin(), shared.end(), ax)) b_free.push_back(ax);

  std::vector<int> a_order = a_free;
  a_order.insert(a_order.end(), shared.begin(), shared.end());
  std::vector<int> b_order = shared;
  b_order.insert(b_order.end(), b_free.begin(), b_free.end());
  Tensor ap = a.permuted(a_order);
  Tensor bp = b.permuted(b_order);

  long m = 1, k = 1, n = 1;
  for (size_t i = 0; i < a_free.size(); ++i) m *= ap.dims[i];
  for (size_t i = 0; i < shared.size(); ++i) {
    long da = ap.dims[a_free.size() + i];
    if (da != bp.dims[i]) throw std::invalid_argument("contract: shared axis dimension mismatch");
    k *= da;
  }
  for (size_t i = 0; i < b_free.size(); ++i) n *= bp.dims[shared.size() + i];
  if (m * n > max_elements) throw BudgetError("contract: intermediate tensor exceeds the element budget");

  Tensor out;
  out.axes = a_free;
  out.axes.insert(out.axes.end(), b_free.begin(), b_free.end());
  for (size_t i = 0; i < a_free.size(); ++i) out.dims.push_back(ap.dims[i]);
  for (size_t i = 0; i < b_free.size(); ++i) out.dims.push_back(bp.dims[shared.size() + i]);
  out.data.resize(m * n);

  Eigen::Map<const RowMat> ma(ap.data.data(), m, k);
  Eigen::Map<const RowMat> mb(bp.data.data(), k, n);
  Eigen::Map<RowMat> mc(out.data.data(), m, n);
  mc.noalias() = ma * mb;
  return out;
}

Tensor outer(const Tensor& a, const Tensor& b, long max_elements) {
  for (int ax : a.axes)
    if (b.axis_position(ax) >= 0) throw std::invalid_argument("outer: operands share an axis");
  return contract(a, b, max_elements);
}

}  // namespace rtnlab
