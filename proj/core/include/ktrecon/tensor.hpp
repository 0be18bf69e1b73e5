#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ktrecon/errors.hpp"

namespace ktr {

using cplx = std::complex<double>;

enum class Axis : std::uint8_t {
  FE = 0,
  PE = 1,
  Coil = 2,
  Time = 3,
  Channel = 4,
  Generic = 5,
};

const char* axis_name(Axis a);

// Image/k-space domain of a volume. KSpace -> Hybrid -> Image transitions
// happen only through the encoding operators.
enum class Domain { KSpace, Hybrid, Image };

const char* domain_name(Domain d);

namespace detail {

std::size_t checked_element_count(std::span<const std::size_t> extents,
                                  std::size_t label_count);

std::vector<std::size_t> row_major_strides(std::span<const std::size_t> extents);

}  // namespace detail

// Dense n-dimensional array with labeled axes, row-major, last axis fastest.
// Solver math is always complex128; complex64 exists only as a storage
// encoding in the file format.
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  Tensor(std::vector<std::size_t> extents, std::vector<Axis> labels)
      : extents_(std::move(extents)),
        labels_(std::move(labels)),
        data_(detail::checked_element_count(extents_, labels_.size())),
        strides_(detail::row_major_strides(extents_)) {}

  Tensor(std::vector<std::size_t> extents, std::vector<Axis> labels,
         std::vector<T> data)
      : extents_(std::move(extents)),
        labels_(std::move(labels)),
        data_(std::move(data)),
        strides_(detail::row_major_strides(extents_)) {
    const std::size_t n = detail::checked_element_count(extents_, labels_.size());
    require(data_.size() == n, ErrorKind::Domain,
            "tensor data size does not match product of extents");
  }

  std::size_t rank() const { return extents_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<std::size_t>& extents() const { return extents_; }
  const std::vector<Axis>& labels() const { return labels_; }
  std::size_t extent(std::size_t dim) const { return extents_[dim]; }
  Axis label(std::size_t dim) const { return labels_[dim]; }
  std::size_t stride(std::size_t dim) const { return strides_[dim]; }

  std::optional<std::size_t> find_axis(Axis a) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == a) return i;
    return std::nullopt;
  }

  // Axis lookup that fails loudly; ops never silently reinterpret axes.
  std::size_t axis_dim(Axis a) const {
    auto d = find_axis(a);
    require(d.has_value(), ErrorKind::Domain,
            std::string("tensor has no ") + axis_name(a) + " axis");
    return *d;
  }

  std::size_t extent_of(Axis a) const { return extents_[axis_dim(a)]; }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  std::vector<T>& values() { return data_; }
  const std::vector<T>& values() const { return data_; }

  T& operator[](std::size_t flat) { return data_[flat]; }
  const T& operator[](std::size_t flat) const { return data_[flat]; }

  std::size_t offset(std::span<const std::size_t> idx) const {
    std::size_t off = 0;
    for (std::size_t d = 0; d < extents_.size(); ++d) off += idx[d] * strides_[d];
    return off;
  }

  template <typename... I>
  T& at(I... idx) {
    const std::size_t ii[] = {static_cast<std::size_t>(idx)...};
    return data_[offset(std::span<const std::size_t>(ii, sizeof...(idx)))];
  }

  template <typename... I>
  const T& at(I... idx) const {
    const std::size_t ii[] = {static_cast<std::size_t>(idx)...};
    return data_[offset(std::span<const std::size_t>(ii, sizeof...(idx)))];
  }

  bool same_shape(const Tensor& other) const {
    return extents_ == other.extents_ && labels_ == other.labels_;
  }

 private:
  std::vector<std::size_t> extents_;
  std::vector<Axis> labels_;
  std::vector<T> data_;
  std::vector<std::size_t> strides_;
};

using ComplexTensor = Tensor<cplx>;
using BoolTensor = Tensor<std::uint8_t>;
using RealTensor = Tensor<double>;

// Enumerates the 1D lines of `t` along dimension `dim`: fn(base_offset) is
// called once per line; line elements sit at base_offset + i * stride(dim).
template <typename T, typename Fn>
void for_each_line(const Tensor<T>& t, std::size_t dim, Fn&& fn) {
  const auto& ext = t.extents();
  std::size_t lines = 1;
  for (std::size_t d = 0; d < ext.size(); ++d)
    if (d != dim) lines *= ext[d];
  std::vector<std::size_t> idx(ext.size(), 0);
  for (std::size_t l = 0; l < lines; ++l) {
    std::size_t off = 0;
    for (std::size_t d = 0; d < ext.size(); ++d) off += idx[d] * t.stride(d);
    fn(off);
    for (std::size_t d = ext.size(); d-- > 0;) {
      if (d == dim) continue;
      if (++idx[d] < ext[d]) break;
      idx[d] = 0;
    }
  }
}

bool all_finite(const ComplexTensor& t);

// 3D k-t acquisition: (FE, PE, COIL, TIME) in KSpace/Hybrid domain,
// (FE, PE, TIME) once coil-combined to an image.
struct KTVolume {
  ComplexTensor tensor;
  Domain domain = Domain::KSpace;

  KTVolume() = default;
  KTVolume(ComplexTensor t, Domain d);

  std::size_t fe_extent() const { return tensor.extent_of(Axis::FE); }
  bool has_coil_axis() const { return tensor.find_axis(Axis::Coil).has_value(); }
};

// One FE row of a volume: (PE, COIL, TIME) k-t data or (PE, TIME) image.
struct KTSlice2D {
  ComplexTensor tensor;
  std::size_t row_index = 0;

  KTSlice2D() = default;
  KTSlice2D(ComplexTensor t, std::size_t row);
};

// After the FE inverse transform the FE rows are independent; KSpace input
// is rejected because its rows are still coupled.
std::vector<KTSlice2D> split_rows(const KTVolume& v);

// Inverse of split_rows; row_index values must cover 0..M-1 exactly once and
// govern placement regardless of input order.
KTVolume stitch_rows(const std::vector<KTSlice2D>& slices);

}  // namespace ktr
