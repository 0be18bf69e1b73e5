#include "ktrecon/tensor.hpp"

#include <algorithm>
#include <cmath>

namespace ktr {

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::FE: return "FE";
    case Axis::PE: return "PE";
    case Axis::Coil: return "COIL";
    case Axis::Time: return "TIME";
    case Axis::Channel: return "CHANNEL";
    case Axis::Generic: return "GENERIC";
  }
  return "?";
}

const char* domain_name(Domain d) {
  switch (d) {
    case Domain::KSpace: return "KSPACE";
    case Domain::Hybrid: return "HYBRID";
    case Domain::Image: return "IMAGE";
  }
  return "?";
}

namespace detail {

std::size_t checked_element_count(std::span<const std::size_t> extents,
                                  std::size_t label_count) {
  require(extents.size() == label_count, ErrorKind::Domain,
          "extents and axis labels must have equal length");
  std::size_t n = 1;
  for (std::size_t e : extents) {
    require(e > 0, ErrorKind::Domain, "axis extents must be positive");
    n *= e;
  }
  return n;
}

std::vector<std::size_t> row_major_strides(std::span<const std::size_t> extents) {
  std::vector<std::size_t> s(extents.size(), 1);
  for (std::size_t d = extents.size(); d-- > 1;)
    s[d - 1] = s[d] * extents[d];
  return s;
}

}  // namespace detail

bool all_finite(const ComplexTensor& t) {
  for (const cplx& v : t.values())
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

namespace {

void check_volume_layout(const ComplexTensor& t, Domain d) {
  const std::vector<Axis> kt = {Axis::FE, Axis::PE, Axis::Coil, Axis::Time};
  const std::vector<Axis> image = {Axis::FE, Axis::PE, Axis::Time};
  if (d == Domain::Image) {
    require(t.labels() == image || t.labels() == kt, ErrorKind::Domain,
            "IMAGE volume must have axes (FE, PE, TIME) or (FE, PE, COIL, TIME)");
  } else {
    require(t.labels() == kt, ErrorKind::Domain,
            "k-space/hybrid volume must have axes (FE, PE, COIL, TIME)");
  }
}

void check_slice_layout(const ComplexTensor& t) {
  const std::vector<Axis> kt = {Axis::PE, Axis::Coil, Axis::Time};
  const std::vector<Axis> image = {Axis::PE, Axis::Time};
  require(t.labels() == kt || t.labels() == image, ErrorKind::Domain,
          "slice must have axes (PE, COIL, TIME) or (PE, TIME)");
}

}  // namespace

KTVolume::KTVolume(ComplexTensor t, Domain d) : tensor(std::move(t)), domain(d) {
  check_volume_layout(tensor, domain);
}

KTSlice2D::KTSlice2D(ComplexTensor t, std::size_t row)
    : tensor(std::move(t)), row_index(row) {
  check_slice_layout(tensor);
}

std::vector<KTSlice2D> split_rows(const KTVolume& v) {
  require(v.domain != Domain::KSpace, ErrorKind::Domain,
          "split_rows: KSPACE volume rows are coupled along FE; hybridize first");
  const ComplexTensor& t = v.tensor;
  require(t.label(0) == Axis::FE, ErrorKind::Domain, "split_rows: FE must be axis 0");
  const std::size_t m = t.extent(0);
  const std::size_t row_size = t.size() / m;

  std::vector<std::size_t> sub_extents(t.extents().begin() + 1, t.extents().end());
  std::vector<Axis> sub_labels(t.labels().begin() + 1, t.labels().end());

  std::vector<KTSlice2D> out;
  out.reserve(m);
  for (std::size_t r = 0; r < m; ++r) {
    std::vector<cplx> data(t.data() + r * row_size, t.data() + (r + 1) * row_size);
    out.emplace_back(ComplexTensor(sub_extents, sub_labels, std::move(data)), r);
  }
  return out;
}

KTVolume stitch_rows(const std::vector<KTSlice2D>& slices) {
  require(!slices.empty(), ErrorKind::Domain, "stitch_rows: no slices");
  const std::size_t m = slices.size();
  const ComplexTensor& first = slices.front().tensor;
  std::vector<bool> seen(m, false);
  for (const KTSlice2D& s : slices) {
    require(s.tensor.same_shape(first), ErrorKind::Domain,
            "stitch_rows: slice extent/label mismatch");
    require(s.row_index < m, ErrorKind::Domain,
            "stitch_rows: row_index out of range");
    require(!seen[s.row_index], ErrorKind::Domain,
            "stitch_rows: duplicate row_index");
    seen[s.row_index] = true;
  }

  std::vector<std::size_t> extents;
  extents.push_back(m);
  extents.insert(extents.end(), first.extents().begin(), first.extents().end());
  std::vector<Axis> labels;
  labels.push_back(Axis::FE);
  labels.insert(labels.end(), first.labels().begin(), first.labels().end());

  ComplexTensor t(extents, labels);
  const std::size_t row_size = first.size();
  for (const KTSlice2D& s : slices)
    std::copy(s.tensor.data(), s.tensor.data() + row_size,
              t.data() + s.row_index * row_size);

  const Domain d = first.find_axis(Axis::Coil) ? Domain::Hybrid : Domain::Image;
  return KTVolume(std::move(t), d);
}

}  // namespace ktr
