#include "ktrecon/operators.hpp"

#include <algorithm>
#include <cmath>

namespace ktr {

const char* pattern_name(MaskPattern p) {
  switch (p) {
    case MaskPattern::RandomKT: return "RANDOM_KT";
    case MaskPattern::VistaLike: return "VISTA_LIKE";
    case MaskPattern::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

MaskPattern pattern_from_name(const std::string& name) {
  if (name == "RANDOM_KT") return MaskPattern::RandomKT;
  if (name == "VISTA_LIKE") return MaskPattern::VistaLike;
  if (name == "UNKNOWN") return MaskPattern::Unknown;
  fail(ErrorKind::Config, "unknown mask pattern: " + name);
}

SamplingMask::SamplingMask(BoolTensor pattern, MaskMeta meta)
    : pattern_(std::move(pattern)), meta_(meta) {
  const std::vector<Axis> expected = {Axis::PE, Axis::Time};
  require(pattern_.labels() == expected, ErrorKind::Domain,
          "sampling mask must have axes (PE, TIME)");
  for (std::size_t t = 0; t < n_time(); ++t) {
    bool any = false;
    for (std::size_t p = 0; p < n_pe(); ++p) any = any || sampled(p, t);
    require(any, ErrorKind::Config,
            "sampling mask frame " + std::to_string(t) + " samples no PE line");
  }
}

std::size_t SamplingMask::total_samples() const {
  std::size_t n = 0;
  for (std::uint8_t v : pattern_.values()) n += v ? 1 : 0;
  return n;
}

namespace {

constexpr double kNormTol = 1e-12;

void check_maps_layout(const ComplexTensor& t) {
  const std::vector<Axis> slice = {Axis::PE, Axis::Coil};
  const std::vector<Axis> volume = {Axis::FE, Axis::PE, Axis::Coil};
  require(t.labels() == slice || t.labels() == volume, ErrorKind::Domain,
          "coil maps must have axes (PE, COIL) or (FE, PE, COIL)");
}

}  // namespace

CoilMaps::CoilMaps(ComplexTensor maps) : maps_(std::move(maps)) {
  check_maps_layout(maps_);
  const std::size_t j = maps_.extents().back();
  const std::size_t pixels = maps_.size() / j;
  const cplx* v = maps_.data();
  for (std::size_t p = 0; p < pixels; ++p) {
    double energy = 0.0;
    for (std::size_t c = 0; c < j; ++c) energy += std::norm(v[p * j + c]);
    require(std::abs(energy - 1.0) <= kNormTol, ErrorKind::Config,
            "unnormalized coil maps rejected (per-pixel energy " +
                std::to_string(energy) + ")");
  }
}

CoilMaps CoilMaps::normalized(ComplexTensor raw) {
  check_maps_layout(raw);
  const std::size_t j = raw.extents().back();
  const std::size_t pixels = raw.size() / j;
  cplx* v = raw.data();
  for (std::size_t p = 0; p < pixels; ++p) {
    double energy = 0.0;
    for (std::size_t c = 0; c < j; ++c) energy += std::norm(v[p * j + c]);
    require(energy > 0.0, ErrorKind::Config,
            "coil maps have zero energy at a pixel; cannot normalize");
    const double s = 1.0 / std::sqrt(energy);
    for (std::size_t c = 0; c < j; ++c) v[p * j + c] *= s;
  }
  return CoilMaps(std::move(raw), already_normalized_t{});
}

CoilMaps CoilMaps::row(std::size_t fe) const {
  require(maps_.rank() == 3, ErrorKind::Domain,
          "row(): coil maps have no FE axis");
  const std::size_t m = maps_.extent(0);
  require(fe < m, ErrorKind::Domain, "row(): FE index out of range");
  const std::size_t row_size = maps_.size() / m;
  std::vector<cplx> data(maps_.data() + fe * row_size,
                         maps_.data() + (fe + 1) * row_size);
  ComplexTensor t({maps_.extent(1), maps_.extent(2)}, {Axis::PE, Axis::Coil},
                  std::move(data));
  return CoilMaps(std::move(t), already_normalized_t{});
}

ComplexTensor apply_mask(const ComplexTensor& k, const SamplingMask& mask) {
  const std::size_t pe_dim = k.axis_dim(Axis::PE);
  const std::size_t t_dim = k.axis_dim(Axis::Time);
  require(k.extent(pe_dim) == mask.n_pe() && k.extent(t_dim) == mask.n_time(),
          ErrorKind::Domain, "apply_mask: mask extents do not match data");

  ComplexTensor out(k.extents(), k.labels());
  const std::size_t pe_stride = k.stride(pe_dim);
  const std::size_t t_stride = k.stride(t_dim);
  const std::size_t n_pe = mask.n_pe();
  const std::size_t n_t = mask.n_time();
  const cplx* in = k.data();
  cplx* dst = out.data();
  for (std::size_t i = 0; i < k.size(); ++i) {
    const std::size_t pe = (i / pe_stride) % n_pe;
    const std::size_t t = (i / t_stride) % n_t;
    dst[i] = mask.sampled(pe, t) ? in[i] : cplx(0.0, 0.0);
  }
  return out;
}

namespace {

// Shared pixel loop for expand/combine. Maps are the innermost COIL axis of
// either (PE, COIL) or (FE, PE, COIL); data TIME is its own fastest axis.
struct CoilGeometry {
  std::size_t pixels;  // FE*PE or PE
  std::size_t coils;
  std::size_t times;
};

CoilGeometry expand_geometry(const ComplexTensor& x, const CoilMaps& maps) {
  const ComplexTensor& m = maps.tensor();
  CoilGeometry g;
  g.coils = m.extents().back();
  g.times = x.extents().back();
  if (x.labels() == std::vector<Axis>{Axis::PE, Axis::Time}) {
    require(m.rank() == 2, ErrorKind::Domain,
            "coil encoding: slice data needs (PE, COIL) maps");
    require(m.extent(0) == x.extent(0), ErrorKind::Domain,
            "coil encoding: PE extent mismatch between image and maps");
    g.pixels = x.extent(0);
  } else if (x.labels() == std::vector<Axis>{Axis::FE, Axis::PE, Axis::Time}) {
    require(m.rank() == 3, ErrorKind::Domain,
            "coil encoding: volume data needs (FE, PE, COIL) maps");
    require(m.extent(0) == x.extent(0) && m.extent(1) == x.extent(1),
            ErrorKind::Domain,
            "coil encoding: spatial extent mismatch between image and maps");
    g.pixels = x.extent(0) * x.extent(1);
  } else {
    fail(ErrorKind::Domain,
         "coil encoding: image must have axes (PE, TIME) or (FE, PE, TIME)");
  }
  return g;
}

}  // namespace

ComplexTensor coil_expand(const ComplexTensor& x, const CoilMaps& maps) {
  const CoilGeometry g = expand_geometry(x, maps);
  std::vector<std::size_t> extents;
  std::vector<Axis> labels;
  if (x.rank() == 2) {
    extents = {x.extent(0), g.coils, g.times};
    labels = {Axis::PE, Axis::Coil, Axis::Time};
  } else {
    extents = {x.extent(0), x.extent(1), g.coils, g.times};
    labels = {Axis::FE, Axis::PE, Axis::Coil, Axis::Time};
  }
  ComplexTensor out(extents, labels);
  const cplx* img = x.data();
  const cplx* s = maps.tensor().data();
  cplx* dst = out.data();
  for (std::size_t p = 0; p < g.pixels; ++p)
    for (std::size_t c = 0; c < g.coils; ++c) {
      const cplx w = s[p * g.coils + c];
      for (std::size_t t = 0; t < g.times; ++t)
        dst[(p * g.coils + c) * g.times + t] = w * img[p * g.times + t];
    }
  return out;
}

ComplexTensor coil_combine(const ComplexTensor& y, const CoilMaps& maps) {
  std::vector<std::size_t> extents;
  std::vector<Axis> labels;
  if (y.labels() == std::vector<Axis>{Axis::PE, Axis::Coil, Axis::Time}) {
    extents = {y.extent(0), y.extent(2)};
    labels = {Axis::PE, Axis::Time};
  } else if (y.labels() ==
             std::vector<Axis>{Axis::FE, Axis::PE, Axis::Coil, Axis::Time}) {
    extents = {y.extent(0), y.extent(1), y.extent(3)};
    labels = {Axis::FE, Axis::PE, Axis::Time};
  } else {
    fail(ErrorKind::Domain,
         "coil_combine: data must have axes (PE, COIL, TIME) or (FE, PE, COIL, TIME)");
  }
  ComplexTensor out(extents, labels);
  const CoilGeometry g = expand_geometry(out, maps);
  require(g.coils == y.extents()[y.rank() - 2], ErrorKind::Domain,
          "coil_combine: coil count mismatch between data and maps");

  const cplx* in = y.data();
  const cplx* s = maps.tensor().data();
  cplx* img = out.data();
  for (std::size_t p = 0; p < g.pixels; ++p)
    for (std::size_t c = 0; c < g.coils; ++c) {
      const cplx w = std::conj(s[p * g.coils + c]);
      for (std::size_t t = 0; t < g.times; ++t)
        img[p * g.times + t] += w * in[(p * g.coils + c) * g.times + t];
    }
  return out;
}

ComplexTensor forward_A(const ComplexTensor& x, const CoilMaps& maps,
                        const SamplingMask& mask) {
  return apply_mask(fft1d(coil_expand(x, maps), Axis::PE), mask);
}

ComplexTensor adjoint_A(const ComplexTensor& z, const CoilMaps& maps,
                        const SamplingMask& mask) {
  return coil_combine(ifft1d(apply_mask(z, mask), Axis::PE), maps);
}

KTVolume hybridize(const KTVolume& y) {
  require(y.domain == Domain::KSpace, ErrorKind::Domain,
          "hybridize: expected a KSPACE volume, got " +
              std::string(domain_name(y.domain)));
  return KTVolume(ifft1d(y.tensor, Axis::FE), Domain::Hybrid);
}

KTVolume zero_filled(const KTVolume& y, const CoilMaps& maps,
                     const SamplingMask& mask) {
  const KTVolume z = hybridize(y);
  std::vector<KTSlice2D> rows = split_rows(z);
  std::vector<KTSlice2D> out;
  out.reserve(rows.size());
  for (const KTSlice2D& r : rows)
    out.emplace_back(adjoint_A(r.tensor, maps.row(r.row_index), mask),
                     r.row_index);
  return stitch_rows(out);
}

namespace {

ComplexTensor dc_combine_kspace(const ComplexTensor& z, const ComplexTensor& kb,
                                const ComplexTensor& kd,
                                const SamplingMask& mask, double mu1,
                                double mu2) {
  require(z.same_shape(kb) && z.same_shape(kd), ErrorKind::Domain,
          "dc_update: operand shape mismatch");
  const std::size_t pe = z.extent(0), j = z.extent(1), nt = z.extent(2);
  ComplexTensor out(z.extents(), z.labels());
  const double unsampled_scale = 1.0 / (mu1 + mu2);
  const double sampled_scale = 1.0 / (1.0 + mu1 + mu2);
  for (std::size_t p = 0; p < pe; ++p)
    for (std::size_t c = 0; c < j; ++c)
      for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t i = (p * j + c) * nt + t;
        const cplx reg = mu1 * kb[i] + mu2 * kd[i];
        out[i] = mask.sampled(p, t) ? (z[i] + reg) * sampled_scale
                                    : reg * unsampled_scale;
      }
  return out;
}

}  // namespace

ComplexTensor dc_update(const ComplexTensor& z, const ComplexTensor& b,
                        const ComplexTensor& d, const CoilMaps& maps,
                        const SamplingMask& mask, double mu1, double mu2) {
  require(mu1 + mu2 != 0.0, ErrorKind::Config, "dc_update: mu1 + mu2 == 0");
  const ComplexTensor kb = fft1d(coil_expand(b, maps), Axis::PE);
  const ComplexTensor kd = fft1d(coil_expand(d, maps), Axis::PE);
  const ComplexTensor k = dc_combine_kspace(z, kb, kd, mask, mu1, mu2);
  return coil_combine(ifft1d(k, Axis::PE), maps);
}

ComplexTensor dc_blend(const ComplexTensor& z, const ComplexTensor& x,
                       const CoilMaps& maps, const SamplingMask& mask,
                       double weight) {
  require(weight >= 0.0, ErrorKind::Config, "dc_blend: negative weight");
  const ComplexTensor k = fft1d(coil_expand(x, maps), Axis::PE);
  require(z.same_shape(k), ErrorKind::Domain, "dc_blend: operand shape mismatch");
  const std::size_t pe = z.extent(0), j = z.extent(1), nt = z.extent(2);
  ComplexTensor out(z.extents(), z.labels());
  const double s = 1.0 / (1.0 + weight);
  for (std::size_t p = 0; p < pe; ++p)
    for (std::size_t c = 0; c < j; ++c)
      for (std::size_t t = 0; t < nt; ++t) {
        const std::size_t i = (p * j + c) * nt + t;
        out[i] = mask.sampled(p, t) ? (z[i] + weight * k[i]) * s : k[i];
      }
  return out;
}

}  // namespace ktr
