#pragma once

#include <cstdint>
#include <string>

#include "ktrecon/tensor.hpp"

namespace ktr {

// Centered unitary 1D DFT along a labeled axis: DC at floor(n/2), scale
// 1/sqrt(n) in both directions, so ifft1d(fft1d(x)) == x and A*A == I under
// full sampling. Odd lengths supported.
ComplexTensor fft1d(const ComplexTensor& t, Axis axis);
ComplexTensor ifft1d(const ComplexTensor& t, Axis axis);

enum class MaskPattern { RandomKT, VistaLike, Unknown };

const char* pattern_name(MaskPattern p);
MaskPattern pattern_from_name(const std::string& name);

struct MaskMeta {
  MaskPattern pattern = MaskPattern::Unknown;
  double af = 1.0;
  std::uint64_t seed = 0;
  std::size_t n_center = 0;
};

// Boolean (PE, TIME) undersampling pattern; the FE direction is implicitly
// fully sampled. Every frame must sample at least one PE line.
class SamplingMask {
 public:
  SamplingMask(BoolTensor pattern, MaskMeta meta);

  const BoolTensor& pattern() const { return pattern_; }
  const MaskMeta& meta() const { return meta_; }
  std::size_t n_pe() const { return pattern_.extent(0); }
  std::size_t n_time() const { return pattern_.extent(1); }
  bool sampled(std::size_t pe, std::size_t t) const {
    return pattern_.at(pe, t) != 0;
  }
  std::size_t total_samples() const;

 private:
  BoolTensor pattern_;
  MaskMeta meta_;
};

// Per-coil complex sensitivities with per-pixel normalization
// sum_j |s_j|^2 == 1, axes (PE, COIL) or (FE, PE, COIL).
class CoilMaps {
 public:
  // Validates normalization to 1e-12; rejects unnormalized maps.
  explicit CoilMaps(ComplexTensor maps);

  // Scales each pixel to unit energy (the load-time path for raw maps).
  static CoilMaps normalized(ComplexTensor raw);

  const ComplexTensor& tensor() const { return maps_; }
  std::size_t n_coils() const { return maps_.extent_of(Axis::Coil); }

  // The (PE, COIL) maps of one FE row.
  CoilMaps row(std::size_t fe) const;

 private:
  struct already_normalized_t {};
  CoilMaps(ComplexTensor maps, already_normalized_t) : maps_(std::move(maps)) {}

  ComplexTensor maps_;
};

// Zeroes unsampled (PE, TIME) positions, broadcasting over FE and COIL.
ComplexTensor apply_mask(const ComplexTensor& k, const SamplingMask& mask);

// S and S*: pixelwise sensitivity encoding and its adjoint. Slice form maps
// (PE, TIME) <-> (PE, COIL, TIME); volume form (FE, PE, TIME) <->
// (FE, PE, COIL, TIME).
ComplexTensor coil_expand(const ComplexTensor& x, const CoilMaps& maps);
ComplexTensor coil_combine(const ComplexTensor& y, const CoilMaps& maps);

// A = U F_PE S on one 2D slice, and its adjoint.
ComplexTensor forward_A(const ComplexTensor& x, const CoilMaps& maps,
                        const SamplingMask& mask);
ComplexTensor adjoint_A(const ComplexTensor& z, const CoilMaps& maps,
                        const SamplingMask& mask);

// Z = F_FE* Y: the FE inverse transform that decouples the rows.
KTVolume hybridize(const KTVolume& y);

// Zero-filled reconstruction of a whole acquisition: hybridize, per-row
// adjoint, stitch.
KTVolume zero_filled(const KTVolume& y, const CoilMaps& maps,
                     const SamplingMask& mask);

// Data-consistency update shared by the classical solver and the network:
// in coil k-space, unsampled positions become
// (mu1 F S b + mu2 F S d) / (mu1 + mu2) and sampled positions
// (z + mu1 F S b + mu2 F S d) / (1 + mu1 + mu2).
ComplexTensor dc_update(const ComplexTensor& z, const ComplexTensor& b,
                        const ComplexTensor& d, const CoilMaps& maps,
                        const SamplingMask& mask, double mu1, double mu2);

// Single-weight blend used by the spatial-constraint post-processing:
// sampled positions (z + w k) / (1 + w), unsampled positions k.
ComplexTensor dc_blend(const ComplexTensor& z, const ComplexTensor& x,
                       const CoilMaps& maps, const SamplingMask& mask,
                       double weight);

}  // namespace ktr
