#pragma once

#include <filesystem>

#include "ktrecon/operators.hpp"

namespace ktr {

// One pulsating ellipse. Geometry lives in normalized [-1, 1]^2 coordinates
// (FE is the first/vertical axis); intensities add where features overlap.
struct Ellipse {
  double center_fe = 0.0;
  double center_pe = 0.0;
  double semi_fe = 0.5;
  double semi_pe = 0.5;
  cplx intensity{1.0, 0.0};
  double pulsation = 0.0;  // fractional semi-axis modulation amplitude
  double phase = 0.0;      // temporal phase offset in radians
};

struct PhantomSpec {
  std::size_t m = 32;  // FE
  std::size_t n = 32;  // PE
  std::size_t t = 8;   // frames
  std::size_t j = 4;   // coils
  std::vector<Ellipse> features;
  cplx background{0.0, 0.0};
  double noise_std = 0.0;  // relative to peak k-space magnitude
  std::uint64_t seed = 0;

  void validate() const;

  // A small dynamic cardiac-like scene: static body, pulsating chambers,
  // a bright moving feature.
  static PhantomSpec desk_default();
};

PhantomSpec phantom_spec_from_json(const std::string& text);
std::string phantom_spec_to_json(const PhantomSpec& spec);
PhantomSpec load_phantom_spec(const std::filesystem::path& path);

// Frame tau renders each ellipse with semi-axes scaled by
// 1 + pulsation * sin(2 pi tau / T + phase). Deterministic in the spec.
KTVolume gen_phantom(const PhantomSpec& spec);

// j smooth Gaussian-lobe profiles centered at distinct border positions with
// a smooth linear phase, jointly normalized so sum_j |s_j|^2 == 1 per pixel.
CoilMaps gen_coil_maps(std::size_t m, std::size_t n, std::size_t j,
                       std::uint64_t seed);

// Y = U F_2D S X plus complex Gaussian noise at sampled positions only;
// noise_std is relative to the peak noiseless k-space magnitude.
KTVolume simulate_acquisition(const KTVolume& image, const CoilMaps& maps,
                              const SamplingMask& mask, double noise_std,
                              std::uint64_t seed);

}  // namespace ktr
