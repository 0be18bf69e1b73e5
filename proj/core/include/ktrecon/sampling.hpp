#pragma once

#include <filesystem>

#include "ktrecon/operators.hpp"

namespace ktr {

// Specification of a (PE, TIME) undersampling pattern. The per-frame line
// budget is round(n_pe / af); af == 1 yields a fully sampled mask.
struct MaskSpec {
  std::size_t n_pe = 0;
  std::size_t n_time = 0;
  double af = 1.0;
  MaskPattern pattern = MaskPattern::RandomKT;
  std::uint64_t seed = 0;
  // 0 means "default": max(1, round(n_pe / 48)).
  std::size_t n_center = 0;

  std::size_t lines_per_frame() const;
  std::size_t center_lines() const;
  void validate() const;
};

// Per frame: the center lines plus (budget - n_center) lines drawn uniformly
// without replacement, independently per frame from a SplitMix64 stream
// seeded by (seed, frame).
SamplingMask gen_random_kt(const MaskSpec& spec);

// Variable-density approximation of an incoherent spatiotemporal pattern:
// per frame the budget lines come from inverting p(k) ~ (1 + |k-kc|/sigma)^-d
// at low-discrepancy points with a golden-ratio phase offset per frame.
SamplingMask gen_vista_like(const MaskSpec& spec);

SamplingMask gen_mask(const MaskSpec& spec);

struct MaskAudit {
  double realized_af = 0.0;
  std::vector<std::size_t> per_frame_counts;
  // Mean over adjacent-frame pairs of |intersection| / mean(count, count').
  double temporal_overlap_fraction = 0.0;
};

MaskAudit audit_mask(const SamplingMask& mask);

// Boolean KTB tensor plus a JSON sidecar {pattern, af, seed, n_center}
// at <path>.json.
void save_mask(const SamplingMask& mask, const std::filesystem::path& path);
SamplingMask load_mask(const std::filesystem::path& path);

}  // namespace ktr
