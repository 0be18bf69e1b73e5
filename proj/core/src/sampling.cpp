#include "ktrecon/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "ktrecon/rng.hpp"
#include "ktrecon/tensor_io.hpp"

namespace ktr {

namespace {

// Variable-density profile parameters; frozen so that generated masks are
// reproducible artifacts.
constexpr double kDensityDecay = 2.0;   // d in (1 + |k-kc|/sigma)^-d
constexpr double kSigmaFraction = 8.0;  // sigma = n_pe / 8

constexpr double kGoldenConjugate = 0.6180339887498949;

}  // namespace

std::size_t MaskSpec::lines_per_frame() const {
  return std::size_t(std::llround(double(n_pe) / af));
}

std::size_t MaskSpec::center_lines() const {
  if (n_center > 0) return n_center;
  return std::max<std::size_t>(1, std::size_t(std::llround(double(n_pe) / 48.0)));
}

void MaskSpec::validate() const {
  require(n_pe >= 1 && n_time >= 1, ErrorKind::Config,
          "mask spec: extents must be positive");
  require(af >= 1.0, ErrorKind::Config,
          "mask spec: acceleration factor must be >= 1");
  const std::size_t budget = lines_per_frame();
  require(budget >= 1 && budget <= n_pe, ErrorKind::Config,
          "mask spec: per-frame budget out of range");
  require(budget >= center_lines(), ErrorKind::Config,
          "mask spec: budget " + std::to_string(budget) +
              " smaller than center-line count " +
              std::to_string(center_lines()));
}

namespace {

// The n_center central PE lines around kc = floor(n_pe/2), spreading
// symmetrically: kc, kc-1, kc+1, kc-2, ...
std::vector<std::size_t> center_line_indices(std::size_t n_pe, std::size_t n_center) {
  std::vector<std::size_t> out;
  const std::ptrdiff_t kc = std::ptrdiff_t(n_pe / 2);
  std::ptrdiff_t step = 0;
  while (out.size() < n_center) {
    std::ptrdiff_t k = kc + (step % 2 == 0 ? -(step + 1) / 2 : (step + 1) / 2);
    if (k >= 0 && k < std::ptrdiff_t(n_pe)) out.push_back(std::size_t(k));
    ++step;
  }
  std::sort(out.begin(), out.end());
  return out;
}

SamplingMask assemble(const MaskSpec& spec,
                      const std::vector<std::vector<std::size_t>>& frame_lines) {
  BoolTensor pattern({spec.n_pe, spec.n_time}, {Axis::PE, Axis::Time});
  for (std::size_t t = 0; t < spec.n_time; ++t)
    for (std::size_t k : frame_lines[t]) pattern.at(k, t) = 1;
  MaskMeta meta{spec.pattern, spec.af, spec.seed, spec.center_lines()};
  return SamplingMask(std::move(pattern), meta);
}

}  // namespace

SamplingMask gen_random_kt(const MaskSpec& spec) {
  spec.validate();
  const std::size_t budget = spec.lines_per_frame();
  const auto centers = center_line_indices(spec.n_pe, spec.center_lines());

  std::vector<std::vector<std::size_t>> frames(spec.n_time);
  for (std::size_t t = 0; t < spec.n_time; ++t) {
    std::vector<std::size_t>& lines = frames[t];
    lines = centers;
    std::vector<std::size_t> rest;
    rest.reserve(spec.n_pe - centers.size());
    for (std::size_t k = 0; k < spec.n_pe; ++k)
      if (!std::binary_search(centers.begin(), centers.end(), k))
        rest.push_back(k);

    // Partial Fisher-Yates over the non-center lines, stream (seed, frame).
    SplitMix64 rng(derive_seed(spec.seed, t));
    const std::size_t extra = budget - centers.size();
    for (std::size_t i = 0; i < extra; ++i) {
      const std::size_t j = i + std::size_t(rng.below(rest.size() - i));
      std::swap(rest[i], rest[j]);
      lines.push_back(rest[i]);
    }
  }
  return assemble(spec, frames);
}

SamplingMask gen_vista_like(const MaskSpec& spec) {
  spec.validate();
  const std::size_t budget = spec.lines_per_frame();
  const auto centers = center_line_indices(spec.n_pe, spec.center_lines());

  // Discrete CDF of the variable-density profile.
  const double kc = double(spec.n_pe / 2);
  const double sigma = double(spec.n_pe) / kSigmaFraction;
  std::vector<double> cdf(spec.n_pe);
  double total = 0.0;
  for (std::size_t k = 0; k < spec.n_pe; ++k) {
    total += std::pow(1.0 + std::abs(double(k) - kc) / sigma, -kDensityDecay);
    cdf[k] = total;
  }

  const double phase0 = SplitMix64(derive_seed(spec.seed, "vista-phase")).uniform01();

  std::vector<std::vector<std::size_t>> frames(spec.n_time);
  for (std::size_t t = 0; t < spec.n_time; ++t) {
    std::vector<std::size_t>& lines = frames[t];
    lines = centers;
    std::vector<bool> taken(spec.n_pe, false);
    for (std::size_t k : centers) taken[k] = true;

    const double frame_phase = phase0 + double(t) * kGoldenConjugate;
    std::size_t i = 0;
    // Low-discrepancy points through the inverse CDF; quantization can
    // collide, so keep drawing until the budget is met and fall back to a
    // deterministic density-ordered scan if the sequence stops producing
    // fresh lines.
    std::size_t misses = 0;
    while (lines.size() < budget && misses < 4 * spec.n_pe) {
      const double u =
          std::fmod((double(i) + 0.5) / double(budget) + frame_phase, 1.0);
      ++i;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u * total);
      const std::size_t k = std::size_t(it - cdf.begin()) == spec.n_pe
                                ? spec.n_pe - 1
                                : std::size_t(it - cdf.begin());
      if (taken[k]) {
        ++misses;
        continue;
      }
      taken[k] = true;
      lines.push_back(k);
    }
    if (lines.size() < budget) {
      std::vector<std::size_t> by_density(spec.n_pe);
      std::iota(by_density.begin(), by_density.end(), 0);
      std::stable_sort(by_density.begin(), by_density.end(),
                       [&](std::size_t a, std::size_t b) {
                         return std::abs(double(a) - kc) < std::abs(double(b) - kc);
                       });
      for (std::size_t k : by_density) {
        if (lines.size() == budget) break;
        if (!taken[k]) {
          taken[k] = true;
          lines.push_back(k);
        }
      }
    }
  }
  return assemble(spec, frames);
}

SamplingMask gen_mask(const MaskSpec& spec) {
  switch (spec.pattern) {
    case MaskPattern::RandomKT: return gen_random_kt(spec);
    case MaskPattern::VistaLike: return gen_vista_like(spec);
    default: fail(ErrorKind::Config, "gen_mask: unknown pattern");
  }
}

MaskAudit audit_mask(const SamplingMask& mask) {
  MaskAudit a;
  const std::size_t n_pe = mask.n_pe();
  const std::size_t n_t = mask.n_time();
  a.per_frame_counts.resize(n_t, 0);
  for (std::size_t t = 0; t < n_t; ++t)
    for (std::size_t p = 0; p < n_pe; ++p)
      if (mask.sampled(p, t)) ++a.per_frame_counts[t];

  const std::size_t total =
      std::accumulate(a.per_frame_counts.begin(), a.per_frame_counts.end(),
                      std::size_t(0));
  a.realized_af = double(n_pe * n_t) / double(total);

  if (n_t < 2) {
    a.temporal_overlap_fraction = 1.0;
    return a;
  }
  double overlap_sum = 0.0;
  for (std::size_t t = 0; t + 1 < n_t; ++t) {
    std::size_t inter = 0;
    for (std::size_t p = 0; p < n_pe; ++p)
      if (mask.sampled(p, t) && mask.sampled(p, t + 1)) ++inter;
    const double budget =
        0.5 * double(a.per_frame_counts[t] + a.per_frame_counts[t + 1]);
    overlap_sum += double(inter) / budget;
  }
  a.temporal_overlap_fraction = overlap_sum / double(n_t - 1);
  return a;
}

void save_mask(const SamplingMask& mask, const std::filesystem::path& path) {
  save_tensor(mask.pattern(), path);
  nlohmann::json j{{"pattern", pattern_name(mask.meta().pattern)},
                   {"af", mask.meta().af},
                   {"seed", mask.meta().seed},
                   {"n_center", mask.meta().n_center}};
  std::ofstream f(path.string() + ".json");
  require(f.good(), ErrorKind::Io,
          "cannot write mask sidecar: " + path.string() + ".json");
  f << j.dump(2) << "\n";
}

SamplingMask load_mask(const std::filesystem::path& path) {
  BoolTensor pattern = load_bool(path);
  MaskMeta meta;
  const std::filesystem::path sidecar = path.string() + ".json";
  if (std::filesystem::exists(sidecar)) {
    std::ifstream f(sidecar);
    nlohmann::json j;
    try {
      f >> j;
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Format, "bad mask sidecar: " + std::string(e.what()));
    }
    meta.pattern = pattern_from_name(j.value("pattern", "UNKNOWN"));
    meta.af = j.value("af", 0.0);
    meta.seed = j.value("seed", std::uint64_t(0));
    meta.n_center = j.value("n_center", std::size_t(0));
  }
  return SamplingMask(std::move(pattern), meta);
}

}  // namespace ktr
