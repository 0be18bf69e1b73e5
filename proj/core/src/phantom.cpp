#include "ktrecon/phantom.hpp"

#include <cmath>
#include <fstream>
#include <numbers>

#include <nlohmann/json.hpp>

#include "ktrecon/rng.hpp"

namespace ktr {

void PhantomSpec::validate() const {
  require(m >= 4 && n >= 4, ErrorKind::Config, "phantom: extents must be >= 4");
  require(t >= 1 && j >= 1, ErrorKind::Config,
          "phantom: frame and coil counts must be positive");
  require(noise_std >= 0.0, ErrorKind::Config, "phantom: negative noise level");
  for (const Ellipse& e : features) {
    require(e.semi_fe > 0.0 && e.semi_pe > 0.0, ErrorKind::Config,
            "phantom: degenerate ellipse (non-positive semi-axis)");
    require(std::abs(e.pulsation) < 1.0, ErrorKind::Config,
            "phantom: pulsation amplitude would collapse an ellipse");
  }
}

PhantomSpec PhantomSpec::desk_default() {
  PhantomSpec s;
  s.background = cplx(0.02, 0.0);
  s.features = {
      // outer body, static
      {0.0, 0.0, 0.82, 0.78, cplx(0.35, 0.05), 0.0, 0.0},
      // "myocardium" ring stand-in, slow pulsation
      {-0.05, 0.0, 0.40, 0.38, cplx(0.45, -0.08), 0.06, 0.0},
      // "ventricle", stronger pulsation, out of phase
      {-0.05, 0.02, 0.22, 0.20, cplx(0.85, 0.10), 0.14, 1.3},
      // small bright feature with its own rhythm
      {0.30, -0.35, 0.10, 0.09, cplx(0.95, 0.00), 0.10, 2.5},
      // low-contrast lesion-like blob
      {0.25, 0.38, 0.12, 0.10, cplx(-0.20, 0.05), 0.08, 4.0},
  };
  return s;
}

namespace {

cplx json_complex(const nlohmann::json& v) {
  if (v.is_number()) return cplx(v.get<double>(), 0.0);
  require(v.is_array() && v.size() == 2, ErrorKind::Format,
          "phantom spec: complex values are numbers or [re, im] pairs");
  return cplx(v[0].get<double>(), v[1].get<double>());
}

nlohmann::json complex_json(const cplx& v) {
  return nlohmann::json::array({v.real(), v.imag()});
}

}  // namespace

PhantomSpec phantom_spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, "phantom spec: " + std::string(e.what()));
  }
  PhantomSpec s;
  try {
    s.m = j.value("m", s.m);
    s.n = j.value("n", s.n);
    s.t = j.value("t", s.t);
    s.j = j.value("j", s.j);
    s.noise_std = j.value("noise_std", s.noise_std);
    s.seed = j.value("seed", s.seed);
    if (j.contains("background")) s.background = json_complex(j["background"]);
    if (j.contains("features")) {
      s.features.clear();
      for (const auto& f : j["features"]) {
        Ellipse e;
        e.center_fe = f.at("center").at(0).get<double>();
        e.center_pe = f.at("center").at(1).get<double>();
        e.semi_fe = f.at("semi_axes").at(0).get<double>();
        e.semi_pe = f.at("semi_axes").at(1).get<double>();
        e.intensity = json_complex(f.at("intensity"));
        e.pulsation = f.value("pulsation", 0.0);
        e.phase = f.value("phase", 0.0);
        s.features.push_back(e);
      }
    } else {
      s.features = desk_default().features;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Format, "phantom spec: " + std::string(e.what()));
  }
  s.validate();
  return s;
}

std::string phantom_spec_to_json(const PhantomSpec& s) {
  nlohmann::json j{{"m", s.m},           {"n", s.n},
                   {"t", s.t},           {"j", s.j},
                   {"noise_std", s.noise_std}, {"seed", s.seed},
                   {"background", complex_json(s.background)}};
  j["features"] = nlohmann::json::array();
  for (const Ellipse& e : s.features) {
    j["features"].push_back(
        {{"center", {e.center_fe, e.center_pe}},
         {"semi_axes", {e.semi_fe, e.semi_pe}},
         {"intensity", complex_json(e.intensity)},
         {"pulsation", e.pulsation},
         {"phase", e.phase}});
  }
  return j.dump(2);
}

PhantomSpec load_phantom_spec(const std::filesystem::path& path) {
  std::ifstream f(path);
  require(f.good(), ErrorKind::Io, "cannot open: " + path.string());
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return phantom_spec_from_json(text);
}

KTVolume gen_phantom(const PhantomSpec& spec) {
  spec.validate();
  ComplexTensor img({spec.m, spec.n, spec.t}, {Axis::FE, Axis::PE, Axis::Time});
  cplx* v = img.data();
  for (std::size_t tau = 0; tau < spec.t; ++tau) {
    for (std::size_t i = 0; i < spec.m; ++i) {
      const double u = -1.0 + 2.0 * (double(i) + 0.5) / double(spec.m);
      for (std::size_t k = 0; k < spec.n; ++k) {
        const double w = -1.0 + 2.0 * (double(k) + 0.5) / double(spec.n);
        cplx val = spec.background;
        for (const Ellipse& e : spec.features) {
          const double scale =
              1.0 + e.pulsation * std::sin(2.0 * std::numbers::pi *
                                               double(tau) / double(spec.t) +
                                           e.phase);
          const double du = (u - e.center_fe) / (e.semi_fe * scale);
          const double dw = (w - e.center_pe) / (e.semi_pe * scale);
          if (du * du + dw * dw <= 1.0) val += e.intensity;
        }
        v[(i * spec.n + k) * spec.t + tau] = val;
      }
    }
  }
  return KTVolume(std::move(img), Domain::Image);
}

CoilMaps gen_coil_maps(std::size_t m, std::size_t n, std::size_t j,
                       std::uint64_t seed) {
  require(j >= 1, ErrorKind::Config, "gen_coil_maps: need at least one coil");
  SplitMix64 rng(derive_seed(seed, "coil-maps"));

  struct Lobe {
    double cu, cw, width, pu, pw, p0;
  };
  std::vector<Lobe> lobes(j);
  for (std::size_t c = 0; c < j; ++c) {
    // distinct border positions, jittered a little per seed
    const double angle = 2.0 * std::numbers::pi *
                             (double(c) + rng.uniform(-0.15, 0.15)) / double(j);
    lobes[c].cu = 1.15 * std::cos(angle);
    lobes[c].cw = 1.15 * std::sin(angle);
    lobes[c].width = 0.85 * rng.uniform(0.9, 1.1);
    lobes[c].pu = rng.uniform(-0.6, 0.6);
    lobes[c].pw = rng.uniform(-0.6, 0.6);
    lobes[c].p0 = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  ComplexTensor maps({m, n, j}, {Axis::FE, Axis::PE, Axis::Coil});
  cplx* v = maps.data();
  for (std::size_t i = 0; i < m; ++i) {
    const double u = -1.0 + 2.0 * (double(i) + 0.5) / double(m);
    for (std::size_t k = 0; k < n; ++k) {
      const double w = -1.0 + 2.0 * (double(k) + 0.5) / double(n);
      for (std::size_t c = 0; c < j; ++c) {
        const Lobe& lb = lobes[c];
        const double r2 = (u - lb.cu) * (u - lb.cu) + (w - lb.cw) * (w - lb.cw);
        const double mag = std::exp(-r2 / (2.0 * lb.width * lb.width));
        const double ph = lb.p0 + lb.pu * u + lb.pw * w;
        v[(i * n + k) * j + c] = std::polar(mag, ph);
      }
    }
  }
  return CoilMaps::normalized(std::move(maps));
}

KTVolume simulate_acquisition(const KTVolume& image, const CoilMaps& maps,
                              const SamplingMask& mask, double noise_std,
                              std::uint64_t seed) {
  require(image.domain == Domain::Image, ErrorKind::Domain,
          "simulate_acquisition: expected an IMAGE volume");
  require(noise_std >= 0.0, ErrorKind::Config,
          "simulate_acquisition: negative noise level");

  ComplexTensor k =
      fft1d(fft1d(coil_expand(image.tensor, maps), Axis::FE), Axis::PE);

  if (noise_std > 0.0) {
    double peak = 0.0;
    for (const cplx& v : k.values()) peak = std::max(peak, std::abs(v));
    const double sigma = noise_std * peak / std::sqrt(2.0);  // per component
    const std::size_t m = k.extent(0), n = k.extent(1), j = k.extent(2),
                      nt = k.extent(3);
    const std::uint64_t noise_seed = derive_seed(seed, "acquisition-noise");
    cplx* v = k.data();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t c = 0; c < j; ++c)
          for (std::size_t t = 0; t < nt; ++t) {
            if (!mask.sampled(p, t)) continue;
            const std::size_t flat = ((i * n + p) * j + c) * nt + t;
            // position-keyed stream: deterministic and order-independent
            SplitMix64 g(derive_seed(noise_seed, flat));
            const double re = g.gaussian();
            const double im = g.gaussian();
            v[flat] += cplx(sigma * re, sigma * im);
          }
  }

  return KTVolume(apply_mask(k, mask), Domain::KSpace);
}

}  // namespace ktr
