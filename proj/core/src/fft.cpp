#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "ktrecon/operators.hpp"

namespace ktr {

namespace {

// FFTW planning is not thread-safe; executing a plan on distinct buffers is.
// Plans use FFTW_ESTIMATE so results are deterministic across runs.
class PlanCache {
 public:
  fftw_plan get(int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    fftw_complex* buf = fftw_alloc_complex(std::size_t(n));
    fftw_plan p = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
    fftw_free(buf);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mu_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

struct Scratch {
  fftw_complex* buf;
  explicit Scratch(std::size_t n) : buf(fftw_alloc_complex(n)) {}
  ~Scratch() { fftw_free(buf); }
  Scratch(const Scratch&) = delete;
  Scratch& operator=(const Scratch&) = delete;
};

// Centered transform: out = fftshift(FFT(ifftshift(line))) / sqrt(n),
// with DC at floor(n/2). fftshift and ifftshift differ for odd n.
ComplexTensor transform(const ComplexTensor& t, Axis axis, int sign) {
  const std::size_t dim = t.axis_dim(axis);
  const std::size_t n = t.extent(dim);
  const std::size_t stride = t.stride(dim);
  const std::size_t c = n / 2;
  const double scale = 1.0 / std::sqrt(double(n));

  ComplexTensor out(t.extents(), t.labels());
  if (n == 1) {
    std::copy(t.data(), t.data() + t.size(), out.data());
    return out;
  }

  fftw_plan plan = plan_cache().get(int(n), sign);
  Scratch scratch(n);
  const cplx* in = t.data();
  cplx* dst = out.data();

  for_each_line(t, dim, [&](std::size_t base) {
    // gather with ifftshift: element c of the line lands at scratch[0]
    for (std::size_t i = 0; i < n; ++i) {
      const cplx v = in[base + ((i + c) % n) * stride];
      scratch.buf[i][0] = v.real();
      scratch.buf[i][1] = v.imag();
    }
    fftw_execute_dft(plan, scratch.buf, scratch.buf);
    // scatter with fftshift and unitary scale
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t p = (k + c) % n;
      dst[base + p * stride] =
          cplx(scratch.buf[k][0] * scale, scratch.buf[k][1] * scale);
    }
  });
  return out;
}

}  // namespace

ComplexTensor fft1d(const ComplexTensor& t, Axis axis) {
  return transform(t, axis, FFTW_FORWARD);
}

ComplexTensor ifft1d(const ComplexTensor& t, Axis axis) {
  return transform(t, axis, FFTW_BACKWARD);
}

}  // namespace ktr
