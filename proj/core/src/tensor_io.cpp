#include "ktrecon/tensor_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

namespace ktr {

namespace {

constexpr char kMagic[4] = {'K', 'T', 'B', '1'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(char(v & 0xff));
  out.push_back(char((v >> 8) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

void put_f32(std::string& out, float v) {
  const auto u = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) out.push_back(char((u >> (8 * i)) & 0xff));
}

std::string encode_header(StorageDtype dtype, std::span<const std::size_t> extents,
                          std::span<const Axis> labels) {
  std::string h;
  h.append(kMagic, 4);
  put_u16(h, kVersion);
  h.push_back(char(static_cast<std::uint8_t>(dtype)));
  h.push_back(char(static_cast<std::uint8_t>(extents.size())));
  for (std::size_t e : extents) put_u64(h, e);
  for (Axis a : labels) h.push_back(char(static_cast<std::uint8_t>(a)));
  return h;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), ErrorKind::Io, "cannot open for writing: " + path.string());
  f.write(bytes.data(), std::streamsize(bytes.size()));
  f.flush();
  require(f.good(), ErrorKind::Io, "short write: " + path.string());
}

struct Reader {
  const std::string& buf;
  std::size_t pos = 0;
  std::string name;

  void need(std::size_t n) {
    require(pos + n <= buf.size(), ErrorKind::Format,
            "truncated KTB file: " + name);
  }
  std::uint8_t u8() {
    need(1);
    return std::uint8_t(buf[pos++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = std::uint16_t(std::uint8_t(buf[pos])) |
                      std::uint16_t(std::uint8_t(buf[pos + 1])) << 8;
    pos += 2;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= std::uint64_t(std::uint8_t(buf[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  float f32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= std::uint32_t(std::uint8_t(buf[pos + i])) << (8 * i);
    pos += 4;
    return std::bit_cast<float>(v);
  }
};

}  // namespace

void save_tensor(const ComplexTensor& t, const std::filesystem::path& path,
                 StorageDtype dtype) {
  require(dtype != StorageDtype::Boolean, ErrorKind::Config,
          "save_tensor: complex tensor cannot use boolean storage");
  require(all_finite(t), ErrorKind::Numeric,
          "save_tensor: non-finite value present");
  std::string bytes = encode_header(dtype, t.extents(), t.labels());
  bytes.reserve(bytes.size() +
                t.size() * (dtype == StorageDtype::Complex128 ? 16 : 8));
  for (const cplx& v : t.values()) {
    if (dtype == StorageDtype::Complex128) {
      put_f64(bytes, v.real());
      put_f64(bytes, v.imag());
    } else {
      put_f32(bytes, float(v.real()));
      put_f32(bytes, float(v.imag()));
    }
  }
  write_file(path, bytes);
}

void save_tensor(const BoolTensor& t, const std::filesystem::path& path) {
  std::string bytes = encode_header(StorageDtype::Boolean, t.extents(), t.labels());
  for (std::uint8_t v : t.values()) bytes.push_back(char(v ? 1 : 0));
  write_file(path, bytes);
}

LoadedTensor load_tensor(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), ErrorKind::Io, "cannot open: " + path.string());
  std::string buf((std::istreambuf_iterator<char>(f)),
                  std::istreambuf_iterator<char>());

  Reader r{buf, 0, path.string()};
  r.need(4);
  require(std::memcmp(buf.data(), kMagic, 4) == 0, ErrorKind::Format,
          "bad magic (not a KTB file): " + path.string());
  r.pos = 4;
  const std::uint16_t version = r.u16();
  require(version == kVersion, ErrorKind::Format,
          "unsupported KTB version " + std::to_string(version) + ": " +
              path.string());
  const std::uint8_t dtype_code = r.u8();
  require(dtype_code <= 2, ErrorKind::Format,
          "unknown dtype code: " + path.string());
  const auto dtype = static_cast<StorageDtype>(dtype_code);
  const std::uint8_t ndim = r.u8();

  std::vector<std::size_t> extents(ndim);
  for (auto& e : extents) e = std::size_t(r.u64());
  std::vector<Axis> labels(ndim);
  for (auto& a : labels) {
    const std::uint8_t code = r.u8();
    require(code <= 5, ErrorKind::Format,
            "unknown axis label code: " + path.string());
    a = static_cast<Axis>(code);
  }

  std::size_t n = 1;
  for (std::size_t e : extents) n *= e;
  const std::size_t elem_size =
      dtype == StorageDtype::Complex128 ? 16 : dtype == StorageDtype::Complex64 ? 8 : 1;
  require(buf.size() - r.pos == n * elem_size, ErrorKind::Format,
          buf.size() - r.pos < n * elem_size
              ? "truncated KTB payload: " + path.string()
              : "oversized KTB payload: " + path.string());

  if (dtype == StorageDtype::Boolean) {
    std::vector<std::uint8_t> data(n);
    for (auto& v : data) v = r.u8();
    return BoolTensor(std::move(extents), std::move(labels), std::move(data));
  }

  std::vector<cplx> data(n);
  for (auto& v : data) {
    if (dtype == StorageDtype::Complex128) {
      const double re = r.f64();
      const double im = r.f64();
      v = cplx(re, im);
    } else {
      const float re = r.f32();
      const float im = r.f32();
      v = cplx(double(re), double(im));
    }
  }
  return ComplexTensor(std::move(extents), std::move(labels), std::move(data));
}

ComplexTensor load_complex(const std::filesystem::path& path) {
  LoadedTensor t = load_tensor(path);
  require(std::holds_alternative<ComplexTensor>(t), ErrorKind::Format,
          "expected complex tensor: " + path.string());
  return std::get<ComplexTensor>(std::move(t));
}

BoolTensor load_bool(const std::filesystem::path& path) {
  LoadedTensor t = load_tensor(path);
  require(std::holds_alternative<BoolTensor>(t), ErrorKind::Format,
          "expected boolean tensor: " + path.string());
  return std::get<BoolTensor>(std::move(t));
}

}  // namespace ktr
