#pragma once

#include <filesystem>
#include <variant>

#include "ktrecon/tensor.hpp"

namespace ktr {

// KTB container: "KTB1" magic, u16 version, u8 dtype (0=complex128,
// 1=complex64, 2=boolean byte), u8 ndim, ndim x u64 extents, ndim x u8 axis
// label codes, then a row-major payload with complex values interleaved
// (real, imaginary). All multi-byte integers little-endian. Round trips are
// bit-exact.
enum class StorageDtype : std::uint8_t {
  Complex128 = 0,
  Complex64 = 1,
  Boolean = 2,
};

void save_tensor(const ComplexTensor& t, const std::filesystem::path& path,
                 StorageDtype dtype = StorageDtype::Complex128);
void save_tensor(const BoolTensor& t, const std::filesystem::path& path);

using LoadedTensor = std::variant<ComplexTensor, BoolTensor>;

LoadedTensor load_tensor(const std::filesystem::path& path);

// Typed convenience wrappers; fail with a Format error on dtype mismatch.
ComplexTensor load_complex(const std::filesystem::path& path);
BoolTensor load_bool(const std::filesystem::path& path);

}  // namespace ktr
