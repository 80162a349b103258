#pragma once

#include "latbound/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace latbound {

// Binary matrix file: 16-byte header then column-major payload, little endian.
//   bytes 0-3   magic "LBMX"
//   bytes 4-7   uint32 element kind (1 = float64, 2 = complex128 as re,im pairs)
//   bytes 8-15  uint64 dimension D (matrix is D x D)
enum class ElementKind : std::uint32_t { Real64 = 1, Complex128 = 2 };

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m);
void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m);
Eigen::MatrixXcd read_matrix(const std::filesystem::path& path);

// Writes `content` to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

std::string spectrum_to_json(const Spectrum& s, bool with_vectors);
Spectrum spectrum_from_json(const std::string& text);

}  // namespace latbound
