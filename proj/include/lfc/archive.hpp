#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lfc/lmi_cert.hpp"

namespace lfc {

inline constexpr int kArchiveVersion = 1;

/// Named dense matrices (row-major text) plus string metadata.
///
///   lfc-matrix-archive 1
///   meta <key> <value>
///   matrix <name> <rows> <cols>
///   <row values...>
///   end
struct MatrixArchive {
  std::map<std::string, std::string> meta;
  std::vector<std::pair<std::string, Matrix>> matrices;

  const Matrix& get(const std::string& name) const;
  bool contains(const std::string& name) const;
};

void write_archive(std::ostream& out, const MatrixArchive& archive);
MatrixArchive read_archive(std::istream& in);

struct ArchivedCertificate {
  Certificate certificate;
  DelayBounds bounds;
  LmiOptions lmi;
};

MatrixArchive certificate_archive(const Certificate& cert, const DelayBounds& bounds, const LmiOptions& lmi);
ArchivedCertificate certificate_from_archive(const MatrixArchive& archive);

void save_certificate(const std::string& path, const Certificate& cert, const DelayBounds& bounds, const LmiOptions& lmi);
ArchivedCertificate load_certificate(const std::string& path);

}  // namespace lfc
