#include "lfc/archive.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lfc/error.hpp"
#include "lfc/io_format.hpp"

namespace lfc {

const Matrix& MatrixArchive::get(const std::string& name) const {
  for (const auto& [n, m] : matrices)
    if (n == name) return m;
  throw ValidationError("archive has no matrix named " + name);
}

bool MatrixArchive::contains(const std::string& name) const {
  for (const auto& entry : matrices)
    if (entry.first == name) return true;
  return false;
}

void write_archive(std::ostream& out, const MatrixArchive& archive) {
  out << "lfc-matrix-archive " << kArchiveVersion << '\n';
  for (const auto& [k, v] : archive.meta) out << "meta " << k << ' ' << v << '\n';
  for (const auto& [name, m] : archive.matrices) {
    out << "matrix " << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_double(m(i, j));
      out << '\n';
    }
  }
  out << "end\n";
}

namespace {

bool parse_double(const std::string& token, double& out) {
  const auto res = std::from_chars(token.data(), token.data() + token.size(), out);
  return res.ec == std::errc() && res.ptr == token.data() + token.size();
}

}  // namespace

MatrixArchive read_archive(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "lfc-matrix-archive") throw ValidationError("not a matrix archive");
  if (version != kArchiveVersion) throw ValidationError("unsupported archive version " + std::to_string(version));
  MatrixArchive a;
  std::string tag;
  while (in >> tag) {
    if (tag == "end") return a;
    if (tag == "meta") {
      std::string key, value;
      if (!(in >> key >> value)) throw ValidationError("truncated archive metadata");
      a.meta[key] = value;
    } else if (tag == "matrix") {
      std::string name;
      Eigen::Index rows = 0, cols = 0;
      if (!(in >> name >> rows >> cols) || rows < 0 || cols < 0) throw ValidationError("bad matrix header in archive");
      Matrix m(rows, cols);
      for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) {
          std::string token;
          if (!(in >> token)) throw ValidationError("truncated matrix " + name);
          if (!parse_double(token, m(i, j))) throw ValidationError("bad number '" + token + "' in matrix " + name);
        }
      if (a.contains(name)) throw ValidationError("duplicate matrix " + name + " in archive");
      a.matrices.emplace_back(name, std::move(m));
    } else {
      throw ValidationError("unexpected token '" + tag + "' in archive");
    }
  }
  throw ValidationError("archive is missing its end marker");
}

namespace {

double meta_number(const MatrixArchive& a, const std::string& key) {
  const auto it = a.meta.find(key);
  if (it == a.meta.end()) throw ValidationError("archive metadata lacks " + key);
  double v = 0.0;
  if (!parse_double(it->second, v)) throw ValidationError("archive metadata " + key + " is not a number");
  return v;
}

std::size_t meta_count(const MatrixArchive& a, const std::string& key) {
  const double v = meta_number(a, key);
  if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) throw ValidationError("archive metadata " + key + " is not a count");
  return static_cast<std::size_t>(v);
}

}  // namespace

MatrixArchive certificate_archive(const Certificate& c, const DelayBounds& b, const LmiOptions& lmi) {
  MatrixArchive a;
  a.meta["kind"] = "certificate";
  a.meta["tau"] = format_double(b.tau);
  a.meta["d_pin"] = format_double(b.d_pin);
  a.meta["d_follower"] = format_double(b.d_follower);
  a.meta["margin"] = format_double(lmi.margin);
  a.meta["third_lmi"] = to_string(lmi.third);
  a.meta["pin_channels"] = std::to_string(c.Q.size());
  a.meta["follower_channels"] = std::to_string(c.Qbar.size());
  a.matrices.emplace_back("P", c.P);
  auto family = [&](const std::vector<Matrix>& fam, const std::string& name) {
    for (std::size_t k = 0; k < fam.size(); ++k) a.matrices.emplace_back(name + std::to_string(k + 1), fam[k]);
  };
  family(c.Q, "Q");
  family(c.Qbar, "Qbar");
  family(c.R, "R");
  family(c.Rbar, "Rbar");
  return a;
}

ArchivedCertificate certificate_from_archive(const MatrixArchive& a) {
  const auto kind = a.meta.find("kind");
  if (kind == a.meta.end() || kind->second != "certificate") throw ValidationError("archive does not hold a certificate");
  ArchivedCertificate out;
  out.bounds.tau = meta_number(a, "tau");
  out.bounds.d_pin = meta_number(a, "d_pin");
  out.bounds.d_follower = meta_number(a, "d_follower");
  out.lmi.margin = meta_number(a, "margin");
  out.lmi.third = third_lmi_from_string(a.meta.at("third_lmi"));
  const std::size_t pins = meta_count(a, "pin_channels");
  const std::size_t channels = meta_count(a, "follower_channels");
  out.certificate.P = a.get("P");
  for (std::size_t k = 1; k <= pins; ++k) {
    out.certificate.Q.push_back(a.get("Q" + std::to_string(k)));
    out.certificate.R.push_back(a.get("R" + std::to_string(k)));
  }
  for (std::size_t k = 1; k <= channels; ++k) {
    out.certificate.Qbar.push_back(a.get("Qbar" + std::to_string(k)));
    out.certificate.Rbar.push_back(a.get("Rbar" + std::to_string(k)));
  }
  return out;
}

void save_certificate(const std::string& path, const Certificate& cert, const DelayBounds& bounds, const LmiOptions& lmi) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_archive(out, certificate_archive(cert, bounds, lmi));
  if (!out) throw Error("failed writing " + path);
}

ArchivedCertificate load_certificate(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return certificate_from_archive(read_archive(in));
}

}  // namespace lfc
