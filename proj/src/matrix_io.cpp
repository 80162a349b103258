#include "latbound/matrix_io.hpp"

#include <json.hpp>

#include <cstring>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace latbound {

namespace {

constexpr char kMagic[4] = {'L', 'B', 'M', 'X'};

void write_header(std::ostream& os, ElementKind kind, std::uint64_t dim) {
  os.write(kMagic, 4);
  auto k = static_cast<std::uint32_t>(kind);
  os.write(reinterpret_cast<const char*>(&k), 4);
  os.write(reinterpret_cast<const char*>(&dim), 8);
}

}  // namespace

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::random_device rd;
  auto tmp = path;
  tmp += ".tmp" + std::to_string(rd());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    os.write(content.data(), std::streamsize(content.size()));
    os.flush();
    if (!os) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("write_matrix: matrix is not square");
  std::ostringstream os(std::ios::binary);
  write_header(os, ElementKind::Complex128, std::uint64_t(m.rows()));
  os.write(reinterpret_cast<const char*>(m.data()), std::streamsize(m.size() * sizeof(Complex)));
  write_atomic(path, os.str());
}

void write_matrix(const std::filesystem::path& path, const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("write_matrix: matrix is not square");
  std::ostringstream os(std::ios::binary);
  write_header(os, ElementKind::Real64, std::uint64_t(m.rows()));
  os.write(reinterpret_cast<const char*>(m.data()), std::streamsize(m.size() * sizeof(double)));
  write_atomic(path, os.str());
}

Eigen::MatrixXcd read_matrix(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  std::uint32_t kind = 0;
  std::uint64_t dim = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&kind), 4);
  is.read(reinterpret_cast<char*>(&dim), 8);
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw std::runtime_error(path.string() + ": not a matrix file");
  if (dim > (1u << 20)) throw std::runtime_error(path.string() + ": implausible dimension");
  auto d = Eigen::Index(dim);
  Eigen::MatrixXcd m(d, d);
  if (kind == std::uint32_t(ElementKind::Complex128)) {
    is.read(reinterpret_cast<char*>(m.data()), std::streamsize(m.size() * sizeof(Complex)));
  } else if (kind == std::uint32_t(ElementKind::Real64)) {
    Eigen::MatrixXd r(d, d);
    is.read(reinterpret_cast<char*>(r.data()), std::streamsize(r.size() * sizeof(double)));
    m = r.cast<Complex>();
  } else {
    throw std::runtime_error(path.string() + ": unknown element kind " + std::to_string(kind));
  }
  if (!is) throw std::runtime_error(path.string() + ": truncated payload");
  return m;
}

std::string spectrum_to_json(const Spectrum& s, bool with_vectors) {
  nlohmann::json j;
  j["dim"] = s.dim();
  j["energies"] = std::vector<double>(s.energies.data(), s.energies.data() + s.energies.size());
  if (with_vectors) {
    std::vector<double> re(std::size_t(s.vectors.size())), im(std::size_t(s.vectors.size()));
    for (Eigen::Index i = 0; i < s.vectors.size(); ++i) {
      re[std::size_t(i)] = s.vectors.data()[i].real();
      im[std::size_t(i)] = s.vectors.data()[i].imag();
    }
    j["vectors_re"] = re;
    j["vectors_im"] = im;
  }
  return j.dump();
}

Spectrum spectrum_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  Spectrum s;
  auto e = j.at("energies").get<std::vector<double>>();
  s.energies = Eigen::Map<Eigen::VectorXd>(e.data(), Eigen::Index(e.size()));
  auto d = s.energies.size();
  if (j.contains("vectors_re")) {
    auto re = j.at("vectors_re").get<std::vector<double>>();
    auto im = j.at("vectors_im").get<std::vector<double>>();
    if (re.size() != std::size_t(d * d) || im.size() != re.size())
      throw std::runtime_error("spectrum json: vector payload size mismatch");
    s.vectors.resize(d, d);
    for (Eigen::Index i = 0; i < d * d; ++i) s.vectors.data()[i] = Complex(re[std::size_t(i)], im[std::size_t(i)]);
  }
  return s;
}

}  // namespace latbound
