#include "kppca/model_io.hpp"

#include <array>
#include <bit>
#include <deque>
#include <cstring>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <vector>

#include "kppca/errors.hpp"

namespace kppca {

namespace {

constexpr std::array<char, 6> kMagic{'K', 'P', 'P', 'C', 'A', '\0'};
constexpr std::uint32_t kPrimalKind = 1;
constexpr std::uint32_t kDualKind = 2;

class Writer {
 public:
  void u32(std::uint32_t v) { le(v, 4); }
  void u64(std::uint64_t v) { le(v, 8); }
  void i64(std::int64_t v) { le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
  void bytes(const char* data, std::size_t n) { buf_.insert(buf_.end(), data, data + n); }

  void vector(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v(i));
  }
  void matrix(const Eigen::MatrixXd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) f64(m(i, j));
    }
  }

  const std::vector<char>& data() const { return buf_; }

 private:
  void le(std::uint64_t v, int width) {
    for (int i = 0; i < width; ++i) buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::vector<char> buf_;
};

class Container {
 public:
  explicit Container(std::uint32_t kind) : kind_(kind) {}

  Writer& section(const char (&tag)[5]) {
    sections_.emplace_back(std::string(tag, 4), Writer{});
    return sections_.back().second;
  }

  void write(const std::filesystem::path& path) const {
    Writer out;
    out.bytes(kMagic.data(), kMagic.size());
    out.u32(kModelFormatVersion);
    out.u32(kind_);
    out.u32(static_cast<std::uint32_t>(sections_.size()));
    for (const auto& [tag, body] : sections_) {
      out.bytes(tag.data(), 4);
      out.u64(body.data().size());
      out.bytes(body.data().data(), body.data().size());
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(Errc::Io, "cannot write " + path.string());
    file.write(out.data().data(), static_cast<std::streamsize>(out.data().size()));
    if (!file) throw Error(Errc::Io, "failed writing " + path.string());
  }

 private:
  std::uint32_t kind_;
  std::deque<std::pair<std::string, Writer>> sections_;
};

class Reader {
 public:
  Reader(const char* data, std::size_t size) : data_(data), size_(size) {}

  std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
  std::uint64_t u64() { return le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(le(8)); }
  double f64() { return std::bit_cast<double>(le(8)); }
  const char* bytes(std::size_t n) {
    need(n);
    const char* p = data_ + pos_;
    pos_ += n;
    return p;
  }

  Eigen::VectorXd vector() {
    const std::uint64_t n = u64();
    need_elements(n);
    Eigen::VectorXd v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f64();
    return v;
  }
  Eigen::MatrixXd matrix() {
    const std::uint64_t rows = u64();
    const std::uint64_t cols = u64();
    if (cols != 0 && rows > (size_ / 8) / cols) throw Error(Errc::CorruptFile, "matrix too large");
    need_elements(rows * cols);
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = f64();
    }
    return m;
  }

  bool done() const { return pos_ == size_; }

 private:
  void need(std::size_t n) const {
    if (n > size_ - pos_) throw Error(Errc::CorruptFile, "model file is truncated");
  }
  void need_elements(std::uint64_t n) const {
    if (n > (size_ - pos_) / 8) throw Error(Errc::CorruptFile, "model file is truncated");
  }
  std::uint64_t le(int width) {
    need(static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v |= std::uint64_t{static_cast<unsigned char>(data_[pos_ + i])} << (8 * i);
    }
    pos_ += static_cast<std::size_t>(width);
    return v;
  }

  const char* data_;
  std::size_t size_;
  std::size_t pos_ = 0;
};

void write_latent(Writer& w, int q, double sigma2, std::int64_t n) {
  w.i64(q);
  w.f64(sigma2);
  w.i64(n);
}

struct Parsed {
  std::uint32_t kind = 0;
  std::map<std::string, std::string> sections;
};

Parsed parse(const std::filesystem::path& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::Io, "cannot open " + path.string());
  const std::vector<char> raw((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());

  Reader in(raw.data(), raw.size());
  if (raw.size() < kMagic.size() || std::memcmp(raw.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(Errc::BadMagic, path.string() + " is not a model file (bad magic)");
  }
  in.bytes(kMagic.size());
  const std::uint32_t version = in.u32();
  if (version != kModelFormatVersion) {
    throw Error(Errc::VersionMismatch, path.string() + " has format version " +
                                           std::to_string(version) + ", expected " +
                                           std::to_string(kModelFormatVersion));
  }
  Parsed out;
  out.kind = in.u32();
  const std::uint32_t count = in.u32();
  for (std::uint32_t s = 0; s < count; ++s) {
    const std::string tag(in.bytes(4), 4);
    const std::uint64_t length = in.u64();
    if (length > raw.size()) throw Error(Errc::CorruptFile, "section length out of range");
    const char* body = in.bytes(static_cast<std::size_t>(length));
    out.sections[tag] = std::string(body, static_cast<std::size_t>(length));
  }
  if (!in.done()) throw Error(Errc::CorruptFile, "trailing bytes after the last section");
  return out;
}

const std::string& require(const Parsed& p, const std::string& tag) {
  const auto it = p.sections.find(tag);
  if (it == p.sections.end()) throw Error(Errc::CorruptFile, "missing section " + tag);
  return it->second;
}

Reader reader(const std::string& body) { return Reader(body.data(), body.size()); }

template <typename F>
auto read_section(const Parsed& p, const std::string& tag, F&& f) {
  const std::string& body = require(p, tag);
  Reader in = reader(body);
  auto value = f(in);
  if (!in.done()) throw Error(Errc::CorruptFile, "section " + tag + " has trailing bytes");
  return value;
}

struct Latent {
  int q;
  double sigma2;
  std::int64_t n;
};

Latent read_latent(Reader& in) {
  Latent l{};
  l.q = static_cast<int>(in.i64());
  l.sigma2 = in.f64();
  l.n = in.i64();
  return l;
}

void check(bool ok, const char* what) {
  if (!ok) throw Error(Errc::CorruptFile, what);
}

PrimalModel decode_primal(const Parsed& p) {
  PrimalModel m;
  const Latent l = read_section(p, "LATN", read_latent);
  m.q = l.q;
  m.sigma2 = l.sigma2;
  m.n = static_cast<int>(l.n);
  m.mu = read_section(p, "MEAN", [](Reader& in) { return in.vector(); });
  m.w = read_section(p, "WMAT", [](Reader& in) { return in.matrix(); });
  m.v = read_section(p, "VMAT", [](Reader& in) { return in.matrix(); });
  m.eigenvalues = read_section(p, "EIGV", [](Reader& in) { return in.vector(); });
  check(m.w.rows() == m.mu.size() && m.w.cols() == m.q, "loading matrix has the wrong shape");
  check(m.v.rows() == m.mu.size() && m.v.cols() == m.q, "eigenvector block has the wrong shape");
  check(m.eigenvalues.size() == m.n, "spectrum length differs from N");
  return m;
}

DualModel decode_dual(const Parsed& p) {
  const KernelSpec spec = read_section(p, "KERN", [](Reader& in) {
    const std::uint32_t family = in.u32();
    const double gamma = in.f64();
    check(family <= 1, "unknown kernel family");
    return KernelSpec{family == 0 ? KernelFamily::Linear : KernelFamily::Rbf, gamma};
  });
  const Latent l = read_section(p, "LATN", read_latent);
  const double floor = read_section(p, "FLOR", [](Reader& in) { return in.f64(); });
  Eigen::VectorXd eigenvalues = read_section(p, "EIGV", [](Reader& in) { return in.vector(); });
  Eigen::MatrixXd e = read_section(p, "EVEC", [](Reader& in) { return in.matrix(); });
  Eigen::MatrixXd a = read_section(p, "AMAT", [](Reader& in) { return in.matrix(); });
  Eigen::MatrixXd kc = read_section(p, "KCEN", [](Reader& in) { return in.matrix(); });
  Eigen::MatrixXd points = read_section(p, "TSET", [](Reader& in) { return in.matrix(); });

  const Eigen::Index n = eigenvalues.size();
  check(n >= 1 && l.n == n, "spectrum length differs from N");
  check(e.rows() == n && e.cols() == n, "eigenvector matrix has the wrong shape");
  check(a.rows() == n && a.cols() == l.q && l.q >= 1, "loading matrix has the wrong shape");
  check(kc.rows() == n && kc.cols() == n, "centered Gram matrix has the wrong shape");
  check(points.cols() == n, "training set size differs from N");
  try {
    spec.validate();
    return DualModel{std::move(a), l.sigma2, l.q,   std::move(eigenvalues),     std::move(e),
                     floor,        SymMatrix(kc), spec, TrainingSet(std::move(points))};
  } catch (const Error& err) {
    throw Error(Errc::CorruptFile, err.what());
  }
}

}  // namespace

void save_model(const std::filesystem::path& path, const PrimalModel& m,
                const std::string& metadata_json) {
  Container c(kPrimalKind);
  write_latent(c.section("LATN"), m.q, m.sigma2, m.n);
  c.section("MEAN").vector(m.mu);
  c.section("WMAT").matrix(m.w);
  c.section("VMAT").matrix(m.v);
  c.section("EIGV").vector(m.eigenvalues);
  if (!metadata_json.empty()) c.section("META").bytes(metadata_json.data(), metadata_json.size());
  c.write(path);
}

void save_model(const std::filesystem::path& path, const DualModel& m,
                const std::string& metadata_json) {
  Container c(kDualKind);
  Writer& kern = c.section("KERN");
  kern.u32(m.spec.family == KernelFamily::Linear ? 0 : 1);
  kern.f64(m.spec.gamma);
  write_latent(c.section("LATN"), m.q, m.sigma2, m.n());
  c.section("FLOR").f64(m.clamp_floor);
  c.section("EIGV").vector(m.eigenvalues);
  c.section("EVEC").matrix(m.e);
  c.section("AMAT").matrix(m.a);
  c.section("KCEN").matrix(m.kc.matrix());
  c.section("TSET").matrix(m.ts.points());
  if (!metadata_json.empty()) c.section("META").bytes(metadata_json.data(), metadata_json.size());
  c.write(path);
}

ModelFile load_model(const std::filesystem::path& path) {
  const Parsed p = parse(path);
  const auto meta = p.sections.find("META");
  std::string metadata = meta == p.sections.end() ? std::string{} : meta->second;
  switch (p.kind) {
    case kPrimalKind: return ModelFile{decode_primal(p), std::move(metadata)};
    case kDualKind: return ModelFile{decode_dual(p), std::move(metadata)};
    default: throw Error(Errc::CorruptFile, "unknown model kind " + std::to_string(p.kind));
  }
}

DualModel load_dual_model(const std::filesystem::path& path, std::string* metadata_json) {
  ModelFile file = load_model(path);
  auto* model = std::get_if<DualModel>(&file.model);
  if (!model) throw Error(Errc::CorruptFile, path.string() + " holds a primal model");
  if (metadata_json) *metadata_json = std::move(file.metadata_json);
  return std::move(*model);
}

PrimalModel load_primal_model(const std::filesystem::path& path, std::string* metadata_json) {
  ModelFile file = load_model(path);
  auto* model = std::get_if<PrimalModel>(&file.model);
  if (!model) throw Error(Errc::CorruptFile, path.string() + " holds a dual model");
  if (metadata_json) *metadata_json = std::move(file.metadata_json);
  return std::move(*model);
}

}  // namespace kppca
