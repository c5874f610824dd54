#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "jsflow/errors.hpp"
#include "jsflow/sim.hpp"

namespace jsflow::sim {

static_assert(std::endian::native == std::endian::little, "checkpoint I/O assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'J', 'S', 'F', 'L', 'O', 'W', 'C', 'K'};

std::uint64_t fnv1a(const char* data, size_t n) {
  std::uint64_t h = 1469598103934665603ull;
  for (size_t i = 0; i < n; ++i) {
    h ^= std::uint8_t(data[i]);
    h *= 1099511628211ull;
  }
  return h;
}

class Writer {
public:
  template <class T>
  void put(const T& v) {
    const char* p = reinterpret_cast<const char*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void array(const double* d, std::uint64_t n) {
    put(n);
    const char* p = reinterpret_cast<const char*>(d);
    buf_.insert(buf_.end(), p, p + n * sizeof(double));
  }
  std::vector<char>& bytes() { return buf_; }

private:
  std::vector<char> buf_;
};

class Reader {
public:
  Reader(const std::vector<char>& b, size_t end) : buf_(b), end_(end) {}
  template <class T>
  T get() {
    if (pos_ + sizeof(T) > end_) throw FormatError("checkpoint is truncated");
    T v;
    std::memcpy(&v, buf_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return v;
  }
  std::vector<double> array(std::uint64_t expected) {
    const auto n = get<std::uint64_t>();
    if (n != expected) throw FormatError("checkpoint field size does not match the mesh");
    if (pos_ + n * sizeof(double) > end_) throw FormatError("checkpoint is truncated");
    std::vector<double> v(n);
    std::memcpy(v.data(), buf_.data() + pos_, n * sizeof(double));
    pos_ += n * sizeof(double);
    return v;
  }
  [[nodiscard]] bool done() const { return pos_ == end_; }

private:
  const std::vector<char>& buf_;
  size_t end_;
  size_t pos_ = 0;
};

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const FallingSphere& sim) {
  Writer w;
  w.bytes().insert(w.bytes().end(), std::begin(kMagic), std::end(kMagic));
  w.put(kCheckpointVersion);
  w.put(std::uint64_t(sim.mesh().fingerprint()));
  w.put(std::int64_t(sim.step_count()));
  const auto& s = sim.state();
  const auto& p = sim.params();
  const auto& sp = sim.sphere();
  w.put(s.t);
  w.put(sim.time_step());
  for (double v : {p.Re, p.Wi, p.mu_s, p.xi, p.q}) w.put(v);
  for (double v : {sp.U, sp.dU, sp.K, sp.rho_ratio}) w.put(v);
  w.put(sim.last_drag());
  w.array(s.u.data(), std::uint64_t(s.u.size()));
  w.array(s.p.data(), std::uint64_t(s.p.size()));
  std::vector<double> c;
  c.reserve(4 * s.c.size());
  for (const auto& t : s.c) c.insert(c.end(), {t.rr(), t.rz(), t.zz(), t.tt});
  w.array(c.data(), c.size());
  w.put(fnv1a(w.bytes().data(), w.bytes().size()));

  // Write-then-rename so a crash never leaves a half-written checkpoint in place.
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write checkpoint " + tmp.string());
    out.write(w.bytes().data(), std::streamsize(w.bytes().size()));
    if (!out) throw FormatError("cannot write checkpoint " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void read_checkpoint(const std::filesystem::path& path, FallingSphere& sim) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open checkpoint " + path.string());
  const std::vector<char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + 4 + 8 || std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw FormatError(path.string() + " is not a jsflow checkpoint");
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + buf.size() - 8, 8);
  const size_t body = buf.size() - 8;

  Reader r(buf, body);
  for (size_t i = 0; i < sizeof(kMagic); ++i) (void)r.get<char>();
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion)
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  if (fnv1a(buf.data(), body) != stored) throw FormatError("checkpoint checksum mismatch (corrupt file)");
  if (r.get<std::uint64_t>() != sim.mesh().fingerprint()) throw FormatError("checkpoint was written for a different mesh");

  const auto step = r.get<std::int64_t>();
  fem::FieldState s;
  s.t = r.get<double>();
  const double h_t = r.get<double>();
  JsParams p;
  p.Re = r.get<double>();
  p.Wi = r.get<double>();
  p.mu_s = r.get<double>();
  p.xi = r.get<double>();
  p.q = r.get<double>();
  const auto& cur = sim.params();
  if (h_t != sim.time_step() || p.Re != cur.Re || p.Wi != cur.Wi || p.mu_s != cur.mu_s || p.xi != cur.xi || p.q != cur.q)
    throw FormatError("checkpoint parameters differ from the current run");
  sphere::SphereState sp;
  sp.U = r.get<double>();
  sp.dU = r.get<double>();
  sp.K = r.get<double>();
  sp.rho_ratio = r.get<double>();
  const double drag = r.get<double>();
  const int N = sim.space().num_nodes(), V = sim.space().num_vertices();
  const auto u = r.array(std::uint64_t(2 * N));
  const auto pr = r.array(std::uint64_t(V));
  const auto c = r.array(std::uint64_t(4 * V));
  if (!r.done()) throw FormatError("checkpoint has trailing data");

  s.u = Eigen::Map<const Eigen::VectorXd>(u.data(), Eigen::Index(u.size()));
  s.p = Eigen::Map<const Eigen::VectorXd>(pr.data(), Eigen::Index(pr.size()));
  s.c.resize(V);
  for (int v = 0; v < V; ++v) s.c[v] = tensor::AxiTensor{{c[4 * v], c[4 * v + 1], c[4 * v + 2]}, c[4 * v + 3]};
  sim.set_state(std::move(s), sp, step, drag);
}

}  // namespace jsflow::sim
