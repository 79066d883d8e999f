// Text snapshots. Every double is written as a C99 hex float, so reading
// and writing again reproduces the file byte for byte.

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fsflow/errors.hpp"
#include "fsflow/io.hpp"

namespace fsflow {

namespace {

constexpr const char* kMagic = "fsflow-snapshot";

std::string hexf(double x) {
  char buf[64];
  const bool neg = std::signbit(x);
  const auto r = std::to_chars(buf, buf + sizeof buf, neg ? -x : x, std::chars_format::hex);
  std::string s(buf, r.ptr);
  if (s == "inf" || s == "nan") return neg ? "-" + s : s;
  return (neg ? "-0x" : "0x") + s;
}

double parse_hexf(const std::string& s) {
  std::string_view v(s);
  bool neg = false;
  if (!v.empty() && v[0] == '-') {
    neg = true;
    v.remove_prefix(1);
  }
  if (v.size() > 2 && v[0] == '0' && (v[1] == 'x' || v[1] == 'X')) v.remove_prefix(2);
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x, std::chars_format::hex);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw IoError("snapshot: bad number '" + s + "'");
  return neg ? -x : x;
}

void write_coeffs(std::ostream& os, const std::string& name, const std::vector<cplx>& c) {
  os << "field " << name << ' ' << c.size() << '\n';
  for (const cplx& z : c) os << hexf(z.real()) << ' ' << hexf(z.imag()) << '\n';
}

class Reader {
 public:
  explicit Reader(std::istream& is) : is_(is) {}

  std::string word() {
    std::string w;
    if (!(is_ >> w)) throw IoError("snapshot: unexpected end of file");
    return w;
  }
  void expect(const std::string& w) {
    const std::string got = word();
    if (got != w) throw IoError("snapshot: expected '" + w + "', found '" + got + "'");
  }
  long integer() {
    const std::string w = word();
    long v = 0;
    const auto r = std::from_chars(w.data(), w.data() + w.size(), v);
    if (r.ec != std::errc() || r.ptr != w.data() + w.size()) throw IoError("snapshot: bad integer '" + w + "'");
    return v;
  }
  double number() { return parse_hexf(word()); }

  void coeffs(const std::string& name, std::vector<cplx>& out) {
    expect("field");
    expect(name);
    const long n = integer();
    if (n != static_cast<long>(out.size()))
      throw IoError("snapshot: field " + name + " has " + std::to_string(n) + " coefficients, expected " +
                    std::to_string(out.size()));
    for (cplx& z : out) {
      const double re = number();
      z = cplx(re, number());
    }
  }

 private:
  std::istream& is_;
};

}  // namespace

void write_snapshot(std::ostream& os, const Snapshot& snap) {
  const SimState& s = snap.state;
  const GridDescriptor& g = s.grid()->desc();
  os << kMagic << ' ' << Snapshot::version << '\n';
  os << "config_hash " << snap.config_hash << '\n';
  os << "grid " << g.N1 << ' ' << g.N2 << ' ' << g.N3 << ' ' << hexf(g.L1) << ' ' << hexf(g.L2) << '\n';
  os << "t " << hexf(s.t) << '\n';
  os << "step " << s.step << '\n';
  const char* names[3] = {"u1", "u2", "u3"};
  for (int i = 0; i < 3; ++i) write_coeffs(os, names[i], s.u[i].coeffs());
  write_coeffs(os, "p", s.p.coeffs());
  write_coeffs(os, "eta", s.eta.coeffs());
  const char* rate_names[3] = {"dt_u1", "dt_u2", "dt_u3"};
  for (int i = 0; i < 3; ++i) write_coeffs(os, rate_names[i], s.rates.dt_u[i].coeffs());
  write_coeffs(os, "dt_eta", s.rates.dt_eta.coeffs());
  write_coeffs(os, "dt2_eta", s.rates.dt2_eta.coeffs());
  os << "end\n";
}

Snapshot read_snapshot(std::istream& is) {
  Reader r(is);
  r.expect(kMagic);
  const long version = r.integer();
  if (version != Snapshot::version)
    throw IoError("snapshot: unsupported format version " + std::to_string(version));
  Snapshot snap;
  r.expect("config_hash");
  snap.config_hash = r.word();
  r.expect("grid");
  GridDescriptor g;
  g.N1 = static_cast<int>(r.integer());
  g.N2 = static_cast<int>(r.integer());
  g.N3 = static_cast<int>(r.integer());
  g.L1 = r.number();
  g.L2 = r.number();
  GridPtr grid;
  try {
    grid = Grid::make(g);
  } catch (const ConfigError& e) {
    throw IoError(std::string("snapshot: ") + e.what());
  }
  SimState& s = snap.state;
  r.expect("t");
  s.t = r.number();
  r.expect("step");
  s.step = r.integer();
  s.u = zero_vector(grid);
  s.p = VolumeField(grid, "p");
  s.eta = SurfaceField(grid, "eta");
  s.rates.dt_u = zero_vector(grid);
  s.rates.dt_eta = SurfaceField(grid);
  s.rates.dt2_eta = SurfaceField(grid);
  const char* names[3] = {"u1", "u2", "u3"};
  for (int i = 0; i < 3; ++i) r.coeffs(names[i], s.u[i].coeffs());
  r.coeffs("p", s.p.coeffs());
  r.coeffs("eta", s.eta.coeffs());
  const char* rate_names[3] = {"dt_u1", "dt_u2", "dt_u3"};
  for (int i = 0; i < 3; ++i) r.coeffs(rate_names[i], s.rates.dt_u[i].coeffs());
  r.coeffs("dt_eta", s.rates.dt_eta.coeffs());
  r.coeffs("dt2_eta", s.rates.dt2_eta.coeffs());
  r.expect("end");
  return snap;
}

void write_snapshot_file(const std::string& path, const Snapshot& s) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write snapshot '" + path + "'");
  write_snapshot(os, s);
  if (!os) throw IoError("failed writing snapshot '" + path + "'");
}

Snapshot read_snapshot_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read snapshot '" + path + "'");
  return read_snapshot(is);
}

}  // namespace fsflow
