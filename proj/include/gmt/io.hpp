#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gmt/calculus.hpp"
#include "gmt/domain.hpp"
#include "gmt/error.hpp"

namespace gmt {

/// 64-bit FNV-1a, used for input hashes and domain references.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[i] = digits[v & 0xf];
  return s;
}

/// Reference to a domain: hash of its GMT-GRID text.
inline std::string domain_reference(const GridDomain& d) {
  std::ostringstream os;
  write_grid(os, d);
  return "fnv1a:" + hex64(fnv1a(os.str()));
}

namespace detail {

inline void put_f64(std::ostream& os, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  os.write(buf, 8);
}

inline double get_f64(std::istream& is) {
  char buf[8];
  if (!is.read(buf, 8)) throw Error(ErrorKind::parse, "GMT-FUNC: truncated value block");
  std::uint64_t bits;
  std::memcpy(&bits, buf, 8);
  if constexpr (std::endian::native == std::endian::big) bits = __builtin_bswap64(bits);
  return std::bit_cast<double>(bits);
}

}  // namespace detail

/// `GMT-FUNC v1 <domain reference> <cell count> <trace count>` on one line,
/// then the inside-cell values and the trace values as little-endian f64.
inline void write_function(std::ostream& os, const GridFunction& u) {
  const auto& g = u.grid();
  os << "GMT-FUNC v1 " << domain_reference(g) << ' ' << g.count() << ' ' << u.trace().size() << '\n';
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c)) detail::put_f64(os, u[c]);
  }
  for (double t : u.trace()) detail::put_f64(os, t);
  if (!os) throw Error(ErrorKind::io, "GMT-FUNC: write failed");
}

inline GridFunction read_function(std::istream& is, const DomainPtr& domain) {
  std::string line;
  if (!std::getline(is, line)) throw Error(ErrorKind::parse, "GMT-FUNC: missing header");
  std::istringstream hs(line);
  std::string magic, version, ref;
  std::size_t cells = 0, traces = 0;
  if (!(hs >> magic >> version >> ref >> cells >> traces) || magic != "GMT-FUNC" || version != "v1") {
    throw Error(ErrorKind::parse, "GMT-FUNC: bad header");
  }
  const auto& g = domain->grid;
  require(ref == domain_reference(g), ErrorKind::validation, "GMT-FUNC: function belongs to another domain");
  require(cells == g.count(), ErrorKind::validation, "GMT-FUNC: cell count mismatch");
  require(traces == 0 || traces == domain->boundary.size(), ErrorKind::validation, "GMT-FUNC: trace count mismatch");
  std::vector<double> values(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c)) values[c] = detail::get_f64(is);
  }
  std::vector<double> trace(traces);
  for (double& t : trace) t = detail::get_f64(is);
  return GridFunction(domain, std::move(values), std::move(trace));
}

}  // namespace gmt
