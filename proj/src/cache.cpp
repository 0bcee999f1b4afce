#include "twofusion/cache.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

namespace twofusion::cache {

using grp::Element;
using grp::ElementKind;

namespace {

constexpr char kMagic[4] = {'T', 'F', 'G', 'C'};

struct Writer {
  std::vector<unsigned char> buf;
  void u8(std::uint8_t v) { buf.push_back(v); }
  void u16(std::uint16_t v) {
    buf.push_back(v & 0xFF);
    buf.push_back(v >> 8);
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back((v >> (8 * i)) & 0xFF);
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back((v >> (8 * i)) & 0xFF);
  }
  void str(const std::string &s) {
    u32(static_cast<std::uint32_t>(s.size()));
    for (char c : s) buf.push_back(static_cast<unsigned char>(c));
  }
};

struct Reader {
  const std::vector<unsigned char> &buf;
  std::size_t pos = 0;
  bool fail = false;
  std::uint8_t u8() {
    if (pos + 1 > buf.size()) {
      fail = true;
      return 0;
    }
    return buf[pos++];
  }
  std::uint16_t u16() {
    std::uint16_t v = u8();
    v |= static_cast<std::uint16_t>(u8()) << 8;
    return v;
  }
  std::uint32_t u32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(u8()) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(u8()) << (8 * i);
    return v;
  }
  std::string str() {
    std::uint32_t n = u32();
    if (pos + n > buf.size()) {
      fail = true;
      return {};
    }
    std::string s(reinterpret_cast<const char *>(buf.data() + pos), n);
    pos += n;
    return s;
  }
};

std::uint64_t fnv1a(const unsigned char *data, std::size_t n) {
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

} // namespace

std::string cache_file_for(const std::string &descriptor, const std::string &dir) {
  std::string name;
  for (char c : descriptor) {
    if (std::isalnum(static_cast<unsigned char>(c)))
      name.push_back(c);
    else
      name.push_back('_');
  }
  return dir + "/" + name + ".tfgc";
}

void store(const grp::Group &g, const std::string &dir) {
  if (!g.enumerated()) throw InputError("cache store needs an enumerated handle");
  classical::GroupSpec::parse(g.descriptor()); // loads rebuild the context from it
  std::filesystem::create_directories(dir);

  const auto &elems = g.elements();
  const Element &first = elems.front();
  Writer w;
  w.buf.insert(w.buf.end(), kMagic, kMagic + 4);
  w.u32(kFormatVersion);
  w.str(g.descriptor());
  w.u8(first.kind == ElementKind::Matrix ? 0 : 1);
  if (first.kind == ElementKind::Matrix) {
    // field parameters from the descriptor
    classical::GroupSpec spec = classical::GroupSpec::parse(g.descriptor());
    auto [p, f] = classical::factor_prime_power(spec.q);
    w.u32(p);
    w.u32(spec.unitary() ? 2 * f : f);
  }
  w.u8(first.n);
  w.u64(elems.size());
  for (const Element &e : elems) {
    if (e.kind == ElementKind::Matrix) {
      for (std::size_t i = 0; i < e.data.size(); ++i) w.u16(e.data[i]);
    } else {
      for (std::size_t i = 0; i < e.data.size(); ++i)
        w.u8(static_cast<std::uint8_t>(e.data[i]));
    }
  }
  if (g.conjugacy_complete()) {
    // class partition as runs of consecutive element indices
    w.u8(1);
    std::size_t classes = g.class_count();
    w.u32(static_cast<std::uint32_t>(classes));
    std::vector<std::vector<std::uint32_t>> members(classes);
    for (std::uint32_t i = 0; i < elems.size(); ++i)
      members[g.class_of(i)].push_back(i);
    for (const auto &m : members) {
      std::vector<std::pair<std::uint32_t, std::uint32_t>> runs;
      for (std::uint32_t v : m) {
        if (!runs.empty() && runs.back().first + runs.back().second == v)
          ++runs.back().second;
        else
          runs.emplace_back(v, 1);
      }
      w.u32(static_cast<std::uint32_t>(runs.size()));
      for (auto [start, len] : runs) {
        w.u32(start);
        w.u32(len);
      }
    }
  } else {
    w.u8(0);
  }
  w.u64(fnv1a(w.buf.data(), w.buf.size()));

  std::string path = cache_file_for(g.descriptor(), dir);
  std::string tmp = path + ".tmp" + std::to_string(reinterpret_cast<std::uintptr_t>(&g) % 100000);
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw InputError("cache directory not writable: " + dir);
    out.write(reinterpret_cast<const char *>(w.buf.data()),
              static_cast<std::streamsize>(w.buf.size()));
  }
  std::filesystem::rename(tmp, path);
}

std::optional<grp::GroupPtr> load(const std::string &descriptor, const std::string &dir) {
  std::string path = cache_file_for(descriptor, dir);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt; // miss
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 24) throw ConsistencyError("cache payload truncated: " + path);
  std::uint64_t stored_sum = 0;
  for (int i = 0; i < 8; ++i)
    stored_sum |= static_cast<std::uint64_t>(buf[buf.size() - 8 + i]) << (8 * i);
  if (fnv1a(buf.data(), buf.size() - 8) != stored_sum)
    throw ConsistencyError("cache payload corrupted: " + path);

  Reader r{buf};
  char magic[4];
  for (char &c : magic) c = static_cast<char>(r.u8());
  if (std::string(magic, 4) != std::string(kMagic, 4))
    throw ConsistencyError("cache payload corrupted: bad magic in " + path);
  std::uint32_t version = r.u32();
  if (version != kFormatVersion) return std::nullopt; // stale: silent rebuild
  std::string stored_desc = r.str();
  if (stored_desc != descriptor) return std::nullopt;
  std::uint8_t variant = r.u8();
  std::uint32_t p = 0, f = 0;
  if (variant == 0) {
    p = r.u32();
    f = r.u32();
  }
  std::uint8_t n = r.u8();
  std::uint64_t count = r.u64();
  if (r.fail) throw ConsistencyError("cache payload truncated: " + path);

  classical::GroupSpec spec = classical::GroupSpec::parse(descriptor);
  grp::GroupPtr proto = classical::make_group(spec);
  std::vector<Element> elems;
  elems.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Element e(variant == 0 ? ElementKind::Matrix : ElementKind::Permutation, n);
    for (std::size_t j = 0; j < e.data.size(); ++j)
      e.data[j] = variant == 0 ? r.u16() : r.u8();
    elems.push_back(std::move(e));
  }
  std::uint8_t has_classes = r.u8();
  if (has_classes) {
    // the partition block is validated (each element covered exactly once)
    // and otherwise ignored; conjugacy data is recomputed lazily together
    // with its witnesses
    std::uint32_t classes = r.u32();
    std::vector<bool> covered(count, false);
    std::uint64_t covered_count = 0;
    for (std::uint32_t c = 0; c < classes; ++c) {
      std::uint32_t runs = r.u32();
      for (std::uint32_t k = 0; k < runs; ++k) {
        std::uint32_t start = r.u32();
        std::uint32_t len = r.u32();
        for (std::uint32_t v = start; v < start + len; ++v) {
          if (v >= count || covered[v])
            throw ConsistencyError("cache class partition malformed: " + path);
          covered[v] = true;
          ++covered_count;
        }
      }
    }
    if (covered_count != count)
      throw ConsistencyError("cache class partition incomplete: " + path);
  }
  if (r.fail) throw ConsistencyError("cache payload truncated: " + path);
  if (variant == 0 && (p != 0 || f != 0)) {
    // sanity: the field parameters must match the descriptor's context
    auto [dp, df] = classical::factor_prime_power(spec.q);
    if (p != dp || f != (spec.unitary() ? 2 * df : df))
      throw ConsistencyError("cache field parameters disagree with descriptor");
  }
  return grp::group_from_enumeration(proto->context(), proto->generators(),
                                     std::move(elems), descriptor);
}

grp::GroupPtr load_or_build(const std::string &descriptor, const std::string &dir,
                            bool *rebuilt_out) {
  classical::GroupSpec spec = classical::GroupSpec::parse(descriptor);
  unsigned long long closed = classical::spec_order(spec);
  if (closed > 10000000ull)
    throw InputError("full enumeration requested for " + descriptor + " of order " +
                     std::to_string(closed) + " (cap 10^7)");
  if (!dir.empty()) {
    auto cached = load(descriptor, dir);
    if (cached) {
      if (rebuilt_out) *rebuilt_out = false;
      return *cached;
    }
  }
  grp::GroupPtr g = classical::make_group(spec);
  g->enumerate();
  if (rebuilt_out) *rebuilt_out = true;
  if (!dir.empty()) store(*g, dir);
  return g;
}

} // namespace twofusion::cache
