#pragma once

#include <optional>
#include <string>

#include "twofusion/classical.hpp"
#include "twofusion/group.hpp"

namespace twofusion::cache {

// Enumeration cache: one little-endian binary file per group descriptor,
// versioned header {format-version, descriptor, element-variant, field
// parameters}, element payload (matrices: n then row-major field indices as
// u16; permutations: degree then 1-based images as u8), an optional class
// partition as index runs, and a trailing checksum.
inline constexpr std::uint32_t kFormatVersion = 1;

std::string cache_file_for(const std::string &descriptor, const std::string &dir);

// Writes the enumeration of g (must be enumerated, descriptor must parse as
// a GroupSpec so loads can rebuild the context).
void store(const grp::Group &g, const std::string &dir);

// nullopt on miss or stale version (silent rebuild); ConsistencyError on a
// corrupted payload.
std::optional<grp::GroupPtr> load(const std::string &descriptor, const std::string &dir);

// Enumerated handle for a descriptor, through the cache when a directory is
// given. rebuilt_out reports whether enumeration ran (miss or stale).
grp::GroupPtr load_or_build(const std::string &descriptor, const std::string &dir,
                            bool *rebuilt_out = nullptr);

} // namespace twofusion::cache
