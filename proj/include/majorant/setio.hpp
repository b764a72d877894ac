#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "majorant/expsum.hpp"
#include "majorant/rng.hpp"

namespace majorant {

/// Newline-delimited set file:
///
///     # N=<N> model=<tag> seed=<base>:<stream>
///     1
///     4
///     ...
struct SetFile {
  FrequencySet set;
  std::string model = "custom";
  std::optional<Seed> seed;
};

void write_set(std::ostream& out, const SetFile& file);
std::string format_set(const SetFile& file);

/// Throws ParseError with the offending line number. Without an `N=` header
/// field the ambient size is the largest element.
SetFile read_set(std::istream& in);
SetFile read_set_file(const std::string& path);

}  // namespace majorant
