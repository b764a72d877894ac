#include "majorant/setio.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "majorant/errors.hpp"

namespace majorant {
namespace {

template <class T>
bool parse_number(std::string_view text, T& out) {
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

void write_set(std::ostream& out, const SetFile& file) {
  out << "# N=" << file.set.ambient_size() << " model=" << file.model;
  if (file.seed) out << " seed=" << file.seed->base << ':' << file.seed->stream;
  out << '\n';
  for (auto n : file.set.elems()) out << n << '\n';
}

std::string format_set(const SetFile& file) {
  std::ostringstream os;
  write_set(os, file);
  return os.str();
}

SetFile read_set(std::istream& in) {
  SetFile file;
  std::optional<std::int64_t> ambient;
  std::vector<std::int64_t> elems;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      std::istringstream fields{std::string(text.substr(1))};
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const auto key = std::string_view(field).substr(0, eq);
        const auto value = std::string_view(field).substr(eq + 1);
        if (key == "N") {
          std::int64_t n = 0;
          if (!parse_number(value, n) || n < 1) throw ParseError(lineno, "invalid N in header");
          ambient = n;
        } else if (key == "model") {
          file.model = std::string(value);
        } else if (key == "seed") {
          const auto colon = value.find(':');
          Seed seed;
          if (colon == std::string_view::npos || !parse_number(value.substr(0, colon), seed.base) ||
              !parse_number(value.substr(colon + 1), seed.stream))
            throw ParseError(lineno, "invalid seed in header");
          file.seed = seed;
        }
      }
      continue;
    }
    std::int64_t n = 0;
    if (!parse_number(text, n)) throw ParseError(lineno, "expected a decimal integer, got '" + std::string(text) + "'");
    if (n < 1) throw ParseError(lineno, "frequency must be positive");
    if (ambient && n > *ambient) throw ParseError(lineno, "frequency exceeds N");
    if (!elems.empty() && n <= elems.back()) throw ParseError(lineno, "frequencies must be strictly increasing");
    elems.push_back(n);
  }
  const std::int64_t n = ambient.value_or(elems.empty() ? 1 : elems.back());
  file.set = FrequencySet(n, std::move(elems));
  return file;
}

SetFile read_set_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open set file '" + path + "'");
  return read_set(in);
}

}  // namespace majorant
