#include "mshmm/kvconfig.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "mshmm/errors.hpp"
#include "mshmm/io.hpp"

namespace mshmm {

namespace {

std::string strip(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

const std::string& KvFile::Section::get(const std::string& key) const {
  auto it = kv.find(key);
  if (it == kv.end())
    throw ConfigError(origin + ": section [" + kind + (label.empty() ? "" : " " + label) +
                      "] is missing key '" + key + "'");
  return it->second;
}

std::string KvFile::Section::get_or(const std::string& key, const std::string& fallback) const {
  auto it = kv.find(key);
  return it == kv.end() ? fallback : it->second;
}

double KvFile::Section::get_double(const std::string& key) const {
  const std::string& raw = get(key);
  char* end = nullptr;
  const double v = std::strtod(raw.c_str(), &end);
  if (end != raw.c_str() + raw.size() || !std::isfinite(v))
    throw ConfigError(origin + ": key '" + key + "' is not a number: '" + raw + "'");
  return v;
}

long long KvFile::Section::get_int(const std::string& key) const {
  const std::string& raw = get(key);
  char* end = nullptr;
  const long long v = std::strtoll(raw.c_str(), &end, 10);
  if (end != raw.c_str() + raw.size())
    throw ConfigError(origin + ": key '" + key + "' is not an integer: '" + raw + "'");
  return v;
}

KvFile KvFile::parse_file(const std::string& path) {
  return parse_string(read_file(path), path);
}

KvFile KvFile::parse_string(const std::string& text, const std::string& origin) {
  KvFile out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  Section* current = nullptr;
  while (std::getline(in, line)) {
    ++line_no;
    std::string t = strip(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    if (t.front() == '[') {
      if (t.back() != ']') throw ConfigError(where + ": unterminated section header");
      std::string header = strip(t.substr(1, t.size() - 2));
      if (header.empty()) throw ConfigError(where + ": empty section header");
      Section s;
      const std::size_t sp = header.find_first_of(" \t");
      if (sp == std::string::npos) {
        s.kind = header;
      } else {
        s.kind = header.substr(0, sp);
        s.label = strip(header.substr(sp + 1));
      }
      s.origin = where;
      out.sections_.push_back(std::move(s));
      current = &out.sections_.back();
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    if (!current) throw ConfigError(where + ": key outside of any [section]");
    const std::string key = strip(t.substr(0, eq));
    std::string value = strip(t.substr(eq + 1));
    // Trailing comments after the value.
    const std::size_t hash = value.find(" #");
    if (hash != std::string::npos) value = strip(value.substr(0, hash));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (!current->kv.emplace(key, value).second)
      throw ConfigError(where + ": duplicate key '" + key + "'");
  }
  return out;
}

const KvFile::Section* KvFile::find(const std::string& kind, const std::string& label) const {
  for (const auto& s : sections_)
    if (s.kind == kind && (label.empty() || s.label == label)) return &s;
  return nullptr;
}

std::vector<const KvFile::Section*> KvFile::find_all(const std::string& kind) const {
  std::vector<const Section*> out;
  for (const auto& s : sections_)
    if (s.kind == kind) out.push_back(&s);
  return out;
}

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item = strip(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace mshmm
