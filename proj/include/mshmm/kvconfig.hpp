#ifndef MSHMM_KVCONFIG_HPP
#define MSHMM_KVCONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace mshmm {

// Minimal sectioned key-value text format used for the dataset manifest and
// the run configuration:
//
//   # comment
//   [section]            or   [kind label]
//   key = value
//
// Sections keep declaration order; keys within a section are unique.
class KvFile {
 public:
  struct Section {
    std::string kind;   // first token of the header
    std::string label;  // remainder of the header ("" when absent)
    std::map<std::string, std::string> kv;
    std::string origin;  // file:line for error messages

    bool has(const std::string& key) const { return kv.count(key) > 0; }
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    long long get_int(const std::string& key) const;
  };

  static KvFile parse_file(const std::string& path);
  static KvFile parse_string(const std::string& text, const std::string& origin);

  const std::vector<Section>& sections() const { return sections_; }
  const Section* find(const std::string& kind, const std::string& label = "") const;
  std::vector<const Section*> find_all(const std::string& kind) const;

 private:
  std::vector<Section> sections_;
};

std::vector<std::string> split_csv_list(const std::string& s);

}  // namespace mshmm

#endif
