#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "grid.hpp"

namespace ergolab {

// Ordered key/value tree serialized as indented text (2 spaces per level)
// under a "schema=1" header. Leaves are "key=value" lines, subtrees bare
// "key" lines.
class Report {
 public:
  Report& set(const std::string& key, const std::string& value);
  Report& set(const std::string& key, const char* value);
  Report& set(const std::string& key, double value);       // 17 significant digits
  Report& set(const std::string& key, int value);
  Report& set(const std::string& key, bool value);         // 0 / 1
  Report& child(const std::string& key);

  const Report* find(const std::string& key) const;
  const std::string* value(const std::string& key) const;

  std::string serialize() const;  // includes the schema header
  static Report parse(const std::string& text);

 private:
  struct Node {
    std::string key;
    std::string scalar;
    std::unique_ptr<Report> sub;
  };
  std::vector<Node> nodes_;
  void write(std::string& out, int depth) const;
};

std::string format_double(double v);  // shortest %.17g form

// Atomic text write: temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

// Tabular profile: header "x,d,u,grad_u,residual", one row per node,
// 17 significant digits.
void write_profile(const std::string& path, const Problem& problem,
                   const GridField& field);
GridField read_profile(const std::string& path, const Domain1D& dom);

}  // namespace ergolab
