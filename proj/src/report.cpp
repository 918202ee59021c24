#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ergolab {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Report& Report::set(const std::string& key, const std::string& value) {
  for (auto& n : nodes_)
    if (n.key == key && !n.sub) {
      n.scalar = value;
      return *this;
    }
  nodes_.push_back({key, value, nullptr});
  return *this;
}

Report& Report::set(const std::string& key, const char* value) {
  return set(key, std::string(value));
}

Report& Report::set(const std::string& key, double value) {
  return set(key, format_double(value));
}

Report& Report::set(const std::string& key, int value) {
  return set(key, std::to_string(value));
}

Report& Report::set(const std::string& key, bool value) {
  return set(key, std::string(value ? "1" : "0"));
}

Report& Report::child(const std::string& key) {
  for (auto& n : nodes_)
    if (n.key == key && n.sub) return *n.sub;
  nodes_.push_back({key, std::string(), std::make_unique<Report>()});
  return *nodes_.back().sub;
}

const Report* Report::find(const std::string& key) const {
  for (const auto& n : nodes_)
    if (n.key == key && n.sub) return n.sub.get();
  return nullptr;
}

const std::string* Report::value(const std::string& key) const {
  for (const auto& n : nodes_)
    if (n.key == key && !n.sub) return &n.scalar;
  return nullptr;
}

void Report::write(std::string& out, int depth) const {
  const std::string indent(2 * depth, ' ');
  for (const auto& n : nodes_) {
    if (n.sub) {
      out += indent + n.key + "\n";
      n.sub->write(out, depth + 1);
    } else {
      out += indent + n.key + "=" + n.scalar + "\n";
    }
  }
}

std::string Report::serialize() const {
  std::string out = "schema=1\n";
  write(out, 0);
  return out;
}

Report Report::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<Report*> stack;
  Report root;
  stack.push_back(&root);
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    size_t indent = 0;
    while (indent < line.size() && line[indent] == ' ') ++indent;
    if (indent % 2 != 0)
      throw Error(ERGOLAB_ERR_CONFIG, "report parse: odd indentation");
    const size_t depth = indent / 2;
    const std::string body = line.substr(indent);
    if (first) {
      first = false;
      if (depth == 0 && body == "schema=1") continue;
      throw Error(ERGOLAB_ERR_CONFIG, "report parse: missing schema header");
    }
    if (depth + 1 > stack.size())
      throw Error(ERGOLAB_ERR_CONFIG, "report parse: indentation jump");
    stack.resize(depth + 1);
    const size_t eq = body.find('=');
    if (eq == std::string::npos) {
      Report& sub = stack[depth]->child(body);
      stack.push_back(&sub);
    } else {
      stack[depth]->set(body.substr(0, eq), body.substr(eq + 1));
    }
  }
  return root;
}

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ERGOLAB_ERR_IO, "cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw Error(ERGOLAB_ERR_IO, "write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error(ERGOLAB_ERR_IO, "cannot rename '" + tmp + "' to '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ERGOLAB_ERR_IO, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_profile(const std::string& path, const Problem& problem,
                   const GridField& field) {
  const Grid& g = field.grid;
  const std::vector<double> res = discrete_G(problem, field);

  std::string out = "x,d,u,grad_u,residual\n";
  for (int i = 0; i < g.n; ++i) {
    double grad;
    if (i == 0)
      grad = (field.values[1] - field.values[0]) / g.h;
    else if (i == g.n - 1)
      grad = (field.values[i] - field.values[i - 1]) / g.h;
    else
      grad = (field.values[i + 1] - field.values[i - 1]) / (2.0 * g.h);
    const bool interior = i >= g.interior_lo() && i <= g.interior_hi();
    const double r = interior ? res[i - g.interior_lo()] : 0.0;
    out += format_double(g.nodes[i]) + "," + format_double(g.d_values[i]) + "," +
           format_double(field.values[i]) + "," + format_double(grad) + "," +
           format_double(r) + "\n";
  }
  atomic_write(path, out);
}

GridField read_profile(const std::string& path, const Domain1D& dom) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != "x,d,u,grad_u,residual")
    throw Error(ERGOLAB_ERR_IO, "profile '" + path + "': bad header");

  std::vector<double> xs, us;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(row, cell, ',')) cells.push_back(std::stod(cell));
    if (cells.size() != 5)
      throw Error(ERGOLAB_ERR_IO, "profile '" + path + "': bad row");
    xs.push_back(cells[0]);
    us.push_back(cells[2]);
  }
  if (xs.size() < 16) throw Error(ERGOLAB_ERR_IO, "profile '" + path + "': too few rows");

  GridField f;
  f.grid = Grid::make(dom, static_cast<int>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(xs[i] - f.grid.nodes[i]) > 1e-9 * (1.0 + std::abs(xs[i])))
      throw Error(ERGOLAB_ERR_IO, "profile '" + path + "': nodes do not match the domain");
  }
  f.values = us;
  f.boundary.lo = us.front();
  f.boundary.hi = us.back();
  return f;
}

}  // namespace ergolab
