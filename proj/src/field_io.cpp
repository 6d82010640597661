#include "bnls/field_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bnls/errors.hpp"

namespace bnls {

void write_field(const std::string& path, const RadialField& field) {
  if (!field.grid) throw Error("write_field: field without grid");
  const RadialGrid& g = *field.grid;
  require_grid(g, field.values);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error("write_field: cannot open " + tmp);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "# N=%d R=%.17g M=%d\n", g.dim(), g.radius(),
                  g.size());
    out << buf;
    for (int i = 0; i < g.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", g.nodes()[i],
                    field.values[i]);
      out << buf;
    }
    if (!out) throw Error("write_field: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("write_field: cannot move " + tmp + " to " + path);
}

RadialField read_field(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("read_field: cannot open " + path);
  std::string header;
  std::getline(in, header);
  int dim = 0, count = 0;
  double radius = 0;
  if (std::sscanf(header.c_str(), "# N=%d R=%lf M=%d", &dim, &radius, &count) != 3)
    throw Error("read_field: malformed header in " + path);
  GridPtr grid = build_grid(dim, radius, count);
  Vector values(count);
  for (int i = 0; i < count; ++i) {
    double r = 0, v = 0;
    if (!(in >> r >> v)) throw Error("read_field: truncated data in " + path);
    values[i] = v;
  }
  return RadialField(std::move(grid), std::move(values));
}

} // namespace bnls
