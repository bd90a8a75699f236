#include "axmhd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>

namespace axmhd {

double twice_area(const Mesh& mesh, std::size_t e) {
  const auto& el = mesh.element(e);
  const Point& p1 = mesh.node(el[0]);
  const Point& p2 = mesh.node(el[1]);
  const Point& p3 = mesh.node(el[2]);
  return (p1.r - p3.r) * (p2.z - p3.z) - (p2.r - p3.r) * (p1.z - p3.z);
}

Mesh::Mesh(std::vector<Point> nodes, std::vector<Element> elements, std::vector<std::string> tags)
    : nodes_(std::move(nodes)), elements_(std::move(elements)), tags_(std::move(tags)) {
  const auto nn = nodes_.size();
  if (tags_.empty()) tags_.assign(nn, "");
  if (tags_.size() != nn) fail(ErrorCode::MeshFormat, "tag count does not match node count");

  for (std::size_t i = 0; i < nn; ++i) {
    if (!(nodes_[i].r >= kMinRadius))
      fail(ErrorCode::NonPositiveRadius, "node " + std::to_string(i + 1) + " has r = " + std::to_string(nodes_[i].r));
  }
  node_elements_.assign(nn, {});
  for (std::size_t e = 0; e < elements_.size(); ++e) {
    for (auto v : elements_[e]) {
      if (v < 0 || static_cast<std::size_t>(v) >= nn)
        fail(ErrorCode::MeshFormat, "element " + std::to_string(e + 1) + " references node out of range");
      node_elements_[v].push_back(static_cast<std::int32_t>(e));
    }
    const auto& el = elements_[e];
    if (el[0] == el[1] || el[1] == el[2] || el[0] == el[2])
      fail(ErrorCode::NonCCWElement, "element " + std::to_string(e + 1) + " repeats a vertex");
    if (!(twice_area(*this, e) > 0.0))
      fail(ErrorCode::NonCCWElement, "element " + std::to_string(e + 1) + " is not counter-clockwise");
  }
  for (std::size_t i = 0; i < nn; ++i) {
    if (node_elements_[i].empty()) fail(ErrorCode::DanglingNode, "node " + std::to_string(i + 1) + " is in no element");
  }

  // Undirected edge -> (use count, directed edge as seen by its first element).
  std::map<std::pair<std::int32_t, std::int32_t>, std::pair<int, std::pair<std::int32_t, std::int32_t>>> edges;
  for (const auto& el : elements_) {
    for (int k = 0; k < 3; ++k) {
      const auto a = el[k];
      const auto b = el[(k + 1) % 3];
      auto& entry = edges[{std::min(a, b), std::max(a, b)}];
      if (entry.first == 0) entry.second = {a, b};
      ++entry.first;
    }
  }
  std::vector<std::int32_t> next(nn, -1);
  std::vector<int> incoming(nn, 0);
  std::size_t boundary_edges = 0;
  for (const auto& [key, entry] : edges) {
    if (entry.first > 2)
      fail(ErrorCode::NonManifoldBoundary,
           "edge " + std::to_string(key.first + 1) + "-" + std::to_string(key.second + 1) + " shared by >2 elements");
    if (entry.first == 1) {
      const auto [a, b] = entry.second;
      if (next[a] != -1)
        fail(ErrorCode::NonManifoldBoundary, "boundary node " + std::to_string(a + 1) + " has several boundary edges");
      next[a] = b;
      ++incoming[b];
      ++boundary_edges;
    }
  }
  on_boundary_.assign(nn, false);
  std::int32_t start = -1;
  for (std::size_t i = 0; i < nn; ++i) {
    if ((next[i] != -1) != (incoming[i] == 1) || incoming[i] > 1)
      fail(ErrorCode::NonManifoldBoundary, "boundary node " + std::to_string(i + 1) + " is not on a simple loop");
    if (next[i] != -1 && start < 0) start = static_cast<std::int32_t>(i);
  }
  if (start < 0) fail(ErrorCode::NonManifoldBoundary, "mesh has no boundary");
  std::int32_t cur = start;
  do {
    boundary_.push_back(cur);
    on_boundary_[cur] = true;
    cur = next[cur];
  } while (cur != start && boundary_.size() <= boundary_edges);
  if (boundary_.size() != boundary_edges)
    fail(ErrorCode::NonManifoldBoundary, "boundary edges form more than one loop");
}

std::vector<std::int32_t> Mesh::one_ring(std::size_t i) const {
  std::vector<std::int32_t> ring;
  for (auto e : node_elements_[i])
    for (auto v : elements_[e]) ring.push_back(v);
  std::sort(ring.begin(), ring.end());
  ring.erase(std::unique(ring.begin(), ring.end()), ring.end());
  return ring;
}

NodalField Mesh::r() const {
  NodalField out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = nodes_[i].r;
  return out;
}

NodalField Mesh::z() const {
  NodalField out(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) out[i] = nodes_[i].z;
  return out;
}

namespace {

bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
  }
  return false;
}

}  // namespace

Mesh read_mesh(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  auto where = [&] { return source + ":" + std::to_string(lineno); };
  if (!next_content_line(in, line, lineno)) fail(ErrorCode::MeshFormat, source + ": empty mesh file");
  long long nn = -1, ne = -1;
  {
    std::istringstream ss(line);
    if (!(ss >> nn >> ne) || nn <= 0 || ne <= 0) fail(ErrorCode::MeshFormat, where() + ": bad header");
  }
  std::vector<Point> nodes;
  std::vector<std::string> tags;
  for (long long i = 0; i < nn; ++i) {
    if (!next_content_line(in, line, lineno)) fail(ErrorCode::MeshFormat, source + ": truncated node list");
    std::istringstream ss(line);
    Point p;
    std::string tag;
    if (!(ss >> p.r >> p.z)) fail(ErrorCode::MeshFormat, where() + ": bad node line");
    ss >> tag;
    nodes.push_back(p);
    tags.push_back(tag == "-" ? "" : tag);
  }
  std::vector<Element> elements;
  for (long long e = 0; e < ne; ++e) {
    if (!next_content_line(in, line, lineno)) fail(ErrorCode::MeshFormat, source + ": truncated element list");
    std::istringstream ss(line);
    long long a, b, c;
    if (!(ss >> a >> b >> c)) fail(ErrorCode::MeshFormat, where() + ": bad element line");
    for (auto v : {a, b, c})
      if (v < 1 || v > nn) fail(ErrorCode::MeshFormat, where() + ": node index out of range");
    elements.push_back({static_cast<std::int32_t>(a - 1), static_cast<std::int32_t>(b - 1),
                        static_cast<std::int32_t>(c - 1)});
  }
  return Mesh(std::move(nodes), std::move(elements), std::move(tags));
}

Mesh load_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::IoError, "cannot open mesh file " + path);
  return read_mesh(in, path);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.num_nodes() << ' ' << mesh.num_elements() << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    const auto& tag = mesh.tags()[i];
    out << mesh.node(i).r << ' ' << mesh.node(i).z << ' ' << (tag.empty() ? "-" : tag) << '\n';
  }
  for (const auto& el : mesh.elements()) out << el[0] + 1 << ' ' << el[1] + 1 << ' ' << el[2] + 1 << '\n';
}

void save_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write mesh file " + path);
  write_mesh(mesh, out);
}

Mesh generate_rect_mesh(Range r_range, Range z_range, double h_e) {
  if (!(h_e > 0.0)) fail(ErrorCode::DegenerateRange, "h_e must be positive");
  if (!(r_range.min > 0.0) || !(r_range.max > r_range.min))
    fail(ErrorCode::DegenerateRange, "r range must satisfy 0 < r_min < r_max");
  if (!(z_range.max > z_range.min)) fail(ErrorCode::DegenerateRange, "z range must satisfy z_min < z_max");
  const auto nr = std::max<long>(1, std::lround((r_range.max - r_range.min) / h_e));
  const auto nz = std::max<long>(1, std::lround((z_range.max - z_range.min) / h_e));
  std::vector<Point> nodes;
  nodes.reserve(static_cast<std::size_t>((nr + 1) * (nz + 1)));
  for (long j = 0; j <= nz; ++j) {
    const double z = j == nz ? z_range.max : z_range.min + (z_range.max - z_range.min) * j / nz;
    for (long i = 0; i <= nr; ++i) {
      const double r = i == nr ? r_range.max : r_range.min + (r_range.max - r_range.min) * i / nr;
      nodes.push_back({r, z});
    }
  }
  auto id = [nr](long i, long j) { return static_cast<std::int32_t>(j * (nr + 1) + i); };
  std::vector<Element> elements;
  elements.reserve(static_cast<std::size_t>(2 * nr * nz));
  for (long j = 0; j < nz; ++j) {
    for (long i = 0; i < nr; ++i) {
      const auto a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      elements.push_back({a, b, c});
      elements.push_back({a, c, d});
    }
  }
  return Mesh(std::move(nodes), std::move(elements));
}

Mesh perturb_interior(const Mesh& mesh, double h, double fraction, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-fraction * h, fraction * h);
  auto nodes = mesh.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double dr = u(rng), dz = u(rng);
    if (!mesh.is_boundary(i)) {
      nodes[i].r += dr;
      nodes[i].z += dz;
    }
  }
  return Mesh(std::move(nodes), mesh.elements(), mesh.tags());
}

Mesh warp(const Mesh& mesh, const std::function<Point(Point)>& map) {
  auto nodes = mesh.nodes();
  for (auto& p : nodes) p = map(p);
  return Mesh(std::move(nodes), mesh.elements(), mesh.tags());
}

Mesh carve(const Mesh& mesh, const std::function<bool(double, double)>& keep) {
  std::vector<std::int32_t> remap(mesh.num_nodes(), -1);
  std::vector<Element> kept;
  for (const auto& el : mesh.elements()) {
    double rc = 0, zc = 0;
    for (auto v : el) {
      rc += mesh.node(v).r / 3.0;
      zc += mesh.node(v).z / 3.0;
    }
    if (keep(rc, zc)) {
      kept.push_back(el);
      for (auto v : el) remap[v] = 0;
    }
  }
  std::vector<Point> nodes;
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < mesh.num_nodes(); ++i) {
    if (remap[i] == 0) {
      remap[i] = static_cast<std::int32_t>(nodes.size());
      nodes.push_back(mesh.node(i));
      tags.push_back(mesh.tags()[i]);
    }
  }
  for (auto& el : kept)
    for (auto& v : el) v = remap[v];
  return Mesh(std::move(nodes), std::move(kept), std::move(tags));
}

}  // namespace axmhd
