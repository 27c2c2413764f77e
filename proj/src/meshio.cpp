#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "shrinkflow/mesh.hpp"

namespace shrinkflow {

void write_obj(const std::string& path, const SurfaceMesh& mesh) {
  if (mesh.dim != 3) throw std::invalid_argument("write_obj: triangle meshes only");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_obj: cannot open " + path);
  out << std::setprecision(17);
  for (const Vec3& v : mesh.vertices) out << "v " << v.x << " " << v.y << " " << v.z << "\n";
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

SurfaceMesh read_obj(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_obj: cannot open " + path);
  SurfaceMesh mesh;
  mesh.dim = 3;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      Vec3 v;
      ss >> v.x >> v.y >> v.z;
      mesh.vertices.push_back(v);
    } else if (tag == "f") {
      std::array<int, 3> t{};
      for (int k = 0; k < 3; ++k) {
        std::string tok;
        ss >> tok;
        // accept "i", "i/..", "i//.."
        t[k] = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      mesh.triangles.push_back(t);
    }
  }
  return mesh;
}

void write_polyline_csv(const std::string& path, const SurfaceMesh& mesh) {
  if (mesh.dim != 2) throw std::invalid_argument("write_polyline_csv: planar polylines only");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_polyline_csv: cannot open " + path);
  out << std::setprecision(17);
  // Emit vertices in traversal order; closure is by convention.
  std::vector<int> next(mesh.vertices.size(), -1);
  for (const auto& s : mesh.segments) next[s[0]] = s[1];
  std::vector<char> done(mesh.vertices.size(), 0);
  for (std::size_t start = 0; start < mesh.vertices.size(); ++start) {
    if (done[start] || next[start] < 0) continue;
    int v = static_cast<int>(start);
    while (v >= 0 && !done[v]) {
      done[v] = 1;
      out << mesh.vertices[v].x << "," << mesh.vertices[v].y << "\n";
      v = next[v];
    }
    out << "\n";  // blank line separates loops
  }
}

SurfaceMesh read_polyline_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_polyline_csv: cannot open " + path);
  SurfaceMesh mesh;
  mesh.dim = 2;
  std::string line;
  int loop_start = 0;
  auto close_loop = [&]() {
    int count = static_cast<int>(mesh.vertices.size()) - loop_start;
    if (count >= 2) {
      for (int i = 0; i < count; ++i)
        mesh.segments.push_back({loop_start + i, loop_start + (i + 1) % count});
    }
    loop_start = static_cast<int>(mesh.vertices.size());
  };
  while (std::getline(in, line)) {
    if (line.empty()) {
      close_loop();
      continue;
    }
    std::istringstream ss(line);
    double x, y;
    char comma;
    if (ss >> x >> comma >> y) mesh.vertices.push_back({x, y, 0});
  }
  close_loop();
  return mesh;
}

}  // namespace shrinkflow
