#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tkpm/blowup.hpp"
#include "tkpm/graph.hpp"

namespace tkpm {

enum class ProblemKind { Tkpm, Em };

// Line-based instance file:
//
//   # key=value            metadata, kept in order
//   p <tkpm|em> <2n> <m> <k> [epsilon]
//   blob <id> <size> <c|i>
//   band <i> <j>
//   order <id> <id> ...
//   e <u> <v> <w> [r|b]
//
// Blank lines and '#' lines without '=' are ignored. write_instance emits a
// canonical form, so write(parse(write(parse(x)))) == write(parse(x)).
struct Instance {
  ProblemKind kind = ProblemKind::Tkpm;
  int vertex_count = 0;
  int k = 0;
  std::optional<double> epsilon;
  std::vector<Edge> edges;
  std::optional<Prototype> prototype;
  std::vector<std::pair<std::string, std::string>> metadata;

  Graph graph() const { return Graph(vertex_count, edges); }
};

Instance parse_instance(std::string_view text);
std::string write_instance(const Instance& instance);

Instance read_instance_file(const std::string& path);

std::string_view problem_name(ProblemKind kind);

}  // namespace tkpm
