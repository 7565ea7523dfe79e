#include "tkpm/instance.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace tkpm {
namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw InputError("line " + std::to_string(line_no) + ": " + what);
}

template <class T>
T number(std::string_view token, int line_no) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size())
    fail(line_no, "expected a number, got '" + std::string(token) + "'");
  return value;
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

}  // namespace

std::string_view problem_name(ProblemKind kind) { return kind == ProblemKind::Em ? "em" : "tkpm"; }

Instance parse_instance(std::string_view text) {
  Instance inst;
  bool have_header = false;
  int declared_edges = 0;
  std::vector<std::optional<Blob>> blobs;
  std::vector<Band> bands;
  std::optional<std::vector<BlobId>> order;
  std::set<std::pair<VertexId, VertexId>> seen;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const auto tok = split(line);
    if (tok.empty()) {
      if (end == text.size()) break;
      continue;
    }
    if (tok[0].front() == '#') {
      std::string_view rest = line.substr(line.find('#') + 1);
      while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
      while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) rest.remove_suffix(1);
      const auto eq = rest.find('=');
      if (eq != std::string_view::npos && eq > 0)
        inst.metadata.emplace_back(std::string(rest.substr(0, eq)), std::string(rest.substr(eq + 1)));
    } else if (tok[0] == "p") {
      if (have_header) fail(line_no, "duplicate problem line");
      if (tok.size() != 5 && tok.size() != 6) fail(line_no, "expected 'p <tkpm|em> <2n> <m> <k> [epsilon]'");
      if (tok[1] == "tkpm")
        inst.kind = ProblemKind::Tkpm;
      else if (tok[1] == "em")
        inst.kind = ProblemKind::Em;
      else
        fail(line_no, "unknown problem kind '" + std::string(tok[1]) + "'");
      inst.vertex_count = number<int>(tok[2], line_no);
      declared_edges = number<int>(tok[3], line_no);
      inst.k = number<int>(tok[4], line_no);
      if (inst.vertex_count < 0 || declared_edges < 0 || inst.k < 0) fail(line_no, "negative value in problem line");
      if (tok.size() == 6) inst.epsilon = number<double>(tok[5], line_no);
      have_header = true;
    } else if (tok[0] == "e") {
      if (tok.size() != 4 && tok.size() != 5) fail(line_no, "expected 'e <u> <v> <w> [r|b]'");
      Edge e;
      e.u = number<VertexId>(tok[1], line_no);
      e.v = number<VertexId>(tok[2], line_no);
      e.w = number<Weight>(tok[3], line_no);
      if (e.w < 0) fail(line_no, "negative weight");
      if (tok.size() == 5) {
        if (tok[4] == "r")
          e.color = Color::Red;
        else if (tok[4] == "b")
          e.color = Color::Blue;
        else
          fail(line_no, "edge color must be 'r' or 'b'");
      }
      if (e.u == e.v) fail(line_no, "self-loop");
      if (e.u < 0 || e.v < 0) fail(line_no, "negative vertex id");
      if (!seen.emplace(std::min(e.u, e.v), std::max(e.u, e.v)).second) fail(line_no, "duplicate edge");
      inst.edges.push_back(e);
    } else if (tok[0] == "blob") {
      if (tok.size() != 4) fail(line_no, "expected 'blob <id> <size> <c|i>'");
      const int id = number<int>(tok[1], line_no);
      const int size = number<int>(tok[2], line_no);
      if (id < 0) fail(line_no, "negative blob id");
      if (size < 1) fail(line_no, "blob size must be positive");
      if (tok[3] != "c" && tok[3] != "i") fail(line_no, "blob kind must be 'c' or 'i'");
      if (static_cast<std::size_t>(id) >= blobs.size()) blobs.resize(static_cast<std::size_t>(id) + 1);
      if (blobs[static_cast<std::size_t>(id)]) fail(line_no, "duplicate blob id");
      blobs[static_cast<std::size_t>(id)] = Blob{size, tok[3] == "c" ? ClassKind::Clique : ClassKind::Independent};
    } else if (tok[0] == "band") {
      if (tok.size() != 3) fail(line_no, "expected 'band <i> <j>'");
      bands.push_back(Band{number<int>(tok[1], line_no), number<int>(tok[2], line_no)});
    } else if (tok[0] == "order") {
      if (order) fail(line_no, "duplicate order line");
      order.emplace();
      for (std::size_t i = 1; i < tok.size(); ++i) order->push_back(number<int>(tok[i], line_no));
    } else {
      fail(line_no, "unknown line type '" + std::string(tok[0]) + "'");
    }
    if (end == text.size()) break;
  }
  if (!have_header) throw InputError("missing problem line");
  if (static_cast<int>(inst.edges.size()) != declared_edges)
    throw InputError("problem line declares " + std::to_string(declared_edges) + " edges but " +
                     std::to_string(inst.edges.size()) + " were given");
  for (const Edge& e : inst.edges)
    if (e.u >= inst.vertex_count || e.v >= inst.vertex_count)
      throw InputError("edge " + std::to_string(e.u) + " " + std::to_string(e.v) + " refers to a missing vertex");
  if (!blobs.empty() || !bands.empty() || order) {
    Prototype p;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
      if (!blobs[i]) throw InputError("blob ids must be 0.." + std::to_string(blobs.size() - 1) + "; missing " + std::to_string(i));
      p.blobs.push_back(*blobs[i]);
    }
    p.bands = std::move(bands);
    p.ordering = std::move(order);
    p.validate();
    inst.prototype = std::move(p);
  }
  return inst;
}

std::string write_instance(const Instance& inst) {
  std::ostringstream out;
  for (const auto& [key, value] : inst.metadata) out << "# " << key << '=' << value << '\n';
  out << "p " << problem_name(inst.kind) << ' ' << inst.vertex_count << ' ' << inst.edges.size() << ' ' << inst.k;
  if (inst.epsilon) out << ' ' << format_double(*inst.epsilon);
  out << '\n';
  if (inst.prototype) {
    const Prototype& p = *inst.prototype;
    for (int i = 0; i < p.blob_count(); ++i) {
      const Blob& b = p.blobs[static_cast<std::size_t>(i)];
      out << "blob " << i << ' ' << b.size << ' ' << (b.kind == ClassKind::Clique ? 'c' : 'i') << '\n';
    }
    for (const Band& b : p.bands) out << "band " << b.a << ' ' << b.b << '\n';
    if (p.ordering) {
      out << "order";
      for (BlobId b : *p.ordering) out << ' ' << b;
      out << '\n';
    }
  }
  for (const Edge& e : inst.edges) {
    out << "e " << e.u << ' ' << e.v << ' ' << e.w;
    if (e.color == Color::Red) out << " r";
    if (e.color == Color::Blue) out << " b";
    out << '\n';
  }
  return out.str();
}

Instance read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

}  // namespace tkpm
