#include "sparsecut/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "sparsecut/errors.hpp"

namespace sparsecut {
namespace {

std::vector<std::string_view> tokenize(std::string_view line) {
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

[[noreturn]] void fail(int line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

bool parse_int(std::string_view s, long long& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size() && std::isfinite(out);
}

// Calls visit(line_number, tokens) for every non-blank line, comments removed.
template <typename Visit>
void for_each_line(std::string_view text, Visit&& visit) {
  int number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    ++number;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    const auto tokens = tokenize(line);
    if (!tokens.empty()) visit(number, tokens);
    if (end == text.size()) break;
    pos = end + 1;
  }
}

}  // namespace

InstancePair parse_instance(std::string_view text) {
  long long n = -1;
  bool first = true;
  bool header = false;
  std::vector<Edge> g_edges, h_edges;
  std::map<std::pair<int, int>, int> g_seen, h_seen;
  for_each_line(text, [&](int line, const std::vector<std::string_view>& tok) {
    const bool was_first = first;
    first = false;
    if (tok[0] == "graphpair") {
      if (!was_first || header) fail(line, "header must be the first line");
      header = true;
      if (tok.size() != 2 || tok[1] != "v1") fail(line, "unsupported format version");
      first = true;  // the n line may follow
      return;
    }
    if (tok[0] == "n") {
      if (n >= 0) fail(line, "duplicate n line");
      if (tok.size() != 2 || !parse_int(tok[1], n)) fail(line, "malformed line");
      if (n < 2) fail(line, "need at least 2 vertices");
      if (n > 10000) fail(line, "too many vertices");
      return;
    }
    if (tok[0] != "g" && tok[0] != "h") fail(line, "malformed line");
    if (n < 0) fail(line, "edge before n line");
    long long u = 0, v = 0;
    double w = 0.0;
    if (tok.size() != 4 || !parse_int(tok[1], u) || !parse_int(tok[2], v) || !parse_double(tok[3], w))
      fail(line, "malformed line");
    if (u < 0 || v < 0 || u >= n || v >= n) fail(line, "index out of range");
    if (w < 0.0) fail(line, "negative weight");
    auto& seen = tok[0] == "g" ? g_seen : h_seen;
    const std::pair<int, int> key{static_cast<int>(std::min(u, v)), static_cast<int>(std::max(u, v))};
    if (auto it = seen.find(key); it != seen.end())
      fail(line, "duplicate pair (" + std::to_string(key.first) + ", " + std::to_string(key.second) +
                     ") first listed on line " + std::to_string(it->second));
    seen[key] = line;
    (tok[0] == "g" ? g_edges : h_edges).push_back({key.first, key.second, w});
  });
  if (n < 0) throw InputError("missing n line");
  if (h_edges.empty()) throw InputError("empty demand graph");
  auto build = [&](const std::vector<Edge>& edges, const char* name) {
    double total = 0.0;
    for (const Edge& e : edges) total += e.w;
    if (!(total > 0.0)) throw InputError(std::string("zero total weight in ") + name);
    return WeightedGraph::from_edges(static_cast<int>(n), edges);
  };
  return InstancePair(build(g_edges, "g"), build(h_edges, "h"));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << text;
  if (!out) throw InputError("write failed for " + path.string());
}

InstancePair read_instance(const std::filesystem::path& path) {
  return parse_instance(read_text(path));
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_cut(const Cut& cut) {
  std::string s;
  for (Vertex v : cut.members()) {
    if (!s.empty()) s += ' ';
    s += std::to_string(v);
  }
  return s;
}

std::string format_instance(const InstancePair& pair) {
  std::string out = "graphpair v1\nn " + std::to_string(pair.size()) + "\n";
  for (const auto& [tag, g] : {std::pair{"g", &pair.g}, std::pair{"h", &pair.h}})
    for (const Edge& e : g->edges())
      out += std::string(tag) + ' ' + std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' +
             format_number(e.w) + '\n';
  return out;
}

std::string format_witness(const RelaxationValue& rv) {
  std::string out = "kind " + std::string(to_string(rv.kind)) + "\n";
  switch (rv.kind) {
    case RelaxationKind::kSpectral: {
      out += "n " + std::to_string(rv.x.size()) + "\nvalue " + format_number(rv.value) + "\n";
      for (Eigen::Index v = 0; v < rv.x.size(); ++v)
        out += "spectral x " + std::to_string(v) + ' ' + format_number(rv.x[v]) + '\n';
      break;
    }
    case RelaxationKind::kLeightonRao: {
      const int n = rv.metric.size();
      out += "n " + std::to_string(n) + "\nvalue " + format_number(rv.value) + "\n";
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          out += "metric " + std::to_string(u) + ' ' + std::to_string(v) + ' ' +
                 format_number(rv.metric(u, v)) + '\n';
      break;
    }
    case RelaxationKind::kGoemansLinial: {
      const int n = rv.embedding.size();
      out += "n " + std::to_string(n) + "\nvalue " + format_number(rv.value) + "\n";
      for (int v = 0; v < n; ++v) {
        out += "points " + std::to_string(v);
        for (int c = 0; c < rv.embedding.dim(); ++c)
          out += ' ' + format_number(rv.embedding.points(v, c));
        out += '\n';
      }
      break;
    }
  }
  return out;
}

RelaxationValue parse_witness(std::string_view text) {
  RelaxationValue rv;
  bool have_kind = false, have_value = false;
  long long n = -1;
  int dim = -1;
  std::vector<char> seen;
  for_each_line(text, [&](int line, const std::vector<std::string_view>& tok) {
    if (tok[0] == "kind") {
      if (tok.size() != 2) fail(line, "malformed line");
      rv.kind = parse_relaxation_kind(tok[1]);
      have_kind = true;
      return;
    }
    if (tok[0] == "n") {
      if (tok.size() != 2 || !parse_int(tok[1], n) || n < 2 || n > 5000) fail(line, "malformed line");
      rv.x = Eigen::VectorXd::Zero(n);
      rv.metric.d = Eigen::MatrixXd::Zero(n, n);
      seen.assign(static_cast<std::size_t>(n * n), 0);
      return;
    }
    if (tok[0] == "value") {
      if (tok.size() != 2 || !parse_double(tok[1], rv.value)) fail(line, "malformed line");
      have_value = true;
      return;
    }
    if (!have_kind || n < 0) fail(line, "kind and n must precede witness lines");
    auto index = [&](std::string_view s) {
      long long v = 0;
      if (!parse_int(s, v)) fail(line, "malformed line");
      if (v < 0 || v >= n) fail(line, "index out of range");
      return static_cast<int>(v);
    };
    if (tok[0] == "spectral" && rv.kind == RelaxationKind::kSpectral) {
      if (tok.size() != 4 || tok[1] != "x") fail(line, "malformed line");
      const int v = index(tok[2]);
      if (!parse_double(tok[3], rv.x[v])) fail(line, "malformed line");
      if (seen[v]++) fail(line, "duplicate entry");
    } else if (tok[0] == "metric" && rv.kind == RelaxationKind::kLeightonRao) {
      if (tok.size() != 4) fail(line, "malformed line");
      const int u = index(tok[1]), v = index(tok[2]);
      double d = 0.0;
      if (!parse_double(tok[3], d)) fail(line, "malformed line");
      if (seen[static_cast<std::size_t>(u * n + v)]++) fail(line, "duplicate entry");
      rv.metric.d(u, v) = rv.metric.d(v, u) = d;
    } else if (tok[0] == "points" && rv.kind == RelaxationKind::kGoemansLinial) {
      if (tok.size() < 3) fail(line, "malformed line");
      const int v = index(tok[1]);
      const int this_dim = static_cast<int>(tok.size()) - 2;
      if (dim < 0) {
        dim = this_dim;
        rv.embedding.points = Eigen::MatrixXd::Zero(n, dim);
      } else if (dim != this_dim) {
        fail(line, "inconsistent point dimension");
      }
      for (int c = 0; c < dim; ++c)
        if (!parse_double(tok[c + 2], rv.embedding.points(v, c))) fail(line, "malformed line");
      if (seen[v]++) fail(line, "duplicate entry");
    } else {
      fail(line, "malformed line");
    }
  });
  if (!have_kind || n < 0 || !have_value) throw InputError("witness is missing kind, n or value");
  if (rv.kind == RelaxationKind::kGoemansLinial && dim < 0)
    throw InputError("witness has no points");
  return rv;
}

std::string format_certificate(const RoundingCertificate& cert) {
  std::string out;
  out += "cut " + format_cut(cert.cut) + "\n";
  out += "branch " + std::string(to_string(cert.branch)) + "\n";
  out += "sparsity " + format_number(cert.report.sigma) + "\n";
  out += "epsilon " + format_number(cert.epsilon) + "\n";
  out += "bound " + format_number(cert.bound) + "\n";
  out += std::string("bound_holds ") + (cert.bound_holds ? "true" : "false") + "\n";
  const DichotomyOutcome& ev = cert.evidence;
  out += std::string("case ") +
         (ev.which == DichotomyOutcome::Case::kBall ? "ball" : "spread") + "\n";
  if (ev.center >= 0) {
    out += "center " + std::to_string(ev.center) + "\n";
    out += "ball_mass " + format_number(ev.ball_mass) + "\n";
  }
  if (ev.spread_holds) out += "far_pair_mass " + format_number(ev.far_pair_mass) + "\n";
  out += "embedding_retries " + std::to_string(cert.embedding_retries) + "\n";
  if (cert.c1) out += "c1 " + format_number(*cert.c1) + "\n";
  if (cert.c2) out += "c2 " + format_number(*cert.c2) + "\n";
  return out;
}

std::string format_flow(const StCertificate& cert) {
  std::string out;
  out += "s " + std::to_string(cert.potentials.s) + "\n";
  out += "t " + std::to_string(cert.potentials.t) + "\n";
  out += "epsilon " + format_number(cert.potentials.energy) + "\n";
  out += std::string("disconnected ") + (cert.potentials.disconnected ? "true" : "false") + "\n";
  out += "cut " + format_cut(cert.sweep.cut) + "\n";
  out += "cut_fraction " + format_number(cert.sweep.cut_fraction) + "\n";
  out += "flow_value " + format_number(cert.flow.value) + "\n";
  out += "ratio " + format_number(cert.ratio) + "\n";
  for (const FlowEdge& e : cert.flow.edges)
    out += "flow " + std::to_string(e.u) + ' ' + std::to_string(e.v) + ' ' + format_number(e.f) +
           '\n';
  return out;
}

}  // namespace sparsecut
