#include "soam/io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "soam/error.hpp"
#include "soam/simplicial.hpp"

namespace soam {

namespace {

std::string fmt_real(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string fmt9(double v) { return fmt_real(v, 9); }
std::string fmt17(double v) { return fmt_real(v, 17); }

/// Splits text into lines with '#' comments removed; keeps 1-based line numbers.
struct Line {
  std::size_t number;
  std::vector<std::string_view> tokens;
};

std::vector<std::string_view> tokenize(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<Line> content_lines(std::string_view text, bool strip_comments = true) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    if (strip_comments) raw = raw.substr(0, raw.find('#'));
    auto tokens = tokenize(raw);
    if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
    if (end == text.size()) break;
    pos = end + 1;
  }
  return lines;
}

double parse_real(std::string_view tok, std::size_t line, const char* what) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size() || !std::isfinite(v))
    throw FormatError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

std::uint64_t parse_uint(std::string_view tok, std::size_t line, const char* what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw FormatError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

std::int64_t parse_int(std::string_view tok, std::size_t line, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw FormatError(std::string("bad ") + what + " '" + std::string(tok) + "'", line);
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_triangle(const std::array<std::uint32_t, 3>& t, std::size_t line) {
  if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw FormatError("degenerate triangle", line);
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

// ---------------------------------------------------------------- meshes

Mesh parse_off(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) throw FormatError("empty OFF file");
  std::size_t li = 0;
  const Line& head = lines[li++];
  std::size_t coord_dim = 0;
  if (head.tokens[0] == "OFF") coord_dim = 3;
  else if (head.tokens[0] == "4OFF") coord_dim = 4;
  else throw FormatError("expected OFF header, found '" + std::string(head.tokens[0]) + "'", head.number);

  // Counts may share the header line.
  std::vector<std::string_view> counts(head.tokens.begin() + 1, head.tokens.end());
  std::size_t counts_line = head.number;
  if (counts.empty()) {
    if (li == lines.size()) throw FormatError("missing vertex/face counts", head.number);
    counts = lines[li].tokens;
    counts_line = lines[li].number;
    ++li;
  }
  if (counts.size() < 2 || counts.size() > 3) throw FormatError("malformed counts line", counts_line);
  const std::uint64_t nv = parse_uint(counts[0], counts_line, "vertex count");
  const std::uint64_t nf = parse_uint(counts[1], counts_line, "face count");
  if (counts.size() == 3) parse_uint(counts[2], counts_line, "edge count");

  Mesh mesh;
  mesh.vertices.reserve(nv);
  for (std::uint64_t i = 0; i < nv; ++i) {
    if (li == lines.size()) throw FormatError("expected " + std::to_string(nv) + " vertices, found " + std::to_string(i));
    const Line& l = lines[li++];
    if (l.tokens.size() < coord_dim) throw FormatError("vertex needs " + std::to_string(coord_dim) + " coordinates", l.number);
    Point p(coord_dim);
    for (std::size_t k = 0; k < coord_dim; ++k) p[k] = parse_real(l.tokens[k], l.number, "coordinate");
    mesh.vertices.push_back(p);
  }
  for (std::uint64_t i = 0; i < nf; ++i) {
    if (li == lines.size()) throw FormatError("expected " + std::to_string(nf) + " faces, found " + std::to_string(i));
    const Line& l = lines[li++];
    const std::uint64_t n = parse_uint(l.tokens[0], l.number, "face size");
    if (n != 2 && n != 3)
      throw FormatError("only triangle faces are supported, found a face with " + std::to_string(n) + " vertices", l.number);
    if (l.tokens.size() < n + 1) throw FormatError("face lists fewer indices than its size", l.number);
    std::array<std::uint32_t, 3> idx{};
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t v = parse_uint(l.tokens[k + 1], l.number, "vertex index");
      if (v >= nv) throw FormatError("vertex index " + std::to_string(v) + " out of range", l.number);
      idx[k] = static_cast<std::uint32_t>(v);
    }
    if (n == 3) {
      check_triangle(idx, l.number);
      mesh.triangles.push_back(idx);
    } else {
      if (idx[0] == idx[1]) throw FormatError("degenerate segment", l.number);
      mesh.segments.push_back({idx[0], idx[1]});
    }
  }
  if (li != lines.size()) throw FormatError("unexpected content after the last face", lines[li].number);
  return mesh;
}

std::string format_off(const Mesh& mesh) {
  std::size_t coord_dim = 3;
  for (const Point& p : mesh.vertices)
    if (p.dim() == 4) coord_dim = 4;
  std::string out = coord_dim == 4 ? "4OFF\n" : "OFF\n";
  out += std::to_string(mesh.vertices.size()) + ' ' +
         std::to_string(mesh.triangles.size() + mesh.segments.size()) + " 0\n";
  for (const Point& p : mesh.vertices) {
    for (std::size_t k = 0; k < coord_dim; ++k) {
      if (k) out += ' ';
      out += fmt9(k < p.dim() ? p[k] : 0.0);
    }
    out += '\n';
  }
  for (const auto& t : mesh.triangles)
    out += "3 " + std::to_string(t[0]) + ' ' + std::to_string(t[1]) + ' ' + std::to_string(t[2]) + '\n';
  for (const auto& s : mesh.segments) out += "2 " + std::to_string(s[0]) + ' ' + std::to_string(s[1]) + '\n';
  return out;
}

Mesh parse_obj(std::string_view text) {
  Mesh mesh;
  auto resolve = [&](std::string_view tok, std::size_t line) -> std::uint32_t {
    const std::string_view head = tok.substr(0, tok.find('/'));
    const std::int64_t raw = parse_int(head, line, "vertex index");
    const auto n = static_cast<std::int64_t>(mesh.vertices.size());
    const std::int64_t idx = raw > 0 ? raw - 1 : n + raw;
    if (raw == 0 || idx < 0 || idx >= n) throw FormatError("vertex index " + std::string(head) + " out of range", line);
    return static_cast<std::uint32_t>(idx);
  };
  for (const Line& l : content_lines(text)) {
    const std::string_view kind = l.tokens[0];
    if (kind == "v") {
      if (l.tokens.size() < 4) throw FormatError("vertex needs 3 coordinates", l.number);
      Point p(3);
      for (std::size_t k = 0; k < 3; ++k) p[k] = parse_real(l.tokens[k + 1], l.number, "coordinate");
      mesh.vertices.push_back(p);
    } else if (kind == "f") {
      if (l.tokens.size() != 4)
        throw FormatError("only triangle faces are supported, found a face with " + std::to_string(l.tokens.size() - 1) +
                              " vertices",
                          l.number);
      std::array<std::uint32_t, 3> t{resolve(l.tokens[1], l.number), resolve(l.tokens[2], l.number),
                                     resolve(l.tokens[3], l.number)};
      check_triangle(t, l.number);
      mesh.triangles.push_back(t);
    } else if (kind == "l") {
      if (l.tokens.size() < 3) throw FormatError("line record needs two vertices", l.number);
      for (std::size_t k = 1; k + 1 < l.tokens.size(); ++k) {
        const std::uint32_t a = resolve(l.tokens[k], l.number), b = resolve(l.tokens[k + 1], l.number);
        if (a == b) throw FormatError("degenerate segment", l.number);
        mesh.segments.push_back({a, b});
      }
    }
    // vt, vn, g, o, s, usemtl, mtllib and friends carry nothing we use.
  }
  return mesh;
}

Mesh load_mesh(const std::string& path) {
  const auto dot = path.rfind('.');
  const std::string ext = dot == std::string::npos ? "" : lower(path.substr(dot + 1));
  if (ext == "off") return parse_off(read_file(path));
  if (ext == "obj") return parse_obj(read_file(path));
  throw UsageError("unknown mesh format for " + path + " (expected .off or .obj)");
}

Mesh to_mesh(const Soam& soam) {
  const SimplicialComplex& c = soam.complex();
  Mesh mesh;
  std::map<UnitId, std::uint32_t> index;
  for (UnitId id : c.vertices()) {
    index[id] = static_cast<std::uint32_t>(mesh.vertices.size());
    mesh.vertices.push_back(soam.unit(id).position);
  }
  std::set<EdgeKey> covered;
  for (const Triangle& t : c.triangles()) {
    mesh.triangles.push_back({index[t.v[0]], index[t.v[1]], index[t.v[2]]});
    covered.insert(EdgeKey(t.v[0], t.v[1]));
    covered.insert(EdgeKey(t.v[1], t.v[2]));
    covered.insert(EdgeKey(t.v[0], t.v[2]));
  }
  for (const auto& [e, age] : c.edges())
    if (!covered.count(e)) mesh.segments.push_back({index[e.a], index[e.b]});
  return mesh;
}

std::vector<Point> parse_points(std::string_view text) {
  std::vector<Point> points;
  for (const Line& l : content_lines(text)) {
    const std::size_t d = l.tokens.size();
    if (d < 2 || d > 4) throw FormatError("a point needs 2 to 4 coordinates", l.number);
    if (!points.empty() && points.front().dim() != d)
      throw FormatError("point dimension " + std::to_string(d) + " differs from " + std::to_string(points.front().dim()),
                        l.number);
    Point p(d);
    for (std::size_t k = 0; k < d; ++k) p[k] = parse_real(l.tokens[k], l.number, "coordinate");
    points.push_back(p);
  }
  return points;
}

std::string format_points(std::span<const Point> points) {
  std::string out;
  for (const Point& p : points) {
    for (std::size_t k = 0; k < p.dim(); ++k) {
      if (k) out += ' ';
      out += fmt9(p[k]);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- telemetry

std::string format_telemetry_row(const TelemetryFrame& f) {
  std::string out = std::to_string(f.signal);
  for (std::size_t c : f.state_counts) out += ',' + std::to_string(c);
  out += ',' + std::to_string(f.units) + ',' + std::to_string(f.edges) + ',' + std::to_string(f.triangles) + ',' +
         std::to_string(f.insertions) + ',' + std::to_string(f.merges) + ',' + std::to_string(f.prunes);
  return out;
}

std::string format_telemetry(std::span<const TelemetryFrame> frames) {
  std::string out(kTelemetryHeader);
  out += '\n';
  for (const TelemetryFrame& f : frames) {
    out += format_telemetry_row(f);
    out += '\n';
  }
  return out;
}

std::vector<TelemetryFrame> parse_telemetry(std::string_view text) {
  const auto lines = content_lines(text, false);
  if (lines.empty() || lines[0].tokens.size() != 1 || lines[0].tokens[0] != kTelemetryHeader)
    throw FormatError("missing telemetry header", lines.empty() ? 0 : lines[0].number);
  std::vector<TelemetryFrame> frames;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& l = lines[i];
    if (l.tokens.size() != 1) throw FormatError("unexpected whitespace in telemetry row", l.number);
    std::vector<std::uint64_t> v;
    std::string_view row = l.tokens[0];
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = row.find(',', pos);
      v.push_back(parse_uint(row.substr(pos, comma == std::string_view::npos ? comma : comma - pos), l.number, "count"));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    if (v.size() != 15) throw FormatError("telemetry row needs 15 fields", l.number);
    TelemetryFrame f;
    f.signal = v[0];
    for (std::size_t k = 0; k < kStateCount; ++k) f.state_counts[k] = v[1 + k];
    f.units = v[9];
    f.edges = v[10];
    f.triangles = v[11];
    f.insertions = v[12];
    f.merges = v[13];
    f.prunes = v[14];
    frames.push_back(f);
  }
  return frames;
}

// ---------------------------------------------------------------- configuration

namespace {

struct Key {
  std::string_view name;
  bool is_param;  // part of SoamParams, stored in snapshots
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&, int digits)> get;
};

double to_real(std::string_view v) {
  double x = 0.0;
  const char* first = v.data();
  if (!v.empty() && v.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
    throw UsageError("expected a number, got '" + std::string(v) + "'");
  return x;
}

std::uint64_t to_count(std::string_view v) {
  std::uint64_t x = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw UsageError("expected a non-negative integer, got '" + std::string(v) + "'");
  return x;
}

int to_int(std::string_view v) {
  const std::uint64_t x = to_count(v);
  if (x > 1'000'000'000ull) throw UsageError("value " + std::string(v) + " is too large");
  return static_cast<int>(x);
}

template <class T>
Key real_param(std::string_view name, T SoamParams::*field) {
  return {name, true, [field](RunConfig& c, std::string_view v) { c.params.*field = to_real(v); },
          [field](const RunConfig& c, int digits) { return fmt_real(c.params.*field, digits); }};
}

template <class T>
Key count_param(std::string_view name, T SoamParams::*field) {
  return {name, true,
          [field](RunConfig& c, std::string_view v) {
            if constexpr (std::is_same_v<T, int>) c.params.*field = to_int(v);
            else c.params.*field = to_count(v);
          },
          [field](const RunConfig& c, int) { return std::to_string(c.params.*field); }};
}

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      count_param("dim", &SoamParams::manifold_dim),
      real_param("F", &SoamParams::firing_max),
      real_param("T_f", &SoamParams::firing_threshold),
      real_param("alpha_h", &SoamParams::alpha_h),
      real_param("tau_f", &SoamParams::tau_f),
      real_param("tau_f_n", &SoamParams::tau_f_n),
      real_param("R", &SoamParams::r_max),
      real_param("r_min", &SoamParams::r_min),
      real_param("alpha_r", &SoamParams::alpha_r),
      real_param("tau_r_hab", &SoamParams::tau_r_hab),
      real_param("tau_r_dis", &SoamParams::tau_r_dis),
      count_param("T_age", &SoamParams::max_age),
      real_param("eta_b", &SoamParams::eta_b),
      real_param("eta_nb", &SoamParams::eta_nb),
      real_param("eta_stable", &SoamParams::eta_stable),
      real_param("idle_factor", &SoamParams::idle_factor),
      count_param("seed", &SoamParams::seed),
      count_param("max_signals", &SoamParams::max_signals),
      count_param("stability_window", &SoamParams::stability_window),
      {"input", false, [](RunConfig& c, std::string_view v) { c.input = std::string(v); },
       [](const RunConfig& c, int) { return c.input; }},
      {"shape", false, [](RunConfig& c, std::string_view v) { c.shape = std::string(v); },
       [](const RunConfig& c, int) { return c.shape; }},
      {"noise", false, [](RunConfig& c, std::string_view v) { c.noise = to_real(v); },
       [](const RunConfig& c, int digits) { return fmt_real(c.noise, digits); }},
      {"out", false, [](RunConfig& c, std::string_view v) { c.out = std::string(v); },
       [](const RunConfig& c, int) { return c.out; }},
      {"telemetry_interval", false, [](RunConfig& c, std::string_view v) { c.telemetry_interval = to_count(v); },
       [](const RunConfig& c, int) { return std::to_string(c.telemetry_interval); }},
      {"algorithm", false,
       [](RunConfig& c, std::string_view v) {
         if (v == "soam") c.algorithm = Algorithm::Soam;
         else if (v == "gwr") c.algorithm = Algorithm::Gwr;
         else throw UsageError("algorithm must be soam or gwr, got '" + std::string(v) + "'");
       },
       [](const RunConfig& c, int) { return std::string(c.algorithm == Algorithm::Soam ? "soam" : "gwr"); }},
  };
  return table;
}

const Key* find_key(std::string_view name) {
  for (const Key& k : keys())
    if (k.name == name) return &k;
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (input.empty() == shape.empty()) throw UsageError("exactly one of input and shape must be set");
  if (!(noise >= 0.0)) throw UsageError("noise must be >= 0");
  if (telemetry_interval == 0) throw UsageError("telemetry_interval must be >= 1");
  if (out.empty()) throw UsageError("out prefix must not be empty");
}

bool set_config_value(RunConfig& config, std::string_view key, std::string_view value) {
  const Key* k = find_key(key);
  if (!k) return false;
  k->set(config, value);
  return true;
}

RunConfig parse_config(std::string_view text, const RunConfig& base) {
  RunConfig config = base;
  std::vector<std::string> seen;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view raw = text.substr(pos, end - pos);
    ++number;
    raw = raw.substr(0, raw.find('#'));
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    raw = trim(raw);
    if (!raw.empty()) {
      const std::size_t eq = raw.find('=');
      if (eq == std::string_view::npos) throw FormatError("expected key = value", number);
      const std::string_view key = trim(raw.substr(0, eq));
      const std::string_view value = trim(raw.substr(eq + 1));
      if (key.empty()) throw FormatError("missing key", number);
      if (std::find(seen.begin(), seen.end(), key) != seen.end())
        throw FormatError("key '" + std::string(key) + "' given twice", number);
      seen.emplace_back(key);
      try {
        if (!set_config_value(config, key, value)) throw FormatError("unknown key '" + std::string(key) + "'", number);
      } catch (const UsageError& e) {
        throw FormatError(std::string(key) + ": " + e.what(), number);
      }
    }
    if (end == text.size()) break;
    pos = end + 1;
  }
  return config;
}

std::string format_config(const RunConfig& config) {
  std::string out;
  for (const Key& k : keys()) {
    out += k.name;
    out += "=";
    out += k.get(config, 9);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------- snapshots

std::string format_snapshot(const SoamSnapshot& snap) {
  std::string out = "SOAMSNAP 1\n";
  RunConfig holder;
  holder.params = snap.params;
  for (const Key& k : keys())
    if (k.is_param) out += "param " + std::string(k.name) + ' ' + k.get(holder, 17) + '\n';
  out += "dim " + std::to_string(snap.dim) + '\n';
  out += "signals " + std::to_string(snap.signals) + '\n';
  out += "stable_streak " + std::to_string(snap.stable_streak) + '\n';
  out += "insertions " + std::to_string(snap.insertions) + '\n';
  out += "merges " + std::to_string(snap.merges) + '\n';
  out += "prunes " + std::to_string(snap.prunes) + '\n';
  out += "next_id " + std::to_string(snap.next_id) + '\n';
  out += "units " + std::to_string(snap.units.size()) + '\n';
  for (const auto& [id, u] : snap.units) {
    out += "u " + std::to_string(id) + ' ' + std::string(to_string(u.state)) + ' ' + fmt17(u.firing) + ' ' +
           fmt17(u.threshold) + ' ' + std::to_string(u.last_won);
    for (std::size_t k = 0; k < u.position.dim(); ++k) out += ' ' + fmt17(u.position[k]);
    out += '\n';
  }
  out += "edges " + std::to_string(snap.edges.size()) + '\n';
  for (const auto& [e, age] : snap.edges)
    out += "e " + std::to_string(e.a) + ' ' + std::to_string(e.b) + ' ' + std::to_string(age) + '\n';

  SimplicialComplex c(snap.params.manifold_dim);
  for (const auto& [id, u] : snap.units) c.add_vertex(id);
  for (const auto& [e, age] : snap.edges) c.add_edge_with_age(e.a, e.b, age);
  const auto tris = c.triangles();
  out += "triangles " + std::to_string(tris.size()) + '\n';
  for (const Triangle& t : tris)
    out += "t " + std::to_string(t.v[0]) + ' ' + std::to_string(t.v[1]) + ' ' + std::to_string(t.v[2]) + '\n';
  out += "end\n";
  return out;
}

SoamSnapshot parse_snapshot(std::string_view text) {
  const auto lines = content_lines(text);
  std::size_t li = 0;
  auto next = [&](std::string_view expect) -> const Line& {
    if (li == lines.size())
      throw FormatError("snapshot ends early, expected '" + std::string(expect) + "'",
                        lines.empty() ? 0 : lines.back().number);
    const Line& l = lines[li++];
    if (l.tokens[0] != expect)
      throw FormatError("expected '" + std::string(expect) + "', found '" + std::string(l.tokens[0]) + "'", l.number);
    return l;
  };
  auto scalar = [&](std::string_view name) {
    const Line& l = next(name);
    if (l.tokens.size() != 2) throw FormatError(std::string(name) + " takes one value", l.number);
    return parse_uint(l.tokens[1], l.number, std::string(name).c_str());
  };

  const Line& head = next("SOAMSNAP");
  if (head.tokens.size() != 2) throw FormatError("malformed snapshot header", head.number);
  if (head.tokens[1] != "1")
    throw FormatError("unsupported snapshot version '" + std::string(head.tokens[1]) + "'", head.number);

  SoamSnapshot snap;
  RunConfig holder;
  for (const Key& k : keys()) {
    if (!k.is_param) continue;
    const Line& l = next("param");
    if (l.tokens.size() != 3 || l.tokens[1] != k.name)
      throw FormatError("expected param " + std::string(k.name), l.number);
    try {
      k.set(holder, l.tokens[2]);
    } catch (const UsageError& e) {
      throw FormatError(std::string(k.name) + ": " + e.what(), l.number);
    }
  }
  snap.params = holder.params;
  snap.dim = scalar("dim");
  if (snap.dim < 2 || snap.dim > 4) throw FormatError("dimension must be 2, 3 or 4", lines[li - 1].number);
  snap.signals = scalar("signals");
  snap.stable_streak = scalar("stable_streak");
  snap.insertions = scalar("insertions");
  snap.merges = scalar("merges");
  snap.prunes = scalar("prunes");
  const std::uint64_t next_id = scalar("next_id");
  if (next_id > std::numeric_limits<UnitId>::max()) throw FormatError("next_id too large", lines[li - 1].number);
  snap.next_id = static_cast<UnitId>(next_id);

  const std::uint64_t nu = scalar("units");
  for (std::uint64_t i = 0; i < nu; ++i) {
    const Line& l = next("u");
    if (l.tokens.size() != 6 + snap.dim) throw FormatError("unit line needs " + std::to_string(6 + snap.dim) + " fields", l.number);
    const std::uint64_t id = parse_uint(l.tokens[1], l.number, "unit id");
    if (id >= snap.next_id) throw FormatError("unit id " + std::to_string(id) + " is not below next_id", l.number);
    if (!snap.units.empty() && id <= snap.units.back().first) throw FormatError("unit ids must ascend", l.number);
    Unit u;
    const auto state = parse_unit_state(l.tokens[2]);
    if (!state) throw FormatError("unknown state '" + std::string(l.tokens[2]) + "'", l.number);
    u.state = *state;
    u.firing = parse_real(l.tokens[3], l.number, "firing");
    u.threshold = parse_real(l.tokens[4], l.number, "threshold");
    u.last_won = parse_uint(l.tokens[5], l.number, "last_won");
    u.position = Point(snap.dim);
    for (std::size_t k = 0; k < snap.dim; ++k) u.position[k] = parse_real(l.tokens[6 + k], l.number, "coordinate");
    snap.units.emplace_back(static_cast<UnitId>(id), u);
  }

  SimplicialComplex c(snap.params.manifold_dim);
  for (const auto& [id, u] : snap.units) c.add_vertex(id);
  const std::uint64_t ne = scalar("edges");
  for (std::uint64_t i = 0; i < ne; ++i) {
    const Line& l = next("e");
    if (l.tokens.size() != 4) throw FormatError("edge line needs 3 fields", l.number);
    const std::uint64_t a = parse_uint(l.tokens[1], l.number, "edge end");
    const std::uint64_t b = parse_uint(l.tokens[2], l.number, "edge end");
    const std::int64_t age = parse_int(l.tokens[3], l.number, "edge age");
    if (a >= b) throw FormatError("edge ends must be ascending and distinct", l.number);
    if (!c.has_vertex(static_cast<UnitId>(a)) || !c.has_vertex(static_cast<UnitId>(b)))
      throw FormatError("edge refers to a missing unit", l.number);
    if (age < 0 || age > 1'000'000'000) throw FormatError("edge age out of range", l.number);
    const EdgeKey key(static_cast<UnitId>(a), static_cast<UnitId>(b));
    if (!snap.edges.empty() && !(snap.edges.back().first < key)) throw FormatError("edges must ascend", l.number);
    c.add_edge_with_age(key.a, key.b, static_cast<int>(age));
    snap.edges.emplace_back(key, static_cast<int>(age));
  }

  const Line& tri_head = lines[li];
  const std::uint64_t nt = scalar("triangles");
  std::vector<Triangle> listed;
  for (std::uint64_t i = 0; i < nt; ++i) {
    const Line& l = next("t");
    if (l.tokens.size() != 4) throw FormatError("triangle line needs 3 fields", l.number);
    listed.push_back(Triangle(static_cast<UnitId>(parse_uint(l.tokens[1], l.number, "vertex")),
                              static_cast<UnitId>(parse_uint(l.tokens[2], l.number, "vertex")),
                              static_cast<UnitId>(parse_uint(l.tokens[3], l.number, "vertex"))));
  }
  std::sort(listed.begin(), listed.end());
  if (listed != c.triangles()) throw FormatError("stored triangles disagree with the edges", tri_head.number);
  const Line& tail = next("end");
  if (tail.tokens.size() != 1) throw FormatError("malformed end line", tail.number);
  if (li != lines.size()) throw FormatError("unexpected content after end", lines[li].number);
  return snap;
}

}  // namespace soam
