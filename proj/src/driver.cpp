#include "soam/driver.hpp"

#include <cctype>
#include <cstdio>

#include "soam/error.hpp"
#include "soam/gwr.hpp"

namespace soam {

namespace {

constexpr std::size_t kCoverageSamples = 10'000;

SurfaceReport closed_surface(long euler, bool orientable) {
  SurfaceReport r;
  r.euler = euler;
  r.orientable = orientable;
  r.connected_components = 1;
  r.all_links_closed = true;
  if (orientable) r.genus = (2 - euler) / 2;
  return r;
}

std::optional<SurfaceReport> expected_surface(const std::string& shape) {
  if (shape == "torus" || shape == "helix") return closed_surface(0, true);
  if (shape == "klein4") return closed_surface(0, false);
  if (shape == "double-torus") return closed_surface(-2, true);
  return std::nullopt;
}

std::string lower_ext(const std::string& path) {
  const auto dot = path.rfind('.');
  std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

}  // namespace

std::optional<Mesh> generated_mesh(const std::string& name) {
  if (name == "icosphere") return make_icosphere(4);
  if (name == "torus-mesh") return make_torus_mesh(2.0, 1.0, 400, 100);
  if (name == "double-torus-mesh") return make_double_torus_mesh(120);
  return std::nullopt;
}

PreparedInput prepare_input(const RunConfig& config) {
  config.validate();
  PreparedInput in;
  const std::uint64_t seed = config.params.seed;
  if (!config.input.empty() || generated_mesh(config.shape)) {
    std::vector<Point> vertices;
    if (!config.input.empty()) {
      const std::string ext = lower_ext(config.input);
      if (ext == "off" || ext == "obj") {
        Mesh m = load_mesh(config.input);
        vertices = m.vertices;
        in.reference = std::move(m);
      } else {
        vertices = parse_points(read_file(config.input));
      }
    } else {
      Mesh m = *generated_mesh(config.shape);
      vertices = m.vertices;
      in.reference = std::move(m);
    }
    if (vertices.size() < 2) throw UsageError("input holds fewer than two points");
    RescaleResult rs = rescale_to_major(vertices, kModelSize);
    if (rs.degenerate) throw UsageError("input points are all identical");
    if (in.reference) {
      in.reference->vertices = rs.points;
      if (!in.reference->triangles.empty()) {
        const SurfaceReport r = surface_report(*in.reference);
        if (r.closed() && r.connected_components == 1) in.expected = r;
      }
    }
    in.source = std::make_unique<MeshVertexSource>(std::move(rs.points), seed, config.noise);
    return in;
  }
  const auto shape = shape_from_name(config.shape);
  if (!shape) throw UsageError("unknown shape '" + config.shape + "'");
  if (config.params.manifold_dim == 2) in.expected = expected_surface(config.shape);
  in.source = std::make_unique<ParametricSource>(*shape, rescale_transform(shape_bounds(*shape), kModelSize), seed,
                                                 config.noise);
  return in;
}

int Outcome::exit_code() const {
  return reason == StopReason::Stable || reason == StopReason::Quiescent ? 0 : 2;
}

Outcome reconstruct(const RunConfig& config, const SoamSnapshot* resume) {
  PreparedInput in = prepare_input(config);
  SignalSource& src = *in.source;
  auto draw = [&]() {
    std::optional<Point> p = src.next();
    if (!p) throw UsageError("input stream ended before the network was initialised");
    return *p;
  };
  Outcome out;

  auto finish_topology = [&](const SimplicialComplex& c) {
    if (config.params.manifold_dim == 1) {
      out.curve = curve_topology(c);
    } else {
      out.surface = surface_report(c);
      if (in.expected && out.surface->closed() && out.surface->connected_components == 1)
        out.homeomorphic = homeomorphic_closed_surfaces(*out.surface, *in.expected);
      else if (in.expected)
        out.homeomorphic = false;
    }
  };

  if (config.algorithm == Algorithm::Gwr) {
    if (resume) throw UsageError("resume is only supported for the SOAM");
    GwrParams gp = GwrParams::from(config.params);
    gp.quiescence_window = config.params.stability_window;
    const Point a = draw();
    const Point b = draw();
    Gwr gwr(gp, a, b);
    RunReport rep = run(gwr, src, config.telemetry_interval);
    out.reason = rep.reason;
    out.signals = gwr.signals_processed();
    out.telemetry = std::move(rep.telemetry);
    std::vector<Point> samples;
    for (std::size_t i = 0; i < kCoverageSamples; ++i) {
      std::optional<Point> p = src.next();
      if (!p) break;
      samples.push_back(*p);
    }
    out.coverage_gap = coverage_gap(gwr.positions(), samples);
    Mesh m;
    std::vector<std::uint32_t> index;
    for (UnitId id : gwr.unit_ids()) {
      if (index.size() <= id) index.resize(id + 1);
      index[id] = static_cast<std::uint32_t>(m.vertices.size());
      m.vertices.push_back(gwr.position(id));
    }
    for (const Triangle& t : gwr.complex().triangles())
      m.triangles.push_back({index[t.v[0]], index[t.v[1]], index[t.v[2]]});
    for (const auto& [e, age] : gwr.complex().edges())
      if (gwr.complex().common_neighbors(e.a, e.b).empty()) m.segments.push_back({index[e.a], index[e.b]});
    out.mesh = std::move(m);
    finish_topology(gwr.complex());
    return out;
  }

  std::optional<Soam> soam;
  if (resume) {
    if (resume->params != config.params)
      throw UsageError("snapshot parameters differ from the configuration");
    if (resume->dim != src.dim()) throw UsageError("snapshot dimension differs from the input");
    for (std::uint64_t i = 0; i < resume->signals + 2; ++i) draw();
    soam.emplace(Soam::from_snapshot(*resume));
  } else {
    const Point a = draw();
    const Point b = draw();
    soam.emplace(config.params, a, b);
  }
  RunReport rep = run(*soam, src, RunOptions::from(config.params, config.telemetry_interval));
  out.reason = rep.reason;
  out.signals = soam->signals_processed();
  out.telemetry = std::move(rep.telemetry);
  out.mesh = to_mesh(*soam);
  out.final_state = soam->snapshot();
  out.states_consistent = soam->states_consistent();
  finish_topology(soam->complex());
  return out;
}

std::string format_outcome(const RunConfig& config, const Outcome& o) {
  std::string text = "# configuration\n" + format_config(config) + "# result\n";
  text += "stop_reason=" + std::string(to_string(o.reason)) + '\n';
  text += "signals=" + std::to_string(o.signals) + '\n';
  text += "units=" + std::to_string(o.mesh.vertices.size()) + '\n';
  if (o.curve) text += format_report(*o.curve);
  if (o.surface) text += format_report(*o.surface);
  if (o.homeomorphic) text += std::string("homeomorphic_to_reference=") + yes_no(*o.homeomorphic) + '\n';
  if (o.coverage_gap) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", *o.coverage_gap);
    text += std::string("coverage_gap=") + buf + '\n';
    text += std::string("covering=") + yes_no(*o.coverage_gap <= config.params.r_max) + '\n';
  }
  if (config.algorithm == Algorithm::Soam) text += std::string("states_consistent=") + yes_no(o.states_consistent) + '\n';
  return text;
}

void write_outputs(const RunConfig& config, const Outcome& o) {
  write_file(config.out + ".off", format_off(o.mesh));
  write_file(config.out + ".telemetry.csv", format_telemetry(o.telemetry));
  write_file(config.out + ".report.txt", format_outcome(config, o));
}

}  // namespace soam
