#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "soam/driver.hpp"
#include "soam/error.hpp"
#include "soam/gwr.hpp"
#include "soam/io.hpp"
#include "soam/sampling.hpp"
#include "soam/verify.hpp"

using namespace soam;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoConvergence = 2;
constexpr int kExitNonManifold = 3;

struct RunFlags {
  std::string config;
  std::string input;
  std::string shape;
  std::optional<int> dim;
  std::optional<double> noise;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> max_signals;
  std::optional<double> radius;
  std::optional<std::uint64_t> telemetry_interval;
  std::optional<std::string> out;
  std::vector<std::string> sets;
  std::string resume;
  std::string save_snapshot;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config, "key=value parameter file")->check(CLI::ExistingFile);
  cmd->add_option("--input", f.input, "mesh (.off, .obj) or point file to sample");
  cmd->add_option("--shape", f.shape,
                  "circle, torus, helix, klein4, double-torus, icosphere, torus-mesh, double-torus-mesh");
  cmd->add_option("--dim", f.dim, "manifold dimension (1 or 2)");
  cmd->add_option("--noise", f.noise, "noise radius in model units (inputs are rescaled to 256)");
  cmd->add_option("--seed", f.seed, "random seed (falls back to SOAM_SEED)");
  cmd->add_option("--max-signals", f.max_signals, "signal budget");
  cmd->add_option("--R", f.radius, "maximum insertion threshold");
  cmd->add_option("--telemetry-interval", f.telemetry_interval, "signals between telemetry rows");
  cmd->add_option("--out", f.out, "output prefix");
  cmd->add_option("--set", f.sets, "override any configuration key: --set key=value");
  cmd->add_option("--resume", f.resume, "continue from a snapshot file")->check(CLI::ExistingFile);
  cmd->add_option("--save-snapshot", f.save_snapshot, "write the final network state here");
}

RunConfig build_config(const RunFlags& f, const SoamSnapshot* resume) {
  RunConfig c;
  if (resume) {
    // The signal budget belongs to the invocation, not to the saved network.
    c.params = resume->params;
    c.params.max_signals = SoamParams{}.max_signals;
    c.params.stability_window = SoamParams{}.stability_window;
  }
  if (const char* env = std::getenv("SOAM_SEED"); env && *env) {
    if (!set_config_value(c, "seed", env)) throw UsageError("bad SOAM_SEED");
  }
  if (!f.config.empty()) c = parse_config(read_file(f.config), c);
  if (!f.input.empty()) {
    c.input = f.input;
    c.shape.clear();
  }
  if (!f.shape.empty()) {
    c.shape = f.shape;
    if (f.input.empty()) c.input.clear();
  }
  if (f.dim) c.params.manifold_dim = *f.dim;
  if (f.noise) c.noise = *f.noise;
  if (f.seed) c.params.seed = *f.seed;
  if (f.max_signals) c.params.max_signals = *f.max_signals;
  if (f.radius) c.params.r_max = *f.radius;
  if (f.telemetry_interval) c.telemetry_interval = *f.telemetry_interval;
  if (f.out) c.out = *f.out;
  for (const std::string& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    if (!set_config_value(c, kv.substr(0, eq), kv.substr(eq + 1)))
      throw UsageError("unknown configuration key '" + kv.substr(0, eq) + "'");
  }
  c.validate();
  return c;
}

std::string result_section(const std::string& report) {
  const auto pos = report.find("# result\n");
  return pos == std::string::npos ? report : report.substr(pos + 9);
}

int run_one(const RunFlags& flags, std::optional<Algorithm> algo, const std::string& suffix, Outcome* keep = nullptr) {
  std::optional<SoamSnapshot> snap;
  if (!flags.resume.empty()) snap = parse_snapshot(read_file(flags.resume));
  RunConfig config = build_config(flags, snap ? &*snap : nullptr);
  if (algo) config.algorithm = *algo;
  config.out += suffix;
  if (snap) {
    snap->params.max_signals = config.params.max_signals;
    snap->params.stability_window = config.params.stability_window;
  }
  Outcome o = reconstruct(config, snap ? &*snap : nullptr);
  write_outputs(config, o);
  if (!flags.save_snapshot.empty()) {
    if (!o.final_state) throw UsageError("snapshots are only available for the SOAM");
    write_file(flags.save_snapshot + suffix, format_snapshot(*o.final_state));
  }
  std::cout << result_section(format_outcome(config, o));
  const int code = o.exit_code();
  if (keep) *keep = std::move(o);
  return code;
}

int cmd_reconstruct(const RunFlags& flags) { return run_one(flags, std::nullopt, ""); }

int cmd_compare(const RunFlags& flags, const std::string& algo) {
  if (algo == "soam") return run_one(flags, Algorithm::Soam, "");
  if (algo == "gwr") return run_one(flags, Algorithm::Gwr, "");
  if (!flags.resume.empty()) throw UsageError("--resume cannot be combined with --algo both");
  Outcome s, g;
  std::cout << "[soam]\n";
  const int cs = run_one(flags, Algorithm::Soam, ".soam", &s);
  std::cout << "[gwr]\n";
  const int cg = run_one(flags, Algorithm::Gwr, ".gwr", &g);
  std::printf("[summary]\n%-10s %14s %14s\n", "", "soam", "gwr");
  std::printf("%-10s %14s %14s\n", "stop", std::string(to_string(s.reason)).c_str(),
              std::string(to_string(g.reason)).c_str());
  std::printf("%-10s %14llu %14llu\n", "signals", static_cast<unsigned long long>(s.signals),
              static_cast<unsigned long long>(g.signals));
  std::printf("%-10s %14zu %14zu\n", "units", s.mesh.vertices.size(), g.mesh.vertices.size());
  std::printf("%-10s %14zu %14zu\n", "triangles", s.mesh.triangles.size(), g.mesh.triangles.size());
  std::printf("%-10s %14zu %14zu\n", "segments", s.mesh.segments.size(), g.mesh.segments.size());
  return cs == kExitOk && cg == kExitOk ? kExitOk : kExitNoConvergence;
}

SimplicialComplex complex_of(const Mesh& m) {
  SimplicialComplex c(m.triangles.empty() ? 1 : 2);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) c.add_vertex(static_cast<UnitId>(i));
  for (const auto& s : m.segments) c.add_edge(s[0], s[1]);
  for (const auto& t : m.triangles) {
    c.add_edge(t[0], t[1]);
    c.add_edge(t[1], t[2]);
    c.add_edge(t[0], t[2]);
  }
  return c;
}

int cmd_verify(const std::string& input, const std::string& against) {
  const Mesh a = load_mesh(input);
  if (a.triangles.empty()) {
    std::cout << format_report(curve_topology(complex_of(a)));
    if (!against.empty()) throw UsageError("--against compares surfaces; " + input + " has no triangles");
    return kExitOk;
  }
  const SurfaceReport ra = surface_report(a);
  std::cout << format_report(ra);
  if (!ra.manifold) {
    std::cout << "verdict=non-manifold\n";
    return kExitNonManifold;
  }
  if (against.empty()) return kExitOk;
  const SurfaceReport rb = surface_report(load_mesh(against));
  std::cout << "against_euler=" << rb.euler << "\nagainst_orientable=" << (rb.orientable ? "true" : "false") << '\n';
  if (!rb.manifold) {
    std::cout << "verdict=non-manifold\n";
    return kExitNonManifold;
  }
  const bool comparable = ra.closed() && rb.closed() && ra.connected_components == 1 && rb.connected_components == 1;
  if (!comparable) {
    std::cout << "homeomorphic=undefined\nverdict=not-closed-connected\n";
    return kExitOk;
  }
  const bool h = homeomorphic_closed_surfaces(ra, rb);
  std::cout << "homeomorphic=" << (h ? "true" : "false") << "\nverdict=" << (h ? "homeomorphic" : "different") << '\n';
  return kExitOk;
}

int cmd_sample(const std::string& shape, const std::string& input, std::size_t count, std::optional<std::uint64_t> seed,
               double noise, const std::string& out) {
  RunConfig c;
  if (const char* env = std::getenv("SOAM_SEED"); env && *env) set_config_value(c, "seed", env);
  if (seed) c.params.seed = *seed;
  c.shape = shape;
  c.input = input;
  c.noise = noise;
  PreparedInput in = prepare_input(c);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) pts.push_back(*in.source->next());
  if (out.empty() || out == "-") std::cout << format_points(pts);
  else write_file(out, format_points(pts));
  return kExitOk;
}

void print_edges(const char* name, const std::vector<EdgeKey>& edges) {
  std::cout << name << '=';
  for (std::size_t i = 0; i < edges.size(); ++i) std::cout << (i ? " " : "") << edges[i].a << '-' << edges[i].b;
  std::cout << '\n';
}

int cmd_oracle(const std::string& points_path, std::size_t witnesses, const std::string& restricted,
               std::optional<std::uint64_t> seed, bool cocircular) {
  std::uint64_t s = 1;
  if (const char* env = std::getenv("SOAM_SEED"); env && *env) {
    RunConfig c;
    set_config_value(c, "seed", env);
    s = c.params.seed;
  }
  if (seed) s = *seed;
  if (cocircular) {
    std::cout << "h middle_edge_witnesses middle_edge_delaunay degenerate\n";
    for (const CocircularStep& st : cocircular_homotopy(10, witnesses, s))
      std::printf("%.9g %llu %s %s\n", st.h, static_cast<unsigned long long>(st.middle_edge_witnesses),
                  st.middle_edge_delaunay ? "true" : "false", st.degenerate ? "true" : "false");
    return kExitOk;
  }
  if (points_path.empty()) throw UsageError("--points is required");
  const std::vector<Point> pts = parse_points(read_file(points_path));
  if (pts.size() < 2) throw UsageError("the oracle needs at least two points");
  Rng rng(s);
  WitnessGraph wg;
  if (!restricted.empty()) {
    const auto shape = shape_from_name(restricted);
    if (!shape) throw UsageError("unknown shape '" + restricted + "'");
    wg = restricted_witness_graph(pts, *shape, rescale_transform(shape_bounds(*shape), kModelSize), witnesses, rng);
  } else {
    BoundingBox box = bounding_box(pts);
    const double pad = 0.1 * std::max(box.major_extent(), 1e-9);
    for (std::size_t k = 0; k < box.min.dim(); ++k) {
      box.min[k] -= pad;
      box.max[k] += pad;
    }
    wg = uniform_witness_graph(pts, box, witnesses, rng);
  }
  const std::vector<EdgeKey> we = wg.edges();
  print_edges("witness_edges", we);
  if (pts.front().dim() != 2) {
    std::cout << "delaunay_edges=unsupported\nsubset=undefined\n";
    return kExitOk;
  }
  DelaunayResult del;
  if (pts.size() == 2) del.edges = {EdgeKey(0, 1)};
  else del = brute_force_delaunay(pts);
  print_edges("delaunay_edges", del.edges);
  // Co-circular pairs count as admissible: their Delaunay status is undecided.
  std::vector<EdgeKey> allowed = del.edges;
  allowed.insert(allowed.end(), del.degenerate_pairs.begin(), del.degenerate_pairs.end());
  print_edges("degenerate_pairs", del.degenerate_pairs);
  std::cout << "degenerate=" << (del.degenerate() ? "true" : "false") << '\n';
  std::cout << "subset=" << (is_subset(we, allowed) ? "true" : "false") << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Growing self-organizing network for topologically faithful reconstruction"};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* rec = app.add_subcommand("reconstruct", "run the network on a mesh, point file or shape");
  add_run_flags(rec, rf);

  RunFlags cf;
  std::string algo = "soam";
  CLI::App* cmp = app.add_subcommand("compare", "run SOAM, GWR or both on the same input");
  add_run_flags(cmp, cf);
  cmp->add_option("--algo", algo, "soam, gwr or both")->check(CLI::IsMember({"soam", "gwr", "both"}));

  std::string v_input, v_against;
  CLI::App* ver = app.add_subcommand("verify", "topology report of a mesh, optionally compared to another");
  ver->add_option("--input", v_input, "mesh to analyse")->required();
  ver->add_option("--against", v_against, "reference mesh");

  std::string s_shape, s_input, s_out;
  std::size_t s_count = 1000;
  std::optional<std::uint64_t> s_seed;
  double s_noise = 0.0;
  CLI::App* smp = app.add_subcommand("sample", "write a recorded point stream");
  smp->add_option("--shape", s_shape, "shape or generated mesh name");
  smp->add_option("--input", s_input, "mesh or point file");
  smp->add_option("--count", s_count, "number of points");
  smp->add_option("--seed", s_seed, "random seed (falls back to SOAM_SEED)");
  smp->add_option("--noise", s_noise, "noise radius in model units");
  smp->add_option("--out", s_out, "output file (stdout by default)");

  std::string o_points, o_restricted;
  std::size_t o_witnesses = 1'000'000;
  std::optional<std::uint64_t> o_seed;
  bool o_cocircular = false;
  CLI::App* orc = app.add_subcommand("oracle", "witness graph against the Delaunay graph of a point set");
  orc->add_option("--points", o_points, "landmark point file");
  orc->add_option("--witnesses", o_witnesses, "number of witnesses");
  orc->add_option("--restricted", o_restricted, "draw witnesses from this shape instead of the bounding box");
  orc->add_option("--seed", o_seed, "random seed (falls back to SOAM_SEED)");
  orc->add_flag("--cocircular", o_cocircular, "rhombus homotopy toward co-circularity");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*rec) return cmd_reconstruct(rf);
    if (*cmp) return cmd_compare(cf, algo);
    if (*ver) return cmd_verify(v_input, v_against);
    if (*smp) return cmd_sample(s_shape, s_input, s_count, s_seed, s_noise, s_out);
    if (*orc) return cmd_oracle(o_points, o_witnesses, o_restricted, o_seed, o_cocircular);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
