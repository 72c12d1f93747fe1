// stickknot: build, identify, bound, classify, and render stick diagrams.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "stickknot/report_json.hpp"
#include "stickknot/stickknot.hpp"

using namespace stickknot;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitUnidentified = 3;

std::string read_input(const std::string& path) {
  std::stringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
  } else {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
    ss << in.rdbuf();
  }
  return ss.str();
}

void write_output(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + out);
  f << text;
}

void emit(const json& j, const std::string& out) { write_output(j.dump(2) + "\n", out); }

Vec3 parse_vec3(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      v.push_back(std::stod(part));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "expected x,y,z but got '" + text + "'");
    }
  }
  if (v.size() != 3) throw Error(ErrorCode::ParseError, "expected x,y,z but got '" + text + "'");
  return {v[0], v[1], v[2]};
}

/// Classification facts for three and four circles.
std::vector<ClassificationFacts> classification_facts() {
  return {classify(3).facts(), classify(4).facts()};
}

/// Stick and arc counts of the diagrams the constructions actually build.
ConstructionCounts built_counts(const KnotDescriptor& d) {
  ConstructionCounts c;
  if (d.kind == KnotDescriptor::Kind::Torus) {
    if (2 * d.p < d.q) c.planar = torus_planar(d.p, d.q).stick_count();
    c.spherical = torus_spherical(d.p, d.q).arc_count();
  } else {
    c.spherical = trefoil_composite(d.left, d.right, kDefaultTilt, false).arc_count();
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar and spherical stick diagrams of knots"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string out;
  app.add_option("--out", out, "Write output here instead of stdout");

  // construct
  auto* construct = app.add_subcommand("construct", "Build a diagram");
  construct->require_subcommand(1);
  int p = 0, q = 0, left = 0, right = 0;
  double tilt = kDefaultTilt;
  auto* torus_pl = construct->add_subcommand("torus-planar", "Star polygon diagram of T(p,q), 2p < q");
  torus_pl->add_option("-p", p)->required();
  torus_pl->add_option("-q", q)->required();
  auto* torus_sp = construct->add_subcommand("torus-spherical", "Great-circle arc diagram of T(p,q)");
  torus_sp->add_option("-p", p)->required();
  torus_sp->add_option("-q", q)->required();
  torus_sp->add_option("--tilt", tilt, "Scaffold tilt in radians");
  auto* trefoils = construct->add_subcommand("trefoils", "Spherical diagram of a sum of trefoils");
  trefoils->add_option("--left", left);
  trefoils->add_option("--right", right);
  trefoils->add_option("--tilt", tilt, "Scaffold tilt in radians");

  // compose
  auto* compose = app.add_subcommand("compose", "Connected sum of two diagrams");
  std::string file_a, file_b;
  bool want_planar = false, want_spherical = false;
  compose->add_option("a", file_a)->required();
  compose->add_option("b", file_b)->required();
  compose->add_flag("--planar", want_planar);
  compose->add_flag("--spherical", want_spherical);

  // project
  auto* project = app.add_subcommand("project", "Project a 3D polygon to a diagram");
  std::string knot_file, direction;
  int radial_vertex = -1;
  unsigned seed = 1;
  project->add_option("knot", knot_file)->required();
  auto* orth = project->add_option("--orthogonal", direction, "Projection direction x,y,z");
  project->add_option("--radial-vertex", radial_vertex, "Project radially from this vertex")->excludes(orth);
  project->add_option("--seed", seed, "Seed for choosing a generic direction");

  // identify
  auto* identify_cmd = app.add_subcommand("identify", "Identify the knot type of a diagram");
  std::string diagram_file;
  int max_crossings = 20;
  identify_cmd->add_option("diagram", diagram_file, "JSON diagram, PD code, or Gauss code; - for stdin")->required();
  identify_cmd->add_option("--max-crossings", max_crossings);

  // bounds
  auto* bounds_cmd = app.add_subcommand("bounds", "Planar and spherical stick index bounds");
  std::string descriptor;
  std::optional<int> n;
  bool text = false, no_classify = false;
  bounds_cmd->add_option("descriptor", descriptor, "T(p,q), aTL#bTR, square, granny, trefoil, or nT")->required();
  bounds_cmd->add_option("--n", n, "Trefoil count for nT");
  bounds_cmd->add_flag("--text", text, "Aligned text table instead of JSON");
  bounds_cmd->add_flag("--no-classify", no_classify, "Skip classification facts");

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "Classify diagrams with one arc per great circle");
  int circles = 4, workers = 1;
  bool allow_large = false;
  classify_cmd->add_option("--circles", circles)->required();
  classify_cmd->add_option("-j,--jobs", workers);
  classify_cmd->add_flag("--allow-large", allow_large, "Permit five or more circles");

  // render
  auto* render = app.add_subcommand("render", "Draw a diagram as SVG");
  std::string render_in, svg_out, pole_text;
  RenderSpec spec;
  render->add_option("diagram", render_in)->required();
  render->add_option("-o", svg_out)->required();
  render->add_option("--pole", pole_text, "Stereographic pole x,y,z");
  render->add_option("--size", spec.size_px);
  render->add_option("--gap", spec.gap_px);

  // table
  auto* table = app.add_subcommand("table", "Knot table");
  table->require_subcommand(1);
  auto* dump = table->add_subcommand("dump", "Print the bundled table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*torus_pl) {
      emit(to_json(torus_planar(p, q)), out);
    } else if (*torus_sp) {
      emit(to_json(torus_spherical(p, q, tilt)), out);
    } else if (*trefoils) {
      emit(to_json(trefoil_composite(left, right, tilt)), out);
    } else if (*compose) {
      AnyDiagram a = diagram_from_json(json::parse(read_input(file_a)));
      AnyDiagram b = diagram_from_json(json::parse(read_input(file_b)));
      auto* pa = std::get_if<PlanarStickDiagram>(&a);
      auto* pb = std::get_if<PlanarStickDiagram>(&b);
      auto* sa = std::get_if<SphericalStickDiagram>(&a);
      auto* sb = std::get_if<SphericalStickDiagram>(&b);
      if (pa && pb && !want_spherical)
        emit(to_json(compose_planar(*pa, *pb)), out);
      else if (sa && sb && !want_planar)
        emit(to_json(compose_spherical(*sa, *sb)), out);
      else
        throw Error(ErrorCode::InvalidParams, "compose needs two planar or two spherical diagrams");
    } else if (*project) {
      PolygonalKnot3D k = polygon_from_json(json::parse(read_input(knot_file)));
      if (radial_vertex >= 0) {
        if (radial_vertex >= static_cast<int>(k.vertices.size()))
          throw Error(ErrorCode::InvalidParams, "no vertex " + std::to_string(radial_vertex));
        emit(to_json(project_radial(k, k.vertices[radial_vertex])), out);
      } else {
        SpherePoint dir = direction.empty() ? search_generic_direction(k, seed) : SpherePoint(parse_vec3(direction));
        emit(to_json(project_orthogonal(k, dir)), out);
      }
    } else if (*identify_cmd) {
      PDCode pd = pd_of(parse_diagram_text(read_input(diagram_file)), seed);
      BracketOptions opt;
      opt.max_crossings = max_crossings;
      json j = to_json(KnotUniverse::standard().identify(pd, opt));
      j["crossings"] = pd.crossings.size();
      emit(j, out);
    } else if (*bounds_cmd) {
      KnotDescriptor d = parse_descriptor(descriptor, n);
      std::string torus_name;
      if (d.kind == KnotDescriptor::Kind::Torus) {
        check_descriptor(d);
        torus_name = KnotUniverse::standard().torus_name(d.p, d.q);
      }
      auto facts = no_classify ? std::vector<ClassificationFacts>{} : classification_facts();
      BoundReport r = compute_bounds(d, built_counts(d), facts, torus_name);
      if (text)
        write_output(to_text(r), out);
      else
        emit(to_json(r), out);
    } else if (*classify_cmd) {
      if (circles > 4 && !allow_large)
        throw Error(ErrorCode::InvalidParams, "more than four circles needs --allow-large");
      ClassifyOptions opt;
      opt.workers = workers;
      emit(to_json(classify(circles, opt)), out);
    } else if (*render) {
      AnyDiagram d = diagram_from_json(json::parse(read_input(render_in)));
      if (!pole_text.empty()) spec.pole = SpherePoint(parse_vec3(pole_text));
      RenderResult r;
      if (auto* pl = std::get_if<PlanarStickDiagram>(&d))
        r = render_svg(*pl, spec);
      else if (auto* sp = std::get_if<SphericalStickDiagram>(&d))
        r = render_svg(*sp, spec);
      else
        throw Error(ErrorCode::InvalidParams, "render needs a planar or spherical diagram");
      write_output(r.svg, svg_out);
      for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
      json j{{"svg", svg_out}, {"warnings", r.warnings}};
      if (r.pole) j["pole"] = {r.pole->x(), r.pole->y(), r.pole->z()};
      emit(j, out);
    } else if (*dump) {
      json j = json::array();
      for (const auto& rec : KnotTable::bundled().records())
        j.push_back({{"name", rec.name},
                     {"crossings", rec.crossing_number},
                     {"amphichiral", rec.amphichiral},
                     {"pd", to_string(rec.pd)},
                     {"fingerprint", to_string(rec.fingerprint)}});
      emit(j, out);
    }
  } catch (const Error& e) {
    std::cerr << json{{"error", std::string(to_string(e.code()))}, {"message", e.what()}}.dump() << "\n";
    return e.code() == ErrorCode::Unidentified ? kExitUnidentified : kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << json{{"error", "ParseError"}, {"message", e.what()}}.dump() << "\n";
    return kExitValidation;
  }
  return 0;
}
