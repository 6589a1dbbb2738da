#include "polyiso/cli.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polyiso/error.h"
#include "polyiso/families.h"
#include "polyiso/hull.h"
#include "polyiso/mesh.h"

namespace polyiso {

using Json = nlohmann::ordered_json;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kDefaultSeed = 42;

struct Units {
  bool degrees = false;
  double operator()(double rad) const { return degrees ? rad * 180.0 / kPi : rad; }
  const char *name() const { return degrees ? "degrees" : "radians"; }
};

template <typename T>
Json OrNull(const std::optional<T> &v) {
  return v ? Json(*v) : Json(nullptr);
}

Json AngleOrNull(const std::optional<double> &v, Units u) {
  return v ? Json(u(*v)) : Json(nullptr);
}

Json Header(const std::string &command, Units u) {
  Json j;
  j["schemaVersion"] = kReportSchemaVersion;
  j["command"] = command;
  j["angleUnit"] = u.name();
  return j;
}

// Library errors that describe bad input rather than a failed claim.
bool IsUsageError(ErrorCode c) {
  switch (c) {
    case ErrorCode::kParseError:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kPreconditionFailed:
    case ErrorCode::kDegenerateInput:
    case ErrorCode::kTopologyError:
    case ErrorCode::kConvexityRequired:
    case ErrorCode::kRadiusTooSmall:
      return true;
    default:
      return false;
  }
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool HasExtension(const std::string &path, const std::string &ext) {
  std::string e = std::filesystem::path(path).extension().string();
  std::transform(e.begin(), e.end(), e.begin(), [](unsigned char c) { return std::tolower(c); });
  return e == ext;
}

// OBJ is export only; OFF output is read back and must reproduce the mesh.
void WriteMesh(const std::string &path, const TriangleMesh &m) {
  if (HasExtension(path, ".obj")) {
    WriteTextFile(path, WriteObj(m));
    return;
  }
  WriteTextFile(path, WriteOff(m));
  const TriangleMesh back = ReadOffFile(path);
  RequireClosedValid(back);
  bool same = back.NumVertices() == m.NumVertices() && back.faces() == m.faces();
  for (int v = 0; same && v < m.NumVertices(); v++) {
    const Point3 &p = m.vertices()[v], &q = back.vertices()[v];
    same = p.x == q.x && p.y == q.y && p.z == q.z;
  }
  if (!same) throw Error(ErrorCode::kConstructionInvalid, "mesh written to " + path + " does not read back");
}

TriangleMesh BuiltinSolid(const std::string &name) {
  if (name == "tetrahedron") {
    return ConvexHull3(std::vector<Point3>{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}}).mesh;
  }
  if (name == "octahedron") return Bipyramid(4, 1.0);
  return GyroelongatedBipyramid(5);
}

// Emits the report and failure diagnostics; returns the exit code.
struct Reporter {
  std::ostream &out, &err;
  std::string report_path;

  int Finish(Json j, const std::vector<std::string> &failures) const {
    Json list = Json::array();
    for (const std::string &f : failures) list.push_back(f);
    j["status"] = failures.empty() ? "ok" : "failed";
    j["failures"] = list;
    const std::string text = j.dump(2) + "\n";
    if (report_path.empty()) {
      out << text;
    } else {
      WriteTextFile(report_path, text);
      out << "report written to " << report_path << " (" << j["status"].get<std::string>() << ")\n";
    }
    for (const std::string &f : failures) err << "invariant failed: " << f << "\n";
    return failures.empty() ? kExitOk : kExitInvariant;
  }
};

Json MeshSummary(const TriangleMesh &m, Units u) {
  Json j;
  j["vertices"] = m.NumVertices();
  j["edges"] = m.NumEdges();
  j["faces"] = m.NumFaces();
  j["convex"] = IsConvex(m).convex;
  j["isosceles"] = !ScaleneWitness(m).has_value();
  double lo = 1e300, hi = -1e300;
  for (int f = 0; f < m.NumFaces(); f++) {
    lo = std::min(lo, Sharpness(m, f));
    hi = std::max(hi, Sharpness(m, f));
  }
  j["sharpnessMin"] = u(lo);
  j["sharpnessMax"] = u(hi);
  j["totalDefect"] = u(TotalAngularDefect(m));
  return j;
}

bool DefectIsFourPi(const TriangleMesh &m) {
  return std::abs(TotalAngularDefect(m) - 4 * kPi) <= 1e-9;
}

std::string StreamName(const BigDihedralStream &s) {
  std::string name = ToString(s.tag);
  if (s.tag == TetraCase::kTwoSharedBases || s.tag == TetraCase::kTwoSharedApexes) {
    name += s.obtuse_base ? "-obtuse" : "-any";
  }
  if (s.subcase) name += std::string("-") + ToString(*s.subcase);
  return name;
}

Json TriangulationCounts(const AbstractTriangulation &g) {
  Json j;
  j["vertices"] = g.NumVertices();
  j["edges"] = g.NumEdges();
  j["faces"] = g.NumFaces();
  return j;
}

// Options shared by every subcommand.
struct Common {
  bool degrees = false;
};

struct ConstructArgs {
  std::string family;
  std::optional<int> n, x, y, k;
  double h = 1.0;
  bool equilateral = false;
  std::string out, report;
  double budget_ms = 2000;
};

struct KleetopeArgs {
  std::string in, mode, out, report;
  int iterations = 1;
  std::optional<double> radius;
  double height_factor = 0.5;
};

struct AnalyzeArgs {
  std::string in, out;
  double budget_ms = 2000;
};

struct VerifyArgs {
  std::string lemma, out, in, counterexample_dir = ".";
  std::string seed_mesh = "octahedron";
  long samples = 100000;
  std::uint64_t seed = kDefaultSeed;
  int iterations = 3;
  double height_factor = 0.5;
};

struct CycleArgs {
  std::string in, out;
  double budget_s = 60;
  int kleetope = 0;
};

int RunConstruct(const ConstructArgs &a, Units u, const Reporter &rep) {
  FamilySpec spec;
  Json params;
  auto need = [&](const std::optional<int> &v, const char *flag) {
    if (!v) throw CLI::ValidationError(std::string("construct ") + a.family + " needs " + flag);
    params[flag + 2] = *v;
    return *v;
  };
  if (a.equilateral && a.family != "gyro") {
    throw CLI::ValidationError("--equilateral applies to gyro only");
  }
  if (a.family == "bipyramid") {
    spec.variant = FamilyVariant::kBipyramid;
    spec.n = need(a.n, "--n");
    spec.h = a.h;
    params["h"] = a.h;
  } else if (a.family == "biarc") {
    spec.variant = FamilyVariant::kBiarc;
    spec.x = need(a.x, "--x");
    spec.y = need(a.y, "--y");
  } else {
    spec.variant = a.family == "gyro" ? FamilyVariant::kGyro : FamilyVariant::kTwistedGyro;
    spec.k = need(a.k, "--k");
    spec.equilateral = a.equilateral;
    if (a.family == "gyro") params["equilateral"] = a.equilateral;
  }

  Json j = Header("construct", u);
  j["family"] = a.family;
  j["parameters"] = params;
  TriangleMesh m = [&] {
    if (spec.variant != FamilyVariant::kTwistedGyro) return Construct(spec);
    TwistedGyro t = TwistedGyroelongatedBipyramid(spec.k);
    Json tw;
    tw["trace"] = t.twist.Trace();
    tw["angle"] = u(t.twist.Angle());
    Json ang = Json::array();
    for (double x : t.hexagon.angles) ang.push_back(u(x));
    tw["hexagonAngles"] = ang;
    tw["hexagonVertices"] = t.hexagon.vertices;
    tw["rotatedVertices"] = t.rotated.size();
    j["twist"] = tw;
    return std::move(t.mesh);
  }();

  if (!a.out.empty()) WriteMesh(a.out, m);
  j["mesh"] = a.out.empty() ? Json(nullptr) : Json(a.out);
  AuditOptions opt;
  opt.domination_budget = std::chrono::milliseconds(static_cast<long>(a.budget_ms));
  const AuditReport r = Audit(m, opt);
  j["audit"] = AuditToJson(r, u.degrees);

  std::vector<std::string> failures;
  if (!r.convex) failures.push_back("convexity");
  if (!r.monohedral) failures.push_back("one congruence class");
  if (!r.isosceles) failures.push_back("isosceles faces");
  for (const std::string &f : AuditFailures(r)) failures.push_back(f);
  return rep.Finish(std::move(j), failures);
}

int RunKleetope(const KleetopeArgs &a, Units u, const Reporter &rep) {
  Json j = Header("kleetope", u);
  j["mode"] = a.mode;
  j["iterations"] = a.iterations;
  std::vector<std::string> failures;

  if (a.mode == "graph") {
    AbstractTriangulation g = ReadTriangulation(ReadFile(a.in));
    j["input"] = TriangulationCounts(g);
    Json steps = Json::array();
    for (int i = 0; i < a.iterations; i++) {
      const int v = g.NumVertices(), f = g.NumFaces();
      g = CombinatorialKleetope(g);
      if (g.NumVertices() != v + f || g.NumVertices() != 3 * v - 4) {
        failures.push_back("Kleetope vertex count V + F = 3V - 4");
      }
      steps.push_back(TriangulationCounts(g));
    }
    j["steps"] = steps;
    if (!a.out.empty()) WriteTextFile(a.out, WriteTriangulationOff(g));
    j["output"] = a.out.empty() ? Json(nullptr) : Json(a.out);
    return rep.Finish(std::move(j), failures);
  }

  TriangleMesh m = ReadOffFile(a.in);
  RequireClosedValid(m);
  j["input"] = MeshSummary(m, u);
  if (a.mode == "convex") {
    j["heightFactor"] = a.height_factor;
    for (int i = 0; i < a.iterations; i++) m = ConvexKleetope(m, a.height_factor);
    if (!IsConvex(m).convex) failures.push_back("convexity of the Kleetope");
  } else {
    const SpikeResult s = SpikeKleetope(m, a.radius);
    Json sj;
    sj["radius"] = s.radius;
    sj["radiusGiven"] = a.radius.has_value();
    sj["doublings"] = s.doublings;
    sj["maxSpikeAngle"] = u(s.max_spike_angle);
    sj["spikeAngleBound"] = u(s.spike_angle_bound);
    // Each spike face is (a, b, apex) with legs to the apex.
    double leg_error = 0;
    for (int f = 0; f < s.mesh.NumFaces(); f++) {
      const Face &face = s.mesh.faces()[f];
      for (int k = 0; k < 2; k++) {
        const double d = Distance(s.mesh.vertices()[face[k]], s.mesh.vertices()[face[2]]);
        leg_error = std::max(leg_error, std::abs(d - s.radius) / s.radius);
      }
    }
    sj["maxLegRelativeError"] = leg_error;
    const auto hits = SelfIntersections(s.mesh);
    sj["selfIntersections"] = hits.size();
    j["spike"] = sj;
    if (leg_error > 1e-9) failures.push_back("spike legs equal to the radius");
    if (!hits.empty()) failures.push_back("no self-intersections");
    m = s.mesh;
  }
  if (!DefectIsFourPi(m)) failures.push_back("total angular defect 4 pi");
  if (!a.out.empty()) WriteMesh(a.out, m);
  j["mesh"] = a.out.empty() ? Json(nullptr) : Json(a.out);
  j["result"] = MeshSummary(m, u);
  if (!j["result"]["isosceles"].get<bool>() && a.mode == "spike") {
    failures.push_back("isosceles spike faces");
  }
  return rep.Finish(std::move(j), failures);
}

int RunAnalyze(const AnalyzeArgs &a, Units u, const Reporter &rep) {
  const TriangleMesh m = ReadOffFile(a.in);
  AuditOptions opt;
  opt.domination_budget = std::chrono::milliseconds(static_cast<long>(a.budget_ms));
  const AuditReport r = Audit(m, opt);
  Json j = Header("analyze", u);
  j["input"] = a.in;
  j["audit"] = AuditToJson(r, u.degrees);
  return rep.Finish(std::move(j), AuditFailures(r));
}

int RunVerify(const VerifyArgs &a, Units u, const Reporter &rep) {
  Json j = Header("verify " + a.lemma, u);
  j["seed"] = a.seed;
  std::vector<std::string> failures;

  if (a.lemma == "big-dihedral") {
    j["samplesPerStream"] = a.samples;
    const auto streams = RunBigDihedral(a.seed, a.samples);
    Json body = BigDihedralToJson(streams, u.degrees);
    long total = 0;
    for (size_t s = 0; s < streams.size(); s++) {
      total += streams[s].violations;
      if (!streams[s].first_counterexample) continue;
      const std::string path =
          (std::filesystem::path(a.counterexample_dir) / ("big-dihedral-" + StreamName(streams[s]) + ".off"))
              .string();
      WriteMesh(path, IsoTetraMesh(*streams[s].first_counterexample));
      body["streams"][s]["counterexampleFile"] = path;
    }
    j.update(body);
    Json boundary = Json::array();
    double closest = 0;
    for (double flat : {1e-1, 1e-2, 1e-3, 1e-4}) {
      closest = SharedBasesBoundary(flat);
      boundary.push_back({{"flatness", flat}, {"maxBaseDihedral", u(closest)}});
    }
    j["sharedBasesBoundary"] = boundary;
    j["violations"] = total;
    if (total > 0) failures.push_back("some base dihedral exceeds pi/3");
    if (!(closest > kPi / 3 && closest - kPi / 3 < 1e-3)) {
      failures.push_back("shared-bases family approaches pi/3 from above");
    }
  } else if (a.lemma == "obtuse-projection") {
    j["samples"] = a.samples;
    const ObtuseProjectionReport r = CheckObtuseProjection(a.seed, a.samples);
    j.update(ObtuseProjectionToJson(r, u.degrees));
    // Projected apex seeing the unit edge at exactly 2 pi/3, plane at kPhi.
    const auto tri = LiftedTriangle({0.5, 0.5 / std::sqrt(3.0), 0}, kPhi);
    const double right = AngleBetween(tri[0] - tri[2], tri[1] - tri[2]);
    j["boundary"] = {{"planeAngle", u(kPhi)},
                     {"projectedAngle", u(2 * kPi / 3)},
                     {"liftedAngle", u(right)}};
    if (r.counterexample) failures.push_back("lifted triangle keeps an obtuse angle");
    if (std::abs(right - kPi / 2) > 1e-9) failures.push_back("boundary configuration is right");
  } else {
    const TriangleMesh seed = a.in.empty() ? BuiltinSolid(a.seed_mesh) : ReadOffFile(a.in);
    j["seedMesh"] = a.in.empty() ? a.seed_mesh : a.in;
    j["iterations"] = a.iterations;
    j["heightFactor"] = a.height_factor;
    const SharpnessDecayReport r = SharpnessDecay(seed, a.iterations, a.height_factor);
    j.update(SharpnessDecayToJson(r, u.degrees));
    if (!r.doublesharp) failures.push_back("child sharpness at most twice the parent's");
    if (!r.non_increasing) failures.push_back("minimum sharpness non-increasing");
  }
  return rep.Finish(std::move(j), failures);
}

int RunCycle(const CycleArgs &a, Units u, const Reporter &rep) {
  const AbstractTriangulation g = IterateKleetope(ReadTriangulation(ReadFile(a.in)), a.kleetope);
  const CycleResult c =
      LongestSimpleCycle(g, std::chrono::milliseconds(static_cast<long>(a.budget_s * 1000)));
  Json j = Header("cycle", u);
  j["input"] = a.in;
  j["kleetopeIterations"] = a.kleetope;
  j["graph"] = TriangulationCounts(g);
  j["length"] = c.length;
  j["cycle"] = c.cycle;
  j["exact"] = c.exact;
  j["nodes"] = c.nodes;
  return rep.Finish(std::move(j), {});
}

}  // namespace

Json AuditToJson(const AuditReport &r, bool degrees) {
  const Units u{degrees};
  Json j;
  j["vertices"] = r.vertices;
  j["edges"] = r.edges;
  j["faces"] = r.faces;
  j["convex"] = r.convex;
  j["congruenceClasses"] = r.congruence_classes;
  j["monohedral"] = r.monohedral;
  j["isosceles"] = r.isosceles;
  j["scaleneFace"] = OrNull(r.scalene_face);
  j["sharpnessMin"] = u(r.sharpness_min);
  j["sharpnessMax"] = u(r.sharpness_max);
  j["totalDefect"] = u(r.total_defect);
  j["gaussResidual"] = AngleOrNull(r.gauss_residual, u);
  j["apexAngleMin"] = AngleOrNull(r.apex_angle_min, u);
  j["apexAngleMax"] = AngleOrNull(r.apex_angle_max, u);
  if (r.types) {
    const VertexTypeReport &t = *r.types;
    Json types, counts;
    for (VertexType v : {VertexType::kPyramidal, VertexType::kSemipyramidal, VertexType::kBasic,
                         VertexType::kSemibasic, VertexType::kOther}) {
      counts[ToString(v)] = t.Count(v);
    }
    types["counts"] = counts;
    types["pyramidal"] = t.VerticesOfType(VertexType::kPyramidal);
    types["semipyramidal"] = t.VerticesOfType(VertexType::kSemipyramidal);
    types["wellBehaved"] = t.well_behaved;
    std::vector<int> eq = t.equilateral_faces;
    std::sort(eq.begin(), eq.end());
    types["equilateralFaces"] = eq;
    types["equilateralAmbiguity"] = t.equilateral_ambiguity;
    std::vector<int> apex, base;
    for (const VertexCensus &c : t.vertices) {
      apex.push_back(c.apex_count);
      base.push_back(c.base_count);
    }
    types["apexCount"] = apex;
    types["baseCount"] = base;
    types["faceApex"] = t.face_apex;
    j["vertexTypes"] = types;
  } else {
    j["vertexTypes"] = nullptr;
  }
  j["baseAngleParity"] = OrNull(r.base_angle_parity);
  j["fewBases"] = OrNull(r.few_bases);
  j["dominatingSet"] = OrNull(r.dominating_set);
  j["dominationError"] = OrNull(r.domination_error);
  j["layerBound"] = OrNull(r.layer_bound);
  j["diameter"] = r.diameter;
  j["minDominatingSet"] = {{"vertices", r.min_dominating_set.vertices},
                           {"exact", r.min_dominating_set.exact}};
  return j;
}

std::vector<std::string> AuditFailures(const AuditReport &r) {
  std::vector<std::string> out;
  if (!(r.convex && r.monohedral && r.isosceles)) return out;
  if (r.base_angle_parity == false) out.push_back("base-angle parity");
  if (r.few_bases == false) out.push_back("no vertex with two apexes and four bases");
  if (r.domination_error) out.push_back("pyramidal and semipyramidal vertices dominate");
  if (r.dominating_set && r.dominating_set->size() > 4) {
    out.push_back("dominating set of at most four vertices");
  }
  if (r.layer_bound == false) out.push_back("diameter within three times the dominating set");
  return out;
}

Json BigDihedralToJson(const std::vector<BigDihedralStream> &streams, bool degrees) {
  const Units u{degrees};
  Json list = Json::array();
  for (const BigDihedralStream &s : streams) {
    Json j;
    j["case"] = ToString(s.tag);
    j["obtuseBase"] = s.obtuse_base;
    j["subcase"] = s.subcase ? Json(ToString(*s.subcase)) : Json(nullptr);
    j["samples"] = s.samples;
    j["minMaxBaseDihedral"] = u(s.min_max_dihedral);
    j["maxMaxBaseDihedral"] = u(s.max_max_dihedral);
    j["violations"] = s.violations;
    j["firstViolation"] = OrNull(s.first_violation);
    j["counterexampleFile"] = nullptr;
    list.push_back(j);
  }
  Json j;
  j["threshold"] = u(kPi / 3 - 1e-9);
  j["streams"] = list;
  return j;
}

Json ObtuseProjectionToJson(const ObtuseProjectionReport &r, bool degrees) {
  const Units u{degrees};
  Json j;
  j["minLiftedAngle"] = u(r.min_lifted_angle);
  if (r.counterexample) {
    const ObtuseProjectionSample &c = *r.counterexample;
    j["counterexample"] = {{"index", c.index},
                           {"planeAngle", u(c.plane_angle)},
                           {"projectedAngle", u(c.projected_angle)},
                           {"liftedAngle", u(c.lifted_angle)}};
  } else {
    j["counterexample"] = nullptr;
  }
  return j;
}

Json SharpnessDecayToJson(const SharpnessDecayReport &r, bool degrees) {
  const Units u{degrees};
  Json s = Json::array(), e = Json::array();
  for (double x : r.min_sharpness) s.push_back(u(x));
  for (double x : r.doublesharp_excess) e.push_back(u(x));
  Json j;
  j["minSharpness"] = s;
  j["doublesharpExcess"] = e;
  j["nonIncreasing"] = r.non_increasing;
  j["doublesharp"] = r.doublesharp;
  return j;
}

AbstractTriangulation ReadTriangulation(const std::string &text) {
  std::vector<std::pair<int, std::vector<std::string>>> lines;
  std::istringstream in(text);
  std::string line;
  for (int number = 1; std::getline(in, line); number++) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> tokens;
    for (std::string t; ls >> t;) tokens.push_back(t);
    if (!tokens.empty()) lines.push_back({number, std::move(tokens)});
  }
  if (lines.empty()) throw ParseError("empty triangulation", 1);
  if (lines[0].second[0] == "OFF") return AbstractTriangulation::FromMesh(ReadOff(text));

  auto to_int = [](const std::string &s, int number) {
    try {
      size_t used = 0;
      const long v = std::stol(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::logic_error &) {
      throw ParseError("expected an integer, got '" + s + "'", number);
    }
  };
  const auto &[hline, header] = lines[0];
  if (header.size() != 2) throw ParseError("header must be 'V F'", hline);
  const long nv = to_int(header[0], hline), nf = to_int(header[1], hline);
  if (nv < 0 || nf < 0) throw ParseError("negative count", hline);
  if (lines.size() != static_cast<size_t>(nf) + 1) {
    throw ParseError("expected " + std::to_string(nf) + " face lines", lines.back().first);
  }
  std::vector<Face> faces;
  for (size_t i = 1; i < lines.size(); i++) {
    const auto &[number, tok] = lines[i];
    if (tok.size() != 3) throw ParseError("face line needs three indices", number);
    Face f{};
    for (int k = 0; k < 3; k++) {
      const long v = to_int(tok[k], number);
      if (v < 0 || v >= nv) throw ParseError("vertex index out of range", number);
      f[k] = static_cast<int>(v);
    }
    faces.push_back(f);
  }
  return AbstractTriangulation(static_cast<int>(nv), std::move(faces));
}

std::string WriteTriangulationOff(const AbstractTriangulation &g) {
  std::ostringstream s;
  s << "OFF\n" << g.NumVertices() << ' ' << g.NumFaces() << " 0\n";
  for (int v = 0; v < g.NumVertices(); v++) s << "0 0 0\n";
  for (const Face &f : g.faces()) s << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  return s.str();
}

int RunCli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Monohedral isosceles polyhedra: constructions, audits and lemma checks", "polyiso"};
  // Plain --help only: construct uses --h for the apex height.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1, 1);
  app.fallthrough();
  Common common;
  app.add_flag("--degrees", common.degrees, "Report angles in degrees instead of radians");

  ConstructArgs ca;
  auto *construct = app.add_subcommand("construct", "Build a family member and audit it");
  construct->add_option("family", ca.family, "Family")
      ->required()
      ->check(CLI::IsMember({"bipyramid", "biarc", "gyro", "twisted-gyro"}));
  construct->add_option("--n", ca.n, "Bipyramid ring size")->check(CLI::Range(3, 100000));
  construct->add_option("--h", ca.h, "Bipyramid apex height")->check(CLI::PositiveNumber);
  construct->add_option("--x", ca.x, "Biarc points on the first arc")->check(CLI::Range(2, 100000));
  construct->add_option("--y", ca.y, "Biarc points on the second arc")->check(CLI::Range(2, 100000));
  construct->add_option("--k", ca.k, "Antiprism order")->check(CLI::Range(3, 100000));
  construct->add_flag("--equilateral", ca.equilateral, "Unit-edge gyro variant (k = 4, 5)");
  construct->add_option("--out", ca.out, "Mesh output (.off, or .obj export only)");
  construct->add_option("--report", ca.report, "Write the JSON report here instead of stdout");
  construct->add_option("--budget-ms", ca.budget_ms, "Minimum dominating set time budget")
      ->check(CLI::NonNegativeNumber);

  KleetopeArgs ka;
  auto *kleetope = app.add_subcommand(
      "kleetope",
      "Erect a pyramid on every face. Graph mode reads an OFF file (coordinates ignored) or "
      "'V F' followed by F lines of three 0-based indices, and writes OFF with zero coordinates");
  kleetope->add_option("--in", ka.in, "Input mesh or triangulation")->required();
  kleetope->add_option("--mode", ka.mode, "graph, convex or spike")
      ->required()
      ->check(CLI::IsMember({"graph", "convex", "spike"}));
  kleetope->add_option("--iterations", ka.iterations, "Number of Kleetope steps")
      ->check(CLI::Range(0, 6));
  kleetope->add_option("--radius", ka.radius, "Spike radius (default: automatic)")
      ->check(CLI::PositiveNumber);
  kleetope->add_option("--height-factor", ka.height_factor, "Convex apex height fraction")
      ->check(CLI::Range(0.0, 1.0));
  kleetope->add_option("--out", ka.out, "Output mesh");
  kleetope->add_option("--report", ka.report, "Write the JSON report here instead of stdout");

  AnalyzeArgs aa;
  auto *analyze = app.add_subcommand("analyze", "Audit an OFF mesh");
  analyze->add_option("--in", aa.in, "Input OFF mesh")->required();
  analyze->add_option("--out", aa.out, "Write the JSON report here instead of stdout");
  analyze->add_option("--budget-ms", aa.budget_ms, "Minimum dominating set time budget")
      ->check(CLI::NonNegativeNumber);

  VerifyArgs va;
  auto *verify = app.add_subcommand("verify", "Randomized and iterated lemma checks");
  verify->add_option("lemma", va.lemma, "Check to run")
      ->required()
      ->check(CLI::IsMember({"big-dihedral", "obtuse-projection", "sharpness-decay"}));
  verify->add_option("--samples", va.samples, "Samples per stream")->check(CLI::Range(1L, 100000000L));
  verify->add_option("--seed", va.seed, "Random seed")->envname("POLYISO_SEED");
  verify->add_option("--counterexample-dir", va.counterexample_dir,
                     "Directory for counterexample OFF files");
  verify->add_option("--in", va.in, "Seed mesh for sharpness-decay");
  verify->add_option("--seed-mesh", va.seed_mesh, "Built-in seed for sharpness-decay")
      ->check(CLI::IsMember({"tetrahedron", "octahedron", "icosahedron"}));
  verify->add_option("--iterations", va.iterations, "Kleetope iterations for sharpness-decay")
      ->check(CLI::Range(0, 3));
  verify->add_option("--height-factor", va.height_factor, "Convex apex height fraction")
      ->check(CLI::Range(0.0, 1.0));
  verify->add_option("--out", va.out, "Write the JSON report here instead of stdout");

  CycleArgs cy;
  auto *cycle = app.add_subcommand("cycle", "Longest simple cycle of a triangulation");
  cycle->add_option("--in", cy.in, "Input mesh or triangulation")->required();
  cycle->add_option("--budget", cy.budget_s, "Search budget in seconds")->check(CLI::NonNegativeNumber);
  cycle->add_option("--kleetope", cy.kleetope, "Kleetope steps applied first")->check(CLI::Range(0, 4));
  cycle->add_option("--out", cy.out, "Write the JSON report here instead of stdout");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Units u{common.degrees};
  try {
    if (construct->parsed()) return RunConstruct(ca, u, Reporter{out, err, ca.report});
    if (kleetope->parsed()) {
      if (ka.mode == "spike" && ka.iterations != 1) {
        throw CLI::ValidationError("spike mode takes exactly one iteration");
      }
      if (ka.radius && ka.mode != "spike") throw CLI::ValidationError("--radius needs --mode spike");
      return RunKleetope(ka, u, Reporter{out, err, ka.report});
    }
    if (analyze->parsed()) return RunAnalyze(aa, u, Reporter{out, err, aa.out});
    if (verify->parsed()) return RunVerify(va, u, Reporter{out, err, va.out});
    return RunCycle(cy, u, Reporter{out, err, cy.out});
  } catch (const CLI::Error &e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error &e) {
    if (IsUsageError(e.code())) {
      err << "input error: " << e.what() << "\n";
      return kExitUsage;
    }
    err << "invariant failed: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception &e) {
    err << "io error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace polyiso
