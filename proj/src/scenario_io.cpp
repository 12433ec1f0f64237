#include "swarmlab/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "swarmlab/errors.hpp"
#include "swarmlab/matrix_io.hpp"

namespace swarmlab {

namespace {

using nlohmann::json;

// Checked view of one JSON object: tracks the path for diagnostics and rejects
// keys outside the allowed set.
class Obj {
 public:
  Obj(const json& j, std::string path, std::set<std::string> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_.empty() ? "/" : path_, "expected an object");
    for (const auto& [k, v] : j_.items()) {
      if (!allowed.count(k)) throw SchemaError(at(k), "unknown key");
    }
  }

  std::string at(const std::string& key) const { return path_ + "/" + key; }
  bool has(const std::string& key) const { return j_.contains(key); }
  const json& raw(const std::string& key) const {
    if (!has(key)) throw SchemaError(at(key), "missing required key");
    return j_.at(key);
  }

  double number(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number()) throw SchemaError(at(key), "expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double def) const { return has(key) ? number(key) : def; }

  std::uint64_t unsigned_int(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      throw SchemaError(at(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }
  std::uint64_t unsigned_int(const std::string& key, std::uint64_t def) const {
    return has(key) ? unsigned_int(key) : def;
  }

  bool boolean(const std::string& key, bool def) const {
    if (!has(key)) return def;
    const auto& v = raw(key);
    if (!v.is_boolean()) throw SchemaError(at(key), "expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_string()) throw SchemaError(at(key), "expected a string");
    return v.get<std::string>();
  }

  Vec2 point(const std::string& key) const { return parse_point(raw(key), at(key)); }

  std::vector<double> numbers(const std::string& key) const {
    const auto& v = raw(key);
    if (!v.is_array()) throw SchemaError(at(key), "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) throw SchemaError(at(key) + "/" + std::to_string(i), "expected a number");
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  static Vec2 parse_point(const json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw SchemaError(path, "expected [x, y]");
    }
    try {
      return Vec2(v[0].get<double>(), v[1].get<double>());
    } catch (const ConstructionError& e) {
      throw SchemaError(path, e.what());
    }
  }

 private:
  const json& j_;
  std::string path_;
};

SwarmParams parse_params(const json& j) {
  const Obj o(j, "/params",
              {"n", "comm_range", "sense_range", "boundary_range", "speed", "sweep_speed", "period", "spacing",
               "steps_per_rev", "barrier_length"});
  SwarmParams p;
  p.n = static_cast<std::size_t>(o.unsigned_int("n"));
  p.comm_range = o.number("comm_range", p.comm_range);
  p.sense_range = o.number("sense_range", p.sense_range);
  p.boundary_range = o.number("boundary_range", p.boundary_range);
  p.speed = o.number("speed", p.speed);
  p.sweep_speed = o.number("sweep_speed", p.sweep_speed);
  p.period = o.number("period", p.period);
  p.spacing = o.number("spacing", p.spacing);
  p.steps_per_rev = static_cast<int>(o.unsigned_int("steps_per_rev", static_cast<std::uint64_t>(p.steps_per_rev)));
  if (o.has("barrier_length")) p.barrier_length = o.number("barrier_length");
  return p;
}

InitialSpec parse_initial(const json& j) {
  const Obj o(j, "/initial", {"robots", "random", "regular_polygon"});
  const int kinds = int(o.has("robots")) + int(o.has("random")) + int(o.has("regular_polygon"));
  if (kinds != 1) throw SchemaError("/initial", "give exactly one of robots, random, regular_polygon");
  if (o.has("robots")) {
    const auto& arr = o.raw("robots");
    if (!arr.is_array()) throw SchemaError("/initial/robots", "expected an array");
    std::vector<RobotState> robots;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/initial/robots/" + std::to_string(i);
      const Obj r(arr[i], path, {"x", "y", "theta"});
      try {
        robots.push_back({i, Vec2(r.number("x"), r.number("y")), r.number("theta")});
      } catch (const ConstructionError& e) {
        throw SchemaError(path, e.what());
      }
    }
    return robots;
  }
  if (o.has("random")) {
    const Obj r(o.raw("random"), "/initial/random", {"box", "heading_range", "require_connected", "max_attempts"});
    RandomInit ri;
    const auto& box = r.raw("box");
    if (!box.is_array() || box.size() != 2) throw SchemaError("/initial/random/box", "expected [[x0, y0], [x1, y1]]");
    ri.lo = Obj::parse_point(box[0], "/initial/random/box/0");
    ri.hi = Obj::parse_point(box[1], "/initial/random/box/1");
    if (r.has("heading_range")) {
      const auto hr = r.numbers("heading_range");
      if (hr.size() != 2) throw SchemaError("/initial/random/heading_range", "expected [lo, hi]");
      ri.heading_lo = hr[0];
      ri.heading_hi = hr[1];
    }
    ri.require_connected = r.boolean("require_connected", ri.require_connected);
    ri.max_attempts = static_cast<std::size_t>(r.unsigned_int("max_attempts", ri.max_attempts));
    return ri;
  }
  const Obj r(o.raw("regular_polygon"), "/initial/regular_polygon", {"circumradius", "center", "phase", "headings"});
  PolygonInit pi;
  pi.circumradius = r.number("circumradius");
  if (r.has("center")) pi.center = r.point("center");
  pi.phase = r.number("phase", 0.0);
  if (r.has("headings")) pi.headings = r.numbers("headings");
  return pi;
}

AdjacencyMatrix parse_adjacency(const json& j, const std::filesystem::path& base_dir) {
  Eigen::MatrixXd m;
  if (j.is_string()) {
    m = load_matrix_file((base_dir / j.get<std::string>()).string());
  } else {
    m = matrix_from_json(j, "/adjacency");
  }
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      const double v = m(i, k);
      if (v != 0.0 && v != 1.0) throw SchemaError("/adjacency", "entries must be 0 or 1");
      rows[static_cast<std::size_t>(i)].push_back(static_cast<int>(v));
    }
  }
  try {
    return AdjacencyMatrix::from_rows(rows);
  } catch (const PreconditionError& e) {
    throw SchemaError("/adjacency", e.what());
  }
}

SweepSpec parse_sweep(const json& j) {
  const Obj o(j, "/sweep", {"segments", "vertices", "side", "c0"});
  SweepSpec s;
  if (o.has("segments") == o.has("vertices")) {
    throw SchemaError("/sweep", "give exactly one of segments, vertices");
  }
  if (o.has("segments")) {
    const auto& arr = o.raw("segments");
    if (!arr.is_array() || arr.empty()) throw SchemaError("/sweep/segments", "expected a non-empty array");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string path = "/sweep/segments/" + std::to_string(i);
      const Obj seg(arr[i], path, {"gamma", "offset", "extent"});
      SegmentSpec spec{seg.number("gamma"), seg.number("offset"), std::nullopt};
      if (seg.has("extent")) {
        const auto e = seg.numbers("extent");
        if (e.size() != 2 || !(e[0] <= e[1])) throw SchemaError(path + "/extent", "expected [t0, t1] with t0 <= t1");
        spec.extent = std::make_pair(e[0], e[1]);
      }
      s.segments.push_back(spec);
    }
  } else {
    const auto& arr = o.raw("vertices");
    if (!arr.is_array() || arr.size() < 2) throw SchemaError("/sweep/vertices", "expected at least two [x, y] points");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      s.vertices.push_back(Obj::parse_point(arr[i], "/sweep/vertices/" + std::to_string(i)));
    }
  }
  if (o.has("side")) s.side = parse_side(o.string("side"));
  if (o.has("c0")) s.c0 = o.number("c0");
  return s;
}

std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  const Obj o(doc, "",
              {"name", "controller", "seed", "max_steps", "consensus_tol", "params", "initial", "adjacency", "weights",
               "quantized", "sweep", "record_weights"});
  Scenario s;
  if (o.has("name")) s.name = o.string("name");
  s.controller = parse_controller(o.string("controller"));
  s.seed = o.unsigned_int("seed", 0);
  s.max_steps = static_cast<std::size_t>(o.unsigned_int("max_steps", s.max_steps));
  s.consensus_tol = o.number("consensus_tol", s.consensus_tol);
  s.params = parse_params(o.raw("params"));
  s.initial = parse_initial(o.raw("initial"));
  if (o.has("adjacency")) s.adjacency = parse_adjacency(o.raw("adjacency"), base_dir);
  if (o.has("weights")) {
    const Obj w(o.raw("weights"), "/weights", {"guard", "guard_epsilon"});
    s.weights.guard = w.boolean("guard", s.weights.guard);
    s.weights.guard_epsilon = w.number("guard_epsilon", s.weights.guard_epsilon);
  }
  if (o.has("quantized")) {
    const Obj q(o.raw("quantized"), "/quantized", {"bias"});
    if (q.has("bias")) s.bias = parse_bias(q.string("bias"));
  }
  if (o.has("sweep")) s.sweep = parse_sweep(o.raw("sweep"));
  s.record_weights = o.boolean("record_weights", false);
  return s;
}

Scenario parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(line_col(text, e.byte > 0 ? e.byte - 1 : 0), std::string("malformed JSON: ") + e.what());
  }
  return parse_scenario(doc, base_dir);
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path.string(), "cannot open scenario file");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path.parent_path());
}

json scenario_to_json(const Scenario& s) {
  json j;
  j["name"] = s.name;
  j["controller"] = to_string(s.controller);
  j["seed"] = s.seed;
  j["max_steps"] = s.max_steps;
  j["consensus_tol"] = s.consensus_tol;
  json p = {{"n", s.params.n},
            {"comm_range", s.params.comm_range},
            {"sense_range", s.params.sense_range},
            {"boundary_range", s.params.boundary_range},
            {"speed", s.params.speed},
            {"sweep_speed", s.params.sweep_speed},
            {"period", s.params.period},
            {"spacing", s.params.spacing},
            {"steps_per_rev", s.params.steps_per_rev}};
  if (s.params.barrier_length) p["barrier_length"] = *s.params.barrier_length;
  j["params"] = p;

  auto pt = [](const Vec2& v) { return json::array({v.x(), v.y()}); };
  if (const auto* robots = std::get_if<std::vector<RobotState>>(&s.initial)) {
    auto arr = json::array();
    for (const auto& r : *robots) arr.push_back({{"x", r.position.x()}, {"y", r.position.y()}, {"theta", r.heading}});
    j["initial"] = {{"robots", arr}};
  } else if (const auto* rnd = std::get_if<RandomInit>(&s.initial)) {
    j["initial"] = {{"random",
                     {{"box", json::array({pt(rnd->lo), pt(rnd->hi)})},
                      {"heading_range", json::array({rnd->heading_lo, rnd->heading_hi})},
                      {"require_connected", rnd->require_connected},
                      {"max_attempts", rnd->max_attempts}}}};
  } else {
    const auto& poly = std::get<PolygonInit>(s.initial);
    json pj = {{"circumradius", poly.circumradius}, {"center", pt(poly.center)}, {"phase", poly.phase}};
    if (poly.headings) pj["headings"] = *poly.headings;
    j["initial"] = {{"regular_polygon", pj}};
  }
  if (s.adjacency) j["adjacency"] = s.adjacency->rows();
  j["weights"] = {{"guard", s.weights.guard}, {"guard_epsilon", s.weights.guard_epsilon}};
  j["quantized"] = {{"bias", to_string(s.bias)}};
  if (s.sweep) {
    json sw;
    if (!s.sweep->vertices.empty()) {
      auto arr = json::array();
      for (const auto& v : s.sweep->vertices) arr.push_back(pt(v));
      sw["vertices"] = arr;
    } else {
      auto arr = json::array();
      for (const auto& seg : s.sweep->segments) {
        json sj = {{"gamma", seg.gamma}, {"offset", seg.offset}};
        if (seg.extent) sj["extent"] = json::array({seg.extent->first, seg.extent->second});
        arr.push_back(sj);
      }
      sw["segments"] = arr;
    }
    sw["side"] = to_string(s.sweep->side);
    if (s.sweep->c0) sw["c0"] = *s.sweep->c0;
    j["sweep"] = sw;
  }
  j["record_weights"] = s.record_weights;
  return j;
}

}  // namespace swarmlab
