#include "swarmlab/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include "swarmlab/errors.hpp"
#include "swarmlab/rng.hpp"

namespace swarmlab {

namespace {

struct ControllerName {
  Controller c;
  const char* name;
};

constexpr ControllerName kControllerNames[] = {
    {Controller::simple, "simple"},
    {Controller::vicsek, "vicsek"},
    {Controller::similarity_weighted, "similarity_weighted"},
    {Controller::quantized_biased, "quantized_biased"},
    {Controller::quantized_plain, "quantized_plain"},
    {Controller::sweep_equal, "sweep_equal"},
    {Controller::sweep_weighted, "sweep_weighted"},
};

std::vector<Vec2> positions_of(const std::vector<RobotState>& robots) {
  std::vector<Vec2> out;
  out.reserve(robots.size());
  for (const auto& r : robots) out.push_back(r.position);
  return out;
}

double draw_heading(Rng& rng, const Scenario& s, double lo, double hi) {
  if (is_quantized(s.controller)) {
    const QuantizationGrid grid(s.params.steps_per_rev);
    return grid.value(static_cast<long>(rng.index(static_cast<std::uint64_t>(grid.steps()))));
  }
  return rng.uniform(lo, hi);
}

void check_headings(const Scenario& s, const std::vector<RobotState>& robots) {
  for (const auto& r : robots) {
    if (!std::isfinite(r.heading)) throw ScenarioError("robot " + std::to_string(r.id) + ": non-finite heading");
    if (is_quantized(s.controller)) {
      const QuantizationGrid grid(s.params.steps_per_rev);
      if (!grid.contains(r.heading)) {
        throw ScenarioError("robot " + std::to_string(r.id) + ": heading is not on the quantization grid");
      }
    } else if (s.controller != Controller::vicsek && !(r.heading >= 0.0 && r.heading < kPi)) {
      throw ScenarioError("robot " + std::to_string(r.id) + ": initial heading must lie in [0, pi)");
    }
  }
}

const BoundarySegment& reference_segment(const BoundaryChain& chain, const std::vector<SweepControl>& ctl,
                                         const std::vector<Vec2>& pos) {
  std::optional<Detection> best;
  for (const auto& c : ctl) {
    if (c.detection && (!best || c.detection->distance < best->distance)) best = c.detection;
  }
  if (best) return chain[best->segment];
  double cx = 0.0, cy = 0.0;
  for (const auto& p : pos) {
    cx += p.x();
    cy += p.y();
  }
  const Vec2 centroid(cx / static_cast<double>(pos.size()), cy / static_cast<double>(pos.size()));
  std::size_t k_best = 0;
  for (std::size_t k = 1; k < chain.size(); ++k) {
    if (chain[k].distance(centroid) < chain[k_best].distance(centroid)) k_best = k;
  }
  return chain[k_best];
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

std::string to_string(Controller c) {
  for (const auto& e : kControllerNames) {
    if (e.c == c) return e.name;
  }
  return "unknown";
}

Controller parse_controller(const std::string& s) {
  for (const auto& e : kControllerNames) {
    if (s == e.name) return e.c;
  }
  throw SchemaError("/controller", "unknown controller \"" + s + "\"");
}

bool is_quantized(Controller c) { return c == Controller::quantized_biased || c == Controller::quantized_plain; }
bool is_sweep(Controller c) { return c == Controller::sweep_equal || c == Controller::sweep_weighted; }
bool is_linear(Controller c) { return c == Controller::simple || c == Controller::similarity_weighted; }

BoundaryChain SweepSpec::chain() const {
  if (!vertices.empty()) return chain_from_vertices(vertices);
  BoundaryChain out;
  for (const auto& s : segments) out.emplace_back(s.gamma, s.offset, s.extent);
  return out;
}

void Scenario::validate() const {
  params.validate();
  if (max_steps < 1) throw ScenarioError("max_steps must be >= 1");
  if (!(consensus_tol > 0.0)) throw ScenarioError("consensus_tol must be > 0");
  if (!(weights.guard_epsilon > 0.0 && weights.guard_epsilon < 1.0)) {
    throw ScenarioError("guard_epsilon must lie in (0, 1)");
  }
  if (adjacency && adjacency->size() != params.n) {
    throw ScenarioError("adjacency matrix size does not match n");
  }
  if (const auto* robots = std::get_if<std::vector<RobotState>>(&initial)) {
    if (robots->size() != params.n) throw ScenarioError("number of initial robots does not match n");
  }
  if (const auto* poly = std::get_if<PolygonInit>(&initial)) {
    if (!(poly->circumradius > 0.0)) throw ScenarioError("polygon circumradius must be > 0");
    if (poly->headings && poly->headings->size() != params.n) {
      throw ScenarioError("number of polygon headings does not match n");
    }
  }
  if (const auto* rnd = std::get_if<RandomInit>(&initial)) {
    if (!(rnd->lo.x() <= rnd->hi.x() && rnd->lo.y() <= rnd->hi.y())) {
      throw ScenarioError("random box must satisfy lo <= hi");
    }
    if (!(rnd->heading_lo <= rnd->heading_hi)) throw ScenarioError("random heading range is empty");
  }
  if (is_sweep(controller)) {
    if (!sweep) throw ScenarioError("sweep controllers need a boundary");
    if (sweep->segments.empty() && sweep->vertices.size() < 2) {
      throw ScenarioError("sweep boundary needs segments or at least two vertices");
    }
    if (adjacency) throw ScenarioError("sweep controllers use range adjacency; drop the fixed graph");
  }
}

bool operator==(const Scenario& a, const Scenario& b) {
  return a.name == b.name && a.controller == b.controller && a.seed == b.seed && a.max_steps == b.max_steps &&
         a.consensus_tol == b.consensus_tol && a.params.n == b.params.n &&
         a.params.comm_range == b.params.comm_range && a.params.sense_range == b.params.sense_range &&
         a.params.boundary_range == b.params.boundary_range && a.params.speed == b.params.speed &&
         a.params.sweep_speed == b.params.sweep_speed && a.params.period == b.params.period &&
         a.params.spacing == b.params.spacing && a.params.steps_per_rev == b.params.steps_per_rev &&
         a.params.barrier_length == b.params.barrier_length && a.initial == b.initial &&
         a.adjacency == b.adjacency && a.weights == b.weights && a.bias == b.bias && a.sweep == b.sweep &&
         a.record_weights == b.record_weights;
}

std::vector<RobotState> initial_states(const Scenario& s) {
  const std::size_t n = s.params.n;
  std::vector<RobotState> robots;
  if (const auto* given = std::get_if<std::vector<RobotState>>(&s.initial)) {
    robots = *given;
    for (std::size_t i = 0; i < robots.size(); ++i) robots[i].id = i;
    return robots;
  }
  Rng rng(s.seed);
  if (const auto* poly = std::get_if<PolygonInit>(&s.initial)) {
    for (std::size_t i = 0; i < n; ++i) {
      const double a = poly->phase + kTwoPi * static_cast<double>(i) / static_cast<double>(n);
      const Vec2 p = poly->center + poly->circumradius * unit_vector(a);
      const double h = poly->headings ? (*poly->headings)[i] : draw_heading(rng, s, 0.0, kPi);
      robots.push_back({i, p, h});
    }
    return robots;
  }
  const auto& rnd = std::get<RandomInit>(s.initial);
  for (std::size_t attempt = 0; attempt < rnd.max_attempts; ++attempt) {
    robots.clear();
    for (std::size_t i = 0; i < n; ++i) {
      const double x = rng.uniform(rnd.lo.x(), rnd.hi.x());
      const double y = rng.uniform(rnd.lo.y(), rnd.hi.y());
      const double h = draw_heading(rng, s, rnd.heading_lo, rnd.heading_hi);
      robots.push_back({i, Vec2(x, y), h});
    }
    if (!rnd.require_connected || s.adjacency) return robots;
    const auto pos = positions_of(robots);
    if (is_connected(build_adjacency(pos, s.params.comm_range))) return robots;
  }
  throw ScenarioError("no connected random deployment found in " + std::to_string(rnd.max_attempts) +
                      " attempts");
}

RobotState kinematics_step(const RobotState& state, double speed, double heading, double period) {
  RobotState next = state;
  next.position = state.position + (period * speed) * unit_vector(heading);
  next.heading = heading;
  return next;
}

double heading_spread(const std::vector<RobotState>& robots, bool circular) {
  if (robots.size() < 2) return 0.0;
  if (!circular) {
    const auto [lo, hi] = std::minmax_element(robots.begin(), robots.end(), [](const auto& a, const auto& b) {
      return a.heading < b.heading;
    });
    return hi->heading - lo->heading;
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < robots.size(); ++i) {
    for (std::size_t j = i + 1; j < robots.size(); ++j) {
      worst = std::max(worst, std::abs(angle_diff(robots[i].heading, robots[j].heading)));
    }
  }
  return worst;
}

SimTrace run(const Scenario& s) {
  s.validate();
  SimTrace trace;
  auto robots = initial_states(s);
  check_headings(s, robots);
  const std::size_t n = robots.size();
  const double T = s.params.period;
  const bool sweep = is_sweep(s.controller);
  const bool circular = !is_linear(s.controller);
  const QuantizationGrid grid(s.params.steps_per_rev);
  if (is_quantized(s.controller)) trace.grid_steps = grid.steps();

  auto adjacency_at = [&](const std::vector<RobotState>& rs) {
    return s.adjacency ? *s.adjacency : build_adjacency(positions_of(rs), s.params.comm_range);
  };
  if (!is_connected(adjacency_at(robots))) {
    throw ScenarioError("initial communication graph is disconnected");
  }

  BoundaryChain chain;
  std::vector<double> coordination;
  std::size_t clamp_count = 0;
  std::optional<std::size_t> first_clamp;
  if (sweep) {
    chain = s.sweep->chain();
    for (auto& w : s.params.sweep_assumption_warnings()) trace.warnings.push_back(std::move(w));
    for (const auto& r : robots) coordination.push_back(r.heading);
  }

  trace.steps.push_back(robots);
  if (heading_spread(robots, circular) < s.consensus_tol) {
    trace.consensus_step = 0;
  }
  bool warned_disconnect = false;
  for (std::size_t k = 0; k < s.max_steps && (sweep || !trace.consensus_step); ++k) {
    const auto a = adjacency_at(robots);
    if (!warned_disconnect && !is_connected(a)) {
      trace.warnings.push_back("communication graph disconnected at step " + std::to_string(k));
      warned_disconnect = true;
    }
    std::vector<double> heads(n);
    for (std::size_t i = 0; i < n; ++i) heads[i] = robots[i].heading;

    std::vector<RobotState> next(n);
    if (sweep) {
      std::vector<SweepRobot> sr;
      for (std::size_t i = 0; i < n; ++i) sr.push_back({robots[i].position, coordination[i], robots[i].heading});
      std::vector<std::string> clamps;
      const auto ctl = sweep_step(sr, s.params, chain, s.controller == Controller::sweep_weighted, &clamps);
      if (!clamps.empty()) {
        clamp_count += clamps.size();
        if (!first_clamp) first_clamp = k;
      }
      const auto pos = positions_of(robots);
      const auto& seg = reference_segment(chain, ctl, pos);
      std::optional<LineSpec> line;
      if (s.sweep->c0) line = moving_line(seg, *s.sweep->c0, k, s.params);
      const auto rep = tracking_report(pos, seg, s.params.spacing, s.sweep->side, line);
      std::vector<SweepRecord> rec(n);
      for (std::size_t i = 0; i < n; ++i) {
        rec[i] = {rep.targets.points[rep.assignment[i]], ctl[i].speed, ctl[i].heading, rep.distances[i]};
        next[i] = kinematics_step(robots[i], ctl[i].speed, ctl[i].heading, T);
        coordination[i] = ctl[i].coordination;
      }
      trace.sweep.push_back(std::move(rec));
    } else {
      std::vector<double> upd(n);
      switch (s.controller) {
        case Controller::simple:
        case Controller::similarity_weighted: {
          WeightMatrix w = s.controller == Controller::simple ? equal_weight_matrix(a) : similarity_matrix(a, true);
          if (s.controller == Controller::similarity_weighted && s.weights.guard) {
            w = apply_aperiodicity_guard(w, s.weights.guard_epsilon);
          }
          upd = apply_weights(w, heads);
          if (s.record_weights) trace.weight_matrices.push_back(std::move(w));
          break;
        }
        case Controller::vicsek:
          for (std::size_t i = 0; i < n; ++i) {
            std::vector<double> nb;
            for (auto j : a.neighbours(i)) nb.push_back(heads[j]);
            try {
              upd[i] = vicsek_update(heads[i], nb);
            } catch (const DegenerateAverage&) {
              upd[i] = heads[i];
            }
          }
          break;
        case Controller::quantized_biased:
        case Controller::quantized_plain: {
          std::vector<int> idx(n);
          for (std::size_t i = 0; i < n; ++i) idx[i] = grid.index_of(heads[i]);
          for (std::size_t i = 0; i < n; ++i) {
            std::vector<int> nb;
            for (auto j : a.neighbours(i)) nb.push_back(idx[j]);
            const int out = s.controller == Controller::quantized_biased
                                ? quantized_update_index(idx[i], nb, grid.steps(), s.bias)
                                : quantized_vicsek_index(idx[i], nb, grid);
            upd[i] = grid.value(out);
          }
          break;
        }
        default:
          break;
      }
      for (std::size_t i = 0; i < n; ++i) {
        next[i] = kinematics_step(robots[i], s.params.speed, heads[i], T);
        next[i].heading = upd[i];
      }
    }
    robots = std::move(next);
    trace.steps.push_back(robots);
    if (!trace.consensus_step && heading_spread(robots, circular) < s.consensus_tol) {
      trace.consensus_step = k + 1;
    }
  }
  if (clamp_count > 0) {
    trace.warnings.push_back("speed clamped to v_max " + std::to_string(clamp_count) + " times (first at step " +
                             std::to_string(*first_clamp) + ")");
  }
  if (!sweep) trace.cycle_detected = detect_cycle(trace);
  return trace;
}

bool detect_cycle(const SimTrace& trace) {
  if (trace.steps.size() < 4 || trace.consensus_step) return false;
  std::map<std::vector<std::int64_t>, std::size_t> seen;
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    std::vector<std::int64_t> key;
    key.reserve(trace.steps[k].size());
    for (const auto& r : trace.steps[k]) {
      if (trace.grid_steps > 0) {
        const double q = kTwoPi / trace.grid_steps;
        const auto idx = static_cast<std::int64_t>(std::llround(r.heading / q));
        key.push_back(((idx % trace.grid_steps) + trace.grid_steps) % trace.grid_steps);
      } else {
        std::int64_t bits;
        std::memcpy(&bits, &r.heading, sizeof bits);
        key.push_back(bits);
      }
    }
    const auto [it, inserted] = seen.emplace(std::move(key), k);
    if (!inserted && k - it->second >= 2) return true;
    if (!inserted) it->second = k;
  }
  return false;
}

ComparisonTable compare_controllers(const Scenario& scenario, const std::vector<Controller>& controllers,
                                    std::size_t n_seeds, std::optional<std::uint64_t> first_seed,
                                    unsigned threads) {
  const std::uint64_t s0 = first_seed.value_or(scenario.seed);
  const std::size_t jobs = controllers.size() * n_seeds;
  ComparisonTable table;
  table.rows.resize(jobs);
  for (std::size_t c = 0; c < controllers.size(); ++c) {
    for (std::size_t k = 0; k < n_seeds; ++k) {
      table.rows[c * n_seeds + k] = {controllers[c], s0 + k, std::nullopt};
    }
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));

  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t j = next++; j < jobs; j = next++) {
        Scenario s = scenario;
        s.controller = table.rows[j].controller;
        s.seed = table.rows[j].seed;
        table.rows[j].consensus_step = run(s).consensus_step;
      }
    } catch (...) {
      errors[id] = std::current_exception();
      next = jobs;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (std::size_t c = 0; c < controllers.size(); ++c) {
    std::vector<double> v;
    for (std::size_t k = 0; k < n_seeds; ++k) {
      const auto& step = table.rows[c * n_seeds + k].consensus_step;
      v.push_back(step ? static_cast<double>(*step) : static_cast<double>(scenario.max_steps + 1));
    }
    std::sort(v.begin(), v.end());
    double med = 0.0;
    if (!v.empty()) {
      med = v.size() % 2 ? v[v.size() / 2] : 0.5 * (v[v.size() / 2 - 1] + v[v.size() / 2]);
    }
    table.medians.emplace_back(controllers[c], med);
  }
  return table;
}

void write_trace_csv(std::ostream& out, const SimTrace& trace) {
  out << "step,id,x,y,theta\n";
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    for (const auto& r : trace.steps[k]) {
      out << k << ',' << r.id << ',' << fmt9(r.position.x()) << ',' << fmt9(r.position.y()) << ','
          << fmt9(r.heading) << '\n';
    }
  }
}

void write_sweep_csv(std::ostream& out, const SimTrace& trace) {
  out << "step,id,target_x,target_y,speed,heading,distance\n";
  for (std::size_t k = 0; k < trace.sweep.size(); ++k) {
    for (std::size_t i = 0; i < trace.sweep[k].size(); ++i) {
      const auto& r = trace.sweep[k][i];
      out << k << ',' << i << ',' << fmt9(r.target.x()) << ',' << fmt9(r.target.y()) << ',' << fmt9(r.speed)
          << ',' << fmt9(r.heading) << ',' << fmt9(r.distance) << '\n';
    }
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  out << "controller,seed,consensus_step\n";
  for (const auto& r : table.rows) {
    out << to_string(r.controller) << ',' << r.seed << ',';
    if (r.consensus_step) out << *r.consensus_step;
    out << '\n';
  }
}

nlohmann::json summary_json(const SimTrace& trace) {
  nlohmann::json j;
  j["consensus_step"] = trace.consensus_step ? nlohmann::json(*trace.consensus_step) : nlohmann::json(nullptr);
  j["cycle_detected"] = trace.cycle_detected;
  auto heads = nlohmann::json::array();
  if (!trace.steps.empty()) {
    for (const auto& r : trace.steps.back()) heads.push_back(r.heading);
  }
  j["final_headings"] = heads;
  j["warnings"] = trace.warnings;
  return j;
}

}  // namespace swarmlab
