#include "gfm/planner/pipeline.hpp"

#include "gfm/errors.hpp"
#include "gfm/world/synthetic.hpp"

#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

namespace gfm::planner {

namespace {

using nlohmann::json;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

PoseSE2 pose_from_json(const json& j) {
  return PoseSE2(j.at(0).get<double>(), j.at(1).get<double>(),
                 j.at(2).get<double>());
}

json pose_to_json(const PoseSE2& p) { return json::array({p.x, p.y, p.theta}); }

void apply_json(PlanConfig& c, const json& j) {
  c.map = j.value("map", c.map);
  c.demo_resolution = j.value("demo_resolution", c.demo_resolution);
  c.mem_path = j.value("mem_path", c.mem_path);
  if (j.contains("start")) c.start = pose_from_json(j.at("start"));
  if (j.contains("goal")) c.goal = pose_from_json(j.at("goal"));
  c.seed = j.value("seed", c.seed);
  c.perception_aware_search =
      j.value("perception_aware_search", c.perception_aware_search);

  if (j.contains("lidar")) {
    const json& l = j.at("lidar");
    c.lidar.fov = l.value("fov_rad", c.lidar.fov);
    c.lidar.n_rays = l.value("n_rays", c.lidar.n_rays);
    c.lidar.max_range = l.value("max_range_m", c.lidar.max_range);
  }
  if (j.contains("mem_build")) {
    const json& m = j.at("mem_build");
    c.mem_build.max_range = m.value("max_range_m", c.mem_build.max_range);
    c.mem_build.threads = m.value("threads", c.mem_build.threads);
    c.mem_build.rank.tau_rank = m.value("tau_rank", c.mem_build.rank.tau_rank);
  }
  if (j.contains("sigmoid")) {
    const json& s = j.at("sigmoid");
    c.sigmoid.epsilon = s.value("epsilon", c.sigmoid.epsilon);
  }
  if (j.contains("search")) {
    const json& s = j.at("search");
    c.search.step_length = s.value("step_length_m", c.search.step_length);
    c.search.arc_yaw_step = s.value("arc_yaw_step_rad", c.search.arc_yaw_step);
    c.search.rotation_step = s.value("rotation_step_rad", c.search.rotation_step);
    c.search.theta_bins = s.value("theta_bins", c.search.theta_bins);
    c.search.goal_xy_tol = s.value("goal_xy_tol_m", c.search.goal_xy_tol);
    c.search.goal_yaw_tol = s.value("goal_yaw_tol_rad", c.search.goal_yaw_tol);
    c.search.safety_margin = s.value("safety_margin_m", c.search.safety_margin);
    c.search.max_nodes = s.value("max_nodes", c.search.max_nodes);
  }
  if (j.contains("keyposes")) {
    const json& k = j.at("keyposes");
    c.keyposes.rdp_epsilon = k.value("rdp_epsilon_m", c.keyposes.rdp_epsilon);
    c.keyposes.max_spacing = k.value("max_spacing_m", c.keyposes.max_spacing);
  }
  if (j.contains("optimizer")) {
    const json& o = j.at("optimizer");
    c.opt.lambda_l = o.value("lambda_l", c.opt.lambda_l);
    c.opt.lambda_e = o.value("lambda_e", c.opt.lambda_e);
    c.opt.lambda_g = o.value("lambda_g", c.opt.lambda_g);
    c.opt.rho = o.value("rho", c.opt.rho);
    c.opt.safety_distance = o.value("safety_distance_m", c.opt.safety_distance);
    c.opt.v_max = o.value("v_max", c.opt.v_max);
    c.opt.a_max = o.value("a_max", c.opt.a_max);
    c.opt.omega_max = o.value("omega_max", c.opt.omega_max);
    c.opt.alpha_max = o.value("alpha_max", c.opt.alpha_max);
    c.opt.samples_per_segment = o.value("samples_per_segment", c.opt.samples_per_segment);
    c.opt.sigmoid_epsilon = o.value("sigmoid_epsilon", c.opt.sigmoid_epsilon);
    c.opt.lbfgs_memory = o.value("lbfgs_memory", c.opt.lbfgs_memory);
    c.opt.wolfe_c1 = o.value("wolfe_c1", c.opt.wolfe_c1);
    c.opt.wolfe_c2 = o.value("wolfe_c2", c.opt.wolfe_c2);
    c.opt.grad_tol = o.value("grad_tol", c.opt.grad_tol);
    c.opt.cost_rel_tol = o.value("cost_rel_tol", c.opt.cost_rel_tol);
    c.opt.max_iterations = o.value("max_iterations", c.opt.max_iterations);
  }
  if (j.contains("noise")) {
    const json& n = j.at("noise");
    c.noise.range_sigma = n.value("range_sigma_m", c.noise.range_sigma);
    c.noise.drift_sigma_xy = n.value("drift_sigma_xy_m", c.noise.drift_sigma_xy);
    c.noise.drift_sigma_theta =
        n.value("drift_sigma_theta_rad", c.noise.drift_sigma_theta);
  }
  if (j.contains("track")) {
    const json& t = j.at("track");
    c.track.sample_dt = t.value("sample_dt_s", c.track.sample_dt);
    c.track.gn_max_iterations = t.value("gn_max_iterations", c.track.gn_max_iterations);
    c.track.gn_tol = t.value("gn_tol", c.track.gn_tol);
  }
}

}  // namespace

PlanConfig PlanConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  PlanConfig c;
  try {
    apply_json(c, j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid config: ") + e.what());
  }
  return c;
}

PlanConfig PlanConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw io::ImageError("cannot open config file: " + path);
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string PlanConfig::to_json_text() const {
  json j;
  j["map"] = map;
  j["demo_resolution"] = demo_resolution;
  j["mem_path"] = mem_path;
  if (start) j["start"] = pose_to_json(*start);
  if (goal) j["goal"] = pose_to_json(*goal);
  j["seed"] = seed;
  j["perception_aware_search"] = perception_aware_search;
  j["lidar"] = {{"fov_rad", lidar.fov},
                {"n_rays", lidar.n_rays},
                {"max_range_m", lidar.max_range}};
  j["mem_build"] = {{"max_range_m", mem_build.max_range},
                    {"threads", mem_build.threads},
                    {"tau_rank", mem_build.rank.tau_rank}};
  j["sigmoid"] = {{"epsilon", sigmoid.epsilon}};
  j["search"] = {{"step_length_m", search.step_length},
                 {"arc_yaw_step_rad", search.arc_yaw_step},
                 {"rotation_step_rad", search.rotation_step},
                 {"theta_bins", search.theta_bins},
                 {"goal_xy_tol_m", search.goal_xy_tol},
                 {"goal_yaw_tol_rad", search.goal_yaw_tol},
                 {"safety_margin_m", search.safety_margin},
                 {"max_nodes", search.max_nodes}};
  j["keyposes"] = {{"rdp_epsilon_m", keyposes.rdp_epsilon},
                   {"max_spacing_m", keyposes.max_spacing}};
  j["optimizer"] = {{"lambda_l", opt.lambda_l},
                    {"lambda_e", opt.lambda_e},
                    {"lambda_g", opt.lambda_g},
                    {"rho", opt.rho},
                    {"safety_distance_m", opt.safety_distance},
                    {"v_max", opt.v_max},
                    {"a_max", opt.a_max},
                    {"omega_max", opt.omega_max},
                    {"alpha_max", opt.alpha_max},
                    {"samples_per_segment", opt.samples_per_segment},
                    {"sigmoid_epsilon", opt.sigmoid_epsilon},
                    {"lbfgs_memory", opt.lbfgs_memory},
                    {"wolfe_c1", opt.wolfe_c1},
                    {"wolfe_c2", opt.wolfe_c2},
                    {"grad_tol", opt.grad_tol},
                    {"cost_rel_tol", opt.cost_rel_tol},
                    {"max_iterations", opt.max_iterations}};
  j["noise"] = {{"range_sigma_m", noise.range_sigma},
                {"drift_sigma_xy_m", noise.drift_sigma_xy},
                {"drift_sigma_theta_rad", noise.drift_sigma_theta}};
  j["track"] = {{"sample_dt_s", track.sample_dt},
                {"gn_max_iterations", track.gn_max_iterations},
                {"gn_tol", track.gn_tol}};
  return j.dump(2) + "\n";
}

Problem load_problem(const PlanConfig& config) {
  std::optional<world::OccupancyGrid> grid;
  std::optional<PoseSE2> start = config.start;
  std::optional<PoseSE2> goal = config.goal;

  if (config.map.rfind("demo:", 0) == 0) {
    world::DemoScenario demo =
        world::demo_scenario(config.map.substr(5), config.demo_resolution);
    grid = std::move(demo.grid);
    if (!start) start = demo.start;
    if (!goal) goal = demo.goal;
  } else {
    grid = world::load_map(config.map);
  }
  if (!start || !goal) {
    throw ConfigError("start and goal poses are required for file maps");
  }

  for (const auto& [name, pose] : {std::pair{"start", *start}, {"goal", *goal}}) {
    const world::CellIndex c = grid->world_to_cell(pose.position());
    if (!grid->in_bounds(c) || grid->occupied(c)) {
      throw ConfigError(std::string(name) + " pose is not in free space");
    }
  }

  mem::MemBuildConfig build = config.mem_build;
  if (build.rank.fd_step_xy <= 0.0) {
    build.rank = scan::RankConfig::defaults(grid->resolution());
  }

  std::optional<mem::MetricEncodingMap> metric;
  if (!config.mem_path.empty()) {
    mem::LoadedMem loaded = mem::load_mem(config.mem_path, grid->content_hash());
    if (loaded.warning) {
      throw ConfigError(*loaded.warning);
    }
    metric = std::move(loaded.mem);
  } else {
    metric = mem::build_mem(*grid, build);
  }

  world::DistanceField df(*grid);
  if (!df.has_obstacles()) {
    throw ConfigError("map has no obstacles; the distance field is undefined");
  }
  return Problem{std::move(*grid), std::move(df), std::move(*metric), *start,
                 *goal};
}

Eigen::VectorXd allocate_times(const std::vector<Eigen::Vector3d>& keyposes,
                               const optimizer::OptConfig& opt) {
  const int k = static_cast<int>(keyposes.size()) - 1;
  Eigen::VectorXd times(std::max(k, 1));
  const double cruise = 0.5 * opt.v_max;
  const double accel = opt.a_max;
  const double yaw_rate = 0.5 * opt.omega_max;
  if (k == 0) {
    times(0) = 1.0;
    return times;
  }
  for (int i = 0; i < k; ++i) {
    const double dist = (keyposes[i + 1].head<2>() - keyposes[i].head<2>()).norm();
    const double ramp = cruise * cruise / accel;
    double t_xy;
    if (dist < ramp) {
      t_xy = 2.0 * std::sqrt(dist / accel);
    } else {
      t_xy = dist / cruise + cruise / accel;
    }
    const double t_yaw = std::abs(keyposes[i + 1].z() - keyposes[i].z()) / yaw_rate;
    times(i) = std::max({t_xy, t_yaw, 0.25});
  }
  return times;
}

PlanOutcome plan(const Problem& problem, const PlanConfig& config) {
  PlanOutcome out;
  const auto t_start = std::chrono::steady_clock::now();

  search::SigmoidParams sigmoid = config.sigmoid;
  if (!config.perception_aware_search) {
    sigmoid.epsilon = 0.0;  // constant per-step cost
  }

  auto t0 = std::chrono::steady_clock::now();
  const search::HeuristicField hfield =
      heuristic_presearch(problem.mem, problem.grid, problem.goal, sigmoid);
  out.presearch_seconds = seconds_since(t0);

  search::SearchConfig search_cfg = config.search;
  search_cfg.fov = config.lidar.fov;
  search_cfg.perception_aware = config.perception_aware_search;
  // Search with a buffer over the trajectory clearance so the smoothed
  // spline starts feasible and the penalty only has to hold the line.
  search_cfg.safety_margin = config.opt.safety_distance + 0.12;

  t0 = std::chrono::steady_clock::now();
  out.search = search::hybrid_astar(problem.df, problem.mem, hfield,
                                    problem.start, problem.goal, sigmoid,
                                    search_cfg);
  out.search_seconds = seconds_since(t0);

  out.keyposes = search::extract_keyposes(out.search.path, config.keyposes);

  t0 = std::chrono::steady_clock::now();
  const int k = static_cast<int>(out.keyposes.size()) - 1;
  Eigen::Matrix3Xd waypoints(3, std::max(k - 1, 0));
  for (int i = 1; i < k; ++i) {
    waypoints.col(i - 1) = out.keyposes[i];
  }
  const Eigen::VectorXd times = allocate_times(out.keyposes, config.opt);

  Eigen::Matrix3Xd start_state = Eigen::Matrix3Xd::Zero(3, 3);
  Eigen::Matrix3Xd end_state = Eigen::Matrix3Xd::Zero(3, 3);
  start_state.col(0) = out.keyposes.front();
  end_state.col(0) = out.keyposes.back();

  out.initial_trajectory = minco::MincoTrajectory::construct(
      waypoints, times, start_state, end_state, 3);

  optimizer::OptConfig opt = config.opt;
  opt.fov = config.lidar.fov;
  out.optimized = optimizer::optimize(out.initial_trajectory, problem.df,
                                      problem.mem, opt);
  out.optimize_seconds = seconds_since(t0);
  out.total_seconds = seconds_since(t_start);
  return out;
}

void write_path_json(const std::string& path, const search::SearchResult& r) {
  json j;
  json poses = json::array();
  for (const PoseSE2& p : r.path) {
    poses.push_back(pose_to_json(p));
  }
  j["poses"] = std::move(poses);
  j["g_cost"] = r.g_cost;
  j["nodes_expanded"] = r.stats.nodes_expanded;
  j["admissibility_violations"] = r.stats.admissibility_violations;
  j["max_admissibility_gap"] = r.stats.max_admissibility_gap;
  std::ofstream out(path);
  if (!out) throw io::ImageError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_trajectory_json(const std::string& path,
                           const minco::MincoTrajectory& traj) {
  json j;
  j["s"] = traj.order();
  j["segments"] = traj.segment_count();
  json q = json::array();
  for (int i = 0; i < traj.waypoints().cols(); ++i) {
    q.push_back({traj.waypoints()(0, i), traj.waypoints()(1, i),
                 traj.waypoints()(2, i)});
  }
  j["waypoints"] = std::move(q);
  j["times"] = std::vector<double>(traj.times().data(),
                                   traj.times().data() + traj.times().size());
  json bounds;
  for (const char* key : {"start", "end"}) {
    const Eigen::Matrix3Xd& st =
        std::string(key) == "start" ? traj.start_state() : traj.end_state();
    json cols = json::array();
    for (int c = 0; c < st.cols(); ++c) {
      cols.push_back({st(0, c), st(1, c), st(2, c)});
    }
    bounds[key] = std::move(cols);
  }
  j["boundary"] = std::move(bounds);
  json coeffs = json::array();
  for (int r = 0; r < traj.coefficients().rows(); ++r) {
    coeffs.push_back({traj.coefficients()(r, 0), traj.coefficients()(r, 1),
                      traj.coefficients()(r, 2)});
  }
  j["coefficients"] = std::move(coeffs);
  std::ofstream out(path);
  if (!out) throw io::ImageError("cannot write " + path);
  out << j.dump(2) << "\n";
}

minco::MincoTrajectory read_trajectory_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io::ImageError("cannot open trajectory: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed trajectory JSON: ") + e.what());
  }
  try {
    const int s = j.at("s").get<int>();
    const auto times_v = j.at("times").get<std::vector<double>>();
    Eigen::VectorXd times(times_v.size());
    for (std::size_t i = 0; i < times_v.size(); ++i) times(i) = times_v[i];
    const json& q = j.at("waypoints");
    Eigen::Matrix3Xd waypoints(3, q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
      waypoints.col(i) = Eigen::Vector3d(q[i][0].get<double>(),
                                         q[i][1].get<double>(),
                                         q[i][2].get<double>());
    }
    auto state = [&](const char* key) {
      const json& cols = j.at("boundary").at(key);
      Eigen::Matrix3Xd st(3, cols.size());
      for (std::size_t c = 0; c < cols.size(); ++c) {
        st.col(c) = Eigen::Vector3d(cols[c][0].get<double>(),
                                    cols[c][1].get<double>(),
                                    cols[c][2].get<double>());
      }
      return st;
    };
    return minco::MincoTrajectory::construct(waypoints, times, state("start"),
                                             state("end"), s);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid trajectory JSON: ") + e.what());
  }
}

void write_eval_json(const std::string& path, const localizer::EvalReport& r) {
  json j;
  j["mean_error_m"] = r.mean_error;
  j["max_error_m"] = r.max_error;
  j["goal_deviation_m"] = r.goal_deviation;
  j["convergence_failures"] = r.convergence_failures;
  json samples = json::array();
  for (const auto& s : r.samples) {
    samples.push_back({{"t", s.time},
                       {"true_pose", pose_to_json(s.true_pose)},
                       {"estimate", pose_to_json(s.estimate)},
                       {"error_m", s.error},
                       {"converged", s.converged}});
  }
  j["samples"] = std::move(samples);
  std::ofstream out(path);
  if (!out) throw io::ImageError("cannot write " + path);
  out << j.dump(2) << "\n";
}

void write_eval_csv(const std::string& path, const localizer::EvalReport& r) {
  std::ofstream out(path);
  if (!out) throw io::ImageError("cannot write " + path);
  out << "t,true_x,true_y,true_theta,est_x,est_y,est_theta,error_m,converged\n";
  char line[256];
  for (const auto& s : r.samples) {
    std::snprintf(line, sizeof(line),
                  "%.6f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%d\n", s.time,
                  s.true_pose.x, s.true_pose.y, s.true_pose.theta,
                  s.estimate.x, s.estimate.y, s.estimate.theta, s.error,
                  s.converged ? 1 : 0);
    out << line;
  }
}

void write_cost_history_csv(const std::string& path,
                            const std::vector<optimizer::CostReport>& history) {
  std::ofstream out(path);
  if (!out) throw io::ImageError("cannot write " + path);
  out << "iteration,total,localization,energy,penalty,grad_norm,"
         "max_clearance_deficit,max_velocity_overshoot,max_accel_overshoot,"
         "max_omega_overshoot,max_alpha_overshoot\n";
  char line[512];
  for (std::size_t i = 0; i < history.size(); ++i) {
    const auto& c = history[i];
    std::snprintf(line, sizeof(line),
                  "%zu,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,"
                  "%.12g\n",
                  i + 1, c.total, c.localization, c.energy, c.penalty,
                  c.grad_norm, c.max_clearance_deficit,
                  c.max_velocity_overshoot, c.max_accel_overshoot,
                  c.max_omega_overshoot, c.max_alpha_overshoot);
    out << line;
  }
}

AblationReport run_ablation(const Problem& problem, const PlanConfig& base,
                            int seeds) {
  AblationReport report;
  report.seeds = seeds;
  report.base_seed = base.seed;

  struct ArmSpec {
    const char* name;
    bool perception_search;
    double lambda_l;
  };
  const ArmSpec specs[3] = {
      {"complete", true, base.opt.lambda_l},
      {"no_perception_search", false, base.opt.lambda_l},
      {"no_localization_cost", true, 0.0},
  };

  for (const ArmSpec& spec : specs) {
    AblationArm arm;
    arm.name = spec.name;
    PlanConfig cfg = base;
    cfg.perception_aware_search = spec.perception_search;
    cfg.opt.lambda_l = spec.lambda_l;

    try {
      const PlanOutcome outcome = plan(problem, cfg);
      arm.plan_seconds = outcome.total_seconds;
      const minco::MincoTrajectory& traj = outcome.optimized.trajectory;

      arm.mean_errors.resize(seeds);
      arm.goal_deviations.resize(seeds);
      const unsigned workers =
          std::max(1u, std::thread::hardware_concurrency());
      std::atomic<int> next{0};
      auto eval_worker = [&]() {
        for (int i = next.fetch_add(1); i < seeds; i = next.fetch_add(1)) {
          localizer::NoiseModel noise = cfg.noise;
          noise.seed = cfg.seed + static_cast<uint64_t>(i);
          const localizer::EvalReport r = localizer::track_trajectory(
              traj, problem.grid, problem.df, noise, cfg.track);
          arm.mean_errors[i] = r.mean_error;
          arm.goal_deviations[i] = r.goal_deviation;
        }
      };
      std::vector<std::thread> pool;
      for (unsigned wi = 1; wi < workers; ++wi) pool.emplace_back(eval_worker);
      eval_worker();
      for (auto& th : pool) th.join();

      arm.mean_error = eval::mean(arm.mean_errors);
      arm.error_ci = eval::bootstrap_mean_ci(arm.mean_errors);
      arm.mean_goal_deviation = eval::mean(arm.goal_deviations);
      arm.goal_ci = eval::bootstrap_mean_ci(arm.goal_deviations);
    } catch (const std::exception& e) {
      arm.failed = true;
      arm.failure = e.what();
    }
    report.arms.push_back(std::move(arm));
  }
  return report;
}

std::string ablation_report_json(const AblationReport& r) {
  json j;
  j["seeds"] = r.seeds;
  j["base_seed"] = r.base_seed;
  json arms = json::array();
  for (const auto& a : r.arms) {
    json arm;
    arm["name"] = a.name;
    arm["failed"] = a.failed;
    if (a.failed) {
      arm["failure"] = a.failure;
    } else {
      arm["plan_seconds"] = a.plan_seconds;
      arm["mean_error_m"] = a.mean_error;
      arm["error_ci95_m"] = {a.error_ci.lower, a.error_ci.upper};
      arm["mean_goal_deviation_m"] = a.mean_goal_deviation;
      arm["goal_deviation_ci95_m"] = {a.goal_ci.lower, a.goal_ci.upper};
      arm["per_seed_mean_error_m"] = a.mean_errors;
      arm["per_seed_goal_deviation_m"] = a.goal_deviations;
    }
    arms.push_back(std::move(arm));
  }
  j["arms"] = std::move(arms);
  return j.dump(2) + "\n";
}

}  // namespace gfm::planner
