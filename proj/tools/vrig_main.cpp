// vrig command-line tool: rig presets, synthetic scenes, test renders,
// warping, error evaluation, and virtual-rig optimization.
//
// Every command writes a manifest.json next to its outputs recording the
// fully resolved configuration (no timestamps, no absolute-path noise from
// the output side), so reruns with the same inputs are byte-identical.
//
// Exit codes: 0 success, 2 bad arguments, 3 input/output failure,
// 4 optimizer failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vrig/vrig.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

void write_manifest(const fs::path& out_dir, const json& manifest) {
  std::ofstream out(out_dir / "manifest.json", std::ios::binary);
  if (!out) throw vrig::IoError("cannot write manifest in '" + out_dir.string() + "'");
  out << manifest.dump(2) << "\n";
  if (!out) throw vrig::IoError("manifest write failed in '" + out_dir.string() + "'");
}

json manifest_base(const std::string& command, uint64_t seed) {
  json m;
  m["tool"] = "vrig";
  m["version"] = kToolVersion;
  m["command"] = command;
  m["seed"] = seed;
  return m;
}

// --- presets ---

struct PresetsArgs {
  std::string out_dir;
};

void run_presets(const PresetsArgs& args) {
  fs::create_directories(args.out_dir);
  json outputs = json::array();
  for (const vrig::Rig& rig : vrig::preset_rigs()) {
    const std::string filename = rig.label + ".rig";
    vrig::save_rig_config((fs::path(args.out_dir) / filename).string(), rig);
    outputs.push_back(filename);
  }
  json m = manifest_base("presets", 0);
  m["outputs"] = outputs;
  write_manifest(args.out_dir, m);
  std::cout << "wrote " << outputs.size() << " rig presets to " << args.out_dir << "\n";
}

// --- gen-scene ---

struct GenSceneArgs {
  std::string out_dir;
  std::string name = "scene.txt";
  uint64_t seed = 0;
  int boxes = 20;
  double r_min = 5.0;
  double r_max = 40.0;
  std::string label = "scene";
};

void run_gen_scene(const GenSceneArgs& args) {
  vrig::SceneSpec spec;
  spec.seed = args.seed;
  spec.n_boxes = args.boxes;
  spec.r_min = args.r_min;
  spec.r_max = args.r_max;
  spec.label = args.label;
  const vrig::Scene scene = vrig::generate_scene(spec);

  fs::create_directories(args.out_dir);
  vrig::save_scene((fs::path(args.out_dir) / args.name).string(), scene);

  json m = manifest_base("gen-scene", args.seed);
  m["boxes"] = args.boxes;
  m["r_min"] = args.r_min;
  m["r_max"] = args.r_max;
  m["label"] = args.label;
  m["outputs"] = json::array({args.name});
  write_manifest(args.out_dir, m);
  std::cout << "wrote " << scene.boxes.size() << "-box scene to "
            << (fs::path(args.out_dir) / args.name).string() << "\n";
}

// --- render ---

struct RenderArgs {
  std::string rig_file;
  std::string scene_file;
  std::string out_dir;
};

void run_render(const RenderArgs& args) {
  const vrig::Rig rig = vrig::load_rig_config(args.rig_file);
  const vrig::Scene scene = vrig::load_scene(args.scene_file);
  fs::create_directories(args.out_dir);
  json outputs = json::array();
  for (const vrig::Camera& cam : rig.cameras) {
    const std::string filename = cam.name + ".ppm";
    vrig::write_ppm((fs::path(args.out_dir) / filename).string(),
                    vrig::render_test_pattern(cam, scene));
    outputs.push_back(filename);
  }
  json m = manifest_base("render", scene.seed);
  m["rig"] = args.rig_file;
  m["scene"] = args.scene_file;
  m["outputs"] = outputs;
  write_manifest(args.out_dir, m);
  std::cout << "rendered " << outputs.size() << " views to " << args.out_dir << "\n";
}

// --- warp ---

struct WarpArgs {
  std::string rig_file;
  std::string virtual_rig_file;
  std::string image_dir;
  std::string out_dir;
  double d0 = 50.0;
  std::optional<double> hc;
  double weight_exp = vrig::kDefaultWeightExponent;
  std::string sampling = "bilinear";
};

vrig::Sampling parse_sampling(const std::string& s) {
  if (s == "bilinear") return vrig::Sampling::Bilinear;
  if (s == "nearest") return vrig::Sampling::Nearest;
  throw std::invalid_argument("--sampling must be 'bilinear' or 'nearest'");
}

void run_warp(const WarpArgs& args) {
  const vrig::Rig source_rig = vrig::load_rig_config(args.rig_file);
  const vrig::Rig virtual_rig = vrig::load_rig_config(args.virtual_rig_file);
  const vrig::Sampling sampling = parse_sampling(args.sampling);

  std::vector<vrig::ImageBuffer> images;
  images.reserve(source_rig.cameras.size());
  for (const vrig::Camera& cam : source_rig.cameras) {
    const fs::path path = fs::path(args.image_dir) / (cam.name + ".ppm");
    vrig::ImageBuffer img = vrig::read_ppm(path.string());
    if (img.width != cam.intrinsics.width || img.height != cam.intrinsics.height)
      throw std::invalid_argument("image '" + path.string() + "' does not match camera '" +
                                  cam.name + "' (" + std::to_string(cam.intrinsics.width) + "x" +
                                  std::to_string(cam.intrinsics.height) + ")");
    images.push_back(std::move(img));
  }

  fs::create_directories(args.out_dir);
  json outputs = json::array();
  for (const vrig::Camera& virt : virtual_rig.cameras) {
    vrig::DepthAssumption assumption;
    assumption.distance_threshold = args.d0;
    assumption.camera_height = args.hc ? *args.hc : virt.height_above_ground();
    assumption.validate();

    const vrig::WarpMap map =
        vrig::build_warp_map(virt, source_rig, assumption, args.weight_exp);
    const vrig::ImageBuffer out = vrig::warp_and_blend(map, images, sampling);

    const std::string stem = virt.name;
    vrig::save_warp_map((fs::path(args.out_dir) / (stem + ".warpmap")).string(), map);
    vrig::write_ppm((fs::path(args.out_dir) / (stem + ".ppm")).string(), out);
    vrig::write_mask_ppm((fs::path(args.out_dir) / (stem + "_mask.ppm")).string(), out);
    outputs.push_back(stem + ".ppm");
    outputs.push_back(stem + "_mask.ppm");
    outputs.push_back(stem + ".warpmap");
  }

  json m = manifest_base("warp", 0);
  m["rig"] = args.rig_file;
  m["virtual_rig"] = args.virtual_rig_file;
  m["image_dir"] = args.image_dir;
  m["d0"] = args.d0;
  if (args.hc) m["hc"] = *args.hc;
  m["weight_exp"] = args.weight_exp;
  m["sampling"] = args.sampling;
  m["outputs"] = outputs;
  write_manifest(args.out_dir, m);
  std::cout << "warped " << source_rig.cameras.size() << " source views into "
            << virtual_rig.cameras.size() << " virtual views in " << args.out_dir << "\n";
}

// --- eval ---

struct EvalArgs {
  std::string virtual_rig_file;
  std::vector<std::string> rig_files;
  std::vector<std::string> scene_files;
  std::string out_dir;
  double d0 = 50.0;
  std::optional<double> hc;
  std::string distance_ref = "virtual";
};

vrig::MetricOptions parse_metric_options(const std::string& distance_ref) {
  vrig::MetricOptions opts;
  if (distance_ref == "virtual")
    opts.distance_ref = vrig::DistanceRef::VirtualCenter;
  else if (distance_ref == "source")
    opts.distance_ref = vrig::DistanceRef::SourceCenter;
  else
    throw std::invalid_argument("--distance-ref must be 'virtual' or 'source'");
  return opts;
}

void run_eval(const EvalArgs& args) {
  const vrig::Rig virtual_rig = vrig::load_rig_config(args.virtual_rig_file);
  const vrig::MetricOptions opts = parse_metric_options(args.distance_ref);

  vrig::DepthAssumption assumption;
  assumption.distance_threshold = args.d0;
  assumption.camera_height =
      args.hc ? *args.hc : virtual_rig.cameras.front().height_above_ground();
  assumption.validate();

  std::vector<vrig::Rig> rigs;
  for (const std::string& f : args.rig_files) rigs.push_back(vrig::load_rig_config(f));
  std::vector<vrig::Scene> scenes;
  for (const std::string& f : args.scene_files) scenes.push_back(vrig::load_scene(f));

  std::ostringstream table;
  double grand_total = 0.0;
  for (size_t r = 0; r < rigs.size(); ++r) {
    double rig_total = 0.0;
    for (size_t s = 0; s < scenes.size(); ++s) {
      const vrig::ErrorReport report =
          vrig::scene_error(virtual_rig, rigs[r], scenes[s], assumption, opts);
      table << "rig_" << r << "_scene_" << s << "_total " << vrig::format_double(report.total)
            << "\n"
            << "rig_" << r << "_scene_" << s << "_counted " << report.counted << "\n"
            << "rig_" << r << "_scene_" << s << "_skipped " << report.skipped << "\n";
      rig_total += report.total;
    }
    table << "rig_" << r << "_total " << vrig::format_double(rig_total) << "\n";
    grand_total += rig_total;
  }
  table << "total " << vrig::format_double(grand_total) << "\n";

  fs::create_directories(args.out_dir);
  {
    std::ofstream out(fs::path(args.out_dir) / "report.txt", std::ios::binary);
    if (!out) throw vrig::IoError("cannot write report in '" + args.out_dir + "'");
    out << table.str();
  }
  std::cout << table.str();

  json m = manifest_base("eval", 0);
  m["virtual_rig"] = args.virtual_rig_file;
  m["rigs"] = args.rig_files;
  m["scenes"] = args.scene_files;
  m["d0"] = args.d0;
  if (args.hc) m["hc"] = *args.hc;
  m["distance_ref"] = args.distance_ref;
  m["outputs"] = json::array({"report.txt"});
  write_manifest(args.out_dir, m);
}

// --- optimize ---

struct OptimizeArgs {
  std::vector<std::string> rig_files;
  std::string out_dir;
  uint64_t seed = 0;
  int scenes = 2;
  int boxes = 20;
  double r_min = 5.0;
  double r_max = 40.0;
  int cams = 6;
  bool per_camera = false;
  int iters = 30;
  int pop = 0;
  int elite = 0;
  double sigma = 0.5;
  double d0 = 50.0;
  std::optional<double> hc;
  std::vector<double> grid;  // pos[m], yaw[deg], fov[deg]
  std::string distance_ref = "virtual";
};

void run_optimize(const OptimizeArgs& args) {
  vrig::RigFamily family;
  for (const std::string& f : args.rig_files) family.rigs.push_back(vrig::load_rig_config(f));
  family.validate();

  // Scenes are generated from the master seed with distinct sub-seeds.
  std::vector<vrig::Scene> scenes;
  for (int s = 0; s < args.scenes; ++s) {
    vrig::SceneSpec spec;
    spec.seed = args.seed * 1000003ULL + static_cast<uint64_t>(s);
    spec.n_boxes = args.boxes;
    spec.r_min = args.r_min;
    spec.r_max = args.r_max;
    spec.label = "opt_scene_" + std::to_string(s);
    scenes.push_back(vrig::generate_scene(spec));
  }
  if (scenes.empty()) throw std::invalid_argument("optimize: need at least one scene");

  vrig::RigParamSpec param_spec;
  param_spec.camera_count = args.cams;
  param_spec.mode = args.per_camera ? vrig::ParamMode::PerCamera : vrig::ParamMode::Tied;

  vrig::ParamBounds bounds = vrig::default_param_bounds(param_spec);
  if (!args.grid.empty()) {
    if (args.grid.size() != 3)
      throw std::invalid_argument("--grid needs exactly pos,yaw,fov");
    const double d_pos = args.grid[0];
    const double d_yaw = vrig::deg_to_rad(args.grid[1]);
    const double d_fov = vrig::deg_to_rad(args.grid[2]);
    if (!(d_pos > 0.0 && d_yaw > 0.0 && d_fov > 0.0))
      throw std::invalid_argument("--grid components must be positive");
    for (int k = 0; k < param_spec.camera_count; ++k) {
      const int base = (param_spec.mode == vrig::ParamMode::Tied ? 3 : 5) * k;
      bounds.grid_delta[base + 0] = d_pos;
      bounds.grid_delta[base + 1] = d_pos;
      bounds.grid_delta[base + 2] = d_pos;
      if (param_spec.mode == vrig::ParamMode::PerCamera) {
        bounds.grid_delta[base + 3] = d_yaw;
        bounds.grid_delta[base + 4] = d_fov;
      }
    }
    if (param_spec.mode == vrig::ParamMode::Tied) {
      bounds.grid_delta[3 * param_spec.camera_count] = d_yaw;
      bounds.grid_delta[3 * param_spec.camera_count + 1] = d_fov;
    }
  }

  // Initial mean: cameras at roof center, 1.6 m up, forward yaw, 90 deg FOV.
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(param_spec.dim());
  for (int k = 0; k < param_spec.camera_count; ++k) {
    const int base = (param_spec.mode == vrig::ParamMode::Tied ? 3 : 5) * k;
    mean[base + 1] = -1.6;
    if (param_spec.mode == vrig::ParamMode::PerCamera) {
      mean[base + 3] = 0.0;
      mean[base + 4] = vrig::deg_to_rad(90.0);
    }
  }
  if (param_spec.mode == vrig::ParamMode::Tied) {
    mean[3 * param_spec.camera_count] = 0.0;
    mean[3 * param_spec.camera_count + 1] = vrig::deg_to_rad(90.0);
  }

  vrig::cmaes::Config config;
  config.initial_mean = mean;
  config.initial_sigma = args.sigma;
  config.lower = bounds.lower;
  config.upper = bounds.upper;
  config.grid_delta = bounds.grid_delta;
  config.population = args.pop;
  config.elites = args.elite;
  config.max_iters = args.iters;
  config.seed = args.seed;

  const auto objective = vrig::make_rig_objective(
      family, scenes, param_spec, args.d0, args.hc, parse_metric_options(args.distance_ref));
  const vrig::cmaes::Result result = vrig::cmaes::optimize(objective, config);

  fs::create_directories(args.out_dir);
  const vrig::Rig best_rig = vrig::rig_from_params(param_spec, result.best);
  vrig::save_rig_config((fs::path(args.out_dir) / "best.rig").string(), best_rig);
  {
    std::ofstream out(fs::path(args.out_dir) / "history.txt", std::ios::binary);
    if (!out) throw vrig::IoError("cannot write history in '" + args.out_dir + "'");
    for (const vrig::cmaes::HistoryRecord& rec : result.history) {
      out << "iter " << rec.iteration << " best " << vrig::format_double(rec.best_error)
          << " sigma " << vrig::format_double(rec.sigma) << " mean";
      for (int i = 0; i < rec.mean.size(); ++i)
        out << " " << vrig::format_double(rec.mean[i]);
      out << "\n";
    }
  }

  json m = manifest_base("optimize", args.seed);
  m["rigs"] = args.rig_files;
  m["scenes"] = args.scenes;
  m["boxes"] = args.boxes;
  m["r_min"] = args.r_min;
  m["r_max"] = args.r_max;
  m["cams"] = args.cams;
  m["per_camera"] = args.per_camera;
  m["iters"] = args.iters;
  m["pop"] = args.pop;
  m["elite"] = args.elite;
  m["sigma"] = args.sigma;
  m["d0"] = args.d0;
  if (args.hc) m["hc"] = *args.hc;
  if (!args.grid.empty()) m["grid"] = args.grid;
  m["distance_ref"] = args.distance_ref;
  m["best_error"] = vrig::format_double(result.best_error);
  m["evaluations"] = result.evaluations;
  m["outputs"] = json::array({"best.rig", "history.txt"});
  write_manifest(args.out_dir, m);
  std::cout << "best error " << vrig::format_double(result.best_error) << " after "
            << result.evaluations << " evaluations; rig written to "
            << (fs::path(args.out_dir) / "best.rig").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"virtual surround-camera rig toolkit"};
  app.require_subcommand(1);

  PresetsArgs presets_args;
  CLI::App* presets = app.add_subcommand("presets", "write the built-in rig presets");
  presets->add_option("-o,--out", presets_args.out_dir, "output directory")->required();
  presets->callback([&] { run_presets(presets_args); });

  GenSceneArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen-scene", "generate a seeded synthetic scene");
  gen->add_option("-o,--out", gen_args.out_dir, "output directory")->required();
  gen->add_option("--name", gen_args.name, "scene file name");
  gen->add_option("--seed", gen_args.seed, "RNG seed");
  gen->add_option("--boxes", gen_args.boxes, "number of boxes");
  gen->add_option("--r-min", gen_args.r_min, "inner annulus radius [m]");
  gen->add_option("--r-max", gen_args.r_max, "outer annulus radius [m]");
  gen->add_option("--label", gen_args.label, "scene label");
  gen->callback([&] { run_gen_scene(gen_args); });

  RenderArgs render_args;
  CLI::App* render = app.add_subcommand("render", "render test patterns for a rig");
  render->add_option("--rig", render_args.rig_file, "rig config file")->required();
  render->add_option("--scene", render_args.scene_file, "scene file")->required();
  render->add_option("-o,--out", render_args.out_dir, "output directory")->required();
  render->callback([&] { run_render(render_args); });

  WarpArgs warp_args;
  CLI::App* warp = app.add_subcommand("warp", "re-project source views into a virtual rig");
  warp->add_option("--rig", warp_args.rig_file, "source rig config")->required();
  warp->add_option("--virtual", warp_args.virtual_rig_file, "virtual rig config")->required();
  warp->add_option("--images", warp_args.image_dir, "directory with <camera>.ppm inputs")
      ->required();
  warp->add_option("-o,--out", warp_args.out_dir, "output directory")->required();
  warp->add_option("--d0", warp_args.d0, "distance threshold D0 [m]");
  warp->add_option("--hc", warp_args.hc, "assumed camera height [m] (default: per virtual camera)");
  warp->add_option("--weight-exp", warp_args.weight_exp, "blend weight cosine exponent");
  warp->add_option("--sampling", warp_args.sampling, "bilinear|nearest");
  warp->callback([&] { run_warp(warp_args); });

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "evaluate projection error of a virtual rig");
  eval->add_option("--virtual", eval_args.virtual_rig_file, "virtual rig config")->required();
  eval->add_option("--rig", eval_args.rig_files, "source rig config (repeatable)")->required();
  eval->add_option("--scene", eval_args.scene_files, "scene file (repeatable)")->required();
  eval->add_option("-o,--out", eval_args.out_dir, "output directory")->required();
  eval->add_option("--d0", eval_args.d0, "distance threshold D0 [m]");
  eval->add_option("--hc", eval_args.hc, "assumed camera height [m] (default: first virtual camera)");
  eval->add_option("--distance-ref", eval_args.distance_ref, "virtual|source distance weight");
  eval->callback([&] { run_eval(eval_args); });

  OptimizeArgs opt_args;
  CLI::App* opt = app.add_subcommand("optimize", "search for a virtual rig minimizing the error");
  opt->add_option("--rig", opt_args.rig_files, "source rig config (repeatable)")->required();
  opt->add_option("-o,--out", opt_args.out_dir, "output directory")->required();
  opt->add_option("--seed", opt_args.seed, "master RNG seed");
  opt->add_option("--scenes", opt_args.scenes, "number of generated scenes");
  opt->add_option("--boxes", opt_args.boxes, "boxes per scene");
  opt->add_option("--r-min", opt_args.r_min, "inner annulus radius [m]");
  opt->add_option("--r-max", opt_args.r_max, "outer annulus radius [m]");
  opt->add_option("--cams", opt_args.cams, "virtual camera count");
  opt->add_flag("--per-camera", opt_args.per_camera, "free yaw/FOV per camera");
  opt->add_option("--iters", opt_args.iters, "optimizer iterations");
  opt->add_option("--pop", opt_args.pop, "population size (0 = default)");
  opt->add_option("--elite", opt_args.elite, "elite count (0 = default)");
  opt->add_option("--sigma", opt_args.sigma, "initial step size");
  opt->add_option("--d0", opt_args.d0, "distance threshold D0 [m]");
  opt->add_option("--hc", opt_args.hc, "assumed camera height [m]");
  opt->add_option("--grid", opt_args.grid, "grid densities pos[m],yaw[deg],fov[deg]")
      ->delimiter(',');
  opt->add_option("--distance-ref", opt_args.distance_ref, "virtual|source distance weight");
  opt->callback([&] { run_optimize(opt_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const vrig::OptimizerFailure& e) {
    std::cerr << "optimizer failure: " << e.what() << "\n";
    return 4;
  } catch (const vrig::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const vrig::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
