#include "l1ds/config.hpp"

#include <json.hpp>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

namespace l1ds {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + (path.empty() ? "<root>" : path) + ": " + what);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void expect_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown(const json& j, const std::string& path,
                    std::initializer_list<std::string_view> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (std::string_view a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail(join(path, it.key()), "unknown key");
  }
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_double_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) fail(path, "expected an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::optional<double> as_auto_double(const json& j, const std::string& path) {
  if (j.is_string()) {
    if (j.get<std::string>() != "auto") fail(path, "expected a number or \"auto\"");
    return std::nullopt;
  }
  return as_double(j, path);
}

std::vector<std::pair<double, double>> as_window_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of [start, stop] pairs");
  std::vector<std::pair<double, double>> out;
  for (const auto& w : j) {
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
      fail(path, "expected an array of [start, stop] pairs");
    out.emplace_back(w[0].get<double>(), w[1].get<double>());
  }
  return out;
}

ShapeSource parse_shape(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"source", "kind", "amplitude", "frequency", "noise", "num_demos",
                  "samples_per_demo", "directory"});
  ShapeSource out;
  if (j.contains("source")) {
    out.source = as_string(j["source"], join(path, "source"));
    if (out.source != "synthetic" && out.source != "directory")
      fail(join(path, "source"), "expected \"synthetic\" or \"directory\"");
  }
  if (j.contains("kind"))
    out.params.kind = shape_kind_from_string(as_string(j["kind"], join(path, "kind")));
  if (j.contains("amplitude"))
    out.params.amplitude = as_double(j["amplitude"], join(path, "amplitude"));
  if (j.contains("frequency"))
    out.params.frequency = as_double(j["frequency"], join(path, "frequency"));
  if (j.contains("noise")) out.params.noise = as_double(j["noise"], join(path, "noise"));
  if (j.contains("num_demos"))
    out.params.num_demos = as_int(j["num_demos"], join(path, "num_demos"));
  if (j.contains("samples_per_demo"))
    out.params.samples_per_demo = as_int(j["samples_per_demo"], join(path, "samples_per_demo"));
  if (j.contains("directory")) out.directory = as_string(j["directory"], join(path, "directory"));
  return out;
}

ModelConfig parse_model(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"num_centers", "bandwidth", "ridge", "seed", "path"});
  ModelConfig out;
  if (j.contains("num_centers"))
    out.num_centers = as_int(j["num_centers"], join(path, "num_centers"));
  if (j.contains("bandwidth")) out.bandwidth = as_double(j["bandwidth"], join(path, "bandwidth"));
  if (j.contains("ridge")) out.ridge = as_double(j["ridge"], join(path, "ridge"));
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_integer()) fail(join(path, "seed"), "expected an integer");
    out.seed = s.get<std::uint64_t>();
  }
  if (j.contains("path")) out.path = as_string(j["path"], join(path, "path"));
  return out;
}

ClfSection parse_clf(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"enabled", "c", "p_diag"});
  ClfSection out;
  if (j.contains("enabled")) out.enabled = as_bool(j["enabled"], join(path, "enabled"));
  if (j.contains("c")) out.c = as_double(j["c"], join(path, "c"));
  if (j.contains("p_diag")) out.p_diag = as_double_array(j["p_diag"], join(path, "p_diag"));
  return out;
}

L1Section parse_l1(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"enabled", "omega", "t_sample", "a_s_diag"});
  L1Section out;
  if (j.contains("enabled")) out.enabled = as_bool(j["enabled"], join(path, "enabled"));
  if (j.contains("omega")) out.omega = as_double(j["omega"], join(path, "omega"));
  if (j.contains("t_sample")) out.t_sample = as_double(j["t_sample"], join(path, "t_sample"));
  if (j.contains("a_s_diag"))
    out.a_s_diag = as_double_array(j["a_s_diag"], join(path, "a_s_diag"));
  return out;
}

SelectorSection parse_selector(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"mode", "window_w", "history_h", "target_history"});
  SelectorSection out;
  if (j.contains("mode")) {
    const std::string m = as_string(j["mode"], join(path, "mode"));
    if (m == "dtw")
      out.mode = SelectorMode::dtw;
    else if (m == "time_indexed")
      out.mode = SelectorMode::time_indexed;
    else
      fail(join(path, "mode"), "expected \"dtw\" or \"time_indexed\"");
  }
  if (j.contains("window_w")) out.window_w = as_int(j["window_w"], join(path, "window_w"));
  if (j.contains("history_h")) out.history_h = as_int(j["history_h"], join(path, "history_h"));
  if (j.contains("target_history"))
    out.target_history = as_int(j["target_history"], join(path, "target_history"));
  return out;
}

DtwSection parse_dtw(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"band"});
  DtwSection out;
  if (j.contains("band") && !j["band"].is_null())
    out.band = as_int(j["band"], join(path, "band"));
  return out;
}

CertificateSection parse_certificate(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"delta_sigma", "l_sigma_z", "delta_f", "delta_nom", "delta_sigma_hat",
                  "delta_b", "alpha1", "alpha2", "lambda", "v0", "epsilon", "t1_minus_t0",
                  "omega", "t_sample", "dim", "a_s_diag"});
  CertificateSection out;
  auto grab = [&](const char* key, std::optional<double>& slot) {
    if (j.contains(key)) slot = as_auto_double(j[key], join(path, key));
  };
  grab("delta_sigma", out.delta_sigma);
  grab("l_sigma_z", out.l_sigma_z);
  grab("delta_f", out.delta_f);
  grab("delta_nom", out.delta_nom);
  grab("delta_sigma_hat", out.delta_sigma_hat);
  grab("delta_b", out.delta_b);
  grab("alpha1", out.alpha1);
  grab("alpha2", out.alpha2);
  grab("lambda", out.lambda);
  grab("v0", out.v0);
  grab("epsilon", out.epsilon);
  grab("t1_minus_t0", out.t1_minus_t0);
  grab("omega", out.omega);
  grab("t_sample", out.t_sample);
  if (j.contains("dim")) out.dim = as_int(j["dim"], join(path, "dim"));
  if (j.contains("a_s_diag"))
    out.a_s_diag = as_double_array(j["a_s_diag"], join(path, "a_s_diag"));
  return out;
}

DisturbanceSpec parse_disturbance(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"kind", "channel", "amplitude", "start", "windows", "sines", "state_gain",
                  "anchor"});
  DisturbanceSpec out;
  if (j.contains("kind"))
    out.kind = disturbance_kind_from_string(as_string(j["kind"], join(path, "kind")));
  if (j.contains("channel"))
    out.channel = channel_from_string(as_string(j["channel"], join(path, "channel")));
  if (j.contains("amplitude")) {
    const auto a = as_double_array(j["amplitude"], join(path, "amplitude"));
    out.amplitude = Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size()));
  }
  if (j.contains("start")) out.start = as_double(j["start"], join(path, "start"));
  if (j.contains("windows")) out.windows = as_window_list(j["windows"], join(path, "windows"));
  if (j.contains("sines")) {
    const json& s = j["sines"];
    const std::string spath = join(path, "sines");
    if (!s.is_array()) fail(spath, "expected an array (one entry per axis)");
    for (const auto& axis : s) {
      if (!axis.is_array()) fail(spath, "expected an array of sine components per axis");
      std::vector<SineComponent> comps;
      for (const auto& c : axis) {
        expect_object(c, spath);
        reject_unknown(c, spath, {"amp", "freq", "phase"});
        SineComponent sc;
        if (c.contains("amp")) sc.amp = as_double(c["amp"], join(spath, "amp"));
        if (c.contains("freq")) sc.freq = as_double(c["freq"], join(spath, "freq"));
        if (c.contains("phase")) sc.phase = as_double(c["phase"], join(spath, "phase"));
        comps.push_back(sc);
      }
      out.sines.push_back(std::move(comps));
    }
  }
  if (j.contains("state_gain"))
    out.state_gain = as_double(j["state_gain"], join(path, "state_gain"));
  if (j.contains("anchor")) out.anchor = as_double_array(j["anchor"], join(path, "anchor"));
  return out;
}

RegimeSection parse_regime(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path,
                 {"kind", "disturbances", "pid", "integral_clamp", "hold_windows", "z0_offset"});
  RegimeSection out;
  if (j.contains("kind")) {
    out.kind = as_string(j["kind"], join(path, "kind"));
    if (out.kind != "perfect" && out.kind != "imperfect")
      fail(join(path, "kind"), "expected \"perfect\" or \"imperfect\"");
  }
  if (j.contains("disturbances")) {
    const json& d = j["disturbances"];
    if (!d.is_array()) fail(join(path, "disturbances"), "expected an array");
    int i = 0;
    for (const auto& spec : d)
      out.disturbances.push_back(
          parse_disturbance(spec, join(path, "disturbances[" + std::to_string(i++) + "]")));
  }
  if (j.contains("pid")) {
    const json& p = j["pid"];
    const std::string ppath = join(path, "pid");
    expect_object(p, ppath);
    reject_unknown(p, ppath, {"kp", "ki", "kd"});
    if (p.contains("kp")) out.pid.kp = as_double(p["kp"], join(ppath, "kp"));
    if (p.contains("ki")) out.pid.ki = as_double(p["ki"], join(ppath, "ki"));
    if (p.contains("kd")) out.pid.kd = as_double(p["kd"], join(ppath, "kd"));
  }
  if (j.contains("integral_clamp"))
    out.integral_clamp = as_double(j["integral_clamp"], join(path, "integral_clamp"));
  if (j.contains("hold_windows"))
    out.hold_windows = as_window_list(j["hold_windows"], join(path, "hold_windows"));
  if (j.contains("z0_offset"))
    out.z0_offset = as_double_array(j["z0_offset"], join(path, "z0_offset"));
  return out;
}

std::vector<std::string> as_string_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) fail(path, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

BatchSection parse_batch(const json& j, const std::string& path) {
  expect_object(j, path);
  reject_unknown(j, path, {"shapes", "rows", "controllers", "amplitude_scale"});
  BatchSection out;
  if (j.contains("shapes")) out.shapes = as_string_array(j["shapes"], join(path, "shapes"));
  if (j.contains("rows")) out.rows = as_string_array(j["rows"], join(path, "rows"));
  if (j.contains("controllers"))
    out.controllers = as_string_array(j["controllers"], join(path, "controllers"));
  if (j.contains("amplitude_scale"))
    out.amplitude_scale = as_double(j["amplitude_scale"], join(path, "amplitude_scale"));
  for (const auto& s : out.shapes) shape_kind_from_string(s);
  for (const auto& c : out.controllers)
    if (c != "nominal" && c != "clf" && c != "l1")
      fail(join(path, "controllers"), "expected \"nominal\", \"clf\", or \"l1\"");
  return out;
}

json dump_auto(const std::optional<double>& v) {
  if (v) return *v;
  return "auto";
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  expect_object(j, "");
  reject_unknown(j, "",
                 {"shape", "preprocess", "model", "clf", "l1", "selector", "dtw", "certificate",
                  "regime", "batch", "output_dir", "seeds"});
  ExperimentConfig out;
  if (j.contains("shape")) out.shape = parse_shape(j["shape"], "shape");
  if (j.contains("preprocess")) {
    const json& p = j["preprocess"];
    expect_object(p, "preprocess");
    reject_unknown(p, "preprocess", {"n"});
    if (p.contains("n")) out.n = as_int(p["n"], "preprocess.n");
  }
  if (j.contains("model")) out.model = parse_model(j["model"], "model");
  if (j.contains("clf")) out.clf = parse_clf(j["clf"], "clf");
  if (j.contains("l1")) out.l1 = parse_l1(j["l1"], "l1");
  if (j.contains("selector")) out.selector = parse_selector(j["selector"], "selector");
  if (j.contains("dtw")) out.dtw = parse_dtw(j["dtw"], "dtw");
  if (j.contains("certificate"))
    out.certificate = parse_certificate(j["certificate"], "certificate");
  if (j.contains("regime")) out.regime = parse_regime(j["regime"], "regime");
  if (j.contains("batch")) out.batch = parse_batch(j["batch"], "batch");
  if (j.contains("output_dir")) out.output_dir = as_string(j["output_dir"], "output_dir");
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    if (!s.is_array() || s.empty()) fail("seeds", "expected a non-empty array of integers");
    out.seeds.clear();
    for (const auto& v : s) {
      if (!v.is_number_integer()) fail("seeds", "expected a non-empty array of integers");
      out.seeds.push_back(v.get<std::uint64_t>());
    }
  }
  if (out.n < 2) fail("preprocess.n", "need at least two grid points");
  return out;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["shape"] = {{"source", cfg.shape.source},
                {"kind", to_string(cfg.shape.params.kind)},
                {"amplitude", cfg.shape.params.amplitude},
                {"frequency", cfg.shape.params.frequency},
                {"noise", cfg.shape.params.noise},
                {"num_demos", cfg.shape.params.num_demos},
                {"samples_per_demo", cfg.shape.params.samples_per_demo},
                {"directory", cfg.shape.directory}};
  j["preprocess"] = {{"n", cfg.n}};
  j["model"] = {{"num_centers", cfg.model.num_centers},
                {"bandwidth", cfg.model.bandwidth},
                {"ridge", cfg.model.ridge},
                {"seed", cfg.model.seed},
                {"path", cfg.model.path}};
  j["clf"] = {{"enabled", cfg.clf.enabled}, {"c", cfg.clf.c}, {"p_diag", cfg.clf.p_diag}};
  j["l1"] = {{"enabled", cfg.l1.enabled},
             {"omega", cfg.l1.omega},
             {"t_sample", cfg.l1.t_sample},
             {"a_s_diag", cfg.l1.a_s_diag}};
  j["selector"] = {{"mode", cfg.selector.mode == SelectorMode::dtw ? "dtw" : "time_indexed"},
                   {"window_w", cfg.selector.window_w},
                   {"history_h", cfg.selector.history_h},
                   {"target_history", cfg.selector.target_history}};
  j["dtw"] = json::object();
  if (cfg.dtw.band)
    j["dtw"]["band"] = *cfg.dtw.band;
  else
    j["dtw"]["band"] = nullptr;
  j["certificate"] = {{"delta_sigma", dump_auto(cfg.certificate.delta_sigma)},
                      {"l_sigma_z", dump_auto(cfg.certificate.l_sigma_z)},
                      {"delta_f", dump_auto(cfg.certificate.delta_f)},
                      {"delta_nom", dump_auto(cfg.certificate.delta_nom)},
                      {"delta_sigma_hat", dump_auto(cfg.certificate.delta_sigma_hat)},
                      {"delta_b", dump_auto(cfg.certificate.delta_b)},
                      {"alpha1", dump_auto(cfg.certificate.alpha1)},
                      {"alpha2", dump_auto(cfg.certificate.alpha2)},
                      {"lambda", dump_auto(cfg.certificate.lambda)},
                      {"v0", dump_auto(cfg.certificate.v0)},
                      {"epsilon", dump_auto(cfg.certificate.epsilon)},
                      {"t1_minus_t0", dump_auto(cfg.certificate.t1_minus_t0)},
                      {"omega", dump_auto(cfg.certificate.omega)},
                      {"t_sample", dump_auto(cfg.certificate.t_sample)},
                      {"dim", cfg.certificate.dim},
                      {"a_s_diag", cfg.certificate.a_s_diag}};
  json dist = json::array();
  for (const auto& s : cfg.regime.disturbances) {
    json sj;
    sj["kind"] = to_string(s.kind);
    sj["channel"] = to_string(s.channel);
    sj["amplitude"] = std::vector<double>(s.amplitude.data(), s.amplitude.data() + s.amplitude.size());
    sj["start"] = s.start;
    json wins = json::array();
    for (const auto& w : s.windows) wins.push_back({w.first, w.second});
    sj["windows"] = wins;
    json axes = json::array();
    for (const auto& axis : s.sines) {
      json comps = json::array();
      for (const auto& c : axis)
        comps.push_back({{"amp", c.amp}, {"freq", c.freq}, {"phase", c.phase}});
      axes.push_back(comps);
    }
    sj["sines"] = axes;
    sj["state_gain"] = s.state_gain;
    sj["anchor"] = s.anchor;
    dist.push_back(sj);
  }
  json holds = json::array();
  for (const auto& w : cfg.regime.hold_windows) holds.push_back({w.first, w.second});
  j["regime"] = {{"kind", cfg.regime.kind},
                 {"disturbances", dist},
                 {"pid", {{"kp", cfg.regime.pid.kp}, {"ki", cfg.regime.pid.ki}, {"kd", cfg.regime.pid.kd}}},
                 {"integral_clamp", cfg.regime.integral_clamp},
                 {"hold_windows", holds},
                 {"z0_offset", cfg.regime.z0_offset}};
  j["batch"] = {{"shapes", cfg.batch.shapes},
                {"rows", cfg.batch.rows},
                {"controllers", cfg.batch.controllers},
                {"amplitude_scale", cfg.batch.amplitude_scale}};
  j["output_dir"] = cfg.output_dir;
  j["seeds"] = cfg.seeds;
  return j.dump(2) + "\n";
}

} // namespace l1ds
