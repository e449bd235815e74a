#include "awaken/cli/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "awaken/rng.hpp"

namespace awaken::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += f(xs[i]);
  }
  return out;
}

// Flattened "section.key" -> value; keys are consumed as they are read so
// leftovers can be reported as unknown.
class Entries {
 public:
  Entries(std::map<std::string, std::string> values, std::string origin)
      : values_(std::move(values)), origin_(std::move(origin)) {}

  template <typename T, typename Parse>
  void read(const std::string& key, T& target, Parse&& parse) {
    auto it = values_.find(key);
    if (it == values_.end()) return;
    try {
      target = parse(it->second);
    } catch (const std::exception& e) {
      throw ConfigError(origin_ + ": invalid value for '" + key + "' = '" + it->second + "': " + e.what());
    }
    values_.erase(it);
  }

  void reject_leftovers() const {
    if (!values_.empty()) throw ConfigError(origin_ + ": unknown config key '" + values_.begin()->first + "'");
  }

 private:
  std::map<std::string, std::string> values_;
  std::string origin_;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("expected a number");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("expected a non-negative integer");
  return v;
}

std::size_t to_size(const std::string& s) { return static_cast<std::size_t>(to_u64(s)); }

int to_int(const std::string& s) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("expected an integer");
  return v;
}

bool to_bool(const std::string& s) {
  std::string l = s;
  std::transform(l.begin(), l.end(), l.begin(), [](unsigned char c) { return std::tolower(c); });
  if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
  if (l == "false" || l == "no" || l == "off" || l == "0") return false;
  throw std::invalid_argument("expected true or false");
}

template <typename F>
auto list_of(F&& f) {
  return [f](const std::string& s) {
    std::vector<decltype(f(s))> out;
    for (const auto& item : split_list(s)) out.push_back(f(item));
    return out;
  };
}

std::map<std::string, std::string> flatten(const pt::ptree& tree, const std::string& origin) {
  std::map<std::string, std::string> out;
  auto put = [&](const std::string& key, const std::string& value) {
    if (!out.emplace(key, trim(value)).second) throw ConfigError(origin + ": duplicate config key '" + key + "'");
  };
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      put(name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError(origin + ": config key '" + name + "." + key + "' is nested too deeply");
      put(name + "." + key, leaf.data());
    }
  }
  return out;
}

}  // namespace

VideoGeometry ExperimentConfig::geometry() const {
  return {dataset.frames, dataset.channels, dataset.height, dataset.width};
}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  Entries e(flatten(tree, origin), origin);
  ExperimentConfig c;
  auto motion = [](const std::string& s) { return parse_motion(s); };
  auto as_string = [](const std::string& s) { return s; };

  e.read("seed", c.seed, to_u64);
  std::string out_dir = c.output_dir.string();
  e.read("output_dir", out_dir, as_string);
  c.output_dir = out_dir;

  auto& d = c.dataset;
  e.read("dataset.channels", d.channels, to_size);
  e.read("dataset.height", d.height, to_size);
  e.read("dataset.width", d.width, to_size);
  e.read("dataset.frames", d.frames, to_size);
  e.read("dataset.shape", d.shape, [](const std::string& s) { return parse_pattern_shape(s); });
  e.read("dataset.pattern_size", d.pattern_size, to_double);
  e.read("dataset.velocity_min", d.velocity_min, to_double);
  e.read("dataset.velocity_max", d.velocity_max, to_double);
  e.read("dataset.motions", d.motions, list_of(motion));
  e.read("dataset.size", c.train_size, to_size);
  c.dataset_seed = c.seed;
  e.read("dataset.seed", c.dataset_seed, to_u64);

  auto& s = c.schedule;
  e.read("schedule.kind", s.kind, [](const std::string& v) { return parse_schedule_kind(v); });
  e.read("schedule.steps", s.steps, to_int);
  e.read("schedule.beta_start", s.beta_start, to_double);
  e.read("schedule.beta_end", s.beta_end, to_double);
  e.read("schedule.cosine_offset", s.cosine_offset, to_double);

  auto& n = c.denoiser;
  e.read("denoiser.hidden", n.hidden, to_size);
  e.read("denoiser.time_embedding", n.time_embedding, to_size);
  e.read("denoiser.sigma_data", n.sigma_data, to_double);
  e.read("denoiser.lowpass_modes", n.lowpass_modes, to_int);

  auto& t = c.training;
  t.seed = c.seed;
  e.read("train.epochs", t.epochs, to_size);
  e.read("train.batch_size", t.batch_size, to_size);
  e.read("train.learning_rate", t.learning_rate, to_double);
  e.read("train.adam_beta1", t.adam_beta1, to_double);
  e.read("train.adam_beta2", t.adam_beta2, to_double);
  e.read("train.adam_epsilon", t.adam_epsilon, to_double);
  e.read("train.seed", t.seed, to_u64);

  auto& v = c.pipeline.vsds;
  e.read("vsds.p", v.p, to_double);
  e.read("vsds.curve", v.curve.kind, [](const std::string& x) { return parse_curve(x); });
  e.read("vsds.w_hi", v.curve.w_hi, to_double);
  e.read("vsds.w_lo", v.curve.w_lo, to_double);
  e.read("vsds.omega", v.omega, [](const std::string& x) { return parse_omega(x); });
  e.read("vsds.shared_noise", v.shared_noise, to_bool);
  e.read("vsds.seed", v.seed, [](const std::string& x) { return std::optional<std::uint64_t>(to_u64(x)); });
  e.read("vsds.proxy_condition", c.pipeline.proxy_condition,
         [](const std::string& x) { return parse_proxy_condition(x); });

  auto& f = c.pipeline.fusion;
  e.read("fusion.mode", f.mode, [](const std::string& x) { return parse_fusion_mode(x); });
  e.read("fusion.angle_scope", f.angle_scope, [](const std::string& x) { return parse_angle_scope(x); });
  e.read("fusion.epsilon_theta", f.epsilon_theta, to_double);

  e.read("proxy.motion_hint_strength", c.proxy.motion_hint_strength, to_double);
  e.read("proxy.max_displacement", c.proxy.max_displacement, to_double);
  e.read("proxy.sharpen", c.proxy.sharpen, to_double);

  e.read("sampler.deterministic", c.pipeline.deterministic_sampler, to_bool);
  e.read("sampler.resume_from", c.pipeline.resume_from, [](const std::string& x) { return parse_resume(x); });

  e.read("pipeline.variants", c.variants, list_of([](const std::string& x) { return parse_variant(x); }));
  e.read("pipeline.concurrent_paths", c.pipeline.concurrent_paths, to_bool);

  auto& a = c.ablate;
  e.read("ablate.items", a.items, to_size);
  e.read("ablate.motions", a.motions, list_of(motion));
  e.read("ablate.curves", a.curves, list_of([](const std::string& x) { return parse_curve(x); }));
  e.read("ablate.p_values", a.p_values, list_of(to_double));
  e.read("ablate.strengths", a.strengths, list_of(to_double));
  e.read("ablate.threads", a.threads, to_size);

  e.reject_leftovers();
  c.pipeline.frames = c.dataset.frames;
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

void validate(const ExperimentConfig& c) {
  auto check = [](auto&& fn) {
    try {
      fn();
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid config: ") + e.what());
    }
  };
  auto require = [](bool ok, const std::string& msg) {
    if (!ok) throw ConfigError("invalid config: " + msg);
  };
  require(c.dataset.frames >= 2, "dataset.frames (L) must be >= 2");
  require(c.pipeline.frames == c.dataset.frames, "pipeline frame count must equal dataset.frames");
  require(c.pipeline.vsds.p > 0.0 && c.pipeline.vsds.p <= 1.0, "vsds.p must lie in (0, 1]");
  require(c.train_size >= 1, "dataset.size must be >= 1");
  require(c.training.epochs >= 1, "train.epochs must be >= 1");
  require(c.training.batch_size >= 1, "train.batch_size must be >= 1");
  require(c.training.learning_rate > 0.0, "train.learning_rate must be positive");
  require(c.denoiser.hidden >= 1, "denoiser.hidden must be >= 1");
  require(c.denoiser.time_embedding % 2 == 0, "denoiser.time_embedding must be even");
  require(c.denoiser.sigma_data > 0.0, "denoiser.sigma_data must be positive");
  require(!c.variants.empty(), "pipeline.variants must not be empty");
  require(c.ablate.items >= 1, "ablate.items must be >= 1");
  require(!c.ablate.motions.empty(), "ablate.motions must not be empty");
  for (double p : c.ablate.p_values) require(p > 0.0 && p <= 1.0, "ablate.p_values entries must lie in (0, 1]");
  for (double s : c.ablate.strengths) require(s >= 0.0 && s <= 1.0, "ablate.strengths entries must lie in [0, 1]");
  check([&] { validate(c.dataset); });
  check([&] { NoiseSchedule::from_params(c.schedule); });
  check([&] { validate(c.pipeline); });
  check([&] { validate(c.proxy); });
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  auto motions = [](const std::vector<Motion>& ms) {
    return join(ms, [](Motion m) { return std::string(motion_name(m)); });
  };
  kv["seed"] = std::to_string(seed);
  kv["dataset.channels"] = std::to_string(dataset.channels);
  kv["dataset.height"] = std::to_string(dataset.height);
  kv["dataset.width"] = std::to_string(dataset.width);
  kv["dataset.frames"] = std::to_string(dataset.frames);
  kv["dataset.shape"] = pattern_shape_name(dataset.shape);
  kv["dataset.pattern_size"] = fmt_double(dataset.pattern_size);
  kv["dataset.velocity_min"] = fmt_double(dataset.velocity_min);
  kv["dataset.velocity_max"] = fmt_double(dataset.velocity_max);
  kv["dataset.motions"] = motions(dataset.motions);
  kv["dataset.size"] = std::to_string(train_size);
  kv["dataset.seed"] = std::to_string(dataset_seed);
  kv["schedule.kind"] = schedule_kind_name(schedule.kind);
  kv["schedule.steps"] = std::to_string(schedule.steps);
  kv["schedule.beta_start"] = fmt_double(schedule.beta_start);
  kv["schedule.beta_end"] = fmt_double(schedule.beta_end);
  kv["schedule.cosine_offset"] = fmt_double(schedule.cosine_offset);
  kv["denoiser.hidden"] = std::to_string(denoiser.hidden);
  kv["denoiser.time_embedding"] = std::to_string(denoiser.time_embedding);
  kv["denoiser.sigma_data"] = fmt_double(denoiser.sigma_data);
  kv["denoiser.lowpass_modes"] = std::to_string(denoiser.lowpass_modes);
  kv["train.epochs"] = std::to_string(training.epochs);
  kv["train.batch_size"] = std::to_string(training.batch_size);
  kv["train.learning_rate"] = fmt_double(training.learning_rate);
  kv["train.adam_beta1"] = fmt_double(training.adam_beta1);
  kv["train.adam_beta2"] = fmt_double(training.adam_beta2);
  kv["train.adam_epsilon"] = fmt_double(training.adam_epsilon);
  kv["train.seed"] = std::to_string(training.seed);
  const auto& v = pipeline.vsds;
  kv["vsds.p"] = fmt_double(v.p);
  kv["vsds.curve"] = curve_name(v.curve.kind);
  kv["vsds.w_hi"] = fmt_double(v.curve.w_hi);
  kv["vsds.w_lo"] = fmt_double(v.curve.w_lo);
  kv["vsds.omega"] = omega_name(v.omega);
  kv["vsds.shared_noise"] = v.shared_noise ? "true" : "false";
  kv["vsds.seed"] = v.seed ? std::to_string(*v.seed) : "run";
  kv["vsds.proxy_condition"] = proxy_condition_name(pipeline.proxy_condition);
  kv["fusion.mode"] = fusion_mode_name(pipeline.fusion.mode);
  kv["fusion.angle_scope"] = angle_scope_name(pipeline.fusion.angle_scope);
  kv["fusion.epsilon_theta"] = fmt_double(pipeline.fusion.epsilon_theta);
  kv["proxy.motion_hint_strength"] = fmt_double(proxy.motion_hint_strength);
  kv["proxy.max_displacement"] = fmt_double(proxy.max_displacement);
  kv["proxy.sharpen"] = fmt_double(proxy.sharpen);
  kv["sampler.deterministic"] = pipeline.deterministic_sampler ? "true" : "false";
  kv["sampler.resume_from"] = resume_name(pipeline.resume_from);
  kv["pipeline.variants"] = join(variants, [](PipelineVariant x) { return std::string(variant_name(x)); });
  kv["pipeline.concurrent_paths"] = pipeline.concurrent_paths ? "true" : "false";
  kv["ablate.items"] = std::to_string(ablate.items);
  kv["ablate.motions"] = motions(ablate.motions);
  kv["ablate.curves"] = join(ablate.curves, [](CurveKind k) { return std::string(curve_name(k)); });
  kv["ablate.p_values"] = join(ablate.p_values, fmt_double);
  kv["ablate.strengths"] = join(ablate.strengths, fmt_double);
  // output_dir and ablate.threads do not affect results and stay out of the hash.
  std::string out;
  for (const auto& [k, val] : kv) out += k + " = " + val + "\n";
  return out;
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
  return buf;
}

}  // namespace awaken::cli
