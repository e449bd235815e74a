#include "awaken/checkpoint.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <vector>

#include "awaken/ltn1.hpp"
#include "awaken/rng.hpp"
#include "json.hpp"

namespace awaken {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";

json dataset_json(const DatasetParams& p) {
  json motions = json::array();
  for (Motion m : p.motions) motions.push_back(std::string(motion_name(m)));
  return {{"channels", p.channels},
          {"height", p.height},
          {"width", p.width},
          {"frames", p.frames},
          {"shape", std::string(pattern_shape_name(p.shape))},
          {"pattern_size", p.pattern_size},
          {"velocity_min", p.velocity_min},
          {"velocity_max", p.velocity_max},
          {"motions", motions}};
}

DatasetParams dataset_from_json(const json& j) {
  DatasetParams p;
  p.channels = j.at("channels");
  p.height = j.at("height");
  p.width = j.at("width");
  p.frames = j.at("frames");
  p.shape = parse_pattern_shape(j.at("shape").get<std::string>());
  p.pattern_size = j.at("pattern_size");
  p.velocity_min = j.at("velocity_min");
  p.velocity_max = j.at("velocity_max");
  p.motions.clear();
  for (const auto& m : j.at("motions")) p.motions.push_back(parse_motion(m.get<std::string>()));
  return p;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileFormatError(path.string() + ": cannot open");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

void save_checkpoint(const fs::path& dir, const ToyDenoiser& model, const ScheduleParams& schedule,
                     const DatasetParams& dataset, const std::string& config_hash) {
  const NoiseSchedule rebuilt = NoiseSchedule::from_params(schedule);
  if (rebuilt.hash() != model.schedule().hash()) {
    throw std::invalid_argument("save_checkpoint: schedule parameters do not reproduce the model's schedule");
  }
  fs::create_directories(dir);
  json layers = json::array();
  for (const auto& b : model.blocks()) {
    const std::string file = b.name + ".ltn1";
    write_ltn1(dir / file, model.block_tensor(b.name));
    layers.push_back({{"name", b.name}, {"shape", b.shape}, {"file", file}});
  }
  const auto& g = model.geometry();
  const auto& c = model.config();
  json manifest = {
      {"format", "latent-awaken-toy-denoiser/1"},
      {"layers", layers},
      {"parameter_count", model.parameter_count()},
      {"geometry", {{"frames", g.frames}, {"channels", g.channels}, {"height", g.height}, {"width", g.width}}},
      {"denoiser",
       {{"hidden", c.hidden},
        {"time_embedding", c.time_embedding},
        {"sigma_data", c.sigma_data},
        {"lowpass_modes", c.lowpass_modes}}},
      {"schedule",
       {{"kind", std::string(schedule_kind_name(schedule.kind))},
        {"steps", schedule.steps},
        {"beta_start", schedule.beta_start},
        {"beta_end", schedule.beta_end},
        {"cosine_offset", schedule.cosine_offset},
        {"hash", model.schedule().hash_hex()}}},
      {"dataset", dataset_json(dataset)},
  };
  if (!config_hash.empty()) manifest["config_hash"] = config_hash;
  std::ofstream out(dir / kManifest, std::ios::binary | std::ios::trunc);
  if (!out) throw FileFormatError((dir / kManifest).string() + ": cannot open for writing");
  out << manifest.dump(2) << "\n";
}

CheckpointInfo read_checkpoint_info(const fs::path& dir) {
  const fs::path path = dir / kManifest;
  json j;
  try {
    j = json::parse(read_text(path));
    CheckpointInfo info;
    const auto& g = j.at("geometry");
    info.geometry = {g.at("frames"), g.at("channels"), g.at("height"), g.at("width")};
    const auto& d = j.at("denoiser");
    info.config.hidden = d.at("hidden");
    info.config.time_embedding = d.at("time_embedding");
    info.config.sigma_data = d.at("sigma_data");
    info.config.lowpass_modes = d.at("lowpass_modes");
    const auto& s = j.at("schedule");
    info.schedule.kind = parse_schedule_kind(s.at("kind").get<std::string>());
    info.schedule.steps = s.at("steps");
    info.schedule.beta_start = s.at("beta_start");
    info.schedule.beta_end = s.at("beta_end");
    info.schedule.cosine_offset = s.at("cosine_offset");
    info.schedule_hash = s.at("hash");
    info.dataset = dataset_from_json(j.at("dataset"));
    return info;
  } catch (const FileFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FileFormatError(path.string() + ": invalid manifest (" + e.what() + ")");
  }
}

ToyDenoiser load_checkpoint(const fs::path& dir) {
  const CheckpointInfo info = read_checkpoint_info(dir);
  NoiseSchedule sched = NoiseSchedule::from_params(info.schedule);
  if (sched.hash_hex() != info.schedule_hash) {
    throw FileFormatError((dir / kManifest).string() + ": schedule hash mismatch (manifest " + info.schedule_hash +
                          ", rebuilt " + sched.hash_hex() + ")");
  }
  ToyDenoiser model(info.geometry, std::move(sched), info.config);
  const json j = json::parse(read_text(dir / kManifest));
  for (const auto& layer : j.at("layers")) {
    const fs::path file = dir / layer.at("file").get<std::string>();
    try {
      model.set_block(layer.at("name"), read_ltn1(file));
    } catch (const FileFormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FileFormatError(file.string() + ": " + e.what());
    }
  }
  return model;
}

std::string checkpoint_digest(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : files) {
    h = fnv1a64(f.filename().string(), h);
    h = fnv1a64(read_text(f), h);
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace awaken
