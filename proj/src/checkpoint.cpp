#include "sgnav/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "sgnav/binary_io.hpp"
#include "sgnav/error.hpp"

namespace sgnav {
namespace {

constexpr char kMagic[8] = {'S', 'G', 'N', 'C', 'K', 'P', 'T', '1'};

void put_mlp(BinaryWriter& w, const Mlp& m) {
  w.put<std::uint32_t>(static_cast<std::uint32_t>(m.layers().size()));
  for (const auto& l : m.layers()) {
    w.put<std::int64_t>(l.weight.rows());
    w.put<std::int64_t>(l.weight.cols());
    w.put_array(l.weight.data(), static_cast<std::size_t>(l.weight.size()));
    w.put_array(l.bias.data(), static_cast<std::size_t>(l.bias.size()));
  }
}

// Reads into a network of known shape; any shape difference is corruption.
void get_mlp(BinaryReader& r, Mlp& m) {
  const auto n = r.get<std::uint32_t>();
  if (n != m.layers().size()) throw Error(ErrorCode::Io, "checkpoint network depth mismatch");
  for (auto& l : m.layers()) {
    const auto rows = r.get<std::int64_t>();
    const auto cols = r.get<std::int64_t>();
    if (rows != l.weight.rows() || cols != l.weight.cols()) {
      throw Error(ErrorCode::Io, "checkpoint layer shape mismatch");
    }
    const auto w = r.get_array<double>(static_cast<std::uint64_t>(l.weight.size()));
    const auto b = r.get_array<double>(static_cast<std::uint64_t>(l.bias.size()));
    if (w.size() != static_cast<std::size_t>(l.weight.size()) ||
        b.size() != static_cast<std::size_t>(l.bias.size())) {
      throw Error(ErrorCode::Io, "checkpoint layer size mismatch");
    }
    std::copy(w.begin(), w.end(), l.weight.data());
    std::copy(b.begin(), b.end(), l.bias.data());
  }
}

void put_adam(BinaryWriter& w, const Adam& a) {
  w.put<std::int64_t>(a.steps());
  put_mlp(w, a.first_moment());
  put_mlp(w, a.second_moment());
}

void get_adam(BinaryReader& r, Adam& a) {
  a.steps() = static_cast<long>(r.get<std::int64_t>());
  get_mlp(r, a.first_moment());
  get_mlp(r, a.second_moment());
}

}  // namespace

void save_checkpoint(const RunConfig& config, const SacAgent& agent, long env_steps,
                     long episodes, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write checkpoint " + path.string());
  BinaryWriter w(out);
  out.write(kMagic, sizeof kMagic);
  w.put<std::uint32_t>(kCheckpointVersion);
  w.put_string(to_json(config).dump());
  w.put<std::int64_t>(env_steps);
  w.put<std::int64_t>(episodes);
  const SacParams& p = agent.params();
  for (const Mlp* m : {&p.actor, &p.q1, &p.q2, &p.q1_target, &p.q2_target}) put_mlp(w, *m);
  put_adam(w, p.actor_opt);
  put_adam(w, p.q1_opt);
  put_adam(w, p.q2_opt);
  w.put<double>(p.log_alpha);
  w.put<double>(p.alpha_opt.m);
  w.put<double>(p.alpha_opt.v);
  w.put<std::int64_t>(p.alpha_opt.t);
  std::ostringstream rng;
  rng << agent.rng();
  w.put_string(rng.str());
  w.check();
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open checkpoint " + path.string());
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + sizeof magic, kMagic)) {
    throw Error(ErrorCode::Io, path.string() + " is not a checkpoint");
  }
  BinaryReader r(in);
  const auto version = r.get<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::Io, "unsupported checkpoint version " + std::to_string(version));
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(r.get_string());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("corrupt checkpoint config: ") + e.what());
  }
  RunConfig config = run_config_from_json(j);
  Checkpoint ck{config, SacAgent(config.sac_config(), 0), 0, 0};
  ck.env_steps = static_cast<long>(r.get<std::int64_t>());
  ck.episodes = static_cast<long>(r.get<std::int64_t>());
  SacParams& p = ck.agent.params();
  for (Mlp* m : {&p.actor, &p.q1, &p.q2, &p.q1_target, &p.q2_target}) get_mlp(r, *m);
  get_adam(r, p.actor_opt);
  get_adam(r, p.q1_opt);
  get_adam(r, p.q2_opt);
  p.log_alpha = r.get<double>();
  p.alpha_opt.m = r.get<double>();
  p.alpha_opt.v = r.get<double>();
  p.alpha_opt.t = static_cast<long>(r.get<std::int64_t>());
  std::istringstream rng(r.get_string());
  rng >> ck.agent.rng();
  if (!rng) throw Error(ErrorCode::Io, "corrupt checkpoint RNG state");
  return ck;
}

}  // namespace sgnav
