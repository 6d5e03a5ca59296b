#include "lfhybrid/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <stdexcept>

#include "lfhybrid/kv_file.hpp"

namespace lfhybrid {

namespace {

constexpr char kMagic[4] = {'L', 'F', 'H', 'B'};
constexpr uint32_t kVersion = 1;

void write_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v),
                        static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16),
                        static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void write_u64(std::ostream& out, uint64_t v) {
  write_u32(out, static_cast<uint32_t>(v));
  write_u32(out, static_cast<uint32_t>(v >> 32));
}

void write_f32s(std::ostream& out, const std::vector<float>& v) {
  static_assert(sizeof(float) == 4);
  for (float f : v) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    write_u32(out, bits);
  }
}

uint32_t read_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  if (!in) throw std::runtime_error("truncated checkpoint");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t read_u64(std::istream& in) {
  const uint64_t lo = read_u32(in);
  const uint64_t hi = read_u32(in);
  return lo | (hi << 32);
}

void read_f32s(std::istream& in, std::vector<float>& v) {
  for (float& f : v) {
    const uint32_t bits = read_u32(in);
    std::memcpy(&f, &bits, 4);
  }
}

std::string encode_config(const ModelConfig& cfg) {
  KvFile kv;
  kv.set_int("rows", cfg.rows);
  kv.set_int("cols", cfg.cols);
  kv.set_int("scale", cfg.scale);
  kv.set_int("sr.base_width", cfg.sr.base_width);
  kv.set_int("sr.dense_layers", cfg.sr.dense_layers);
  kv.set_int("sr.growth", cfg.sr.growth);
  kv.set_int("sr.hr_layers", cfg.sr.hr_layers);
  kv.set_int("sr.view_feat", cfg.sr.view_feat);
  kv.set_int("warp.base_width", cfg.warp.base_width);
  kv.set_int("warp.unet_levels", cfg.warp.unet_levels);
  kv.set_int("warp.dense_layers", cfg.warp.dense_layers);
  kv.set_int("warp.growth", cfg.warp.growth);
  kv.set_int("warp.refine_feat", cfg.warp.refine_feat);
  return kv.to_text();
}

ModelConfig decode_config(const std::string& text) {
  const KvFile kv = KvFile::parse_text(text);
  ModelConfig cfg;
  cfg.rows = static_cast<int>(kv.get_int("rows"));
  cfg.cols = static_cast<int>(kv.get_int("cols"));
  cfg.scale = static_cast<int>(kv.get_int("scale"));
  cfg.sr.base_width = static_cast<int>(kv.get_int("sr.base_width"));
  cfg.sr.dense_layers = static_cast<int>(kv.get_int("sr.dense_layers"));
  cfg.sr.growth = static_cast<int>(kv.get_int("sr.growth"));
  cfg.sr.hr_layers = static_cast<int>(kv.get_int("sr.hr_layers"));
  cfg.sr.view_feat = static_cast<int>(kv.get_int("sr.view_feat"));
  cfg.sr.scale = cfg.scale;
  cfg.warp.base_width = static_cast<int>(kv.get_int("warp.base_width"));
  cfg.warp.unet_levels = static_cast<int>(kv.get_int("warp.unet_levels"));
  cfg.warp.dense_layers = static_cast<int>(kv.get_int("warp.dense_layers"));
  cfg.warp.growth = static_cast<int>(kv.get_int("warp.growth"));
  cfg.warp.refine_feat = static_cast<int>(kv.get_int("warp.refine_feat"));
  cfg.warp.scale = cfg.scale;
  return cfg;
}

}  // namespace

void save_checkpoint(const std::string& path, Model<float>& model,
                     const AdamOptimizer<float>* optimizer) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
  out.write(kMagic, 4);
  write_u32(out, kVersion);
  const std::string cfg = encode_config(model.cfg);
  write_u32(out, static_cast<uint32_t>(cfg.size()));
  out.write(cfg.data(), static_cast<std::streamsize>(cfg.size()));

  std::vector<std::pair<std::string, Tensor<float>*>> tensors;
  model.visit_params([&tensors](const std::string& name, Tensor<float>& t) {
    tensors.emplace_back(name, &t);
  });
  write_u32(out, static_cast<uint32_t>(tensors.size()));
  for (auto& [name, t] : tensors) {
    write_u32(out, static_cast<uint32_t>(name.size()));
    out.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(out, static_cast<uint32_t>(t->c));
    write_u32(out, static_cast<uint32_t>(t->h));
    write_u32(out, static_cast<uint32_t>(t->w));
    write_f32s(out, t->v);
  }

  out.put(optimizer ? 1 : 0);
  if (optimizer) {
    if (optimizer->num_params() != tensors.size())
      throw std::runtime_error("optimizer does not match the model parameters");
    write_u64(out, optimizer->steps());
    auto* opt = const_cast<AdamOptimizer<float>*>(optimizer);
    for (size_t i = 0; i < tensors.size(); ++i) {
      write_f32s(out, opt->moment1(i));
      write_f32s(out, opt->moment2(i));
    }
  }
  if (!out) throw std::runtime_error("short write: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path,
                                 bool require_optimizer_state) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a checkpoint: " + path);
  const uint32_t version = read_u32(in);
  if (version != kVersion)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  const uint32_t cfg_len = read_u32(in);
  std::string cfg_text(cfg_len, '\0');
  in.read(cfg_text.data(), cfg_len);
  if (!in) throw std::runtime_error("truncated checkpoint");

  LoadedCheckpoint loaded;
  loaded.model = Model<float>::zeros(decode_config(cfg_text));

  std::map<std::string, Tensor<float>*> by_name;
  loaded.model.visit_params([&by_name](const std::string& name, Tensor<float>& t) {
    by_name[name] = &t;
  });

  const uint32_t n = read_u32(in);
  if (n != by_name.size())
    throw std::runtime_error("checkpoint tensor count does not match the config");
  std::vector<std::string> file_names;
  for (uint32_t i = 0; i < n; ++i) {
    const uint32_t name_len = read_u32(in);
    std::string name(name_len, '\0');
    in.read(name.data(), name_len);
    if (!in) throw std::runtime_error("truncated checkpoint");
    auto it = by_name.find(name);
    if (it == by_name.end()) throw std::runtime_error("unknown tensor name: " + name);
    Tensor<float>& t = *it->second;
    const uint32_t c = read_u32(in), h = read_u32(in), w = read_u32(in);
    if (static_cast<int>(c) != t.c || static_cast<int>(h) != t.h ||
        static_cast<int>(w) != t.w)
      throw std::runtime_error("tensor shape mismatch for " + name);
    read_f32s(in, t.v);
    if (!in) throw std::runtime_error("truncated checkpoint");
    file_names.push_back(std::move(name));
  }

  const int has_opt = in.get();
  if (has_opt == std::char_traits<char>::eof())
    throw std::runtime_error("truncated checkpoint");
  loaded.has_optimizer_state = has_opt != 0;
  if (require_optimizer_state && !loaded.has_optimizer_state)
    throw std::runtime_error(
        "checkpoint has no optimizer state; cannot resume training");
  if (loaded.has_optimizer_state) {
    loaded.optimizer_steps = read_u64(in);
    for (const std::string& name : file_names) {
      std::array<std::vector<float>, 2> mv;
      const size_t sz = by_name.at(name)->size();
      mv[0].resize(sz);
      mv[1].resize(sz);
      read_f32s(in, mv[0]);
      read_f32s(in, mv[1]);
      if (!in) throw std::runtime_error("truncated checkpoint");
      loaded.moments.emplace_back(name, std::move(mv));
    }
  }
  return loaded;
}

AdamOptimizer<float> bind_optimizer(Model<float>& model,
                                    const LoadedCheckpoint& ck, AdamConfig cfg) {
  if (!ck.has_optimizer_state)
    throw std::runtime_error("checkpoint has no optimizer state; cannot resume training");
  std::map<std::string, const std::array<std::vector<float>, 2>*> moments;
  for (const auto& [name, mv] : ck.moments) moments[name] = &mv;

  std::vector<std::string> names;
  std::vector<Tensor<float>*> params;
  model.visit_params([&](const std::string& name, Tensor<float>& t) {
    names.push_back(name);
    params.push_back(&t);
  });
  AdamOptimizer<float> opt(params, cfg);
  for (size_t i = 0; i < params.size(); ++i) {
    auto it = moments.find(names[i]);
    if (it == moments.end())
      throw std::runtime_error("missing optimizer state for " + names[i]);
    opt.moment1(i) = (*it->second)[0];
    opt.moment2(i) = (*it->second)[1];
  }
  opt.set_steps(ck.optimizer_steps);
  return opt;
}

}  // namespace lfhybrid
