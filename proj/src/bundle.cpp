#include <bit>
#include <cmath>
#include <cstring>
#include <span>
#include <string>

#include <nlohmann/json.hpp>
#include <zlib.h>

#include "gantt/error.hpp"
#include "gantt/gnn_engine.hpp"
#include "gantt/io.hpp"
#include "gantt/rng.hpp"

namespace gantt {

namespace {

constexpr std::string_view kMagic = "GANTT1\n";

static_assert(std::endian::native == std::endian::little, "GANTT1 payloads are read and written as little-endian");

DenseLayer make_dense(std::size_t in, std::size_t out) { return {Matrix(in, out), std::vector<float>(out, 0.0f)}; }

LayerNormParams make_norm(std::size_t dim) { return {std::vector<float>(dim, 1.0f), std::vector<float>(dim, 0.0f)}; }

WeightBundle allocate(const Hyperparameters& hp) {
  const auto d = static_cast<std::size_t>(hp.input_dim);
  const auto de = static_cast<std::size_t>(hp.embed_dim);
  const auto dh = static_cast<std::size_t>(hp.hidden_dim);
  const auto dk = static_cast<std::size_t>(hp.head_dim);
  WeightBundle b;
  b.hyper = hp;
  b.embed = make_dense(d, de);
  b.embed_norm = make_norm(d + de);
  b.input_proj = make_dense(d + de, dh);
  b.blocks.resize(static_cast<std::size_t>(hp.blocks));
  for (auto& blk : b.blocks) {
    blk.heads.resize(static_cast<std::size_t>(hp.heads));
    for (auto& head : blk.heads) {
      head.query = make_dense(dh, dk);
      head.key = make_dense(dh, dk);
      head.value = make_dense(dh, dk);
    }
    blk.update = make_dense(dh, dh);
    blk.ffn = make_dense(dh, dh);
    blk.norm1 = make_norm(dh);
    blk.norm2 = make_norm(dh);
  }
  b.classifier = make_dense(dh, static_cast<std::size_t>(hp.class_count));
  return b;
}

enum class TensorKind { kWeight, kBias, kNormScale, kNormShift };

// Visits every tensor in payload order. Works for const and mutable bundles.
template <class Bundle, class Fn>
void visit_tensors(Bundle& b, Fn&& fn) {
  auto dense_layer = [&](auto& layer, const std::string& name, std::size_t fan_in) {
    fn(name + ".weight", std::vector<std::size_t>{layer.weight.rows(), layer.weight.cols()},
       std::span(layer.weight.data()), TensorKind::kWeight, fan_in);
    fn(name + ".bias", std::vector<std::size_t>{layer.bias.size()}, std::span(layer.bias), TensorKind::kBias, fan_in);
  };
  auto norm_layer = [&](auto& norm, const std::string& name) {
    fn(name + ".scale", std::vector<std::size_t>{norm.scale.size()}, std::span(norm.scale), TensorKind::kNormScale,
       std::size_t{0});
    fn(name + ".shift", std::vector<std::size_t>{norm.shift.size()}, std::span(norm.shift), TensorKind::kNormShift,
       std::size_t{0});
  };
  dense_layer(b.embed, "embed", b.embed.weight.rows());
  norm_layer(b.embed_norm, "embed_norm");
  dense_layer(b.input_proj, "input_proj", b.input_proj.weight.rows());
  for (std::size_t i = 0; i < b.blocks.size(); ++i) {
    auto& blk = b.blocks[i];
    const std::string prefix = "block." + std::to_string(i);
    for (std::size_t m = 0; m < blk.heads.size(); ++m) {
      const std::string hp = prefix + ".head." + std::to_string(m);
      dense_layer(blk.heads[m].query, hp + ".query", blk.heads[m].query.weight.rows());
      dense_layer(blk.heads[m].key, hp + ".key", blk.heads[m].key.weight.rows());
      dense_layer(blk.heads[m].value, hp + ".value", blk.heads[m].value.weight.rows());
    }
    dense_layer(blk.update, prefix + ".update", blk.update.weight.rows());
    dense_layer(blk.ffn, prefix + ".ffn", blk.ffn.weight.rows());
    norm_layer(blk.norm1, prefix + ".norm1");
    norm_layer(blk.norm2, prefix + ".norm2");
  }
  dense_layer(b.classifier, "classifier", b.classifier.weight.rows());
}

nlohmann::ordered_json hyper_to_json(const Hyperparameters& hp) {
  nlohmann::ordered_json j;
  j["blocks"] = hp.blocks;
  j["heads"] = hp.heads;
  j["input_dim"] = hp.input_dim;
  j["embed_dim"] = hp.embed_dim;
  j["hidden_dim"] = hp.hidden_dim;
  j["head_dim"] = hp.head_dim;
  j["leaky_slope"] = hp.leaky_slope;
  j["layer_norm_eps"] = hp.layer_norm_eps;
  j["layer_norm"] = hp.layer_norm;
  j["class_count"] = hp.class_count;
  j["feature_spec"] = hp.feature_spec;
  return j;
}

Hyperparameters hyper_from_json(const nlohmann::json& j) {
  Hyperparameters hp;
  try {
    hp.blocks = j.at("blocks").get<int>();
    hp.heads = j.at("heads").get<int>();
    hp.input_dim = j.at("input_dim").get<int>();
    hp.embed_dim = j.at("embed_dim").get<int>();
    hp.hidden_dim = j.at("hidden_dim").get<int>();
    hp.head_dim = j.at("head_dim").get<int>();
    hp.leaky_slope = j.at("leaky_slope").get<double>();
    hp.layer_norm_eps = j.at("layer_norm_eps").get<double>();
    hp.layer_norm = j.value("layer_norm", true);
    hp.class_count = j.at("class_count").get<int>();
    hp.feature_spec = j.value("feature_spec", hp.feature_spec);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormatError, std::string("bad hyperparameter header: ") + e.what());
  }
  if (hp.blocks < 1 || hp.heads < 1 || hp.input_dim < 1 || hp.embed_dim < 1 || hp.hidden_dim < 1 ||
      hp.head_dim < 1 || hp.blocks > 4096 || hp.hidden_dim > (1 << 16) || hp.embed_dim > (1 << 16) ||
      hp.input_dim > (1 << 16) || hp.head_dim > (1 << 16) || hp.heads > 4096) {
    throw Error(ErrorCode::kShapeMismatch, "hyperparameters out of range");
  }
  return hp;
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(i)])) << (8 * i);
  return v;
}

std::uint32_t crc_of(const char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (size > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(size, 1u << 30));
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data), chunk);
    data += chunk;
    size -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<TensorSpec> tensor_manifest(const Hyperparameters& hyper) {
  const WeightBundle shaped = allocate(hyper);
  std::vector<TensorSpec> specs;
  visit_tensors(shaped, [&](const std::string& name, std::vector<std::size_t> shape, auto, TensorKind, std::size_t) {
    specs.push_back({name, std::move(shape)});
  });
  return specs;
}

WeightBundle random_bundle(const Hyperparameters& hyper, std::uint64_t seed, double scale) {
  WeightBundle b = allocate(hyper);
  validate_bundle(b);
  Rng rng(seed);
  visit_tensors(b, [&](const std::string&, const std::vector<std::size_t>&, std::span<float> data, TensorKind kind,
                       std::size_t fan_in) {
    for (float& v : data) {
      switch (kind) {
        case TensorKind::kWeight:
          v = static_cast<float>(rng.uniform(-1.0, 1.0) * scale / std::sqrt(static_cast<double>(fan_in)));
          break;
        case TensorKind::kBias: v = static_cast<float>(rng.uniform(-0.1, 0.1) * scale); break;
        case TensorKind::kNormScale: v = static_cast<float>(1.0 + rng.uniform(-0.1, 0.1)); break;
        case TensorKind::kNormShift: v = static_cast<float>(rng.uniform(-0.1, 0.1)); break;
      }
    }
  });
  return b;
}

std::string serialize_bundle(const WeightBundle& bundle) {
  validate_bundle(bundle);
  nlohmann::ordered_json header;
  header["format"] = "GANTT1";
  header["hyper"] = hyper_to_json(bundle.hyper);
  auto tensors = nlohmann::ordered_json::array();
  std::string payload;
  visit_tensors(bundle, [&](const std::string& name, const std::vector<std::size_t>& shape,
                            std::span<const float> data, TensorKind, std::size_t) {
    nlohmann::ordered_json t;
    t["name"] = name;
    t["shape"] = shape;
    tensors.push_back(std::move(t));
    const auto offset = payload.size();
    payload.resize(offset + data.size_bytes());
    if (!data.empty()) std::memcpy(payload.data() + offset, data.data(), data.size_bytes());
  });
  header["tensors"] = std::move(tensors);
  const std::string header_text = header.dump();

  std::string out(kMagic);
  put_u32(out, static_cast<std::uint32_t>(header_text.size()));
  out += header_text;
  out += payload;
  put_u32(out, crc_of(payload.data(), payload.size()));
  return out;
}

WeightBundle parse_bundle(const std::string& bytes) {
  auto format_error = [](const std::string& what) { return Error(ErrorCode::kFormatError, what); };
  if (bytes.size() < kMagic.size() + 4 || bytes.compare(0, kMagic.size(), kMagic) != 0) {
    throw format_error("missing GANTT1 magic");
  }
  const std::size_t header_len = get_u32(bytes, kMagic.size());
  const std::size_t header_at = kMagic.size() + 4;
  if (bytes.size() < header_at + header_len) throw format_error("truncated header");

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.substr(header_at, header_len));
  } catch (const nlohmann::json::parse_error& e) {
    throw format_error(std::string("header is not JSON: ") + e.what());
  }
  if (!header.is_object() || header.value("format", "") != "GANTT1" || !header.contains("hyper") ||
      !header.contains("tensors") || !header["tensors"].is_array()) {
    throw format_error("header lacks format/hyper/tensors");
  }

  WeightBundle b = allocate(hyper_from_json(header["hyper"]));
  validate_bundle(b);
  const auto expected = tensor_manifest(b.hyper);
  const auto& listed = header["tensors"];
  if (listed.size() != expected.size()) {
    throw Error(ErrorCode::kShapeMismatch, "manifest lists " + std::to_string(listed.size()) + " tensors, expected " +
                                               std::to_string(expected.size()));
  }
  std::size_t payload_bytes = 0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& t = listed[i];
    if (!t.is_object() || !t.contains("name") || !t.contains("shape")) throw format_error("bad manifest entry");
    std::vector<std::size_t> shape;
    try {
      shape = t["shape"].get<std::vector<std::size_t>>();
      if (t["name"].get<std::string>() != expected[i].name) {
        throw Error(ErrorCode::kShapeMismatch, "tensor " + std::to_string(i) + " is '" + t["name"].get<std::string>() +
                                                   "', expected '" + expected[i].name + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw format_error(std::string("bad manifest entry: ") + e.what());
    }
    if (shape != expected[i].shape) throw Error(ErrorCode::kShapeMismatch, "tensor '" + expected[i].name + "' shape");
    std::size_t numel = 1;
    for (auto s : shape) numel *= s;
    payload_bytes += numel * sizeof(float);
  }

  const std::size_t payload_at = header_at + header_len;
  if (bytes.size() != payload_at + payload_bytes + 4) {
    throw format_error("payload is " + std::to_string(bytes.size() - std::min(bytes.size(), payload_at)) +
                       " bytes, expected " + std::to_string(payload_bytes + 4));
  }
  if (crc_of(bytes.data() + payload_at, payload_bytes) != get_u32(bytes, payload_at + payload_bytes)) {
    throw Error(ErrorCode::kChecksumMismatch, "payload CRC32 mismatch");
  }

  std::size_t cursor = payload_at;
  visit_tensors(b, [&](const std::string& name, const std::vector<std::size_t>&, std::span<float> data, TensorKind,
                       std::size_t) {
    if (!data.empty()) std::memcpy(data.data(), bytes.data() + cursor, data.size_bytes());
    cursor += data.size_bytes();
    for (float v : data) {
      if (!std::isfinite(v)) throw format_error("tensor '" + name + "' holds a non-finite value");
    }
  });
  return b;
}

void save_bundle(const WeightBundle& bundle, const std::string& path) { write_file(path, serialize_bundle(bundle)); }

WeightBundle load_bundle(const std::string& path) { return parse_bundle(read_file(path)); }

}  // namespace gantt
