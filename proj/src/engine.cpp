#include <algorithm>
#include <cmath>
#include <string>

#include "gantt/error.hpp"
#include "gantt/gnn_engine.hpp"

namespace gantt {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<float> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorCode::kShapeMismatch, "matrix data length " + std::to_string(data_.size()) + " != " +
                                               std::to_string(rows_) + "x" + std::to_string(cols_));
  }
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](float v) { return std::isfinite(v); });
}

Hyperparameters reference_hyperparameters() { return Hyperparameters{}; }

namespace {

[[noreturn]] void shape_error(const std::string& what) { throw Error(ErrorCode::kShapeMismatch, what); }

void check_dense(const DenseLayer& layer, std::size_t in, std::size_t out, const std::string& name) {
  if (layer.weight.rows() != in || layer.weight.cols() != out || layer.bias.size() != out) {
    shape_error(name + ": expected " + std::to_string(in) + "x" + std::to_string(out) + " got " +
                std::to_string(layer.weight.rows()) + "x" + std::to_string(layer.weight.cols()) + " (bias " +
                std::to_string(layer.bias.size()) + ")");
  }
}

void check_norm(const LayerNormParams& norm, std::size_t dim, const std::string& name) {
  if (norm.scale.size() != dim || norm.shift.size() != dim) {
    shape_error(name + ": expected width " + std::to_string(dim));
  }
}

void check_adjacency(const Adjacency& adjacency, std::size_t n) {
  if (adjacency.size() != n) {
    shape_error("adjacency has " + std::to_string(adjacency.size()) + " rows for " + std::to_string(n) + " nodes");
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (adjacency[t].empty()) throw Error(ErrorCode::kIsolatedNode, "node index " + std::to_string(t));
    for (int p : adjacency[t]) {
      if (p < 0 || static_cast<std::size_t>(p) >= n) shape_error("adjacency index out of range");
    }
  }
}

}  // namespace

void validate_bundle(const WeightBundle& b) {
  const auto& hp = b.hyper;
  if (hp.blocks < 1 || hp.heads < 1 || hp.input_dim < 1 || hp.embed_dim < 1 || hp.hidden_dim < 1 ||
      hp.head_dim < 1 || hp.class_count != 3) {
    shape_error("hyperparameters must be positive with class_count 3");
  }
  if (hp.heads * hp.head_dim != hp.hidden_dim) shape_error("heads * head_dim must equal hidden_dim");
  if (!(hp.layer_norm_eps > 0) || !std::isfinite(hp.leaky_slope)) shape_error("bad slope or epsilon");
  const auto d = static_cast<std::size_t>(hp.input_dim);
  const auto de = static_cast<std::size_t>(hp.embed_dim);
  const auto dh = static_cast<std::size_t>(hp.hidden_dim);
  const auto dk = static_cast<std::size_t>(hp.head_dim);
  check_dense(b.embed, d, de, "embed");
  check_norm(b.embed_norm, d + de, "embed_norm");
  check_dense(b.input_proj, d + de, dh, "input_proj");
  if (b.blocks.size() != static_cast<std::size_t>(hp.blocks)) shape_error("block count differs from hyper.blocks");
  for (std::size_t i = 0; i < b.blocks.size(); ++i) {
    const auto& blk = b.blocks[i];
    const std::string prefix = "block." + std::to_string(i);
    if (blk.heads.size() != static_cast<std::size_t>(hp.heads)) shape_error(prefix + ": head count");
    for (std::size_t m = 0; m < blk.heads.size(); ++m) {
      const std::string hprefix = prefix + ".head." + std::to_string(m);
      check_dense(blk.heads[m].query, dh, dk, hprefix + ".query");
      check_dense(blk.heads[m].key, dh, dk, hprefix + ".key");
      check_dense(blk.heads[m].value, dh, dk, hprefix + ".value");
    }
    check_dense(blk.update, dh, dh, prefix + ".update");
    check_dense(blk.ffn, dh, dh, prefix + ".ffn");
    check_norm(blk.norm1, dh, prefix + ".norm1");
    check_norm(blk.norm2, dh, prefix + ".norm2");
  }
  check_dense(b.classifier, dh, static_cast<std::size_t>(hp.class_count), "classifier");
}

Matrix dense(const Matrix& x, const DenseLayer& layer) {
  if (x.cols() != layer.in_dim() || layer.bias.size() != layer.out_dim()) {
    shape_error("dense: input width " + std::to_string(x.cols()) + " vs layer " + std::to_string(layer.in_dim()));
  }
  const std::size_t in = layer.in_dim();
  const std::size_t out = layer.out_dim();
  Matrix y(x.rows(), out);
  std::vector<double> acc(out);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t o = 0; o < out; ++o) acc[o] = layer.bias[o];
    const auto xr = x.row(r);
    for (std::size_t i = 0; i < in; ++i) {
      const double xi = xr[i];
      const auto wrow = layer.weight.row(i);
      for (std::size_t o = 0; o < out; ++o) acc[o] += xi * static_cast<double>(wrow[o]);
    }
    auto yr = y.row(r);
    for (std::size_t o = 0; o < out; ++o) yr[o] = static_cast<float>(acc[o]);
  }
  return y;
}

void leaky_relu_inplace(Matrix& x, float slope) {
  for (float& v : x.data()) v = v >= 0.0f ? v : slope * v;
}

void layer_norm_inplace(Matrix& x, const LayerNormParams& norm, const Hyperparameters& hyper) {
  if (!hyper.layer_norm) return;
  check_norm(norm, x.cols(), "layer_norm");
  const auto width = static_cast<double>(x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.row(r);
    double mean = 0.0;
    for (float v : row) mean += v;
    mean /= width;
    double var = 0.0;
    for (float v : row) var += (v - mean) * (v - mean);
    var /= width;
    const double inv = 1.0 / std::sqrt(var + hyper.layer_norm_eps);
    for (std::size_t c = 0; c < row.size(); ++c) {
      row[c] = static_cast<float>((row[c] - mean) * inv * norm.scale[c] + norm.shift[c]);
    }
  }
}

Matrix embed(const Matrix& x, const WeightBundle& bundle) {
  const auto d = static_cast<std::size_t>(bundle.hyper.input_dim);
  if (x.cols() != d) shape_error("embed: input has " + std::to_string(x.cols()) + " features, expected " +
                                 std::to_string(d));
  Matrix z = dense(x, bundle.embed);
  leaky_relu_inplace(z, static_cast<float>(bundle.hyper.leaky_slope));
  Matrix h(x.rows(), d + z.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto out = h.row(r);
    std::copy(x.row(r).begin(), x.row(r).end(), out.begin());
    std::copy(z.row(r).begin(), z.row(r).end(), out.begin() + static_cast<std::ptrdiff_t>(d));
  }
  layer_norm_inplace(h, bundle.embed_norm, bundle.hyper);
  return h;
}

namespace {

std::vector<std::vector<float>> softmax_scores(const Matrix& q, const Matrix& k, const Adjacency& adjacency) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(q.cols()));
  std::vector<std::vector<float>> weights(q.rows());
  std::vector<double> scores;
  for (std::size_t t = 0; t < q.rows(); ++t) {
    const auto& nbrs = adjacency[t];
    scores.assign(nbrs.size(), 0.0);
    const auto qt = q.row(t);
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      const auto kp = k.row(static_cast<std::size_t>(nbrs[i]));
      double dot = 0.0;
      for (std::size_t c = 0; c < qt.size(); ++c) dot += static_cast<double>(qt[c]) * kp[c];
      scores[i] = dot * scale;
    }
    const double top = *std::max_element(scores.begin(), scores.end());
    double total = 0.0;
    for (double& s : scores) {
      s = std::exp(s - top);
      total += s;
    }
    weights[t].resize(nbrs.size());
    for (std::size_t i = 0; i < nbrs.size(); ++i) weights[t][i] = static_cast<float>(scores[i] / total);
  }
  return weights;
}

}  // namespace

std::vector<std::vector<float>> attention_weights(const Matrix& h, const Adjacency& adjacency,
                                                  const AttentionHead& head) {
  check_adjacency(adjacency, h.rows());
  return softmax_scores(dense(h, head.query), dense(h, head.key), adjacency);
}

Matrix graph_attention(const Matrix& h, const Adjacency& adjacency, const BlockParams& block) {
  check_adjacency(adjacency, h.rows());
  Matrix g = dense(h, block.update);
  std::size_t offset = 0;
  for (const auto& head : block.heads) {
    const Matrix q = dense(h, head.query);
    const Matrix k = dense(h, head.key);
    const Matrix v = dense(h, head.value);
    if (k.cols() != q.cols() || v.cols() + offset > g.cols()) shape_error("attention head widths disagree");
    const auto alpha = softmax_scores(q, k, adjacency);
    std::vector<double> msg(v.cols());
    for (std::size_t t = 0; t < h.rows(); ++t) {
      std::fill(msg.begin(), msg.end(), 0.0);
      const auto& nbrs = adjacency[t];
      for (std::size_t i = 0; i < nbrs.size(); ++i) {
        const double a = alpha[t][i];
        const auto vp = v.row(static_cast<std::size_t>(nbrs[i]));
        for (std::size_t c = 0; c < msg.size(); ++c) msg[c] += a * vp[c];
      }
      auto gt = g.row(t);
      for (std::size_t c = 0; c < msg.size(); ++c) {
        gt[offset + c] = static_cast<float>(static_cast<double>(gt[offset + c]) + msg[c]);
      }
    }
    offset += v.cols();
  }
  if (offset != g.cols()) shape_error("concatenated heads do not match the update width");
  return g;
}

Matrix attention_block(const Matrix& h, const Adjacency& adjacency, const BlockParams& block,
                       const Hyperparameters& hyper) {
  Matrix mid = graph_attention(h, adjacency, block);
  if (mid.cols() != h.cols()) shape_error("block output width differs from its input");
  for (std::size_t i = 0; i < mid.data().size(); ++i) mid.data()[i] += h.data()[i];
  layer_norm_inplace(mid, block.norm1, hyper);

  Matrix out = dense(mid, block.ffn);
  if (out.cols() != mid.cols()) shape_error("ffn output width differs from its input");
  leaky_relu_inplace(out, static_cast<float>(hyper.leaky_slope));
  for (std::size_t i = 0; i < out.data().size(); ++i) out.data()[i] += mid.data()[i];
  layer_norm_inplace(out, block.norm2, hyper);
  return out;
}

Matrix forward(const Matrix& x, const Adjacency& adjacency, const WeightBundle& bundle) {
  check_adjacency(adjacency, x.rows());
  Matrix h = embed(x, bundle);
  h = dense(h, bundle.input_proj);
  leaky_relu_inplace(h, static_cast<float>(bundle.hyper.leaky_slope));
  for (const auto& block : bundle.blocks) h = attention_block(h, adjacency, block, bundle.hyper);
  Matrix logits = dense(h, bundle.classifier);
  for (std::size_t r = 0; r < logits.rows(); ++r) {
    auto row = logits.row(r);
    const double top = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    std::vector<double> e(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      e[c] = std::exp(static_cast<double>(row[c]) - top);
      total += e[c];
    }
    for (std::size_t c = 0; c < row.size(); ++c) row[c] = static_cast<float>(e[c] / total);
  }
  return logits;
}

}  // namespace gantt
