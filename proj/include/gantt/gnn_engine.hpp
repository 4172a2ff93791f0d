#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gantt/matrix.hpp"

namespace gantt {

/// 0-based neighbor lists, one per node.
using Adjacency = std::vector<std::vector<int>>;

struct Hyperparameters {
  int blocks = 12;        // K
  int heads = 2;          // M
  int input_dim = 3;      // D
  int embed_dim = 48;     // D_e
  int hidden_dim = 200;   // D_H
  int head_dim = 100;     // heads * head_dim == hidden_dim
  double leaky_slope = 0.01;
  double layer_norm_eps = 1e-5;
  bool layer_norm = true;  // false turns every normalization into identity
  int class_count = 3;     // C, T, O
  std::string feature_spec = "hosted_count,node_id,min_tag_id;raw";

  bool operator==(const Hyperparameters&) const = default;
};

struct DenseLayer {
  Matrix weight;  // in_dim x out_dim
  std::vector<float> bias;

  std::size_t in_dim() const { return weight.rows(); }
  std::size_t out_dim() const { return weight.cols(); }
  bool operator==(const DenseLayer&) const = default;
};

struct LayerNormParams {
  std::vector<float> scale;
  std::vector<float> shift;
  bool operator==(const LayerNormParams&) const = default;
};

struct AttentionHead {
  DenseLayer query;
  DenseLayer key;
  DenseLayer value;
  bool operator==(const AttentionHead&) const = default;
};

struct BlockParams {
  std::vector<AttentionHead> heads;
  DenseLayer update;  // node's own transform, added to the head messages
  DenseLayer ffn;     // per-node feed-forward of the second stage
  LayerNormParams norm1;
  LayerNormParams norm2;
  bool operator==(const BlockParams&) const = default;
};

struct WeightBundle {
  Hyperparameters hyper;
  DenseLayer embed;       // D -> D_e
  LayerNormParams embed_norm;  // over D + D_e
  DenseLayer input_proj;  // D + D_e -> D_H
  std::vector<BlockParams> blocks;
  DenseLayer classifier;  // D_H -> class_count

  bool operator==(const WeightBundle&) const = default;
};

/// Reference architecture: K=12, M=2, D_e=48, D_H=200.
Hyperparameters reference_hyperparameters();

/// Throws kShapeMismatch describing the first inconsistent tensor.
void validate_bundle(const WeightBundle& bundle);

/// Bundle with deterministic pseudo-random weights: dense weights uniform in
/// +-scale/sqrt(in_dim), biases in +-0.1*scale, norm scales near 1.
WeightBundle random_bundle(const Hyperparameters& hyper, std::uint64_t seed, double scale = 1.0);

// Forward-pass stages. All throw kShapeMismatch on inconsistent inputs.

/// x W + b per row.
Matrix dense(const Matrix& x, const DenseLayer& layer);
void leaky_relu_inplace(Matrix& x, float slope);
/// Per-row normalization to zero mean / unit variance, then scale and shift.
void layer_norm_inplace(Matrix& x, const LayerNormParams& norm, const Hyperparameters& hyper);

/// LN([X, LeakyReLU(X W_e + b_e)]).
Matrix embed(const Matrix& x, const WeightBundle& bundle);

/// Softmax over each node's neighbors of q_t.k_p / sqrt(d); entry [t][i]
/// is the weight of neighbor adjacency[t][i]. Throws kIsolatedNode.
std::vector<std::vector<float>> attention_weights(const Matrix& h, const Adjacency& adjacency,
                                                  const AttentionHead& head);

/// update(h_t) + concat over heads of sum_p alpha * value(h_p).
Matrix graph_attention(const Matrix& h, const Adjacency& adjacency, const BlockParams& block);

/// H~ = LN1(H + graph_attention(H)); out = LN2(H~ + LeakyReLU(ffn(H~))).
Matrix attention_block(const Matrix& h, const Adjacency& adjacency, const BlockParams& block,
                       const Hyperparameters& hyper);

/// Row-stochastic N x class_count matrix of class probabilities.
Matrix forward(const Matrix& x, const Adjacency& adjacency, const WeightBundle& bundle);

// GANTT1 bundle files.
std::string serialize_bundle(const WeightBundle& bundle);
/// Throws kFormatError, kShapeMismatch or kChecksumMismatch.
WeightBundle parse_bundle(const std::string& bytes);
void save_bundle(const WeightBundle& bundle, const std::string& path);
WeightBundle load_bundle(const std::string& path);

/// Tensor names and shapes, in payload order, for the given hyperparameters.
struct TensorSpec {
  std::string name;
  std::vector<std::size_t> shape;
};
std::vector<TensorSpec> tensor_manifest(const Hyperparameters& hyper);

}  // namespace gantt
