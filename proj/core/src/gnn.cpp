#include "otc/gnn.hpp"

#include "otc/error.hpp"
#include "otc/graph/graph.hpp"
#include "otc/tensor/ops.hpp"

namespace otc {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::sigmoid:
      return "sigmoid";
    case Activation::sigmoid_square:
      return "sigmoid_square";
    case Activation::identity:
      return "identity";
  }
  return "identity";
}

Activation activation_from_string(std::string_view name) {
  if (name == "sigmoid") return Activation::sigmoid;
  if (name == "sigmoid_square") return Activation::sigmoid_square;
  if (name == "identity") return Activation::identity;
  throw ContractError("unknown activation '" + std::string(name) + "'");
}

Var apply_activation(Var x, Activation a) {
  switch (a) {
    case Activation::sigmoid:
      return sigmoid(x);
    case Activation::sigmoid_square:
      return sigmoid(square(x));
    case Activation::identity:
      return x;
  }
  return x;
}

Var gcn_propagate(Var normalized_adjacency, Var features, const GcnLayer& layer) {
  if (features.cols() != layer.weight.rows()) {
    throw DimensionError("gcn: features " + features.value().shape_string() +
                         " incompatible with weight " + layer.weight.value().shape_string());
  }
  if (normalized_adjacency.cols() != features.rows()) {
    throw DimensionError("gcn: adjacency " + normalized_adjacency.value().shape_string() +
                         " incompatible with features " + features.value().shape_string());
  }
  // (ÂX)W is cheaper than Â(XW) whenever d_in ≤ d_out.
  Var pre = features.cols() <= layer.weight.cols()
                ? matmul(matmul(normalized_adjacency, features), layer.weight)
                : matmul(normalized_adjacency, matmul(features, layer.weight));
  return apply_activation(pre, layer.activation);
}

Var gcn_forward(Var adjacency, Var features, const GcnLayer& layer) {
  return gcn_propagate(normalized_adjacency(adjacency), features, layer);
}

EncodeDecode encode_decode_normalized(Var normalized_adjacency, Var features, Var coarsening,
                                      Var normalized_coarse_adjacency, const LevelGnn& params) {
  if (params.decoder.weight.cols() != features.cols()) {
    throw DimensionError("encode_decode: decoder maps to " +
                         std::to_string(params.decoder.weight.cols()) +
                         " features, level has " + std::to_string(features.cols()));
  }
  if (coarsening.rows() != features.rows()) {
    throw DimensionError("encode_decode: coarsening matrix " + coarsening.value().shape_string() +
                         " does not match " + std::to_string(features.rows()) + " nodes");
  }
  EncodeDecode out;
  out.embeddings = gcn_propagate(normalized_adjacency, features, params.encoder);
  out.coarse_embeddings = matmul(transpose(coarsening), out.embeddings);
  out.coarse_features =
      gcn_propagate(normalized_coarse_adjacency, out.coarse_embeddings, params.decoder);
  return out;
}

EncodeDecode encode_decode(Var adjacency, Var features, Var coarsening, Var coarse_adjacency,
                           const LevelGnn& params) {
  return encode_decode_normalized(normalized_adjacency(adjacency), features, coarsening,
                                  normalized_adjacency(coarse_adjacency), params);
}

}  // namespace otc
