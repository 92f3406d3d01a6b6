#pragma once

#include <string>
#include <string_view>

#include "otc/coarsen.hpp"
#include "otc/tensor/tape.hpp"

namespace otc {

enum class Activation { sigmoid, sigmoid_square, identity };

std::string_view to_string(Activation a);
/// Throws ContractError for an unknown name.
Activation activation_from_string(std::string_view name);

Var apply_activation(Var x, Activation a);

/// One graph convolution, activation(Â·X·W).
struct GcnLayer {
  Var weight;  // d_in×d_out
  Activation activation = Activation::sigmoid;
};

/// Parameters of one coarsening level: scoring vector plus the GCN encoder
/// (d→h) and decoder (h→d).
struct LevelGnn {
  ScoringParams scoring;
  GcnLayer encoder;
  GcnLayer decoder;
};

/// GCN layer on a raw adjacency; Â is formed internally.
Var gcn_forward(Var adjacency, Var features, const GcnLayer& layer);
/// GCN layer on an already normalized adjacency.
Var gcn_propagate(Var normalized_adjacency, Var features, const GcnLayer& layer);

struct EncodeDecode {
  Var embeddings;         // Z = gnn(A, X), n×h
  Var coarse_embeddings;  // Z_c = SᵀZ, m×h
  Var coarse_features;    // X_c = gnn(A_c, Z_c), m×d
};

EncodeDecode encode_decode(Var adjacency, Var features, Var coarsening, Var coarse_adjacency,
                           const LevelGnn& params);

/// Variant reusing precomputed normalized adjacencies of both levels.
EncodeDecode encode_decode_normalized(Var normalized_adjacency, Var features, Var coarsening,
                                      Var normalized_coarse_adjacency, const LevelGnn& params);

}  // namespace otc
