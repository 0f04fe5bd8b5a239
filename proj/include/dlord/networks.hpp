#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dlord/rng.hpp"
#include "dlord/tensor.hpp"

namespace dlord::nets {

using ad::Tape;
using ad::TensorPtr;

/// Shape parameters every network is built from. Two checkpoints are
/// compatible exactly when their ArchConfigs are equal.
struct ArchConfig {
  std::int64_t markers = 8;  // J
  std::int64_t frames = 64;  // T
  std::int64_t class_dim = 128;
  std::int64_t content_dim = 128;
  std::int64_t au_dim = 16;
  std::int64_t mlp_hidden = 256;
  std::int64_t encoder_fc = 256;
  std::int64_t num_res_blocks = 4;
  std::int64_t vae_hidden = 8;
  std::int64_t vae_latent = 2;

  std::int64_t channels() const { return content_dim + au_dim; }
  std::int64_t motion_channels() const { return 3 * markers; }
  std::int64_t base_frames() const { return frames / 4; }  // before the two x2 upsamplings
  std::int64_t adain_sites() const { return 2 * num_res_blocks; }

  /// frames divisible by 4 (decoder) and >= 32 (encoder strides).
  void validate() const;

  bool operator==(const ArchConfig&) const = default;
};

struct LinearLayer {
  TensorPtr weight;  // [out, in]
  TensorPtr bias;    // [out]
};

struct ConvLayer {
  TensorPtr weight;  // [out, in, k]
  TensorPtr bias;    // [out]
  int stride = 1;
  int padding = 0;
};

/// Generator: the AdaIN-parameter MLP plus the decoder that turns
/// (content, AU) into a motion tensor, with the class code entering only
/// through the AdaIN affines.
struct GeneratorParams {
  std::vector<LinearLayer> mlp;  // class_dim -> hidden -> hidden -> 2*C*sites
  LinearLayer fc1;               // C -> C*max(1, T/16)
  LinearLayer fc2;               // -> C*(T/4)
  struct ResBlock {
    ConvLayer conv1;  // k3 s1 p1
    ConvLayer conv2;  // k3 s1 p1
  };
  std::vector<ResBlock> blocks;
  ConvLayer up_conv1;   // k5 s1 p2 after first upsample
  ConvLayer up_conv2;   // k5 s1 p2 after second upsample
  ConvLayer out_conv;   // k7 s1 p3 down to 3J channels

  std::vector<std::pair<std::string, TensorPtr>> named_params(const std::string& prefix) const;
};

/// Six-conv trunk with three fully connected layers on top.
struct EncoderParams {
  std::vector<ConvLayer> convs;   // 6 layers
  std::vector<LinearLayer> fcs;   // flatten -> 256 -> 256 -> latent
  std::int64_t latent_dim = 128;

  std::vector<std::pair<std::string, TensorPtr>> named_params(const std::string& prefix) const;
};

/// 16 -> 8 -> (2, 2) encoder and 2 -> 8 -> 16 decoder.
struct VaeParams {
  LinearLayer enc_hidden;
  LinearLayer enc_mu;
  LinearLayer enc_logvar;
  LinearLayer dec_hidden;
  LinearLayer dec_out;

  std::vector<std::pair<std::string, TensorPtr>> named_params(const std::string& prefix) const;
};

GeneratorParams make_generator(const ArchConfig& arch);
EncoderParams make_encoder(const ArchConfig& arch, std::int64_t latent_dim);
VaeParams make_vae(const ArchConfig& arch);

/// Weights ~ uniform(-sqrt(1/fan_in), sqrt(1/fan_in)), biases zero. The final
/// MLP layer is zeroed instead so training starts from identity AdaIN
/// (gamma=1, beta=0). Draw order is the named_params order.
void init_generator(GeneratorParams& gen, Rng& rng);
void init_encoder(EncoderParams& enc, Rng& rng);
void init_vae(VaeParams& vae, Rng& rng);

/// Diagnostics for the generator forward pass.
struct GenDiag {
  bool identity_adain = false;     // force gamma=1, beta=0 at every site
  TensorPtr* pre_adain = nullptr;  // captures the activation before the first AdaIN
};

/// Per-site (gamma, beta) pairs produced from the class code. Gamma is
/// parameterized as 1 + raw so zero MLP output modulates nothing.
std::vector<std::pair<TensorPtr, TensorPtr>> adain_param_mlp(Tape& tape,
                                                             const TensorPtr& class_code,
                                                             const GeneratorParams& gen,
                                                             const ArchConfig& arch);

/// codes -> motion tensor [3J, T], all values in [0,1].
TensorPtr generator_forward(Tape& tape, const TensorPtr& class_code,
                            const TensorPtr& content_code, const TensorPtr& au_code,
                            const GeneratorParams& gen, const ArchConfig& arch,
                            const GenDiag* diag = nullptr);

/// motion tensor [3J, T] -> latent vector. `penultimate` (when given) receives
/// the 256-wide activation feeding the final fully connected layer.
TensorPtr encoder_forward(Tape& tape, const TensorPtr& motion, const EncoderParams& enc,
                          const ArchConfig& arch, TensorPtr* penultimate = nullptr);

struct VaeOut {
  TensorPtr a_hat;
  TensorPtr mu;
  TensorPtr logvar;
  TensorPtr z;
};

/// Reparameterized pass: z = mu + exp(logvar/2) * noise, then decode.
VaeOut vae_forward(Tape& tape, const TensorPtr& a, const VaeParams& vae, const TensorPtr& noise);
TensorPtr vae_decode(Tape& tape, const TensorPtr& z, const VaeParams& vae);

/// Flatten width after the six-conv encoder trunk for this architecture.
std::int64_t encoder_flatten_len(const ArchConfig& arch);

}  // namespace dlord::nets
