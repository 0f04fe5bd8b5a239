#include "dlord/networks.hpp"

#include <cmath>

#include "dlord/errors.hpp"
#include "dlord/ops.hpp"

namespace dlord::nets {

namespace {

LinearLayer make_linear(std::int64_t out, std::int64_t in) {
  LinearLayer l;
  l.weight = ad::Tensor::zeros({out, in}, /*requires_grad=*/true);
  l.bias = ad::Tensor::zeros({out}, /*requires_grad=*/true);
  return l;
}

ConvLayer make_conv(std::int64_t out, std::int64_t in, std::int64_t k, int stride, int padding) {
  ConvLayer c;
  c.weight = ad::Tensor::zeros({out, in, k}, /*requires_grad=*/true);
  c.bias = ad::Tensor::zeros({out}, /*requires_grad=*/true);
  c.stride = stride;
  c.padding = padding;
  return c;
}

void push_layer(std::vector<std::pair<std::string, TensorPtr>>& out, const std::string& name,
                const TensorPtr& weight, const TensorPtr& bias) {
  out.emplace_back(name + ".weight", weight);
  out.emplace_back(name + ".bias", bias);
}

void init_uniform(const TensorPtr& weight, std::int64_t fan_in, Rng& rng) {
  const double bound = std::sqrt(1.0 / static_cast<double>(fan_in));
  for (auto& v : weight->values) v = rng.uniform(-bound, bound);
}

void init_linear(LinearLayer& l, Rng& rng) { init_uniform(l.weight, l.weight->shape[1], rng); }

void init_conv(ConvLayer& c, Rng& rng) {
  init_uniform(c.weight, c.weight->shape[1] * c.weight->shape[2], rng);
}

std::int64_t conv_out_len(std::int64_t len, std::int64_t k, int stride, int padding) {
  return (len + 2 * padding - k) / stride + 1;
}

}  // namespace

void ArchConfig::validate() const {
  if (markers < 2) throw InvalidArgument("architecture: need at least 2 markers");
  if (frames % 4 != 0)
    throw InvalidArgument("architecture: frame count must be divisible by 4");
  if (frames < 32) throw InvalidArgument("architecture: need at least 32 frames");
  if (class_dim < 1 || content_dim < 1 || au_dim < 1 || mlp_hidden < 1 || encoder_fc < 1)
    throw InvalidArgument("architecture: dimensions must be positive");
  if (num_res_blocks < 1) throw InvalidArgument("architecture: need at least one residual block");
  if (vae_hidden < 1 || vae_latent < 1) throw InvalidArgument("architecture: bad VAE dims");
}

std::vector<std::pair<std::string, TensorPtr>> GeneratorParams::named_params(
    const std::string& prefix) const {
  std::vector<std::pair<std::string, TensorPtr>> out;
  for (std::size_t i = 0; i < mlp.size(); ++i)
    push_layer(out, prefix + "mlp." + std::to_string(i), mlp[i].weight, mlp[i].bias);
  push_layer(out, prefix + "fc1", fc1.weight, fc1.bias);
  push_layer(out, prefix + "fc2", fc2.weight, fc2.bias);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    push_layer(out, prefix + "res." + std::to_string(b) + ".conv1", blocks[b].conv1.weight,
               blocks[b].conv1.bias);
    push_layer(out, prefix + "res." + std::to_string(b) + ".conv2", blocks[b].conv2.weight,
               blocks[b].conv2.bias);
  }
  push_layer(out, prefix + "up1", up_conv1.weight, up_conv1.bias);
  push_layer(out, prefix + "up2", up_conv2.weight, up_conv2.bias);
  push_layer(out, prefix + "out", out_conv.weight, out_conv.bias);
  return out;
}

std::vector<std::pair<std::string, TensorPtr>> EncoderParams::named_params(
    const std::string& prefix) const {
  std::vector<std::pair<std::string, TensorPtr>> out;
  for (std::size_t i = 0; i < convs.size(); ++i)
    push_layer(out, prefix + "conv." + std::to_string(i), convs[i].weight, convs[i].bias);
  for (std::size_t i = 0; i < fcs.size(); ++i)
    push_layer(out, prefix + "fc." + std::to_string(i), fcs[i].weight, fcs[i].bias);
  return out;
}

std::vector<std::pair<std::string, TensorPtr>> VaeParams::named_params(
    const std::string& prefix) const {
  std::vector<std::pair<std::string, TensorPtr>> out;
  push_layer(out, prefix + "enc_hidden", enc_hidden.weight, enc_hidden.bias);
  push_layer(out, prefix + "enc_mu", enc_mu.weight, enc_mu.bias);
  push_layer(out, prefix + "enc_logvar", enc_logvar.weight, enc_logvar.bias);
  push_layer(out, prefix + "dec_hidden", dec_hidden.weight, dec_hidden.bias);
  push_layer(out, prefix + "dec_out", dec_out.weight, dec_out.bias);
  return out;
}

GeneratorParams make_generator(const ArchConfig& arch) {
  arch.validate();
  const std::int64_t c = arch.channels();
  GeneratorParams gen;
  gen.mlp.push_back(make_linear(arch.mlp_hidden, arch.class_dim));
  gen.mlp.push_back(make_linear(arch.mlp_hidden, arch.mlp_hidden));
  gen.mlp.push_back(make_linear(2 * c * arch.adain_sites(), arch.mlp_hidden));
  const std::int64_t fc1_out = c * std::max<std::int64_t>(arch.frames / 16, 1);
  gen.fc1 = make_linear(fc1_out, c);
  gen.fc2 = make_linear(c * arch.base_frames(), fc1_out);
  for (std::int64_t b = 0; b < arch.num_res_blocks; ++b) {
    GeneratorParams::ResBlock blk;
    blk.conv1 = make_conv(c, c, 3, 1, 1);
    blk.conv2 = make_conv(c, c, 3, 1, 1);
    gen.blocks.push_back(std::move(blk));
  }
  gen.up_conv1 = make_conv(c, c, 5, 1, 2);
  gen.up_conv2 = make_conv(c, c, 5, 1, 2);
  gen.out_conv = make_conv(arch.motion_channels(), c, 7, 1, 3);
  return gen;
}

EncoderParams make_encoder(const ArchConfig& arch, std::int64_t latent_dim) {
  arch.validate();
  EncoderParams enc;
  enc.latent_dim = latent_dim;
  enc.convs.push_back(make_conv(64, arch.motion_channels(), 7, 1, 3));
  enc.convs.push_back(make_conv(128, 64, 4, 2, 1));
  enc.convs.push_back(make_conv(256, 128, 4, 2, 1));
  enc.convs.push_back(make_conv(256, 256, 4, 2, 1));
  enc.convs.push_back(make_conv(256, 256, 4, 2, 1));
  enc.convs.push_back(make_conv(256, 256, 4, 2, 1));
  enc.fcs.push_back(make_linear(arch.encoder_fc, encoder_flatten_len(arch)));
  enc.fcs.push_back(make_linear(arch.encoder_fc, arch.encoder_fc));
  enc.fcs.push_back(make_linear(latent_dim, arch.encoder_fc));
  return enc;
}

VaeParams make_vae(const ArchConfig& arch) {
  arch.validate();
  VaeParams vae;
  vae.enc_hidden = make_linear(arch.vae_hidden, arch.au_dim);
  vae.enc_mu = make_linear(arch.vae_latent, arch.vae_hidden);
  vae.enc_logvar = make_linear(arch.vae_latent, arch.vae_hidden);
  vae.dec_hidden = make_linear(arch.vae_hidden, arch.vae_latent);
  vae.dec_out = make_linear(arch.au_dim, arch.vae_hidden);
  return vae;
}

void init_generator(GeneratorParams& gen, Rng& rng) {
  init_linear(gen.mlp[0], rng);
  init_linear(gen.mlp[1], rng);
  // final MLP layer stays zero: identity AdaIN until training moves it
  init_linear(gen.fc1, rng);
  init_linear(gen.fc2, rng);
  for (auto& blk : gen.blocks) {
    init_conv(blk.conv1, rng);
    init_conv(blk.conv2, rng);
  }
  init_conv(gen.up_conv1, rng);
  init_conv(gen.up_conv2, rng);
  init_conv(gen.out_conv, rng);
}

void init_encoder(EncoderParams& enc, Rng& rng) {
  for (auto& c : enc.convs) init_conv(c, rng);
  for (auto& f : enc.fcs) init_linear(f, rng);
}

void init_vae(VaeParams& vae, Rng& rng) {
  init_linear(vae.enc_hidden, rng);
  init_linear(vae.enc_mu, rng);
  init_linear(vae.enc_logvar, rng);
  init_linear(vae.dec_hidden, rng);
  init_linear(vae.dec_out, rng);
}

std::vector<std::pair<TensorPtr, TensorPtr>> adain_param_mlp(Tape& tape,
                                                             const TensorPtr& class_code,
                                                             const GeneratorParams& gen,
                                                             const ArchConfig& arch) {
  if (class_code->shape != std::vector<std::int64_t>{arch.class_dim})
    throw InvalidArgument("adain_param_mlp: class code has wrong dimension");
  auto h = ad::leaky_relu(tape, ad::linear(tape, class_code, gen.mlp[0].weight, gen.mlp[0].bias));
  h = ad::leaky_relu(tape, ad::linear(tape, h, gen.mlp[1].weight, gen.mlp[1].bias));
  auto raw = ad::linear(tape, h, gen.mlp[2].weight, gen.mlp[2].bias);

  std::vector<std::pair<TensorPtr, TensorPtr>> sites;
  const std::int64_t c = arch.channels();
  std::int64_t off = 0;
  for (std::int64_t s = 0; s < arch.adain_sites(); ++s) {
    auto gamma = ad::scale_shift(tape, ad::slice(tape, raw, off, c), 1.0, 1.0);
    off += c;
    auto beta = ad::slice(tape, raw, off, c);
    off += c;
    sites.emplace_back(gamma, beta);
  }
  return sites;
}

TensorPtr generator_forward(Tape& tape, const TensorPtr& class_code,
                            const TensorPtr& content_code, const TensorPtr& au_code,
                            const GeneratorParams& gen, const ArchConfig& arch,
                            const GenDiag* diag) {
  if (arch.frames % 4 != 0)
    throw InvalidArgument("generator_forward: frame count must be divisible by 4");
  if (content_code->shape != std::vector<std::int64_t>{arch.content_dim})
    throw InvalidArgument("generator_forward: content code has wrong dimension");
  if (au_code->shape != std::vector<std::int64_t>{arch.au_dim})
    throw InvalidArgument("generator_forward: AU code has wrong dimension");

  auto sites = adain_param_mlp(tape, class_code, gen, arch);
  if (diag && diag->identity_adain) {
    const std::int64_t c = arch.channels();
    for (auto& [gamma, beta] : sites) {
      gamma = ad::Tensor::from({c}, std::vector<double>(static_cast<std::size_t>(c), 1.0));
      beta = ad::Tensor::zeros({c});
    }
  }

  auto x = ad::concat(tape, content_code, au_code);
  x = ad::leaky_relu(tape, ad::linear(tape, x, gen.fc1.weight, gen.fc1.bias));
  x = ad::leaky_relu(tape, ad::linear(tape, x, gen.fc2.weight, gen.fc2.bias));
  auto feat = ad::reshape(tape, x, {arch.channels(), arch.base_frames()});

  std::size_t site = 0;
  for (std::size_t b = 0; b < gen.blocks.size(); ++b) {
    const auto& blk = gen.blocks[b];
    auto y = ad::conv1d(tape, feat, blk.conv1.weight, blk.conv1.bias, blk.conv1.stride,
                        blk.conv1.padding);
    if (diag && diag->pre_adain && b == 0) *diag->pre_adain = y;
    y = ad::adain(tape, y, sites[site].first, sites[site].second);
    ++site;
    y = ad::leaky_relu(tape, y);
    y = ad::conv1d(tape, y, blk.conv2.weight, blk.conv2.bias, blk.conv2.stride,
                   blk.conv2.padding);
    y = ad::adain(tape, y, sites[site].first, sites[site].second);
    ++site;
    feat = ad::add(tape, feat, y);
  }

  feat = ad::upsample_nearest(tape, feat, 2);
  feat = ad::leaky_relu(tape, ad::conv1d(tape, feat, gen.up_conv1.weight, gen.up_conv1.bias,
                                         gen.up_conv1.stride, gen.up_conv1.padding));
  feat = ad::upsample_nearest(tape, feat, 2);
  feat = ad::leaky_relu(tape, ad::conv1d(tape, feat, gen.up_conv2.weight, gen.up_conv2.bias,
                                         gen.up_conv2.stride, gen.up_conv2.padding));
  feat = ad::conv1d(tape, feat, gen.out_conv.weight, gen.out_conv.bias, gen.out_conv.stride,
                    gen.out_conv.padding);
  feat = ad::tanh_act(tape, feat);
  return ad::scale_shift(tape, feat, 0.5, 0.5);  // tanh range onto [0,1]
}

TensorPtr encoder_forward(Tape& tape, const TensorPtr& motion, const EncoderParams& enc,
                          const ArchConfig& arch, TensorPtr* penultimate) {
  if (motion->shape.size() != 2 || motion->shape[0] != arch.motion_channels())
    throw InvalidArgument("encoder_forward: motion tensor must be [3J, T]");
  if (motion->shape[1] < 32)
    throw InvalidArgument("encoder_forward: need at least 32 frames for five stride-2 stages");

  auto x = motion;
  for (const auto& c : enc.convs)
    x = ad::leaky_relu(tape, ad::conv1d(tape, x, c.weight, c.bias, c.stride, c.padding));
  x = ad::reshape(tape, x, {x->size()});
  x = ad::leaky_relu(tape, ad::linear(tape, x, enc.fcs[0].weight, enc.fcs[0].bias));
  x = ad::leaky_relu(tape, ad::linear(tape, x, enc.fcs[1].weight, enc.fcs[1].bias));
  if (penultimate) *penultimate = x;
  return ad::linear(tape, x, enc.fcs[2].weight, enc.fcs[2].bias);
}

VaeOut vae_forward(Tape& tape, const TensorPtr& a, const VaeParams& vae, const TensorPtr& noise) {
  auto h = ad::leaky_relu(tape, ad::linear(tape, a, vae.enc_hidden.weight, vae.enc_hidden.bias));
  VaeOut out;
  out.mu = ad::linear(tape, h, vae.enc_mu.weight, vae.enc_mu.bias);
  out.logvar = ad::linear(tape, h, vae.enc_logvar.weight, vae.enc_logvar.bias);
  auto sigma = ad::exp_elem(tape, ad::scale_shift(tape, out.logvar, 0.5, 0.0));
  out.z = ad::add(tape, out.mu, ad::mul(tape, sigma, noise));
  out.a_hat = vae_decode(tape, out.z, vae);
  return out;
}

TensorPtr vae_decode(Tape& tape, const TensorPtr& z, const VaeParams& vae) {
  auto h = ad::leaky_relu(tape, ad::linear(tape, z, vae.dec_hidden.weight, vae.dec_hidden.bias));
  return ad::linear(tape, h, vae.dec_out.weight, vae.dec_out.bias);
}

std::int64_t encoder_flatten_len(const ArchConfig& arch) {
  std::int64_t len = arch.frames;
  len = conv_out_len(len, 7, 1, 3);
  for (int i = 0; i < 5; ++i) len = conv_out_len(len, 4, 2, 1);
  return 256 * len;
}

}  // namespace dlord::nets
