#pragma once

// PsyLing (feature-contour BiLSTM), the transformer-embedding branch and the
// hybrid fusion model behind one interface.

#include <memory>
#include <string>

#include "json.hpp"
#include "psyling/nn/layers.hpp"
#include "psyling/nn/lstm.hpp"

namespace psyling {

using nn::Vec;

struct PsyLingConfig {
  std::size_t input_dim = 435;
  std::size_t hidden = 32;  // per direction
  std::size_t layers = 2;
  std::size_t ff1 = 128;
  std::size_t ff2 = 64;
  std::size_t dense = 64;
  double dropout = 0.2;
};

struct TransformerBranchConfig {
  std::size_t input_dim = 768;
  std::size_t hidden = 512;  // per direction
  std::size_t layers = 2;
  std::size_t out = 256;
  std::size_t max_len = 512;
};

struct FusionConfig {
  std::size_t hidden = 128;
};

enum class Architecture { psyling, transformer, hybrid };

inline std::string architecture_name(Architecture a) {
  switch (a) {
    case Architecture::psyling:
      return "psyling";
    case Architecture::transformer:
      return "transformer";
    case Architecture::hybrid:
      return "hybrid";
  }
  return "?";
}

inline Architecture parse_architecture(const std::string& s) {
  if (s == "psyling") return Architecture::psyling;
  if (s == "transformer") return Architecture::transformer;
  if (s == "hybrid") return Architecture::hybrid;
  throw ConfigError("unknown architecture '" + s + "' (psyling, transformer, hybrid)");
}

struct ModelConfig {
  Architecture architecture = Architecture::psyling;
  std::size_t num_labels = 0;
  std::uint64_t seed = 0;
  PsyLingConfig psyling;
  TransformerBranchConfig transformer;
  FusionConfig fusion;
  bool freeze_psyling = false;
  bool freeze_transformer = false;

  /// Defaults differ by architecture: the hybrid's PsyLing branch ends in a
  /// 256-wide dense layer to match the transformer branch.
  static ModelConfig defaults(Architecture a, std::size_t k) {
    ModelConfig c;
    c.architecture = a;
    c.num_labels = k;
    if (a == Architecture::hybrid) c.psyling.dense = 256;
    return c;
  }

  nlohmann::json to_json() const {
    return {{"architecture", architecture_name(architecture)},
            {"num_labels", num_labels},
            {"seed", seed},
            {"psyling",
             {{"input_dim", psyling.input_dim},
              {"hidden", psyling.hidden},
              {"layers", psyling.layers},
              {"ff1", psyling.ff1},
              {"ff2", psyling.ff2},
              {"dense", psyling.dense},
              {"dropout", psyling.dropout}}},
            {"transformer",
             {{"input_dim", transformer.input_dim},
              {"hidden", transformer.hidden},
              {"layers", transformer.layers},
              {"out", transformer.out},
              {"max_len", transformer.max_len}}},
            {"fusion", {{"hidden", fusion.hidden}}},
            {"freeze_psyling", freeze_psyling},
            {"freeze_transformer", freeze_transformer}};
  }

  /// Missing keys keep the architecture defaults.
  static ModelConfig from_json(const nlohmann::json& j) {
    const auto arch = parse_architecture(j.value("architecture", std::string("psyling")));
    auto c = defaults(arch, j.value("num_labels", std::size_t{0}));
    c.seed = j.value("seed", std::uint64_t{0});
    if (j.contains("psyling")) {
      const auto& p = j["psyling"];
      c.psyling.input_dim = p.value("input_dim", c.psyling.input_dim);
      c.psyling.hidden = p.value("hidden", c.psyling.hidden);
      c.psyling.layers = p.value("layers", c.psyling.layers);
      c.psyling.ff1 = p.value("ff1", c.psyling.ff1);
      c.psyling.ff2 = p.value("ff2", c.psyling.ff2);
      c.psyling.dense = p.value("dense", c.psyling.dense);
      c.psyling.dropout = p.value("dropout", c.psyling.dropout);
    }
    if (j.contains("transformer")) {
      const auto& t = j["transformer"];
      c.transformer.input_dim = t.value("input_dim", c.transformer.input_dim);
      c.transformer.hidden = t.value("hidden", c.transformer.hidden);
      c.transformer.layers = t.value("layers", c.transformer.layers);
      c.transformer.out = t.value("out", c.transformer.out);
      c.transformer.max_len = t.value("max_len", c.transformer.max_len);
    }
    if (j.contains("fusion")) c.fusion.hidden = j["fusion"].value("hidden", c.fusion.hidden);
    c.freeze_psyling = j.value("freeze_psyling", false);
    c.freeze_transformer = j.value("freeze_transformer", false);
    c.validate();
    return c;
  }

  void validate() const {
    if (num_labels < 1) throw ConfigError("num_labels must be at least 1");
    for (auto [what, v] : {std::pair{"psyling.input_dim", psyling.input_dim}, {"psyling.hidden", psyling.hidden},
                           {"psyling.layers", psyling.layers}, {"psyling.ff1", psyling.ff1},
                           {"psyling.ff2", psyling.ff2}, {"psyling.dense", psyling.dense},
                           {"transformer.input_dim", transformer.input_dim}, {"transformer.hidden", transformer.hidden},
                           {"transformer.layers", transformer.layers}, {"transformer.out", transformer.out},
                           {"transformer.max_len", transformer.max_len}, {"fusion.hidden", fusion.hidden}})
      if (v < 1) throw ConfigError(std::string(what) + " must be at least 1");
    if (!(psyling.dropout >= 0.0 && psyling.dropout < 1.0)) throw ConfigError("psyling.dropout must be in [0, 1)");
  }
};

/// One input matrix tagged with the text id it was computed for.
struct Tagged {
  std::string id;
  const Matrix* values = nullptr;
};

struct ModelInput {
  Tagged contour;    // N x 435 feature contour (standardized)
  Tagged embedding;  // T x D transformer hidden states
};

class Model {
 public:
  virtual ~Model() = default;

  /// Label probabilities, each in (0, 1).
  virtual Vec forward(const ModelInput& in, bool training) = 0;
  /// Gradient w.r.t. the probabilities of the last forward call.
  virtual void backward(const Vec& d_prob) = 0;
  virtual nn::ParamList params() = 0;
  /// Parameters of the final label projection.
  virtual nn::ParamList output_params() = 0;
  /// Swaps the final projection for a freshly initialized one with k outputs.
  virtual void replace_output(std::size_t k, std::uint64_t seed) = 0;
  /// Selects the dropout mask used by subsequent training-mode forwards.
  virtual void set_dropout_stream(std::uint64_t) {}
  virtual std::unique_ptr<Model> clone() const = 0;

  virtual bool uses_contour() const = 0;
  virtual bool uses_embedding() const = 0;

  const ModelConfig& config() const { return config_; }
  std::size_t num_labels() const { return config_.num_labels; }

 protected:
  explicit Model(ModelConfig c) : config_(std::move(c)) {}
  ModelConfig config_;
};

/// Contour -> stacked BiLSTM final states -> FF1 -> FF2 -> dense + dropout.
/// The output is the penultimate representation (dense width).
class PsyLingBranch {
 public:
  PsyLingBranch() = default;
  PsyLingBranch(const PsyLingConfig& c, std::uint64_t seed)
      : bilstm_("psyling.bilstm", c.input_dim, c.hidden, c.layers),
        ff1_("psyling.ff1", 2 * c.hidden, c.ff1),
        ff2_("psyling.ff2", c.ff1, c.ff2),
        dense_("psyling.dense", c.ff2, c.dense),
        dropout_(c.dropout, seed ^ 0x5053594cULL) {
    detail::Rng rng(seed);
    bilstm_.init(rng);
    ff1_.init(rng);
    ff2_.init(rng);
    dense_.init(rng);
  }

  std::size_t output_dim() const { return dense_.out(); }
  std::size_t input_dim() const { return bilstm_.input_dim(); }

  Vec forward(const Matrix& contour, bool training) {
    if (contour.rows() == 0) throw DataError("psyling: empty contour");
    if (contour.cols() != input_dim())
      throw ShapeError("psyling: feature width " + std::to_string(contour.cols()) + " != " + std::to_string(input_dim()));
    Vec h = bilstm_.forward(contour);
    h = r1_.forward(ff1_.forward(h));
    h = r2_.forward(ff2_.forward(h));
    h = r3_.forward(dense_.forward(h));
    return dropout_.forward(h, training);
  }

  void backward(const Vec& d_out) {
    Vec d = dropout_.backward(d_out);
    d = dense_.backward(r3_.backward(d));
    d = ff2_.backward(r2_.backward(d));
    d = ff1_.backward(r1_.backward(d));
    bilstm_.backward(d);
  }

  void set_dropout_stream(std::uint64_t s) { dropout_.set_stream(s); }

  nn::ParamList params() {
    return nn::concat(nn::concat(nn::concat(bilstm_.params(), ff1_.params()), ff2_.params()), dense_.params());
  }

 private:
  nn::StackedBiLstm bilstm_;
  nn::Linear ff1_, ff2_, dense_;
  nn::Relu r1_, r2_, r3_;
  nn::Dropout dropout_;
};

/// Hidden states -> stacked BiLSTM final states -> fully connected layer.
class TransformerBranch {
 public:
  TransformerBranch() = default;
  TransformerBranch(const TransformerBranchConfig& c, std::uint64_t seed)
      : bilstm_("transformer.bilstm", c.input_dim, c.hidden, c.layers),
        fc_("transformer.fc", 2 * c.hidden, c.out),
        max_len_(c.max_len) {
    detail::Rng rng(seed);
    bilstm_.init(rng);
    fc_.init(rng);
  }

  std::size_t output_dim() const { return fc_.out(); }
  std::size_t input_dim() const { return bilstm_.input_dim(); }

  Vec forward(const Matrix& states) {
    if (states.rows() == 0) throw DataError("transformer branch: empty sequence");
    if (states.rows() > max_len_)
      throw DataError("transformer branch: sequence length " + std::to_string(states.rows()) + " exceeds maximum " +
                      std::to_string(max_len_));
    if (states.cols() != input_dim())
      throw ShapeError("transformer branch: embedding width " + std::to_string(states.cols()) + " != " +
                       std::to_string(input_dim()));
    return fc_.forward(bilstm_.forward(states));
  }

  void backward(const Vec& d_out) { bilstm_.backward(fc_.backward(d_out)); }

  nn::ParamList params() { return nn::concat(bilstm_.params(), fc_.params()); }

 private:
  nn::StackedBiLstm bilstm_;
  nn::Linear fc_;
  std::size_t max_len_ = 512;
};

namespace detail {

inline void set_frozen(const nn::ParamList& ps, bool frozen) {
  for (auto* p : ps) p->frozen = frozen;
}

inline const Matrix& require_input(const Tagged& t, const char* what) {
  if (!t.values) throw UsageError(std::string("model input is missing the ") + what);
  return *t.values;
}

}  // namespace detail

/// Standalone PsyLing: branch -> output layer -> sigmoid.
class PsyLingModel : public Model {
 public:
  explicit PsyLingModel(ModelConfig c) : Model(std::move(c)) {
    branch_ = PsyLingBranch(config_.psyling, config_.seed);
    replace_output(config_.num_labels, config_.seed + 1);
  }

  Vec forward(const ModelInput& in, bool training) override {
    prob_ = nn::sigmoid(out_.forward(branch_.forward(detail::require_input(in.contour, "contour"), training)));
    return prob_;
  }
  void backward(const Vec& d_prob) override { branch_.backward(out_.backward(nn::sigmoid_backward(prob_, d_prob))); }
  nn::ParamList params() override { return nn::concat(branch_.params(), out_.params()); }
  nn::ParamList output_params() override { return out_.params(); }
  void replace_output(std::size_t k, std::uint64_t seed) override {
    if (k < 1) throw ConfigError("model needs at least one output label");
    config_.num_labels = k;
    out_ = nn::Linear("psyling.out", branch_.output_dim(), k);
    detail::Rng rng(seed);
    out_.init(rng);
  }
  void set_dropout_stream(std::uint64_t s) override { branch_.set_dropout_stream(s); }
  std::unique_ptr<Model> clone() const override { return std::make_unique<PsyLingModel>(*this); }
  bool uses_contour() const override { return true; }
  bool uses_embedding() const override { return false; }

 private:
  PsyLingBranch branch_;
  nn::Linear out_;
  Vec prob_;
};

/// Embedding-only baseline: transformer branch -> output layer -> sigmoid.
class EmbeddingModel : public Model {
 public:
  explicit EmbeddingModel(ModelConfig c) : Model(std::move(c)) {
    branch_ = TransformerBranch(config_.transformer, config_.seed + 2);
    replace_output(config_.num_labels, config_.seed + 1);
  }

  Vec forward(const ModelInput& in, bool) override {
    prob_ = nn::sigmoid(out_.forward(branch_.forward(detail::require_input(in.embedding, "embedding"))));
    return prob_;
  }
  void backward(const Vec& d_prob) override { branch_.backward(out_.backward(nn::sigmoid_backward(prob_, d_prob))); }
  nn::ParamList params() override { return nn::concat(branch_.params(), out_.params()); }
  nn::ParamList output_params() override { return out_.params(); }
  void replace_output(std::size_t k, std::uint64_t seed) override {
    if (k < 1) throw ConfigError("model needs at least one output label");
    config_.num_labels = k;
    out_ = nn::Linear("transformer.out", branch_.output_dim(), k);
    detail::Rng rng(seed);
    out_.init(rng);
  }
  std::unique_ptr<Model> clone() const override { return std::make_unique<EmbeddingModel>(*this); }
  bool uses_contour() const override { return false; }
  bool uses_embedding() const override { return true; }

 private:
  TransformerBranch branch_;
  nn::Linear out_;
  Vec prob_;
};

/// Hybrid: [PsyLing branch | transformer branch] -> Linear -> ReLU -> Linear
/// -> sigmoid. Both inputs must carry the same text id.
class HybridModel : public Model {
 public:
  explicit HybridModel(ModelConfig c) : Model(std::move(c)) {
    psyling_ = PsyLingBranch(config_.psyling, config_.seed);
    transformer_ = TransformerBranch(config_.transformer, config_.seed + 2);
    const std::size_t fused = psyling_.output_dim() + transformer_.output_dim();
    fusion_ = nn::Linear("fusion.hidden", fused, config_.fusion.hidden);
    detail::Rng rng(config_.seed + 3);
    fusion_.init(rng);
    replace_output(config_.num_labels, config_.seed + 1);
    detail::set_frozen(psyling_.params(), config_.freeze_psyling);
    detail::set_frozen(transformer_.params(), config_.freeze_transformer);
  }

  Vec forward(const ModelInput& in, bool training) override {
    const auto& contour = detail::require_input(in.contour, "contour");
    const auto& states = detail::require_input(in.embedding, "embedding");
    if (in.contour.id != in.embedding.id)
      throw PairingError("hybrid input pairs contour '" + in.contour.id + "' with embedding '" + in.embedding.id + "'");
    Vec a = psyling_.forward(contour, training);
    Vec b = transformer_.forward(states);
    split_ = a.size();
    a.insert(a.end(), b.begin(), b.end());
    prob_ = nn::sigmoid(out_.forward(relu_.forward(fusion_.forward(a))));
    return prob_;
  }

  void backward(const Vec& d_prob) override {
    Vec d = fusion_.backward(relu_.backward(out_.backward(nn::sigmoid_backward(prob_, d_prob))));
    psyling_.backward(Vec(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(split_)));
    transformer_.backward(Vec(d.begin() + static_cast<std::ptrdiff_t>(split_), d.end()));
  }

  nn::ParamList params() override {
    return nn::concat(nn::concat(psyling_.params(), transformer_.params()), fusion_params());
  }
  nn::ParamList fusion_params() { return nn::concat(fusion_.params(), out_.params()); }
  nn::ParamList psyling_params() { return psyling_.params(); }
  nn::ParamList transformer_params() { return transformer_.params(); }
  nn::ParamList output_params() override { return out_.params(); }

  void replace_output(std::size_t k, std::uint64_t seed) override {
    if (k < 1) throw ConfigError("model needs at least one output label");
    config_.num_labels = k;
    out_ = nn::Linear("fusion.out", config_.fusion.hidden, k);
    detail::Rng rng(seed);
    out_.init(rng);
  }
  void set_dropout_stream(std::uint64_t s) override { psyling_.set_dropout_stream(s); }
  std::unique_ptr<Model> clone() const override { return std::make_unique<HybridModel>(*this); }
  bool uses_contour() const override { return true; }
  bool uses_embedding() const override { return true; }

 private:
  PsyLingBranch psyling_;
  TransformerBranch transformer_;
  nn::Linear fusion_, out_;
  nn::Relu relu_;
  Vec prob_;
  std::size_t split_ = 0;
};

inline std::unique_ptr<Model> make_model(const ModelConfig& c) {
  c.validate();
  switch (c.architecture) {
    case Architecture::psyling:
      return std::make_unique<PsyLingModel>(c);
    case Architecture::transformer:
      return std::make_unique<EmbeddingModel>(c);
    case Architecture::hybrid:
      return std::make_unique<HybridModel>(c);
  }
  throw ConfigError("unknown architecture");
}

}  // namespace psyling
