#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "psyling/models/train.hpp"
#include "support/gradcheck.hpp"
#include "support/synthetic.hpp"

using namespace psyling;
namespace synth = psyling::testing;
using synth::random_matrix;

namespace {

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("psyling_models_" + name)).string();
}

ModelConfig small_hybrid(std::size_t k) {
  auto cfg = ModelConfig::defaults(Architecture::hybrid, k);
  cfg.psyling = {12, 4, 2, 8, 6, 8, 0.2};
  cfg.transformer = {6, 4, 2, 8, 512};
  cfg.fusion.hidden = 5;
  return cfg;
}

TrainConfig overfit_config() {
  TrainConfig tc;
  tc.epochs = 200;
  tc.batch_size = 4;
  tc.optimizer.lr = 1e-3;
  tc.optimizer.weight_decay = 0.0;
  tc.seed = 11;
  return tc;
}

}  // namespace

TEST(Embeddings, RoundTripThroughFile) {
  const auto path = temp_path("rt.embv1");
  auto f = synth::write_synthetic_embeddings(path, {"a", "b", "c"}, 16, 1, 7, 3);
  auto back = read_embeddings(path);
  EXPECT_EQ(back.dim, 16);
  ASSERT_EQ(back.records.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.records[i].id, f.records[i].id);
    EXPECT_EQ(back.records[i].states, f.records[i].states);
  }
  EXPECT_NE(back.find("b"), nullptr);
  EXPECT_EQ(back.find("zz"), nullptr);
  std::filesystem::remove(path);
}

TEST(Embeddings, CorruptFilesAreRejected) {
  auto f = synth::synthetic_embeddings({"a", "b"}, 4, 2, 2, 1);
  std::stringstream buf;
  write_embeddings(buf, f);
  const auto bytes = buf.str();

  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_embeddings(cut, "cut"), FormatError);
  std::stringstream extra(bytes + "x");
  EXPECT_THROW(read_embeddings(extra, "extra"), FormatError);
  std::stringstream magic("EMBV2" + bytes.substr(5));
  EXPECT_THROW(read_embeddings(magic, "magic"), FormatError);

  auto dup = f;
  dup.records[1].id = "a";
  std::stringstream d;
  write_embeddings(d, dup);
  EXPECT_THROW(read_embeddings(d, "dup"), FormatError);

  auto nan = f;
  nan.records[0].states(1, 2) = std::nan("");
  std::stringstream n;
  write_embeddings(n, nan);
  try {
    read_embeddings(n, "nan");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("'a'"), std::string::npos);
  }
  EXPECT_THROW(read_embeddings("/nonexistent/x.embv1"), LoadError);
}

TEST(Models, ProbabilitiesInUnitIntervalForAllArchitectures) {
  detail::Rng rng(1);
  auto cfg = small_hybrid(5);
  for (auto arch : {Architecture::psyling, Architecture::transformer, Architecture::hybrid}) {
    cfg.architecture = arch;
    auto m = make_model(cfg);
    for (std::size_t t : {1u, 4u}) {
      Matrix c = random_matrix(t, 12, rng, 3.0), e = random_matrix(t, 6, rng, 3.0);
      auto p = m->forward({{"x", &c}, {"x", &e}}, false);
      ASSERT_EQ(p.size(), 5u);
      for (double v : p) {
        EXPECT_GT(v, 0.0);
        EXPECT_LT(v, 1.0);
      }
    }
  }
}

TEST(Models, FullSizeShapes) {
  detail::Rng rng(2);
  auto m = make_model(ModelConfig::defaults(Architecture::psyling, 7));
  Matrix c = random_matrix(1, 435, rng);
  EXPECT_EQ(m->forward({{"x", &c}, {}}, false).size(), 7u);
  Matrix wrong = random_matrix(2, 434, rng);
  EXPECT_THROW(m->forward({{"x", &wrong}, {}}, false), ShapeError);
  EXPECT_THROW(m->forward({{"x", nullptr}, {}}, false), UsageError);

  TransformerBranch branch(TransformerBranchConfig{}, 3);
  for (std::size_t t : {1u, 5u, 512u}) {
    Matrix e = random_matrix(t, 768, rng, 0.1);
    EXPECT_EQ(branch.forward(e).size(), 256u);
  }
  EXPECT_THROW(branch.forward(Matrix(513, 768)), DataError);
  EXPECT_THROW(branch.forward(Matrix(3, 700)), ShapeError);
}

TEST(Models, ZeroBranchWeightsGiveZeroBeforeBias) {
  TransformerBranch branch(TransformerBranchConfig{8, 4, 2, 6, 512}, 1);
  for (auto* p : branch.params()) p->value.fill(0.0);
  auto out = branch.forward(Matrix(3, 8));
  for (double v : out) EXPECT_EQ(v, 0.0);
}

TEST(Models, HybridRejectsMismatchedIds) {
  auto m = make_model(small_hybrid(3));
  Matrix c(2, 12), e(2, 6);
  EXPECT_THROW(m->forward({{"a", &c}, {"b", &e}}, false), PairingError);
  EXPECT_NO_THROW(m->forward({{"a", &c}, {"a", &e}}, false));
}

TEST(Models, HybridParameterCountIsSumOfParts) {
  auto cfg = ModelConfig::defaults(Architecture::hybrid, 4);
  HybridModel m(cfg);
  const auto total = nn::parameter_count(m.params());
  EXPECT_EQ(total, nn::parameter_count(m.psyling_params()) + nn::parameter_count(m.transformer_params()) +
                       nn::parameter_count(m.fusion_params()));
  EXPECT_EQ(PsyLingBranch(cfg.psyling, 0).output_dim(), 256u);
  EXPECT_EQ(TransformerBranch(cfg.transformer, 0).output_dim(), 256u);
  // standalone dimensions
  auto solo = ModelConfig::defaults(Architecture::psyling, 4);
  EXPECT_EQ(solo.psyling.hidden, 32u);
  EXPECT_EQ(solo.psyling.dense, 64u);
}

TEST(Models, OutputsIndependentOfOtherExamplesAndDeterministic) {
  auto set = synth::separable_set(6, 3, 4, 12);
  auto cfg = small_hybrid(3);
  cfg.architecture = Architecture::psyling;
  auto m = make_model(cfg);
  auto samples = set.samples();
  auto fwd = predict(*m, samples);
  std::vector<Sample> reversed(samples.rbegin(), samples.rend());
  auto bwd = predict(*m, reversed);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(fwd[i].probabilities, bwd[5 - i].probabilities);
  auto again = make_model(cfg);
  EXPECT_EQ(predict(*again, samples)[0].probabilities, fwd[0].probabilities);
}

TEST(Models, CloneIsIndependent) {
  auto m = make_model(small_hybrid(2));
  auto c = m->clone();
  c->params()[0]->value.fill(0.0);
  EXPECT_NE(m->params()[0]->value, c->params()[0]->value);
}

TEST(Models, ReplaceOutputChangesLabelCount) {
  auto set = synth::separable_set(2, 3, 4, 12);
  for (auto arch : {Architecture::psyling, Architecture::hybrid}) {
    auto cfg = small_hybrid(3);
    cfg.architecture = arch;
    auto m = make_model(cfg);
    const auto before = m->params()[0]->value;
    Matrix e(3, 6);
    m->replace_output(5, 9);
    EXPECT_EQ(m->num_labels(), 5u);
    EXPECT_EQ(m->params()[0]->value, before);
    EXPECT_EQ(m->forward({{"sep0", &set.contours[0]}, {"sep0", &e}}, false).size(), 5u);
    EXPECT_EQ(m->output_params().size(), 2u);
  }
}

TEST(Predict, DecisionRule) {
  EXPECT_EQ(decide({0.9, 0.1}, 0.5, false), (std::vector<std::uint8_t>{1, 0}));
  EXPECT_EQ(decide({0.2, 0.4, 0.1}, 0.5, false), (std::vector<std::uint8_t>{0, 0, 0}));
  EXPECT_EQ(decide({0.2, 0.4, 0.1}, 0.5, true), (std::vector<std::uint8_t>{0, 1, 0}));
  EXPECT_EQ(decide({0.2, 0.4, 0.1}, 0.0, false), (std::vector<std::uint8_t>{1, 1, 1}));
  EXPECT_EQ(decide({0.5}, 0.5, false), (std::vector<std::uint8_t>{1}));
}

TEST(Train, LearningRateZeroLeavesParametersUnchanged) {
  auto set = synth::separable_set(8, 3, 5, 12);
  auto cfg = small_hybrid(3);
  cfg.architecture = Architecture::psyling;
  auto m = make_model(cfg);
  std::vector<Matrix> before;
  for (auto* p : m->params()) before.push_back(p->value);
  auto tc = overfit_config();
  tc.epochs = 3;
  tc.optimizer.lr = 0.0;
  tc.optimizer.weight_decay = 0.01;
  auto samples = set.samples();
  const double loss_before = mean_loss(*m, samples);
  train(*m, samples, {}, tc);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(m->params()[i]->value, before[i]);
  EXPECT_EQ(mean_loss(*m, samples), loss_before);
}

TEST(Train, SeedDeterminesLossCurve) {
  auto set = synth::separable_set(10, 3, 6, 12);
  auto samples = set.samples();
  auto cfg = small_hybrid(3);
  auto tc = overfit_config();
  tc.epochs = 4;
  auto run = [&](std::uint64_t seed) {
    auto m = make_model(cfg);
    auto c = tc;
    c.seed = seed;
    std::vector<double> curve;
    auto e = synth::synthetic_embeddings(set.ids, 6, 2, 4, 1);
    auto samples_with_emb = samples;
    for (std::size_t i = 0; i < samples.size(); ++i) samples_with_emb[i].embedding = &e.records[i].states;
    for (auto& ep : train(*m, samples_with_emb, {}, c).epochs) curve.push_back(ep.train_loss);
    return curve;
  };
  EXPECT_EQ(run(1), run(1));
  EXPECT_NE(run(1), run(2));
}

TEST(Train, OverfitsSeparableSet) {
  auto set = synth::separable_set(16, 4, 21);
  auto samples = set.samples();
  auto m = make_model(ModelConfig::defaults(Architecture::psyling, 4));
  auto r = train(*m, samples, {}, overfit_config());
  double best = 1.0;
  for (const auto& e : r.epochs) best = std::min(best, e.train_loss);
  EXPECT_LT(best, 0.05);
  EXPECT_LT(mean_loss(*m, samples), 0.05);
  // 10-epoch means of the training loss fall strictly over the first 50 epochs
  std::vector<double> smooth;
  for (std::size_t e = 0; e < 50; e += 10) {
    double s = 0;
    for (std::size_t i = e; i < e + 10; ++i) s += r.epochs[i].train_loss;
    smooth.push_back(s / 10);
  }
  for (std::size_t i = 1; i < smooth.size(); ++i) EXPECT_LT(smooth[i], smooth[i - 1]) << "window " << i;
  EXPECT_EQ(evaluate(*m, samples, set.labels).macro_f1, 1.0);
}

TEST(Train, DevSelectionRestoresBestEpochAndFrozenFlags) {
  auto set = synth::separable_set(12, 3, 8, 12);
  auto all = set.samples();
  std::vector<Sample> tr(all.begin(), all.begin() + 8), dev(all.begin() + 8, all.end());
  auto cfg = small_hybrid(3);
  cfg.architecture = Architecture::psyling;
  auto m = make_model(cfg);
  auto tc = overfit_config();
  tc.epochs = 6;
  tc.output_layer_only = true;
  std::ostringstream log;
  auto frozen_before = m->params()[0]->value;
  auto r = train(*m, tr, dev, tc, &log);
  EXPECT_EQ(m->params()[0]->value, frozen_before);
  EXPECT_FALSE(m->params()[0]->frozen);
  ASSERT_TRUE(r.best_dev_macro_f1);
  EXPECT_EQ(*r.epochs[r.best_epoch - 1].dev_macro_f1, *r.best_dev_macro_f1);
  EXPECT_NEAR(evaluate(*m, dev, set.labels).macro_f1, *r.best_dev_macro_f1, 0.0);
  std::istringstream lines(log.str());
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j["epoch"].get<std::size_t>(), ++n);
    EXPECT_TRUE(j.contains("train_loss"));
  }
  EXPECT_EQ(n, 6u);
}

TEST(Train, Errors) {
  auto cfg = small_hybrid(3);
  cfg.architecture = Architecture::psyling;
  auto m = make_model(cfg);
  EXPECT_THROW(train(*m, {}, {}, TrainConfig{}), DataError);
  auto set = synth::separable_set(2, 2, 1, 12);
  auto s = set.samples();
  EXPECT_THROW(train(*m, s, {}, TrainConfig{}), ShapeError);

  auto bad = synth::separable_set(2, 3, 1, 12);
  bad.contours[1](0, 0) = std::nan("");
  auto bs = bad.samples();
  try {
    train(*m, bs, {}, TrainConfig{});
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch 1"), std::string::npos);
  }
  EXPECT_THROW(TrainConfig::from_json({{"epochs", 0}}), ConfigError);
  auto tc = TrainConfig::from_json({{"lr", 0.1}, {"clip_norm", 1.0}});
  EXPECT_EQ(TrainConfig::from_json(tc.to_json()).to_json(), tc.to_json());
}

TEST(ModelConfig, JsonRoundTripAndErrors) {
  auto cfg = small_hybrid(4);
  cfg.freeze_transformer = true;
  EXPECT_EQ(ModelConfig::from_json(cfg.to_json()).to_json(), cfg.to_json());
  EXPECT_THROW(parse_architecture("cnn"), ConfigError);
  auto j = cfg.to_json();
  j["num_labels"] = 0;
  EXPECT_THROW(ModelConfig::from_json(j), ConfigError);
  auto m = make_model(cfg);
  auto* h = dynamic_cast<HybridModel*>(m.get());
  ASSERT_NE(h, nullptr);
  for (auto* p : h->transformer_params()) EXPECT_TRUE(p->frozen);
}
