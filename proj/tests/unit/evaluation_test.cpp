#include <gtest/gtest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "psyling/evaluation/report.hpp"
#include "psyling/evaluation/transfer.hpp"
#include "support/synthetic.hpp"

using namespace psyling;
namespace synth = psyling::testing;

namespace {

using Rows = std::vector<std::vector<std::uint8_t>>;

// Straight per-label recount, written without reference to score().
struct Brute {
  double macro_f1 = 0, micro_f1 = 0, accuracy = 0;
  std::vector<std::array<std::size_t, 4>> counts;
};

Brute brute_force(const Rows& g, const Rows& p, std::size_t k) {
  Brute b;
  b.counts.assign(k, {0, 0, 0, 0});
  std::size_t exact = 0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (g[n] == p[n]) ++exact;
    for (std::size_t i = 0; i < k; ++i) ++b.counts[i][(g[n][i] ? 0 : 2) + (p[n][i] ? 0 : 1)];
  }
  std::size_t TP = 0, FP = 0, FN = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const auto tp = b.counts[i][0], fn = b.counts[i][1], fp = b.counts[i][2];
    TP += tp, FP += fp, FN += fn;
    // F1 = 2tp / (2tp + fp + fn), 0 when undefined
    b.macro_f1 += (2 * tp + fp + fn) ? 2.0 * tp / static_cast<double>(2 * tp + fp + fn) : 0.0;
  }
  b.macro_f1 /= static_cast<double>(k);
  b.micro_f1 = (2 * TP + FP + FN) ? 2.0 * TP / static_cast<double>(2 * TP + FP + FN) : 0.0;
  b.accuracy = static_cast<double>(exact) / static_cast<double>(g.size());
  return b;
}

Rows random_rows(std::size_t n, std::size_t k, detail::Rng& rng) {
  Rows r(n, std::vector<std::uint8_t>(k));
  for (auto& row : r)
    for (auto& v : row) v = rng.uniform() < 0.4;
  return r;
}

}  // namespace

TEST(Score, MatchesBruteForceRecount) {
  detail::Rng rng(42);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.below(50), k = 1 + rng.below(5);
    auto g = random_rows(n, k, rng), p = random_rows(n, k, rng);
    auto r = score(g, p, synth::label_names(k));
    auto b = brute_force(g, p, k);
    for (std::size_t i = 0; i < k; ++i) {
      EXPECT_EQ(r.per_label[i].tp, b.counts[i][0]);
      EXPECT_EQ(r.per_label[i].fn, b.counts[i][1]);
      EXPECT_EQ(r.per_label[i].fp, b.counts[i][2]);
      EXPECT_EQ(r.per_label[i].tn, b.counts[i][3]);
    }
    EXPECT_NEAR(r.macro_f1, b.macro_f1, 1e-12);
    EXPECT_NEAR(r.micro_f1, b.micro_f1, 1e-12);
    EXPECT_EQ(r.accuracy, b.accuracy);
  }
}

TEST(Score, MacroIsUnweightedMean) {
  // label a: tp 2, fn 1 -> F1 0.8; label b: tp 3, fp 2, fn 2 -> F1 0.6
  Rows g = {{1, 1}, {1, 1}, {1, 1}, {0, 0}, {0, 0}, {0, 1}, {0, 1}};
  Rows p = {{1, 1}, {1, 1}, {0, 1}, {0, 1}, {0, 1}, {0, 0}, {0, 0}};
  auto r = score(g, p, {"a", "b"});
  EXPECT_NEAR(r.per_label[0].f1, 0.8, 1e-15);
  EXPECT_NEAR(r.per_label[1].f1, 0.6, 1e-15);
  EXPECT_NEAR(r.macro_f1, 0.7, 1e-15);
}

TEST(Score, HandFilledThreeLabelMicro) {
  Rows g = {{1, 0, 0}, {0, 1, 0}, {1, 0, 1}, {0, 0, 1}};
  Rows p = {{1, 1, 0}, {0, 0, 0}, {1, 0, 0}, {0, 0, 1}};
  auto r = score(g, p, {"a", "b", "c"});
  // pooled: tp 3, fp 1, fn 2
  EXPECT_DOUBLE_EQ(r.micro_precision, 3.0 / 4.0);
  EXPECT_DOUBLE_EQ(r.micro_recall, 3.0 / 5.0);
  EXPECT_DOUBLE_EQ(r.micro_f1, 2.0 * 3 / (2.0 * 3 + 1 + 2));
  EXPECT_DOUBLE_EQ(r.accuracy, 0.25);
}

TEST(Score, SingleLabelMicroIdentityAndPerfect) {
  detail::Rng rng(7);
  Rows g, p;
  for (int n = 0; n < 40; ++n) {
    std::vector<std::uint8_t> a(4, 0), b(4, 0);
    a[rng.below(4)] = 1;
    b[rng.below(4)] = 1;
    g.push_back(a);
    p.push_back(b);
  }
  auto r = score(g, p, synth::label_names(4));
  EXPECT_DOUBLE_EQ(r.micro_precision, r.micro_recall);
  EXPECT_DOUBLE_EQ(r.micro_f1, r.micro_precision);
  auto perfect = score(g, g, synth::label_names(4));
  EXPECT_EQ(perfect.macro_f1, 1.0);
  EXPECT_EQ(perfect.micro_f1, 1.0);
  EXPECT_EQ(perfect.accuracy, 1.0);
}

TEST(Score, ZeroGoldLabelsAndErrors) {
  Rows g = {{1, 0}, {1, 0}}, p = {{1, 0}, {1, 0}};
  EXPECT_EQ(score(g, p, {"a", "b"}).macro_f1, 0.5);
  EXPECT_EQ(score(g, p, {"a", "b"}, true).macro_f1, 1.0);
  Rows short_p = {{1, 0}};
  EXPECT_THROW(score(g, short_p, {"a", "b"}), PairingError);
  EXPECT_THROW(score(g, p, {"a"}), ShapeError);
  std::vector<std::string> ids = {"x", "y"}, other = {"x", "z"};
  EXPECT_NO_THROW(score(ids, g, ids, p, {"a", "b"}));
  EXPECT_THROW(score(ids, g, other, p, {"a", "b"}), PairingError);
}

TEST(Score, JsonRoundTrip) {
  detail::Rng rng(3);
  auto g = random_rows(10, 3, rng), p = random_rows(10, 3, rng);
  auto r = score(g, p, {"a", "b", "c"});
  r.metadata = {{"name", "x"}};
  EXPECT_EQ(EvalReport::from_json(r.to_json()).to_json(), r.to_json());
}

TEST(KFold, PlanProperties) {
  auto plan = repeated_kfold(100, 5, 5, 9);
  ASSERT_EQ(plan.size(), 25u);
  for (std::size_t r = 0; r < 5; ++r) {
    std::set<std::size_t> seen;
    for (std::size_t f = 0; f < 5; ++f) {
      const auto& p = plan[r * 5 + f];
      EXPECT_EQ(p.repeat, r);
      EXPECT_EQ(p.fold, f);
      EXPECT_EQ(p.test.size(), 20u);
      EXPECT_EQ(p.train.size(), 80u);
      std::set<std::size_t> tr(p.train.begin(), p.train.end());
      for (auto i : p.test) {
        EXPECT_EQ(tr.count(i), 0u);
        EXPECT_TRUE(seen.insert(i).second);
      }
    }
    EXPECT_EQ(seen.size(), 100u);
  }
  EXPECT_NE(plan[0].test, plan[5].test);  // reshuffled per repeat
  auto again = repeated_kfold(100, 5, 5, 9);
  for (std::size_t i = 0; i < 25; ++i) EXPECT_EQ(again[i].test, plan[i].test);
  EXPECT_NE(repeated_kfold(100, 5, 5, 10)[0].test, plan[0].test);

  auto uneven = repeated_kfold(12, 5, 1, 1);
  EXPECT_EQ(uneven[0].test.size(), 3u);
  EXPECT_EQ(uneven[1].test.size(), 3u);
  EXPECT_EQ(uneven[2].test.size(), 2u);
  EXPECT_THROW(repeated_kfold(10, 1), ConfigError);
  EXPECT_THROW(repeated_kfold(3, 5), DataError);
}

TEST(KFold, DevCarving) {
  std::vector<std::size_t> idx(20);
  std::iota(idx.begin(), idx.end(), 0);
  auto [fit, dev] = carve_dev(idx, 0.1, 3);
  EXPECT_EQ(fit.size(), 18u);
  EXPECT_EQ(dev.size(), 2u);
  auto [all, none] = carve_dev(idx, 0.0, 3);
  EXPECT_EQ(all.size(), 20u);
  EXPECT_TRUE(none.empty());
}

namespace {

ModelConfig tiny(std::size_t k, std::size_t dim = 12) {
  auto cfg = ModelConfig::defaults(Architecture::psyling, k);
  cfg.psyling = {dim, 4, 1, 8, 6, 6, 0.0};
  return cfg;
}

TrainConfig quick(std::size_t epochs = 30) {
  TrainConfig tc;
  tc.epochs = epochs;
  tc.batch_size = 4;
  tc.optimizer.lr = 1e-2;
  tc.optimizer.weight_decay = 0.0;
  return tc;
}

}  // namespace

TEST(CrossValidate, RunsPlanAndIsDeterministic) {
  auto set = synth::separable_set(30, 2, 5, 12);
  auto samples = set.samples();
  CvConfig cv;
  cv.k = 3;
  cv.repeats = 2;
  auto a = cross_validate(samples, set.labels, fresh_models(tiny(2)), quick(40), cv);
  auto b = cross_validate(samples, set.labels, fresh_models(tiny(2)), quick(40), cv);
  ASSERT_EQ(a.folds.size(), 6u);
  EXPECT_EQ(a.mean.to_json(), b.mean.to_json());
  EXPECT_EQ(a.mean.metadata["runs"], 6);
  EXPECT_GT(a.mean.macro_f1, 0.8);
}

namespace {

struct TransferFixture {
  Taxonomy source_tax{"src", {"anger", "joy", "neutral"}, true};
  Taxonomy target_tax{"tgt", {"anger", "joy"}, true};
  synth::SyntheticSet source, target;
  std::unique_ptr<Model> model;
  Standardizer z;

  // Source signals sit on features 0..2; the target plants its labels on
  // features 3..4, which the source model never learned to read.
  TransferFixture() {
    source = synth::separable_set(40, 3, 11, 12);
    target = synth::separable_set(40, 2, 12, 12, 3, 1.5, 0.5, 3);
    auto samples = source.samples();
    z = fit_standardizer(samples);
    StandardizedSamples zs(samples, &z);
    model = make_model(tiny(3));
    train(*model, zs.samples(), {}, quick(40));
  }

  TransferSource src() const { return {model.get(), source_tax, &z}; }
  TransferTarget tgt() const { return {target_tax, target.samples()}; }

  static LabelMapping mapping() {
    LabelMapping m;
    m.table = {{"anger", "anger"}, {"joy", "joy"}, {"neutral", "neutral"}};
    return m;
  }

  static TransferOptions options() {
    TransferOptions o;
    o.finetune = quick(40);
    o.cv.k = 4;
    o.cv.repeats = 1;
    return o;
  }
};

}  // namespace

TEST(Transfer, IdentityZeroShotEqualsPlainScore) {
  TransferFixture f;
  TransferTarget same{f.source_tax, f.source.samples()};
  auto r = transfer_run(f.src(), same, {false, true}, LabelMapping::identity(f.source_tax), f.options());

  StandardizedSamples zs(f.source.samples(), &f.z);
  auto plain = evaluate(*f.model, zs.samples(), f.source_tax.labels());
  EXPECT_EQ(r.macro_f1, plain.macro_f1);
  EXPECT_EQ(r.micro_f1, plain.micro_f1);
  EXPECT_EQ(r.per_label[2].tp, plain.per_label[2].tp);
}

TEST(Transfer, FourSettingsAndFinetuneBeatsZeroShot) {
  TransferFixture f;
  std::vector<EvalReport> reports;
  std::set<std::string> names;
  for (const auto& s : TransferSetting::all()) {
    reports.push_back(transfer_run(f.src(), f.tgt(), s, f.mapping(), f.options()));
    names.insert(reports.back().metadata["setting"].get<std::string>());
    EXPECT_EQ(reports.back().labels.size(), s.include_neutral ? 3u : 2u);
  }
  EXPECT_EQ(names.size(), 4u);
  EXPECT_GT(reports[2].macro_f1, reports[0].macro_f1);
  EXPECT_GT(reports[3].macro_f1, reports[1].macro_f1);
}

TEST(Transfer, Errors) {
  TransferFixture f;
  LabelMapping partial;
  partial.table = {{"anger", "anger"}, {"joy", "anger"}};
  try {
    transfer_run(f.src(), f.tgt(), {false, false}, partial, f.options());
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("joy"), std::string::npos);
  }
  LabelMapping missing;
  missing.table = {{"anger", "anger"}};
  EXPECT_THROW(transfer_run(f.src(), f.tgt(), {false, false}, missing, f.options()), ConfigError);

  TransferSource no_neutral{f.model.get(), Taxonomy("src", {"anger", "joy", "calm"}, true), &f.z};
  EXPECT_THROW(transfer_run(no_neutral, f.tgt(), {false, true}, f.mapping(), f.options()), ConfigError);
}

TEST(Transfer, NeutralAdjustment) {
  Taxonomy with{"t", {"joy", "neutral", "fear"}, true};
  TransferTarget t{with, {{"a", nullptr, nullptr, {1, 0, 0}}, {"b", nullptr, nullptr, {0, 1, 0}}}};
  auto removed = detail::adjust_target(t, false);
  EXPECT_EQ(removed.taxonomy.labels(), (std::vector<std::string>{"joy", "fear"}));
  ASSERT_EQ(removed.samples.size(), 1u);
  EXPECT_EQ(removed.samples[0].id, "a");
  EXPECT_EQ(removed.samples[0].labels, (std::vector<std::uint8_t>{1, 0}));
  Taxonomy without{"t", {"joy", "fear"}, true};
  TransferTarget u{without, {{"a", nullptr, nullptr, {1, 0}}}};
  auto added = detail::adjust_target(u, true);
  EXPECT_EQ(added.taxonomy.labels().back(), "neutral");
  EXPECT_EQ(added.samples[0].labels, (std::vector<std::uint8_t>{1, 0, 0}));
  EXPECT_EQ(project_probabilities({0.2, 0.7, 0.4}, {{0, 2}, {1}}), (std::vector<double>{0.4, 0.7}));
}

TEST(Report, GoldenTables) {
  Rows g = {{1, 0, 1}, {0, 1, 0}, {1, 1, 0}, {0, 0, 1}};
  Rows p1 = {{1, 0, 0}, {0, 1, 0}, {1, 0, 0}, {0, 1, 1}};
  Rows p2 = g;
  std::vector<EvalReport> rs = {score(g, p1, {"anger", "joy", "sadness"}), score(g, p2, {"anger", "joy", "sadness"})};
  rs[0].metadata = {{"name", "psyling"}};
  rs[1].metadata = {{"name", "hybrid"}};
  const auto text = render_tables(rs, {true, true, true});
  std::ifstream in(std::string(PSYLING_TEST_DATA_DIR) + "/golden_report.txt");
  ASSERT_TRUE(in) << "missing golden file";
  std::stringstream want;
  want << in.rdbuf();
  EXPECT_EQ(text, want.str()) << text;

  auto one = render_tables(std::span(rs).first(1));
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 4);  // title, header, rule, one row
  EXPECT_EQ(render_json(rs).size(), 2u);
  EXPECT_THROW(render_tables({}), UsageError);
}
