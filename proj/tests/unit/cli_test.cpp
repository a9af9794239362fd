#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

#include "psyling/cli/commands.hpp"
#include "support/synthetic.hpp"

using namespace psyling;
using nlohmann::json;
namespace fs = std::filesystem;
namespace synth = psyling::testing;

namespace {

const std::string kData = PSYLING_DATA_DIR;

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("psyling_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

cli::RunContext ctx_for(json config, const fs::path& dir, const std::string& out) {
  cli::RunContext c;
  c.config = std::move(config);
  c.base_dir = dir;
  c.out = dir / out;
  return c;
}

void write_set_contours(const fs::path& p, const synth::SyntheticSet& set, std::uint64_t manifest_hash) {
  ContourFile f;
  f.feature_count = 435;
  f.manifest_hash = manifest_hash;
  for (std::size_t i = 0; i < set.ids.size(); ++i) f.records.push_back({set.ids[i], set.contours[i]});
  write_contours(p.string(), f);
}

std::uint64_t real_manifest_hash() { return FeatureManifest::load(kData + "/manifest_435.json").hash(); }

/// GoEmotions-format source: row i is anger / joy / neutral (indices
/// 2 / 17 / 27) by i % 3, with a dense prototype per label.
void write_source(const fs::path& dir, std::size_t n) {
  const auto set = synth::prototype_set(n, 3, 11, 5, "s");
  const int goemo[] = {2, 17, 27};
  std::ofstream tsv(dir / "source.tsv");
  for (std::size_t i = 0; i < n; ++i) tsv << "text " << i << '\t' << goemo[i % 3] << '\t' << set.ids[i] << '\n';
  write_set_contours(dir / "source.psyc1", set, real_manifest_hash());
}

/// Single-label unified target (anger / joy) with prototypes unrelated to
/// the source ones.
void write_target(const fs::path& dir, std::size_t n) {
  const auto set = synth::prototype_set(n, 2, 12, 6, "t");
  std::ofstream jl(dir / "target.jsonl");
  for (std::size_t i = 0; i < n; ++i)
    jl << json{{"id", set.ids[i]}, {"text", "t"}, {"labels", {{i % 2 == 0 ? "anger" : "joy", 1}}}, {"source", "isear_ued"}}
              .dump()
       << '\n';
  write_set_contours(dir / "target.psyc1", set, real_manifest_hash());
  std::ofstream m(dir / "ekman_to_ued.tsv");
  for (const char* l : {"anger", "disgust", "fear", "joy", "sadness"}) m << l << '\t' << l << '\n';
  m << "surprise\tDROP\nneutral\tneutral\n";
}

json source_dataset() {
  return {{"format", "goemotions"},
          {"path", "source.tsv"},
          {"agreement", false},
          {"mapping", {{"table", kData + "/mappings/goemotions_ekman.tsv"}, {"target", "ekman"}}}};
}

json train_config(std::size_t epochs) {
  return {{"dataset", source_dataset()},
          {"contours", "source.psyc1"},
          {"manifest", kData + "/manifest_435.json"},
          {"train", {{"epochs", epochs}, {"lr", 1e-3}, {"weight_decay", 0.0}}},
          {"seed", 4}};
}

int run_binary(const std::string& args, const fs::path& stderr_file) {
  const std::string cmd = std::string(PSYLING_CLI_PATH) + " " + args + " 2> " + stderr_file.string() + " > /dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json isear_extract_config() {
  return {{"dataset", {{"format", "isear"}, {"path", std::string(PSYLING_TEST_DATA_DIR) + "/isear_7.csv"}}},
          {"manifest", kData + "/manifest_435.json"},
          {"resources", kData + "/resources/resources.json"}};
}

}  // namespace

TEST(CliExtract, WritesContoursWithManifestHashAndIsDeterministic) {
  auto dir = fresh_dir("extract");
  ASSERT_EQ(cli::cmd_extract(ctx_for(isear_extract_config(), dir, "a")), 0);
  ASSERT_EQ(cli::cmd_extract(ctx_for(isear_extract_config(), dir, "b")), 0);
  auto f = read_contours((dir / "a/contours.psyc1").string());
  EXPECT_EQ(f.records.size(), 7u);
  EXPECT_EQ(f.manifest_hash, real_manifest_hash());
  for (const auto& r : f.records) EXPECT_EQ(r.values.cols(), 435u);
  EXPECT_EQ(slurp(dir / "a/contours.psyc1"), slurp(dir / "b/contours.psyc1"));
  auto meta = json::parse(slurp(dir / "a/extract.json"));
  EXPECT_EQ(meta["provenance"]["config"], isear_extract_config());
  EXPECT_TRUE(meta["provenance"]["inputs"].contains("dataset"));
  EXPECT_EQ(meta["manifest_hash"], detail::hex64(real_manifest_hash()));
}

TEST(CliExtract, MissingLexiconFailsWithNamedResource) {
  auto dir = fresh_dir("missing_lex");
  fs::copy(kData + "/resources", dir / "resources", fs::copy_options::recursive);
  auto index = json::parse(slurp(dir / "resources/resources.json"));
  std::string victim;
  victim = index["lexicons"][0]["file"].get<std::string>();
  ASSERT_FALSE(victim.empty());
  fs::remove(dir / "resources" / victim);
  auto cfg = isear_extract_config();
  cfg["resources"] = (dir / "resources/resources.json").string();
  std::ofstream(dir / "cfg.json") << cfg.dump();
  const int rc = run_binary("extract --config " + (dir / "cfg.json").string() + " --out " + (dir / "o").string(),
                            dir / "err.txt");
  EXPECT_EQ(rc, 2);
  EXPECT_NE(slurp(dir / "err.txt").find(fs::path(victim).filename().string()), std::string::npos)
      << slurp(dir / "err.txt");
}

TEST(CliTrain, OverfitCheckpointReloadsAndPerfectEval) {
  auto dir = fresh_dir("train");
  write_source(dir, 30);
  ASSERT_EQ(cli::cmd_train(ctx_for(train_config(200), dir, "run")), 0);

  double best = 1.0;
  std::ifstream log(dir / "run/train_log.jsonl");
  std::string line;
  std::size_t epochs = 0;
  while (std::getline(log, line)) {
    best = std::min(best, json::parse(line)["train_loss"].get<double>());
    ++epochs;
  }
  EXPECT_EQ(epochs, 200u);
  EXPECT_LT(best, 0.05);

  auto lm = cli::load_model(dir / "run/model.psyn1");
  EXPECT_EQ(lm.taxonomy.name(), "ekman");
  EXPECT_TRUE(lm.standardizer.has_value());
  EXPECT_EQ(lm.manifest_hash, real_manifest_hash());
  EXPECT_EQ(lm.config["run"]["seed"], 4);

  // eval on the training data itself: separable, so every label decision is right
  json ecfg = {{"checkpoint", "run/model.psyn1"},
               {"dataset", source_dataset()},
               {"contours", "source.psyc1"},
               {"eval", {{"exclude_zero_gold", true}, {"acceptance", {{"macro_f1", 0.99}}}}}};
  EXPECT_EQ(cli::cmd_eval(ctx_for(ecfg, dir, "eval")), 0);
  auto report = json::parse(slurp(dir / "eval/report.json"));
  EXPECT_EQ(report["report"]["macro"]["f1"], 1.0);
  EXPECT_EQ(report["acceptance"][0]["pass"], true);
  std::ifstream golden(std::string(PSYLING_TEST_DATA_DIR) + "/golden_cli_eval.txt");
  ASSERT_TRUE(golden);
  std::stringstream want;
  want << golden.rdbuf();
  EXPECT_EQ(slurp(dir / "eval/report.txt"), want.str());

  ecfg["eval"]["acceptance"] = {{"macro_f1", 1.01}};
  EXPECT_EQ(cli::cmd_eval(ctx_for(ecfg, dir, "eval2")), cli::kThresholdMissed);
}

TEST(CliTrain, SeedDeterminesFinalLoss) {
  auto dir = fresh_dir("seed");
  write_source(dir, 15);
  auto cfg = train_config(3);
  ASSERT_EQ(cli::cmd_train(ctx_for(cfg, dir, "a")), 0);
  ASSERT_EQ(cli::cmd_train(ctx_for(cfg, dir, "b")), 0);
  auto c = ctx_for(cfg, dir, "c");
  c.seed = 99;
  ASSERT_EQ(cli::cmd_train(c), 0);
  auto loss = [&](const char* run) { return json::parse(slurp(dir / run / "train.json"))["final_train_loss"]; };
  EXPECT_EQ(loss("a"), loss("b"));
  EXPECT_NE(loss("a"), loss("c"));
  EXPECT_EQ(slurp(dir / "a/model.psyn1"), slurp(dir / "b/model.psyn1"));
}

TEST(CliEval, RejectsMismatchedManifestHash) {
  auto dir = fresh_dir("badhash");
  write_source(dir, 15);
  ASSERT_EQ(cli::cmd_train(ctx_for(train_config(1), dir, "run")), 0);
  auto f = read_contours((dir / "source.psyc1").string());
  f.manifest_hash ^= 1;
  write_contours((dir / "other.psyc1").string(), f);
  json ecfg = {{"checkpoint", "run/model.psyn1"}, {"dataset", source_dataset()}, {"contours", "other.psyc1"}};
  try {
    cli::cmd_eval(ctx_for(ecfg, dir, "eval"));
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("manifest hash"), std::string::npos);
  }
  std::ofstream(dir / "eval.json") << ecfg.dump();
  EXPECT_EQ(run_binary("eval --config " + (dir / "eval.json").string() + " --out " + (dir / "o").string(),
                       dir / "err.txt"),
            2);
}

TEST(CliTransfer, FourReportsAndFinetuneBeatsZeroShot) {
  auto dir = fresh_dir("transfer");
  write_source(dir, 30);
  write_target(dir, 24);
  ASSERT_EQ(cli::cmd_train(ctx_for(train_config(40), dir, "src")), 0);
  json tcfg = {{"checkpoint", "src/model.psyn1"},
               {"dataset", {{"format", "unified"}, {"unified_id", "isear_ued"}, {"path", "target.jsonl"}}},
               {"contours", "target.psyc1"},
               {"seed", 2},
               {"transfer",
                {{"mapping", "ekman_to_ued.tsv"},
                 {"finetune", {{"epochs", 30}, {"lr", 1e-3}, {"weight_decay", 0.0}}},
                 {"cv", {{"k", 3}, {"repeats", 1}}},
                 {"exclude_zero_gold", true}}}};
  ASSERT_EQ(cli::cmd_transfer(ctx_for(tcfg, dir, "out")), 0);
  std::map<std::string, double> f1;
  for (const auto& s : TransferSetting::all()) {
    auto j = json::parse(slurp(dir / "out" / ("transfer_" + s.name() + ".json")));
    f1[s.name()] = j["report"]["macro"]["f1"].get<double>();
    EXPECT_EQ(j["report"]["metadata"]["setting"], s.name());
    EXPECT_TRUE(j["provenance"]["inputs"].contains("mapping"));
  }
  EXPECT_EQ(f1.size(), 4u);
  EXPECT_GT(f1["finetune-neutral"], f1["zero-shot-neutral"]);
  EXPECT_GT(f1["finetune+neutral"], f1["zero-shot+neutral"]);
  EXPECT_TRUE(fs::exists(dir / "out/transfer.txt"));

  tcfg["transfer"].erase("mapping");
  EXPECT_THROW(cli::cmd_transfer(ctx_for(tcfg, dir, "out2")), ConfigError);
}

TEST(CliManifest, PrintsAndValidates) {
  std::ostringstream out;
  EXPECT_EQ(cli::cmd_manifest(kData + "/manifest_435.json", out), 0);
  auto j = json::parse(out.str());
  EXPECT_EQ(j["features"], 435);
  EXPECT_EQ(j["groups"]["lexicon"], 325);
  auto dir = fresh_dir("manifest");
  auto m = json::parse(slurp(kData + "/manifest_435.json"));
  m["features"].erase(0);
  std::ofstream(dir / "bad.json") << m.dump();
  EXPECT_THROW(cli::cmd_manifest(dir / "bad.json", out), ConfigError);
  EXPECT_EQ(run_binary("manifest --validate " + (dir / "bad.json").string(), dir / "err.txt"), 2);
  EXPECT_EQ(run_binary("manifest --validate " + kData + "/manifest_435.json", dir / "err.txt"), 0);
  EXPECT_EQ(run_binary("bogus", dir / "err.txt"), 2);
}
