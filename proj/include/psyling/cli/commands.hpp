#pragma once

// Batch commands behind the `psyling` executable. Each takes a parsed run
// configuration, writes its artifacts under `out`, and reports failures as
// psyling::Error so the caller can map them to exit codes.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "psyling/annotation.hpp"
#include "psyling/corpus.hpp"
#include "psyling/evaluation/report.hpp"
#include "psyling/evaluation/transfer.hpp"
#include "psyling/features/contour.hpp"
#include "psyling/features/contour_io.hpp"
#include "psyling/features/manifest.hpp"
#include "psyling/features/resources.hpp"
#include "psyling/models/embeddings.hpp"
#include "psyling/nn/checkpoint.hpp"

namespace psyling::cli {

namespace fs = std::filesystem;
using nlohmann::json;

/// Exit code for a run that completed but missed a configured threshold.
inline constexpr int kThresholdMissed = 1;

struct RunContext {
  json config = json::object();
  fs::path base_dir = ".";  // relative paths in the config resolve against this
  std::optional<std::uint64_t> seed;
  fs::path out = ".";
  std::ostream* log = nullptr;

  std::uint64_t resolved_seed() const { return seed ? *seed : config.value("seed", std::uint64_t{0}); }

  fs::path resolve(const std::string& p) const {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  }

  const json& section(const std::string& key) const {
    if (!config.contains(key)) throw ConfigError("config: missing '" + key + "'");
    return config[key];
  }

  fs::path path_of(const std::string& key) const {
    const auto& v = section(key);
    if (!v.is_string()) throw ConfigError("config: '" + key + "' must be a path string");
    return resolve(v.get<std::string>());
  }

  std::optional<fs::path> optional_path(const std::string& key) const {
    if (!config.contains(key) || config[key].is_null()) return std::nullopt;
    return path_of(key);
  }

  void note(const std::string& msg) const {
    if (log) *log << msg << '\n';
  }
};

inline RunContext load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  RunContext ctx;
  try {
    ctx.config = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "': " + e.what());
  }
  if (!ctx.config.is_object()) throw ConfigError("config '" + path.string() + "' must be a JSON object");
  ctx.base_dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
  return ctx;
}

// ---- provenance -------------------------------------------------------------

/// FNV-1a over the file's bytes; directories hash their regular files in
/// name order, path-relative name included.
inline std::string content_hash(const fs::path& p) {
  auto file_bytes = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw LoadError("cannot read '" + f.string() + "'");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  if (!fs::exists(p)) throw LoadError("input '" + p.string() + "' does not exist");
  if (!fs::is_directory(p)) return detail::hex64(detail::fnv1a64(file_bytes(p)));
  std::vector<fs::path> files;
  for (const auto& e : fs::recursive_directory_iterator(p))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const auto& f : files) {
    h = detail::fnv1a64(fs::relative(f, p).generic_string(), h);
    h = detail::fnv1a64(file_bytes(f), h);
  }
  return detail::hex64(h);
}

struct Provenance {
  std::string command;
  json config;
  std::uint64_t seed = 0;
  json inputs = json::object();

  void add(const std::string& role, const fs::path& p) { inputs[role] = {{"path", p.string()}, {"hash", content_hash(p)}}; }

  json to_json() const { return {{"command", command}, {"config", config}, {"seed", seed}, {"inputs", inputs}}; }
};

inline void write_json(const fs::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw LoadError("cannot write '" + p.string() + "'");
  out << j.dump(2) << '\n';
}

inline void write_text(const fs::path& p, const std::string& s) {
  std::ofstream out(p);
  if (!out) throw LoadError("cannot write '" + p.string() + "'");
  out << s;
}

// ---- datasets and inputs -----------------------------------------------------

inline json taxonomy_to_json(const Taxonomy& t) {
  return {{"name", t.name()}, {"labels", t.labels()}, {"multi_label", t.multi_label()}};
}

inline Taxonomy taxonomy_from_json(const json& j) {
  return Taxonomy(j.at("name").get<std::string>(), j.at("labels").get<std::vector<std::string>>(),
                  j.at("multi_label").get<bool>());
}

inline Taxonomy named_taxonomy(const std::string& name) {
  if (name == "ekman") return taxonomies::ekman(true);
  if (name == "ekman-no-neutral") return taxonomies::ekman(false);
  if (name == "goemotions") return taxonomies::goemotions();
  if (name == "isear") return taxonomies::isear();
  for (const auto& id : taxonomies::unified_ids())
    if (name == id) return taxonomies::unified(id);
  throw ConfigError("unknown taxonomy '" + name + "'");
}

/// `{"format": goemotions|isear|unified, "path", "unified_id", "agreement",
///   "threshold", "mapping": {"table", "target"}}`
inline Dataset load_dataset(const RunContext& ctx, const json& d, Provenance* prov, const std::string& role) {
  const auto format = d.at("format").get<std::string>();
  const auto path = ctx.resolve(d.at("path").get<std::string>());
  if (prov) prov->add(role, path);
  Dataset ds;
  if (format == "goemotions")
    ds = load_goemotions(path.string(), d.value("agreement", true));
  else if (format == "isear")
    ds = load_isear(path.string());
  else if (format == "unified")
    ds = load_unified(path.string(), d.at("unified_id").get<std::string>(), d.value("threshold", 0.0));
  else
    throw ConfigError("unknown dataset format '" + format + "'");
  if (d.contains("mapping")) {
    const auto& m = d["mapping"];
    const auto table = ctx.resolve(m.at("table").get<std::string>());
    if (prov) prov->add(role + ".mapping", table);
    ds = map_taxonomy(ds, load_mapping(table.string()), named_taxonomy(m.at("target").get<std::string>()));
  }
  return ds;
}

/// Dataset examples joined with their precomputed inputs by id.
inline std::vector<Sample> join_inputs(const Dataset& ds, const ContourFile* contours, const EmbeddingFile* embeddings) {
  std::map<std::string, const Matrix*> c, e;
  if (contours) c = contours->by_id();
  if (embeddings) e = embeddings->by_id();
  std::vector<Sample> out;
  for (const auto& ex : ds.examples) {
    Sample s{ex.id, nullptr, nullptr, ex.labels};
    if (contours) {
      auto it = c.find(ex.id);
      if (it == c.end()) throw PairingError("no contour for example '" + ex.id + "'");
      s.contour = it->second;
    }
    if (embeddings) {
      auto it = e.find(ex.id);
      if (it == e.end()) throw PairingError("no embedding record for example '" + ex.id + "'");
      s.embedding = it->second;
    }
    out.push_back(std::move(s));
  }
  return out;
}

struct Inputs {
  std::optional<ContourFile> contours;
  std::optional<EmbeddingFile> embeddings;
};

inline Inputs load_inputs(const RunContext& ctx, const ModelConfig& model, Provenance& prov) {
  Inputs in;
  if (model.architecture != Architecture::transformer) {
    const auto p = ctx.path_of("contours");
    prov.add("contours", p);
    in.contours = read_contours(p.string());
    if (in.contours->feature_count != model.psyling.input_dim)
      throw ShapeError("contour file has " + std::to_string(in.contours->feature_count) +
                       " features, model expects " + std::to_string(model.psyling.input_dim));
    if (ctx.config.contains("manifest")) {
      const auto manifest = FeatureManifest::load(ctx.path_of("manifest").string());
      if (manifest.hash() != in.contours->manifest_hash)
        throw ConfigError("contour file was extracted with manifest " + detail::hex64(in.contours->manifest_hash) +
                          ", config names manifest " + detail::hex64(manifest.hash()));
    }
  }
  if (model.architecture != Architecture::psyling) {
    const auto p = ctx.path_of("embeddings");
    prov.add("embeddings", p);
    in.embeddings = read_embeddings(p.string());
  }
  return in;
}

// ---- checkpoints -------------------------------------------------------------

inline constexpr const char* kStdMean = "standardizer.mean";
inline constexpr const char* kStdDev = "standardizer.std";

struct LoadedModel {
  std::unique_ptr<Model> model;
  Taxonomy taxonomy;
  std::optional<Standardizer> standardizer;
  TrainConfig train;
  std::uint64_t manifest_hash = 0;
  json config;
};

inline nn::Checkpoint make_model_checkpoint(Model& m, const Taxonomy& tax, const std::optional<Standardizer>& z,
                                           const TrainConfig& tc, std::uint64_t manifest_hash, const json& run) {
  auto ckpt = nn::make_checkpoint(m.params(), manifest_hash,
                                  {{"model", m.config().to_json()},
                                   {"train", tc.to_json()},
                                   {"taxonomy", taxonomy_to_json(tax)},
                                   {"run", run}});
  if (z) {
    ckpt.tensors.emplace_back(kStdMean, Matrix(1, z->mean().size(), z->mean()));
    ckpt.tensors.emplace_back(kStdDev, Matrix(1, z->stddev().size(), z->stddev()));
  }
  return ckpt;
}

inline LoadedModel load_model(const fs::path& path) {
  const auto ckpt = nn::read_checkpoint(path.string());
  LoadedModel lm;
  try {
    auto cfg = ModelConfig::from_json(ckpt.config.at("model"));
    lm.model = make_model(cfg);
    lm.taxonomy = taxonomy_from_json(ckpt.config.at("taxonomy"));
    lm.train = TrainConfig::from_json(ckpt.config.value("train", json::object()));
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": checkpoint config: " + e.what());
  }
  if (lm.taxonomy.size() != lm.model->num_labels())
    throw FormatError(path.string() + ": taxonomy size disagrees with the output layer");
  nn::load_parameters(ckpt, lm.model->params());
  const Matrix* mean = ckpt.tensor(kStdMean);
  const Matrix* sd = ckpt.tensor(kStdDev);
  if (mean && sd) lm.standardizer = Standardizer(mean->data(), sd->data());
  lm.manifest_hash = ckpt.manifest_hash;
  lm.config = ckpt.config;
  return lm;
}

// ---- commands ----------------------------------------------------------------

/// Config: dataset, manifest, resources, optional window (1) and
/// annotations (directory of `<id>.conll` files; other texts use the
/// built-in annotator). Writes contours.psyc1 and extract.json.
inline int cmd_extract(const RunContext& ctx) {
  Provenance prov{"extract", ctx.config, ctx.resolved_seed(), json::object()};
  const auto ds = load_dataset(ctx, ctx.section("dataset"), &prov, "dataset");
  const auto manifest_path = ctx.path_of("manifest"), resources_path = ctx.path_of("resources");
  prov.add("manifest", manifest_path);
  prov.add("resources", resources_path.parent_path());
  const auto manifest = FeatureManifest::load(manifest_path.string());
  const auto res = load_resources(resources_path.string());
  for (const auto& w : res.warnings) ctx.note("warning: " + w);
  const std::size_t window = ctx.config.value("window", std::size_t{1});
  const auto annotations = ctx.optional_path("annotations");
  if (annotations) prov.add("annotations", *annotations);

  ContourFile file;
  file.feature_count = static_cast<std::uint32_t>(manifest.size());
  file.manifest_hash = manifest.hash();
  std::size_t ingested = 0;
  for (const auto& ex : ds.examples) {
    try {
      AnnotatedDocument doc;
      if (annotations && fs::exists(*annotations / (ex.id + ".conll"))) {
        doc = ingest_annotated((*annotations / (ex.id + ".conll")).string());
        doc.id = ex.id;
        ++ingested;
      } else {
        doc = annotate_basic(ex.text, ex.id);
      }
      file.records.push_back({ex.id, contour(doc, manifest, res, window).to_matrix()});
    } catch (const NumericalError& e) {
      throw NumericalError("example '" + ex.id + "': " + e.what());
    } catch (const ConfigError&) {
      throw;
    } catch (const DataError& e) {
      throw DataError("example '" + ex.id + "': " + e.what());
    }
  }
  fs::create_directories(ctx.out);
  const auto out_path = ctx.out / "contours.psyc1";
  write_contours(out_path.string(), file);
  write_json(ctx.out / "extract.json", {{"provenance", prov.to_json()},
                                        {"records", file.records.size()},
                                        {"ingested_annotations", ingested},
                                        {"feature_count", file.feature_count},
                                        {"manifest_hash", detail::hex64(file.manifest_hash)},
                                        {"output", {{"path", out_path.string()}, {"hash", content_hash(out_path)}}}});
  ctx.note("extract: " + std::to_string(file.records.size()) + " contours -> " + out_path.string());
  return 0;
}

namespace detail_cmd {

inline ModelConfig model_config_for(const RunContext& ctx, const Taxonomy& tax, std::uint64_t seed) {
  json m = ctx.config.value("model", json::object());
  if (!m.contains("num_labels")) m["num_labels"] = tax.size();
  auto cfg = ModelConfig::from_json(m);
  if (cfg.num_labels != tax.size())
    throw ConfigError("model num_labels " + std::to_string(cfg.num_labels) + " differs from taxonomy size " +
                      std::to_string(tax.size()));
  cfg.seed = seed;
  return cfg;
}

inline TrainConfig train_config_for(const RunContext& ctx, const Taxonomy& tax, std::uint64_t seed) {
  auto tc = TrainConfig::from_json(ctx.config.value("train", json::object()));
  tc.seed = seed;
  tc.single_label = !tax.multi_label();
  return tc;
}

inline std::vector<Sample> subset(const std::vector<Sample>& all, const Dataset& part) {
  std::map<std::string, const Sample*> by_id;
  for (const auto& s : all) by_id[s.id] = &s;
  std::vector<Sample> out;
  for (const auto& ex : part.examples) out.push_back(*by_id.at(ex.id));
  return out;
}

inline json thresholds_check(const json& acceptance, const EvalReport& r, bool& ok) {
  json out = json::array();
  const json metrics = r.to_json();
  for (const auto& [key, want] : acceptance.items()) {
    double got = 0;
    if (key == "macro_f1") got = r.macro_f1;
    else if (key == "micro_f1") got = r.micro_f1;
    else if (key == "accuracy") got = r.accuracy;
    else throw ConfigError("unknown acceptance metric '" + key + "'");
    const bool pass = got >= want.get<double>();
    ok = ok && pass;
    out.push_back({{"metric", key}, {"threshold", want}, {"value", got}, {"pass", pass}});
  }
  return out;
}

}  // namespace detail_cmd

/// Config: dataset, contours and/or embeddings, model, train, split
/// ({train, dev, test}), optional cv. Writes model.psyn1, train_log.jsonl,
/// test_report.json, train.json and, with cv, cv_report.json.
inline int cmd_train(const RunContext& ctx) {
  const auto seed = ctx.resolved_seed();
  Provenance prov{"train", ctx.config, seed, json::object()};
  const auto ds = load_dataset(ctx, ctx.section("dataset"), &prov, "dataset");
  const auto mcfg = detail_cmd::model_config_for(ctx, ds.taxonomy, seed);
  const auto tc = detail_cmd::train_config_for(ctx, ds.taxonomy, seed);
  const auto inputs = load_inputs(ctx, mcfg, prov);
  const ContourFile* cf = inputs.contours ? &*inputs.contours : nullptr;
  const EmbeddingFile* ef = inputs.embeddings ? &*inputs.embeddings : nullptr;
  const auto all = join_inputs(ds, cf, ef);

  const json sj = ctx.config.value("split", json::object());
  const SplitRatios ratios{sj.value("train", 0.8), sj.value("dev", 0.1), sj.value("test", 0.1)};
  const auto parts = split(ds, ratios, seed);
  const auto train_raw = detail_cmd::subset(all, parts.train), dev_raw = detail_cmd::subset(all, parts.dev),
             test_raw = detail_cmd::subset(all, parts.test);

  std::optional<Standardizer> z;
  if (cf) z = fit_standardizer(train_raw);
  StandardizedSamples tr(train_raw, z ? &*z : nullptr), dev(dev_raw, z ? &*z : nullptr),
      test(test_raw, z ? &*z : nullptr);

  fs::create_directories(ctx.out);
  std::ofstream log(ctx.out / "train_log.jsonl");
  auto model = make_model(mcfg);
  const auto result = train(*model, tr.samples(), dev.samples(), tc, &log);

  const auto run = prov.to_json();
  nn::write_checkpoint((ctx.out / "model.psyn1").string(),
                       make_model_checkpoint(*model, ds.taxonomy, z, tc, cf ? cf->manifest_hash : 0, run));

  json summary = {{"provenance", run},
                  {"epochs", result.epochs.size()},
                  {"best_epoch", result.best_epoch},
                  {"final_train_loss", result.final_train_loss},
                  {"split", {{"train", train_raw.size()}, {"dev", dev_raw.size()}, {"test", test_raw.size()}}}};
  summary["best_dev_macro_f1"] = result.best_dev_macro_f1 ? json(*result.best_dev_macro_f1) : json(nullptr);
  if (!test_raw.empty()) {
    auto rep = evaluate(*model, test.samples(), ds.taxonomy.labels(), tc.threshold, tc.single_label);
    rep.metadata = {{"name", architecture_name(mcfg.architecture)}, {"part", "test"}};
    write_json(ctx.out / "test_report.json", {{"provenance", run}, {"report", rep.to_json()}});
    summary["test_macro_f1"] = rep.macro_f1;
  }
  if (ctx.config.contains("cv")) {
    const auto cv = CvConfig::from_json(ctx.config["cv"]);
    auto cv_cfg = cv;
    cv_cfg.seed = seed;
    auto r = cross_validate(all, ds.taxonomy.labels(), fresh_models(mcfg), tc, cv_cfg, nullptr, nullptr);
    r.mean.metadata["name"] = architecture_name(mcfg.architecture);
    json folds = json::array();
    for (const auto& f : r.folds) folds.push_back(f.to_json());
    write_json(ctx.out / "cv_report.json", {{"provenance", run}, {"mean", r.mean.to_json()}, {"folds", folds}});
    summary["cv_macro_f1"] = r.mean.macro_f1;
  }
  write_json(ctx.out / "train.json", summary);
  ctx.note("train: best epoch " + std::to_string(result.best_epoch) + ", final loss " +
           std::to_string(result.final_train_loss));
  return 0;
}

/// Config: checkpoint, dataset, contours and/or embeddings, optional eval
/// ({exclude_zero_gold, threshold, acceptance: {metric: min}}). Writes
/// report.json, report.txt and predictions.jsonl. Returns kThresholdMissed
/// when an acceptance threshold is not met.
inline int cmd_eval(const RunContext& ctx) {
  Provenance prov{"eval", ctx.config, ctx.resolved_seed(), json::object()};
  const auto ckpt_path = ctx.path_of("checkpoint");
  prov.add("checkpoint", ckpt_path);
  auto lm = load_model(ckpt_path);
  const auto ds = load_dataset(ctx, ctx.section("dataset"), &prov, "dataset");
  if (ds.taxonomy.labels() != lm.taxonomy.labels())
    throw ConfigError("dataset taxonomy '" + ds.taxonomy.name() + "' does not match the checkpoint's '" +
                      lm.taxonomy.name() + "'");
  const auto inputs = load_inputs(ctx, lm.model->config(), prov);
  if (inputs.contours && inputs.contours->manifest_hash != lm.manifest_hash)
    throw ConfigError("checkpoint manifest hash " + detail::hex64(lm.manifest_hash) +
                      " does not match contour file hash " + detail::hex64(inputs.contours->manifest_hash));
  const auto raw = join_inputs(ds, inputs.contours ? &*inputs.contours : nullptr,
                               inputs.embeddings ? &*inputs.embeddings : nullptr);
  StandardizedSamples samples(raw, lm.standardizer ? &*lm.standardizer : nullptr);

  const json ej = ctx.config.value("eval", json::object());
  const double threshold = ej.value("threshold", lm.train.threshold);
  const bool single = !lm.taxonomy.multi_label();
  const auto preds = predict(*lm.model, samples.samples(), threshold, single);
  std::vector<std::string> gold_ids, pred_ids;
  std::vector<std::vector<std::uint8_t>> gold, pred;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    gold_ids.push_back(raw[i].id);
    gold.push_back(raw[i].labels);
    pred_ids.push_back(preds[i].id);
    pred.push_back(preds[i].labels);
  }
  auto report = score(gold_ids, gold, pred_ids, pred, lm.taxonomy.labels(), ej.value("exclude_zero_gold", false));
  report.metadata = {{"name", architecture_name(lm.model->config().architecture)}, {"threshold", threshold}};

  fs::create_directories(ctx.out);
  std::ofstream pl(ctx.out / "predictions.jsonl");
  for (const auto& p : preds) pl << json{{"id", p.id}, {"labels", p.labels}, {"probabilities", p.probabilities}}.dump() << '\n';
  bool ok = true;
  json checks = detail_cmd::thresholds_check(ej.value("acceptance", json::object()), report, ok);
  const std::vector<EvalReport> one = {report};
  write_json(ctx.out / "report.json", {{"provenance", prov.to_json()}, {"report", report.to_json()}, {"acceptance", checks}});
  write_text(ctx.out / "report.txt", render_tables(one, {true, true, true}));
  ctx.note("eval: macro-F1 " + std::to_string(report.macro_f1) + ", micro-F1 " + std::to_string(report.micro_f1));
  if (!ok) {
    ctx.note("eval: acceptance threshold missed");
    return kThresholdMissed;
  }
  return 0;
}

/// Config: checkpoint (source), dataset (target), contours / embeddings for
/// the target, transfer ({mapping, settings, finetune, cv,
/// exclude_zero_gold}). Writes one transfer_<setting>.json per setting plus
/// transfer.json and transfer.txt.
inline int cmd_transfer(const RunContext& ctx) {
  const auto seed = ctx.resolved_seed();
  Provenance prov{"transfer", ctx.config, seed, json::object()};
  const auto& tj = ctx.section("transfer");
  if (!tj.contains("mapping")) throw ConfigError("transfer: missing 'mapping'");
  const auto ckpt_path = ctx.path_of("checkpoint");
  prov.add("checkpoint", ckpt_path);
  auto lm = load_model(ckpt_path);
  const auto mapping_path = ctx.resolve(tj["mapping"].get<std::string>());
  prov.add("mapping", mapping_path);
  const auto mapping = load_mapping(mapping_path.string());
  const auto ds = load_dataset(ctx, ctx.section("dataset"), &prov, "dataset");
  const auto inputs = load_inputs(ctx, lm.model->config(), prov);
  if (inputs.contours && inputs.contours->manifest_hash != lm.manifest_hash)
    throw ConfigError("checkpoint manifest hash " + detail::hex64(lm.manifest_hash) +
                      " does not match contour file hash " + detail::hex64(inputs.contours->manifest_hash));
  const auto raw = join_inputs(ds, inputs.contours ? &*inputs.contours : nullptr,
                               inputs.embeddings ? &*inputs.embeddings : nullptr);

  TransferOptions opts;
  opts.finetune = TrainConfig::from_json(tj.value("finetune", lm.train.to_json()));
  opts.finetune.seed = seed;
  opts.cv = CvConfig::from_json(tj.value("cv", json::object()));
  opts.cv.seed = seed;
  opts.exclude_zero_gold = tj.value("exclude_zero_gold", false);

  std::vector<TransferSetting> settings;
  if (tj.contains("settings")) {
    for (const auto& s : tj["settings"])
      settings.push_back({s.at("finetune").get<bool>(), s.at("include_neutral").get<bool>()});
  } else {
    settings = TransferSetting::all();
  }

  TransferSource source{lm.model.get(), lm.taxonomy, lm.standardizer ? &*lm.standardizer : nullptr};
  TransferTarget target{ds.taxonomy, raw};
  fs::create_directories(ctx.out);
  const auto run = prov.to_json();
  std::vector<EvalReport> reports;
  for (const auto& s : settings) {
    ctx.note("transfer: " + s.name());
    reports.push_back(transfer_run(source, target, s, mapping, opts));
    write_json(ctx.out / ("transfer_" + s.name() + ".json"), {{"provenance", run}, {"report", reports.back().to_json()}});
  }
  write_json(ctx.out / "transfer.json", {{"provenance", run}, {"reports", render_json(reports)}});
  write_text(ctx.out / "transfer.txt", render_tables(reports, {true, true, false}));
  return 0;
}

/// Prints a manifest summary; throws ConfigError if it does not validate.
inline int cmd_manifest(const fs::path& path, std::ostream& out) {
  const auto m = FeatureManifest::load(path.string());
  std::size_t invariant = 0;
  for (const auto& s : m.specs()) invariant += s.invariant;
  json j = {{"name", m.name()}, {"features", m.size()}, {"hash", detail::hex64(m.hash())}, {"invariant", invariant}};
  for (auto g : {FeatureGroup::syntax, FeatureGroup::lexical, FeatureGroup::readability, FeatureGroup::lexicon})
    j["groups"][group_name(g)] = m.group(g).size();
  out << j.dump(2) << '\n';
  return 0;
}

}  // namespace psyling::cli
