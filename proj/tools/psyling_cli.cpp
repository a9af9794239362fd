// psyling: extract | train | eval | transfer | manifest
//
// Exit codes: 0 success, 1 acceptance threshold missed, 2 config/usage
// error, 3 data error, 4 numerical abort.

#include <iostream>

#include "CLI11.hpp"
#include "psyling/cli/commands.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
};

void add_common(CLI::App* cmd, Common& c, bool config_required = true) {
  auto* opt = cmd->add_option("--config", c.config, "run configuration (JSON)");
  if (config_required) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "overrides the config seed");
  cmd->add_option("--out", c.out, "output directory");
}

psyling::cli::RunContext context(const Common& c) {
  auto ctx = psyling::cli::load_run_config(c.config);
  ctx.seed = c.seed;
  ctx.out = c.out;
  ctx.log = &std::cerr;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Psycholinguistic emotion features and models"};
  app.require_subcommand(1);

  Common extract_opts, train_opts, eval_opts, transfer_opts;
  auto* extract = app.add_subcommand("extract", "annotate a dataset and write feature contours");
  add_common(extract, extract_opts);
  auto* train = app.add_subcommand("train", "train a model and write a checkpoint");
  add_common(train, train_opts);
  auto* eval = app.add_subcommand("eval", "score a checkpoint on a dataset");
  add_common(eval, eval_opts);
  auto* transfer = app.add_subcommand("transfer", "run the transfer settings for a source checkpoint");
  add_common(transfer, transfer_opts);

  std::string manifest_path;
  bool validate_only = false;
  auto* manifest = app.add_subcommand("manifest", "print or validate a feature manifest");
  manifest->add_option("path", manifest_path, "manifest JSON")->required();
  manifest->add_flag("--validate", validate_only, "print nothing, only check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*extract) return psyling::cli::cmd_extract(context(extract_opts));
    if (*train) return psyling::cli::cmd_train(context(train_opts));
    if (*eval) return psyling::cli::cmd_eval(context(eval_opts));
    if (*transfer) return psyling::cli::cmd_transfer(context(transfer_opts));
    if (*manifest) {
      std::ostringstream sink;
      psyling::cli::cmd_manifest(manifest_path, validate_only ? sink : std::cout);
      return 0;
    }
  } catch (const psyling::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return psyling::exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 2;
}
