// fusecluster
// SPDX-License-Identifier: Apache-2.0
//
// Thin CLI over the C API. Exit codes mirror fc_status: 0 ok, 2 config,
// 3 data, 4 numeric, 1 internal. Scalar results go to stdout as
// "key = value" lines; diagnostics go to stderr.
#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "fusecluster.h"

namespace {

struct StageOpts {
  std::string config, out;
  std::string seed, variant, readout, k_star;
};

void add_common(CLI::App* cmd, StageOpts* o) {
  cmd->add_option("--config", o->config, "key = value config file")
      ->required();
  cmd->add_option("--out", o->out, "output directory")->required();
}

void add_overrides(CLI::App* cmd, StageOpts* o) {
  cmd->add_option("--seed", o->seed, "override the config seed");
  cmd->add_option("--variant", o->variant, "override the variant (A, AB, M)");
  cmd->add_option("--readout", o->readout,
                  "override the readout (argmax, kmeans)");
  cmd->add_option("--k-star", o->k_star, "override the NMF rank");
}

int run_stage(fc_status (*fn)(fc_context*, const char*), const StageOpts& o,
              const std::vector<std::string>& result_keys) {
  fc_context* ctx = fc_context_new();
  if (!ctx) {
    std::fprintf(stderr, "error: out of memory\n");
    return FC_ERR_INTERNAL;
  }
  fc_status rc = fc_config_load(ctx, o.config.c_str());
  auto override_key = [&](const char* key, const std::string& val) {
    if (rc == FC_OK && !val.empty()) rc = fc_config_set(ctx, key, val.c_str());
  };
  override_key("seed", o.seed);
  override_key("variant", o.variant);
  override_key("readout", o.readout);
  override_key("nmf_k_star", o.k_star);
  if (rc == FC_OK) rc = fn(ctx, o.out.c_str());
  if (rc != FC_OK) {
    std::fprintf(stderr, "error: %s\n", fc_last_error(ctx));
  } else {
    for (const auto& key : result_keys) {
      double v = 0.0;
      if (fc_result_double(ctx, key.c_str(), &v) == FC_OK)
        std::printf("%s = %.10g\n", key.c_str(), v);
    }
  }
  fc_context_free(ctx);
  return rc;
}

std::vector<std::string> metric_keys() {
  return {"purity",  "zrand",   "mu_p",   "sigma_p", "evaluated_docs",
          "mc_mean", "mc_std"};
}

std::vector<std::string> experiment_keys() {
  std::vector<std::string> keys;
  for (const char* v : {"A", "AB", "M"})
    for (const char* stat :
         {"mean_purity.", "std_purity.", "mean_zrand.", "std_zrand.", "runs."})
      keys.push_back(std::string(stat) + v);
  return keys;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fusecluster: multimodal document clustering via fused NMF"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fc_version());

  struct Sub {
    CLI::App* cmd;
    fc_status (*fn)(fc_context*, const char*);
    StageOpts opts;
    std::vector<std::string> keys;
  };
  std::vector<Sub> subs;
  subs.reserve(16);  // CLI11 keeps pointers into opts; no reallocation
  auto stage = [&](const char* name, const char* desc,
                   fc_status (*fn)(fc_context*, const char*), bool overrides,
                   std::vector<std::string> keys) {
    Sub s;
    s.cmd = app.add_subcommand(name, desc);
    s.fn = fn;
    s.keys = std::move(keys);
    subs.push_back(std::move(s));
    Sub& ref = subs.back();
    add_common(ref.cmd, &ref.opts);
    if (overrides) add_overrides(ref.cmd, &ref.opts);
  };

  auto run_keys = metric_keys();
  run_keys.insert(run_keys.end(),
                  {"nmf_final_cost", "nmf_iterations", "nmf_converged"});
  stage("run", "full pipeline: fuse, factorize, assign, evaluate", fc_run,
        true, run_keys);
  stage("vocab", "build the text vocabulary", fc_build_vocab, true, {});
  stage("codebook", "train the visual codebook from descriptors",
        fc_train_codebook, true, {});
  stage("quantize", "histogram descriptors over the codebook", fc_quantize,
        true, {});
  stage("fuse", "assemble and weight the fused matrix", fc_fuse, true, {});
  stage("factorize", "run NMF on the fused matrix", fc_factorize, true,
        {"final_cost", "iterations", "converged"});
  stage("assign", "read out document clusters from the factors", fc_assign,
        true, {});
  stage("eval", "score assignments against the manifest labels", fc_evaluate,
        true, metric_keys());
  stage("synth", "generate a synthetic corpus", fc_synth, true, {});
  stage("experiment", "multi-seed variant comparison on synthetic data",
        fc_experiment, false, experiment_keys());

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "%s\nSee 'fusecluster --help'.\n", e.what());
    return 2;
  }

  for (const auto& s : subs)
    if (s.cmd->parsed()) return run_stage(s.fn, s.opts, s.keys);
  std::fprintf(stderr, "no subcommand selected\n");
  return 2;
}
