// fusecluster
// SPDX-License-Identifier: Apache-2.0
//
// C surface over the pipeline commands. Each context owns a key=value
// configuration, the last error string, and the scalar results of the
// most recent command; nothing is shared between contexts.
#include "fusecluster.h"

#include <cstring>
#include <map>
#include <new>
#include <string>

#include "core/io.hpp"
#include "core/pipeline.hpp"

struct fc_context {
  std::map<std::string, std::string> config;
  mutable std::string last_error;  // const getters still report misses
  fc::Results results;
};

namespace {

constexpr const char* kVersion = "1.0.0";

// Keys holding filesystem paths, resolved against a loaded file's dir.
bool is_path_key(const std::string& k) {
  return k == "manifest" || k == "captions_dir" || k == "woc_dir" ||
         k == "stopwords" || k == "descriptors" ||
         k == "descriptors_sidecar" || k == "histograms";
}

fc_status cfg_err(const fc_context* ctx, const std::string& msg) {
  ctx->last_error = msg;
  return FC_ERR_CONFIG;
}

fc_status from_exception(fc_context* ctx) {
  try {
    throw;
  } catch (const fc::error& e) {
    ctx->last_error = e.what();
    return static_cast<fc_status>(fc::status_of(e.kind()));
  } catch (const std::exception& e) {
    ctx->last_error = e.what();
    return FC_ERR_INTERNAL;
  } catch (...) {
    ctx->last_error = "unknown failure";
    return FC_ERR_INTERNAL;
  }
}

// Commands share one guard: stale results are dropped up front so a
// failure never leaves the previous command's numbers behind.
template <typename Body>
fc_status run_command(fc_context* ctx, const char* out_dir, const char* name,
                      Body body) {
  if (!ctx) return FC_ERR_CONFIG;
  ctx->results.clear();
  ctx->last_error.clear();
  if (!out_dir)
    return cfg_err(ctx, std::string(name) + ": out_dir is NULL");
  try {
    body(std::string(out_dir));
    return FC_OK;
  } catch (...) {
    return from_exception(ctx);
  }
}

fc::PipelineConfig pipeline_config(const fc_context* ctx) {
  // Values from fc_config_set are stored verbatim; fc_config_load already
  // resolved its relative paths, so no base directory applies here.
  return fc::PipelineConfig::from_map(ctx->config, "");
}

}  // namespace

extern "C" {

const char* fc_version(void) { return kVersion; }

fc_context* fc_context_new(void) { return new (std::nothrow) fc_context(); }

void fc_context_free(fc_context* ctx) { delete ctx; }

const char* fc_last_error(const fc_context* ctx) {
  return ctx ? ctx->last_error.c_str() : "";
}

fc_status fc_config_load(fc_context* ctx, const char* path) {
  if (!ctx) return FC_ERR_CONFIG;
  ctx->last_error.clear();
  if (!path) return cfg_err(ctx, "fc_config_load: path is NULL");
  try {
    auto kv = fc::io::read_config(path);
    const std::string base = fc::io::parent_dir(path);
    for (const auto& [k, v] : kv) {
      if (!fc::is_known_config_key(k))
        fc::fail(fc::errkind::config,
                 "unknown config key '" + k + "' in " + path);
    }
    for (const auto& [k, v] : kv)
      ctx->config[k] = is_path_key(k) ? fc::io::resolve(base, v) : v;
    return FC_OK;
  } catch (...) {
    return from_exception(ctx);
  }
}

fc_status fc_config_set(fc_context* ctx, const char* key, const char* value) {
  if (!ctx) return FC_ERR_CONFIG;
  ctx->last_error.clear();
  if (!key) return cfg_err(ctx, "fc_config_set: key is NULL");
  if (!value) return cfg_err(ctx, "fc_config_set: value is NULL");
  if (!fc::is_known_config_key(key))
    return cfg_err(ctx, std::string("unknown config key '") + key + "'");
  ctx->config[key] = value;
  return FC_OK;
}

fc_status fc_config_get(const fc_context* ctx, const char* key, char* buf,
                        size_t buflen) {
  if (!ctx) return FC_ERR_CONFIG;
  ctx->last_error.clear();
  if (!key) return cfg_err(ctx, "fc_config_get: key is NULL");
  if (!buf || buflen == 0)
    return cfg_err(ctx, "fc_config_get: buffer is empty");
  auto it = ctx->config.find(key);
  if (it == ctx->config.end())
    return cfg_err(ctx, std::string("config key '") + key + "' is not set");
  std::size_t n = it->second.size();
  if (n > buflen - 1) n = buflen - 1;
  std::memcpy(buf, it->second.data(), n);
  buf[n] = '\0';
  return FC_OK;
}

fc_status fc_run(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_run", [&](const std::string& out) {
    fc::cmd_run(pipeline_config(ctx), out, &ctx->results);
  });
}

fc_status fc_build_vocab(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_build_vocab",
                     [&](const std::string& out) {
                       fc::cmd_vocab(pipeline_config(ctx), out);
                     });
}

fc_status fc_train_codebook(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_train_codebook",
                     [&](const std::string& out) {
                       fc::cmd_codebook(pipeline_config(ctx), out);
                     });
}

fc_status fc_quantize(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_quantize",
                     [&](const std::string& out) {
                       fc::cmd_quantize(pipeline_config(ctx), out);
                     });
}

fc_status fc_fuse(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_fuse", [&](const std::string& out) {
    fc::cmd_fuse(pipeline_config(ctx), out);
  });
}

fc_status fc_factorize(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_factorize",
                     [&](const std::string& out) {
                       fc::cmd_factorize(pipeline_config(ctx), out,
                                         &ctx->results);
                     });
}

fc_status fc_assign(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_assign", [&](const std::string& out) {
    fc::cmd_assign(pipeline_config(ctx), out);
  });
}

fc_status fc_evaluate(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_evaluate",
                     [&](const std::string& out) {
                       fc::cmd_eval(pipeline_config(ctx), out, &ctx->results);
                     });
}

fc_status fc_synth(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_synth", [&](const std::string& out) {
    const fc::SynthSpec spec = fc::ExperimentConfig::from_map(ctx->config).spec;
    const std::uint64_t seed = pipeline_config(ctx).seed;
    fc::cmd_synth(spec, seed, out);
  });
}

fc_status fc_experiment(fc_context* ctx, const char* out_dir) {
  return run_command(ctx, out_dir, "fc_experiment",
                     [&](const std::string& out) {
                       fc::cmd_experiment(
                           fc::ExperimentConfig::from_map(ctx->config), out,
                           &ctx->results);
                     });
}

fc_status fc_result_double(const fc_context* ctx, const char* key,
                           double* out) {
  if (!ctx) return FC_ERR_CONFIG;
  ctx->last_error.clear();
  if (!key) return cfg_err(ctx, "fc_result_double: key is NULL");
  if (!out) return cfg_err(ctx, "fc_result_double: out is NULL");
  auto it = ctx->results.find(key);
  if (it == ctx->results.end())
    return cfg_err(ctx, std::string("no result named '") + key + "'");
  *out = it->second;
  return FC_OK;
}

}  // extern "C"
