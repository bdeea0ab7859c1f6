// fusecluster
// SPDX-License-Identifier: Apache-2.0
//
// Exercises the shared library strictly through the C header: this
// translation unit must not include anything from src/.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "fusecluster.h"

namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path path;
  TmpDir() {
    path = fs::temp_directory_path() /
           ("fc_capi_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TmpDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::string str() const { return path.string(); }
};

struct Ctx {
  fc_context* p;
  Ctx() : p(fc_context_new()) { REQUIRE(p != nullptr); }
  ~Ctx() { fc_context_free(p); }
  operator fc_context*() { return p; }
};

void set_tiny_synth(fc_context* ctx) {
  CHECK(fc_config_set(ctx, "synth_num_classes", "3") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_images_per_class", "15") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_visual_words_per_class", "6") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_vocab_per_class", "8") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_text_universe", "24") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_caption_len", "4") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_draws_per_image", "30") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_labeled_fraction", "1.0") == FC_OK);
  CHECK(fc_config_set(ctx, "synth_visual_noise", "0.0") == FC_OK);
}

}  // namespace

TEST_CASE("version string looks like major.minor.patch") {
  const char* v = fc_version();
  REQUIRE(v != nullptr);
  int maj = -1, min = -1, pat = -1;
  CHECK(std::sscanf(v, "%d.%d.%d", &maj, &min, &pat) == 3);
  CHECK(maj >= 0);
}

TEST_CASE("config set and get round-trip, unset key is a config error") {
  Ctx ctx;
  CHECK(fc_config_set(ctx, "seed", "17") == FC_OK);
  char buf[32];
  REQUIRE(fc_config_get(ctx, "seed", buf, sizeof buf) == FC_OK);
  CHECK(std::strcmp(buf, "17") == 0);

  CHECK(fc_config_get(ctx, "variant", buf, sizeof buf) == FC_ERR_CONFIG);
  CHECK(std::strlen(fc_last_error(ctx)) > 0);

  // truncation is clean
  CHECK(fc_config_set(ctx, "manifest", "abcdefghij") == FC_OK);
  char tiny[4];
  REQUIRE(fc_config_get(ctx, "manifest", tiny, sizeof tiny) == FC_OK);
  CHECK(std::strcmp(tiny, "abc") == 0);
}

TEST_CASE("unknown config keys are rejected with a message") {
  Ctx ctx;
  CHECK(fc_config_set(ctx, "definitely_not_a_key", "1") == FC_ERR_CONFIG);
  std::string msg = fc_last_error(ctx);
  CHECK(msg.find("definitely_not_a_key") != std::string::npos);
}

TEST_CASE("loading a missing config file names the path in the error") {
  Ctx ctx;
  CHECK(fc_config_load(ctx, "/no/such/file.conf") == FC_ERR_CONFIG);
  std::string msg = fc_last_error(ctx);
  CHECK(msg.find("/no/such/file.conf") != std::string::npos);
}

TEST_CASE("config files load and later sets override them") {
  TmpDir t;
  auto conf = t.path / "p.conf";
  std::ofstream(conf) << "seed = 4\nvariant = A\n";
  Ctx ctx;
  REQUIRE(fc_config_load(ctx, conf.string().c_str()) == FC_OK);
  char buf[16];
  REQUIRE(fc_config_get(ctx, "variant", buf, sizeof buf) == FC_OK);
  CHECK(std::strcmp(buf, "A") == 0);
  CHECK(fc_config_set(ctx, "variant", "M") == FC_OK);
  REQUIRE(fc_config_get(ctx, "variant", buf, sizeof buf) == FC_OK);
  CHECK(std::strcmp(buf, "M") == 0);
}

TEST_CASE("synth then run through the C surface produces sane metrics") {
  TmpDir data, out;
  Ctx ctx;
  set_tiny_synth(ctx);
  CHECK(fc_config_set(ctx, "seed", "5") == FC_OK);
  REQUIRE(fc_synth(ctx, data.str().c_str()) == FC_OK);
  REQUIRE(fs::exists(data.path / "manifest.csv"));

  Ctx run;
  CHECK(fc_config_set(run, "manifest",
                      (data.path / "manifest.csv").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "captions_dir",
                      (data.path / "captions").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "woc_dir",
                      (data.path / "woc").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "histograms",
                      (data.path / "histograms.csv").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "seed", "5") == FC_OK);
  CHECK(fc_config_set(run, "nmf_k_star", "3") == FC_OK);
  CHECK(fc_config_set(run, "nmf_max_iter", "300") == FC_OK);
  CHECK(fc_config_set(run, "mc_trials", "0") == FC_OK);
  REQUIRE_MESSAGE(fc_run(run, out.str().c_str()) == FC_OK, fc_last_error(run));

  double purity = 0.0, zrand = 0.0;
  REQUIRE(fc_result_double(run, "purity", &purity) == FC_OK);
  REQUIRE(fc_result_double(run, "zrand", &zrand) == FC_OK);
  CHECK(purity == 1.0);
  CHECK(zrand > 0.0);
  CHECK(fc_result_double(run, "no_such_result", &purity) == FC_ERR_CONFIG);
}

TEST_CASE("run with no inputs configured fails with FC_ERR_CONFIG") {
  TmpDir out;
  Ctx ctx;
  CHECK(fc_run(ctx, out.str().c_str()) == FC_ERR_CONFIG);
  CHECK(std::strlen(fc_last_error(ctx)) > 0);
}

TEST_CASE("experiment through the C surface exposes per-variant aggregates") {
  TmpDir out;
  Ctx ctx;
  set_tiny_synth(ctx);
  CHECK(fc_config_set(ctx, "synth_seeds", "1,2") == FC_OK);
  CHECK(fc_config_set(ctx, "nmf_k_star", "3") == FC_OK);
  CHECK(fc_config_set(ctx, "nmf_max_iter", "250") == FC_OK);
  REQUIRE_MESSAGE(fc_experiment(ctx, out.str().c_str()) == FC_OK,
                  fc_last_error(ctx));

  for (const char* key : {"mean_purity.A", "mean_purity.AB", "mean_purity.M",
                          "mean_zrand.M", "std_purity.M"}) {
    double v = -1.0;
    CAPTURE(key);
    REQUIRE(fc_result_double(ctx, key, &v) == FC_OK);
    CHECK(v >= 0.0);
  }
  double mp = 0.0;
  REQUIRE(fc_result_double(ctx, "mean_purity.M", &mp) == FC_OK);
  CHECK(mp == 1.0);  // separable corpus
  REQUIRE(fs::exists(out.path / "report.json"));
  REQUIRE(fs::exists(out.path / "runs.csv"));
}

TEST_CASE("a failed command clears stale results") {
  TmpDir data, out;
  Ctx ctx;
  set_tiny_synth(ctx);
  CHECK(fc_config_set(ctx, "seed", "3") == FC_OK);
  REQUIRE(fc_synth(ctx, data.str().c_str()) == FC_OK);

  Ctx run;
  CHECK(fc_config_set(run, "manifest",
                      (data.path / "manifest.csv").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "captions_dir",
                      (data.path / "captions").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "woc_dir",
                      (data.path / "woc").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "histograms",
                      (data.path / "histograms.csv").string().c_str()) == FC_OK);
  CHECK(fc_config_set(run, "seed", "3") == FC_OK);
  CHECK(fc_config_set(run, "nmf_k_star", "3") == FC_OK);
  CHECK(fc_config_set(run, "mc_trials", "0") == FC_OK);
  REQUIRE(fc_run(run, out.str().c_str()) == FC_OK);
  double v;
  REQUIRE(fc_result_double(run, "purity", &v) == FC_OK);

  // Break the config, fail, and confirm the old purity is gone.
  CHECK(fc_config_set(run, "manifest", "/no/such/manifest.csv") == FC_OK);
  CHECK(fc_run(run, out.str().c_str()) != FC_OK);
  CHECK(fc_result_double(run, "purity", &v) == FC_ERR_CONFIG);
}

TEST_CASE("null and bad arguments are handled defensively") {
  Ctx ctx;
  CHECK(fc_config_set(ctx, nullptr, "x") == FC_ERR_CONFIG);
  CHECK(fc_config_set(ctx, "seed", nullptr) == FC_ERR_CONFIG);
  CHECK(fc_config_load(ctx, nullptr) == FC_ERR_CONFIG);
  double v;
  CHECK(fc_result_double(ctx, nullptr, &v) == FC_ERR_CONFIG);
  CHECK(fc_result_double(ctx, "purity", nullptr) == FC_ERR_CONFIG);
  CHECK(fc_run(ctx, nullptr) == FC_ERR_CONFIG);
  // Freeing NULL is a no-op, last_error on a fresh context is "".
  fc_context_free(nullptr);
  Ctx fresh;
  CHECK(std::strcmp(fc_last_error(fresh), "") == 0);
}
