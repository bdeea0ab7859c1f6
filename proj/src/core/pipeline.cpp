// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "cluster.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "text.hpp"
#include "visual.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace fc {

Variant parse_variant(const std::string& s) {
  if (s == "A") return Variant::A;
  if (s == "AB") return Variant::AB;
  if (s == "M") return Variant::M;
  fail(errkind::config, "unknown variant '" + s + "' (expected A, AB or M)");
}

Readout parse_readout(const std::string& s) {
  if (s == "argmax") return Readout::argmax;
  if (s == "kmeans") return Readout::kmeans;
  fail(errkind::config,
       "unknown readout '" + s + "' (expected argmax or kmeans)");
}

IdfMode parse_idf_mode(const std::string& s) {
  if (s == "all_rows") return IdfMode::all_rows;
  if (s == "captioned_plus_woc") return IdfMode::captioned_plus_woc;
  fail(errkind::config, "unknown idf_mode '" + s +
                            "' (expected all_rows or captioned_plus_woc)");
}

std::string to_string(Variant v) {
  switch (v) {
    case Variant::A: return "A";
    case Variant::AB: return "AB";
    case Variant::M: return "M";
  }
  return "?";
}

std::string to_string(Readout r) {
  return r == Readout::argmax ? "argmax" : "kmeans";
}

std::string to_string(IdfMode m) {
  return m == IdfMode::all_rows ? "all_rows" : "captioned_plus_woc";
}

// ---------------------------------------------------------------- config

namespace {

const char* const kPipelineKeys[] = {
    "manifest",        "captions_dir",     "woc_dir",
    "stopwords",       "descriptors",      "descriptors_sidecar",
    "histograms",      "descriptor_format", "codebook_K",
    "kmeans_max_iter", "kmeans_tol",       "nmf_k_star",
    "nmf_max_iter",    "nmf_rel_tol",      "seed",
    "idf_mode",        "readout",          "variant",
    "stopwords_enabled", "eval_include_woc", "mc_trials",
};

const char* const kSynthKeys[] = {
    "synth_num_classes",   "synth_images_per_class",
    "synth_visual_words_per_class", "synth_vocab_per_class",
    "synth_text_universe", "synth_caption_len",
    "synth_draws_per_image", "synth_woc_repeat",
    "synth_labeled_fraction", "synth_visual_noise",
    "synth_seeds",
};

bool is_synth_key(const std::string& key) {
  for (const char* k : kSynthKeys)
    if (key == k) return true;
  return false;
}

void reject_unknown_keys(const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv)
    if (!is_known_config_key(k))
      fail(errkind::config, "unknown config key '" + k + "'");
}

// Numeric parse failures become config errors naming the offending key.
template <typename Parse>
auto cfg_num(const std::map<std::string, std::string>& kv,
             const std::string& key, Parse parse)
    -> decltype(parse(std::string())) {
  try {
    return parse(kv.at(key));
  } catch (const error&) {
    fail(errkind::config,
         "config key '" + key + "': cannot parse '" + kv.at(key) + "'");
  }
}

bool cfg_bool(const std::map<std::string, std::string>& kv,
              const std::string& key) {
  const std::string& v = kv.at(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  fail(errkind::config,
       "config key '" + key + "': expected true or false, got '" + v + "'");
}

bool has(const std::map<std::string, std::string>& kv, const char* key) {
  return kv.find(key) != kv.end();
}

}  // namespace

bool is_known_config_key(const std::string& key) {
  for (const char* k : kPipelineKeys)
    if (key == k) return true;
  return is_synth_key(key);
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  return from_map(io::read_config(path), io::parent_dir(path));
}

PipelineConfig PipelineConfig::from_map(
    const std::map<std::string, std::string>& kv, const std::string& base_dir) {
  reject_unknown_keys(kv);
  PipelineConfig c;
  auto path_of = [&](const char* key, std::string* field) {
    if (has(kv, key)) *field = io::resolve(base_dir, kv.at(key));
  };
  path_of("manifest", &c.manifest);
  path_of("captions_dir", &c.captions_dir);
  path_of("woc_dir", &c.woc_dir);
  path_of("stopwords", &c.stopwords);
  path_of("descriptors", &c.descriptors);
  path_of("descriptors_sidecar", &c.descriptors_sidecar);
  path_of("histograms", &c.histograms);

  if (has(kv, "descriptor_format")) {
    c.descriptor_format = kv.at("descriptor_format");
    if (c.descriptor_format != "csv" && c.descriptor_format != "binary")
      fail(errkind::config, "descriptor_format must be csv or binary, got '" +
                                c.descriptor_format + "'");
  }
  if (has(kv, "codebook_K")) c.codebook_K = cfg_num(kv, "codebook_K", io::parse_int);
  if (has(kv, "kmeans_max_iter"))
    c.kmeans_max_iter = static_cast<int>(cfg_num(kv, "kmeans_max_iter", io::parse_int));
  if (has(kv, "kmeans_tol")) c.kmeans_tol = cfg_num(kv, "kmeans_tol", io::parse_double);
  if (has(kv, "nmf_k_star")) c.nmf.k_star = cfg_num(kv, "nmf_k_star", io::parse_int);
  if (has(kv, "nmf_max_iter"))
    c.nmf.max_iter = static_cast<int>(cfg_num(kv, "nmf_max_iter", io::parse_int));
  if (has(kv, "nmf_rel_tol")) c.nmf.rel_tol = cfg_num(kv, "nmf_rel_tol", io::parse_double);
  if (has(kv, "seed")) c.seed = cfg_num(kv, "seed", io::parse_uint);
  if (has(kv, "idf_mode")) c.idf_mode = parse_idf_mode(kv.at("idf_mode"));
  if (has(kv, "readout")) c.readout = parse_readout(kv.at("readout"));
  if (has(kv, "variant")) c.variant = parse_variant(kv.at("variant"));
  if (has(kv, "stopwords_enabled")) c.stopwords_enabled = cfg_bool(kv, "stopwords_enabled");
  if (has(kv, "eval_include_woc")) c.eval_include_woc = cfg_bool(kv, "eval_include_woc");
  if (has(kv, "mc_trials")) c.mc_trials = cfg_num(kv, "mc_trials", io::parse_int);

  if (c.codebook_K < 0) fail(errkind::config, "codebook_K must be >= 0");
  if (c.kmeans_max_iter < 1) fail(errkind::config, "kmeans_max_iter must be >= 1");
  if (c.kmeans_tol < 0) fail(errkind::config, "kmeans_tol must be >= 0");
  if (c.mc_trials < 0) fail(errkind::config, "mc_trials must be >= 0");
  return c;
}

std::map<std::string, std::string> PipelineConfig::echo() const {
  std::map<std::string, std::string> kv;
  kv["manifest"] = manifest;
  kv["captions_dir"] = captions_dir;
  kv["woc_dir"] = woc_dir;
  kv["stopwords"] = stopwords;
  kv["descriptors"] = descriptors;
  kv["descriptors_sidecar"] = descriptors_sidecar;
  kv["histograms"] = histograms;
  kv["descriptor_format"] = descriptor_format;
  kv["codebook_K"] = std::to_string(codebook_K);
  kv["kmeans_max_iter"] = std::to_string(kmeans_max_iter);
  kv["kmeans_tol"] = io::fmt17(kmeans_tol);
  kv["nmf_k_star"] = std::to_string(nmf.k_star);
  kv["nmf_max_iter"] = std::to_string(nmf.max_iter);
  kv["nmf_rel_tol"] = io::fmt17(nmf.rel_tol);
  kv["seed"] = std::to_string(seed);
  kv["idf_mode"] = to_string(idf_mode);
  kv["readout"] = to_string(readout);
  kv["variant"] = to_string(variant);
  kv["stopwords_enabled"] = stopwords_enabled ? "true" : "false";
  kv["eval_include_woc"] = eval_include_woc ? "true" : "false";
  kv["mc_trials"] = std::to_string(mc_trials);
  return kv;
}

void PipelineConfig::validate_paths() const {
  if (manifest.empty()) fail(errkind::config, "manifest is required");
  auto need = [](const char* what, const std::string& p) {
    if (!p.empty() && !io::path_exists(p))
      fail(errkind::config, std::string(what) + " not found: " + p);
  };
  need("manifest", manifest);
  need("histograms", histograms);
  need("stopwords", stopwords);
  need("descriptors", descriptors);
  need("descriptors_sidecar", descriptors_sidecar);
  // captions_dir / woc_dir are checked at use: variant A never reads them.
}

// ---------------------------------------------------------------- corpus

namespace {

// Caption fields: absolute paths as-is, fields with a '/' relative to the
// manifest, bare filenames relative to captions_dir (manifest dir if unset).
std::string resolve_caption(const std::string& manifest_dir,
                            const std::string& captions_dir,
                            const std::string& field) {
  if (fs::path(field).is_absolute()) return field;
  if (field.find('/') != std::string::npos)
    return io::resolve(manifest_dir, field);
  if (!captions_dir.empty()) return io::join_path(captions_dir, field);
  return io::resolve(manifest_dir, field);
}

GroundTruth truth_from_manifest(const std::vector<io::ManifestRow>& rows) {
  GroundTruth t;
  std::unordered_map<std::string, index_t> by_label;  // first-seen order
  for (const auto& row : rows) {
    if (row.label.empty()) continue;
    auto [it, fresh] = by_label.try_emplace(row.label, t.num_classes);
    if (fresh) ++t.num_classes;
    t.classes[row.doc_id] = it->second;
  }
  return t;
}

std::vector<TextDocument> load_woc_dir(
    const std::string& dir, const std::unordered_set<std::string>& stop) {
  if (dir.empty())
    fail(errkind::config, "woc_dir is required for variant M");
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    fail(errkind::bad_data, "WOC directory not found: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir, ec))
    if (e.is_regular_file() && e.path().extension() == ".txt")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::vector<TextDocument> docs;
  for (const auto& f : files) {
    TextDocument d;
    d.id = f.stem().string();
    d.tokens = tokenize(io::read_file(f.string()), stop);
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<DescriptorSet> load_descriptor_sets(
    const PipelineConfig& cfg, const std::vector<io::ManifestRow>& rows,
    const std::string& manifest_dir) {
  if (cfg.descriptor_format == "binary") {
    if (cfg.descriptors.empty() || cfg.descriptors_sidecar.empty())
      fail(errkind::config,
           "descriptor_format=binary needs descriptors and descriptors_sidecar");
    auto all = io::read_descriptors_binary(cfg.descriptors,
                                           cfg.descriptors_sidecar);
    std::unordered_map<std::string, std::size_t> by_id;
    for (std::size_t i = 0; i < all.size(); ++i) by_id[all[i].doc_id] = i;
    std::vector<DescriptorSet> sets;
    for (const auto& row : rows) {
      auto it = by_id.find(row.doc_id);
      if (it == by_id.end())
        fail(errkind::id_mismatch, "no descriptors for document " + row.doc_id);
      sets.push_back(all[it->second]);
    }
    return sets;
  }
  std::vector<DescriptorSet> sets;
  for (const auto& row : rows) {
    if (row.path.empty())
      fail(errkind::config, "manifest row " + row.doc_id +
                                " has no descriptor path and no histograms "
                                "file was configured");
    DescriptorSet s;
    s.doc_id = row.doc_id;
    s.descriptors = io::read_descriptor_csv(io::resolve(manifest_dir, row.path));
    sets.push_back(std::move(s));
  }
  return sets;
}

Eigen::MatrixXd pool_descriptors(const std::vector<DescriptorSet>& sets) {
  index_t total = 0, dim = 0;
  for (const auto& s : sets) {
    if (s.descriptors.rows() == 0) continue;
    if (dim == 0) dim = s.descriptors.cols();
    if (s.descriptors.cols() != dim)
      fail(errkind::dimension,
           "descriptor dimension mismatch at document " + s.doc_id);
    total += s.descriptors.rows();
  }
  Eigen::MatrixXd all(total, dim);
  index_t at = 0;
  for (const auto& s : sets) {
    if (s.descriptors.rows() == 0) continue;
    all.middleRows(at, s.descriptors.rows()) = s.descriptors;
    at += s.descriptors.rows();
  }
  return all;
}

Codebook train_codebook_for(const PipelineConfig& cfg,
                            const std::vector<DescriptorSet>& sets) {
  if (cfg.codebook_K < 1)
    fail(errkind::config, "codebook_K must be >= 1 to train a codebook");
  return train_codebook(pool_descriptors(sets), cfg.codebook_K,
                        derive_seed(cfg.seed, "codebook"), cfg.kmeans_max_iter,
                        cfg.kmeans_tol);
}

struct LoadedCorpus {
  Corpus c;
  bool trained = false;  // histograms derived from raw descriptors here
  Codebook codebook;
};

std::unordered_set<std::string> load_stopwords(const PipelineConfig& cfg) {
  if (cfg.stopwords_enabled && !cfg.stopwords.empty())
    return io::read_stopwords(cfg.stopwords);
  return {};
}

std::vector<TextDocument> load_captions(
    const PipelineConfig& cfg, const std::vector<io::ManifestRow>& rows,
    const std::string& manifest_dir,
    const std::unordered_set<std::string>& stop) {
  std::vector<TextDocument> captions;
  for (const auto& row : rows) {
    if (row.caption.empty()) continue;
    TextDocument d;
    d.id = row.doc_id;
    d.tokens = tokenize(
        io::read_file(resolve_caption(manifest_dir, cfg.captions_dir, row.caption)),
        stop);
    captions.push_back(std::move(d));
  }
  return captions;
}

// Everything cmd_run needs, in pipeline row order. Variant A skips all
// text inputs by construction (the isolation property in the tests).
LoadedCorpus load_corpus(const PipelineConfig& cfg) {
  cfg.validate_paths();
  auto rows = io::read_manifest(cfg.manifest);
  if (rows.empty())
    fail(errkind::empty_input, "manifest has no documents: " + cfg.manifest);
  const std::string mdir = io::parent_dir(cfg.manifest);

  LoadedCorpus lc;
  lc.c.truth = truth_from_manifest(rows);

  if (!cfg.histograms.empty()) {
    lc.c.A = io::read_histograms(cfg.histograms);
    if (lc.c.A.rows != static_cast<index_t>(rows.size()))
      fail(errkind::id_mismatch,
           "histograms row count does not match the manifest");
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (lc.c.A.row_ids[i] != rows[i].doc_id)
        fail(errkind::id_mismatch, "histogram row '" + lc.c.A.row_ids[i] +
                                       "' does not match manifest document '" +
                                       rows[i].doc_id + "'");
  } else {
    auto sets = load_descriptor_sets(cfg, rows, mdir);
    lc.codebook = train_codebook_for(cfg, sets);
    lc.trained = true;
    lc.c.A = quantize(sets, lc.codebook);
  }

  const auto stop = load_stopwords(cfg);
  if (cfg.variant != Variant::A)
    lc.c.captions = load_captions(cfg, rows, mdir, stop);
  if (cfg.variant == Variant::M) lc.c.woc = load_woc_dir(cfg.woc_dir, stop);

  reorder_captioned_first(lc.c.A, lc.c.captions);
  lc.c.m = static_cast<index_t>(lc.c.captions.size());
  lc.c.doc_ids = lc.c.A.row_ids;
  return lc;
}

Vocabulary vocab_for(Variant v, const std::vector<TextDocument>& captions,
                     const std::vector<TextDocument>& woc) {
  if (v == Variant::A) return {};
  if (v == Variant::AB) return build_vocabulary({}, captions);
  return build_vocabulary(woc, captions);
}

}  // namespace

void reorder_captioned_first(CountMatrix& A,
                             std::vector<TextDocument>& captions) {
  std::unordered_map<std::string, std::size_t> cap_ix;
  for (std::size_t i = 0; i < captions.size(); ++i) {
    if (!cap_ix.emplace(captions[i].id, i).second)
      fail(errkind::duplicate_id,
           "duplicate caption document id: " + captions[i].id);
  }
  if (static_cast<index_t>(A.row_ids.size()) != A.rows)
    fail(errkind::dimension, "reorder: matrix is missing row ids");

  std::vector<index_t> order;  // new row -> old row
  order.reserve(static_cast<std::size_t>(A.rows));
  std::vector<TextDocument> new_caps;
  for (index_t r = 0; r < A.rows; ++r) {
    auto it = cap_ix.find(A.row_ids[static_cast<std::size_t>(r)]);
    if (it == cap_ix.end()) continue;
    order.push_back(r);
    new_caps.push_back(captions[it->second]);
  }
  if (new_caps.size() != captions.size())
    fail(errkind::id_mismatch,
         "captioned documents missing from the histogram rows");
  for (index_t r = 0; r < A.rows; ++r)
    if (!cap_ix.count(A.row_ids[static_cast<std::size_t>(r)]))
      order.push_back(r);

  std::vector<index_t> inv(static_cast<std::size_t>(A.rows));
  for (std::size_t nr = 0; nr < order.size(); ++nr)
    inv[static_cast<std::size_t>(order[nr])] = static_cast<index_t>(nr);

  CountMatrix out(A.rows, A.cols);
  for (index_t nr = 0; nr < A.rows; ++nr)
    out.row_ids.push_back(
        A.row_ids[static_cast<std::size_t>(order[static_cast<std::size_t>(nr)])]);
  for (const auto& [rc, v] : A.entries)
    out.entries[{inv[static_cast<std::size_t>(rc.first)], rc.second}] = v;
  A = std::move(out);
  captions = std::move(new_caps);
}

FusedMatrix build_variant_matrix(Variant v, const CountMatrix& A, index_t m,
                                 const std::vector<TextDocument>& captions,
                                 const std::vector<TextDocument>& woc,
                                 IdfMode mode, bool with_idf) {
  if (v == Variant::A) {
    // Raw histograms only; IDF never applies to the unimodal baseline.
    CountMatrix B(A.rows, 0), C(0, 0);
    return assemble_fused(A, B, C, 0, Vocabulary{});
  }
  const std::vector<TextDocument> no_woc;
  const auto& w = v == Variant::M ? woc : no_woc;
  Vocabulary vocab = vocab_for(v, captions, w);
  if (static_cast<index_t>(captions.size()) != m)
    fail(errkind::dimension, "captions are not aligned with rows 0..m-1");

  CountMatrix Bm = count_features(captions, vocab);
  std::vector<std::string> uncaptioned(A.row_ids.begin() + m, A.row_ids.end());
  CountMatrix B = extend_text_matrix(Bm, A.rows, uncaptioned);
  CountMatrix C = count_features(w, vocab);
  FusedMatrix M = assemble_fused(A, B, C, m, vocab);
  if (!with_idf) return M;
  return apply_idf(M, compute_idf(M, mode));
}

// ---------------------------------------------------------------- scoring

MetricsBundle score_clustering(const Clustering& clustering,
                               const GroundTruth& truth,
                               std::int64_t mc_trials, std::uint64_t mc_seed) {
  if (clustering.doc_ids.size() != clustering.assignment.size())
    fail(errkind::dimension, "clustering ids and assignment differ in length");
  Clustering sub;
  sub.num_clusters = clustering.num_clusters;
  GroundTruth sub_truth;
  sub_truth.num_classes = truth.num_classes;
  for (std::size_t i = 0; i < clustering.doc_ids.size(); ++i) {
    auto it = truth.classes.find(clustering.doc_ids[i]);
    if (it == truth.classes.end()) continue;
    sub.doc_ids.push_back(clustering.doc_ids[i]);
    sub.assignment.push_back(clustering.assignment[i]);
    sub_truth.classes[it->first] = it->second;
  }
  if (sub.doc_ids.empty())
    fail(errkind::empty_input,
         "no evaluated document appears in the ground truth");

  MetricsBundle mb;
  mb.evaluated_docs = static_cast<index_t>(sub.doc_ids.size());
  mb.purity = purity(sub_truth, sub);
  auto zs = zrand_stats(sub_truth, sub);
  mb.zrand = zs.z;
  mb.mu_p = zs.mu_p;
  mb.sigma_p = zs.sigma_p;
  mb.pairs = zs.pairs;
  // The shuffle oracle needs enough trials to mean anything; below its
  // floor the check is skipped rather than run in a meaningless regime.
  if (mc_trials >= 1000) {
    auto mc = zrand_mc_oracle(sub_truth, sub, mc_trials, mc_seed);
    mb.mc_done = true;
    mb.mc_mean = mc.mean;
    mb.mc_std = mc.stddev;
  }
  return mb;
}

// ---------------------------------------------------------------- commands

namespace {

Clustering readout_clustering(const PipelineConfig& cfg, const FusedMatrix& M,
                              const Eigen::MatrixXd& U) {
  const index_t limit = cfg.eval_include_woc ? M.rows() : M.n;
  std::vector<index_t> eval_rows(static_cast<std::size_t>(limit));
  std::iota(eval_rows.begin(), eval_rows.end(), index_t{0});
  std::vector<std::string> ids(M.row_ids.begin(), M.row_ids.begin() + limit);
  if (cfg.readout == Readout::argmax) return assign_argmax(U, eval_rows, ids);
  return assign_kmeans(U, eval_rows, ids, cfg.nmf.k_star,
                       derive_seed(cfg.seed, "assign"), cfg.kmeans_max_iter,
                       cfg.kmeans_tol);
}

void write_metrics_json(const std::string& path, const PipelineConfig& cfg,
                        const MetricsBundle& mb) {
  json j;
  j["config"] = cfg.echo();
  json& m = j["metrics"];
  m["purity"] = mb.purity;
  m["zrand"] = mb.zrand;
  m["mu_p"] = mb.mu_p;
  m["sigma_p"] = mb.sigma_p;
  m["evaluated_docs"] = mb.evaluated_docs;
  m["pairs"] = {{"total", mb.pairs.total_pairs},
                {"same_in_clustering", mb.pairs.same_in_clustering},
                {"same_in_truth", mb.pairs.same_in_truth},
                {"same_in_both", mb.pairs.same_in_both}};
  if (mb.mc_done)
    m["mc"] = {{"trials", cfg.mc_trials},
               {"mean", mb.mc_mean},
               {"std", mb.mc_std}};
  io::write_file(path, j.dump(2) + "\n");
}

void fill_metric_results(Results* results, const MetricsBundle& mb) {
  if (!results) return;
  (*results)["purity"] = mb.purity;
  (*results)["zrand"] = mb.zrand;
  (*results)["mu_p"] = mb.mu_p;
  (*results)["sigma_p"] = mb.sigma_p;
  (*results)["evaluated_docs"] = static_cast<double>(mb.evaluated_docs);
  if (mb.mc_done) {
    (*results)["mc_mean"] = mb.mc_mean;
    (*results)["mc_std"] = mb.mc_std;
  }
}

GroundTruth truth_for(const PipelineConfig& cfg) {
  return truth_from_manifest(io::read_manifest(cfg.manifest));
}

std::string art(const std::string& out_dir, const char* name) {
  return io::join_path(out_dir, name);
}

// Stage commands read their predecessor's artifacts from out_dir.
void need_artifact(const std::string& path, const char* producer) {
  if (!io::path_exists(path))
    fail(errkind::config, std::string("missing ") + path + " (run the " +
                              producer + " stage first)");
}

}  // namespace

void cmd_run(const PipelineConfig& cfg, const std::string& out_dir,
             Results* results) {
  if (results) results->clear();
  io::ensure_dir(out_dir);
  LoadedCorpus lc = load_corpus(cfg);
  const Corpus& c = lc.c;
  if (lc.trained) {
    io::write_matrix_csv(art(out_dir, "codebook.csv"), lc.codebook.centroids);
    io::write_histograms(art(out_dir, "histograms.csv"), c.A);
  }
  io::write_vocab(art(out_dir, "vocab.txt"),
                  vocab_for(cfg.variant, c.captions, c.woc));

  FusedMatrix M = build_variant_matrix(cfg.variant, c.A, c.m, c.captions,
                                       c.woc, cfg.idf_mode, true);
  io::write_fused(art(out_dir, "fused.json"), art(out_dir, "fused.csv"), M);

  const std::uint64_t nmf_seed = derive_seed(cfg.seed, "nmf");
  FactorPair f = nmf_factorize(M.dense(), cfg.nmf.k_star, nmf_seed,
                               cfg.nmf.max_iter, cfg.nmf.rel_tol);
  io::write_matrix_csv(art(out_dir, "factors_u.csv"), f.U);
  io::write_matrix_csv(art(out_dir, "factors_v.csv"), f.V);
  io::write_nmf_report(art(out_dir, "nmf_report.json"), f, nmf_seed);

  Clustering cl = readout_clustering(cfg, M, f.U);
  io::write_assignments(art(out_dir, "assignments.csv"), cl);

  MetricsBundle mb = score_clustering(cl, c.truth, cfg.mc_trials,
                                      derive_seed(cfg.seed, "metrics.mc"));
  write_metrics_json(art(out_dir, "metrics.json"), cfg, mb);
  fill_metric_results(results, mb);
  if (results) {
    (*results)["nmf_final_cost"] = f.final_cost;
    (*results)["nmf_iterations"] = f.iterations;
    (*results)["nmf_converged"] = f.converged ? 1.0 : 0.0;
  }
}

void cmd_vocab(const PipelineConfig& cfg, const std::string& out_dir) {
  io::ensure_dir(out_dir);
  cfg.validate_paths();
  auto rows = io::read_manifest(cfg.manifest);
  const auto stop = load_stopwords(cfg);
  std::vector<TextDocument> captions, woc;
  if (cfg.variant != Variant::A)
    captions = load_captions(cfg, rows, io::parent_dir(cfg.manifest), stop);
  if (cfg.variant == Variant::M) woc = load_woc_dir(cfg.woc_dir, stop);
  io::write_vocab(art(out_dir, "vocab.txt"),
                  vocab_for(cfg.variant, captions, woc));
}

void cmd_codebook(const PipelineConfig& cfg, const std::string& out_dir) {
  io::ensure_dir(out_dir);
  cfg.validate_paths();
  auto rows = io::read_manifest(cfg.manifest);
  auto sets = load_descriptor_sets(cfg, rows, io::parent_dir(cfg.manifest));
  Codebook cb = train_codebook_for(cfg, sets);
  io::write_matrix_csv(art(out_dir, "codebook.csv"), cb.centroids);
}

void cmd_quantize(const PipelineConfig& cfg, const std::string& out_dir) {
  io::ensure_dir(out_dir);
  cfg.validate_paths();
  auto rows = io::read_manifest(cfg.manifest);
  auto sets = load_descriptor_sets(cfg, rows, io::parent_dir(cfg.manifest));
  Codebook cb;
  const std::string cb_path = art(out_dir, "codebook.csv");
  if (io::path_exists(cb_path)) {
    cb.centroids = io::read_matrix_csv(cb_path);
  } else {
    cb = train_codebook_for(cfg, sets);
  }
  io::write_histograms(art(out_dir, "histograms.csv"), quantize(sets, cb));
}

void cmd_fuse(const PipelineConfig& cfg, const std::string& out_dir) {
  io::ensure_dir(out_dir);
  // A staged quantize may have left histograms in out_dir; prefer the
  // configured file, then the staged one, then raw descriptors.
  PipelineConfig eff = cfg;
  const std::string staged = art(out_dir, "histograms.csv");
  if (eff.histograms.empty() && io::path_exists(staged)) eff.histograms = staged;
  LoadedCorpus lc = load_corpus(eff);
  FusedMatrix M = build_variant_matrix(cfg.variant, lc.c.A, lc.c.m,
                                       lc.c.captions, lc.c.woc, cfg.idf_mode,
                                       true);
  io::write_fused(art(out_dir, "fused.json"), art(out_dir, "fused.csv"), M);
}

void cmd_factorize(const PipelineConfig& cfg, const std::string& out_dir,
                   Results* results) {
  if (results) results->clear();
  io::ensure_dir(out_dir);
  need_artifact(art(out_dir, "fused.json"), "fuse");
  need_artifact(art(out_dir, "fused.csv"), "fuse");
  FusedMatrix M =
      io::read_fused(art(out_dir, "fused.json"), art(out_dir, "fused.csv"));
  const std::uint64_t nmf_seed = derive_seed(cfg.seed, "nmf");
  FactorPair f = nmf_factorize(M.dense(), cfg.nmf.k_star, nmf_seed,
                               cfg.nmf.max_iter, cfg.nmf.rel_tol);
  io::write_matrix_csv(art(out_dir, "factors_u.csv"), f.U);
  io::write_matrix_csv(art(out_dir, "factors_v.csv"), f.V);
  io::write_nmf_report(art(out_dir, "nmf_report.json"), f, nmf_seed);
  if (results) {
    (*results)["final_cost"] = f.final_cost;
    (*results)["iterations"] = f.iterations;
    (*results)["converged"] = f.converged ? 1.0 : 0.0;
  }
}

void cmd_assign(const PipelineConfig& cfg, const std::string& out_dir) {
  io::ensure_dir(out_dir);
  need_artifact(art(out_dir, "fused.json"), "fuse");
  need_artifact(art(out_dir, "factors_u.csv"), "factorize");
  FusedMatrix M =
      io::read_fused(art(out_dir, "fused.json"), art(out_dir, "fused.csv"));
  Eigen::MatrixXd U = io::read_matrix_csv(art(out_dir, "factors_u.csv"));
  if (U.rows() != M.rows())
    fail(errkind::dimension, "factors_u.csv row count does not match fused.json");
  io::write_assignments(art(out_dir, "assignments.csv"),
                        readout_clustering(cfg, M, U));
}

void cmd_eval(const PipelineConfig& cfg, const std::string& out_dir,
              Results* results) {
  if (results) results->clear();
  io::ensure_dir(out_dir);
  cfg.validate_paths();
  need_artifact(art(out_dir, "assignments.csv"), "assign");
  Clustering cl = io::read_assignments(art(out_dir, "assignments.csv"));
  MetricsBundle mb = score_clustering(cl, truth_for(cfg), cfg.mc_trials,
                                      derive_seed(cfg.seed, "metrics.mc"));
  write_metrics_json(art(out_dir, "metrics.json"), cfg, mb);
  fill_metric_results(results, mb);
}

// ---------------------------------------------------------------- synth

void cmd_synth(const SynthSpec& spec, std::uint64_t seed,
               const std::string& out_dir) {
  io::ensure_dir(out_dir);
  SynthData data = synth_generate(spec, seed);

  std::unordered_set<std::string> captioned;
  for (const auto& d : data.captions) captioned.insert(d.id);

  std::vector<io::ManifestRow> rows;
  for (const auto& id : data.histograms.row_ids) {
    io::ManifestRow r;
    r.doc_id = id;
    r.label = data.class_names[static_cast<std::size_t>(data.truth.classes.at(id))];
    if (captioned.count(id)) r.caption = id + ".txt";
    rows.push_back(std::move(r));
  }
  io::write_manifest(io::join_path(out_dir, "manifest.csv"), rows);
  io::write_histograms(io::join_path(out_dir, "histograms.csv"),
                       data.histograms);

  auto write_docs = [&](const char* sub, const std::vector<TextDocument>& docs) {
    const std::string dir = io::join_path(out_dir, sub);
    io::ensure_dir(dir);
    for (const auto& d : docs) {
      std::string body;
      for (std::size_t i = 0; i < d.tokens.size(); ++i) {
        if (i) body += ' ';
        body += d.tokens[i];
      }
      body += '\n';
      io::write_file(io::join_path(dir, d.id + ".txt"), body);
    }
  };
  write_docs("captions", data.captions);
  write_docs("woc", data.woc);
}

// ---------------------------------------------------------------- experiment

ExperimentConfig ExperimentConfig::from_map(
    const std::map<std::string, std::string>& kv) {
  reject_unknown_keys(kv);
  ExperimentConfig c;
  auto idx = [&](const char* key, index_t* field) {
    if (has(kv, key)) *field = cfg_num(kv, key, io::parse_int);
  };
  idx("synth_num_classes", &c.spec.num_classes);
  idx("synth_images_per_class", &c.spec.images_per_class);
  idx("synth_visual_words_per_class", &c.spec.visual_words_per_class);
  idx("synth_vocab_per_class", &c.spec.vocab_per_class);
  idx("synth_text_universe", &c.spec.text_universe);
  idx("synth_caption_len", &c.spec.caption_len);
  idx("synth_draws_per_image", &c.spec.draws_per_image);
  idx("synth_woc_repeat", &c.spec.woc_repeat);
  if (has(kv, "synth_labeled_fraction"))
    c.spec.labeled_fraction = cfg_num(kv, "synth_labeled_fraction", io::parse_double);
  if (has(kv, "synth_visual_noise"))
    c.spec.visual_noise = cfg_num(kv, "synth_visual_noise", io::parse_double);
  if (has(kv, "synth_seeds")) {
    c.spec.seeds.clear();
    std::stringstream ss(kv.at("synth_seeds"));
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::string t;
      for (char ch : item)
        if (!std::isspace(static_cast<unsigned char>(ch))) t += ch;
      if (t.empty()) continue;
      try {
        c.spec.seeds.push_back(io::parse_uint(t));
      } catch (const error&) {
        fail(errkind::config,
             "config key 'synth_seeds': cannot parse '" + item + "'");
      }
    }
    if (c.spec.seeds.empty())
      fail(errkind::config, "config key 'synth_seeds' lists no seeds");
  }
  if (has(kv, "nmf_k_star")) c.nmf.k_star = cfg_num(kv, "nmf_k_star", io::parse_int);
  if (has(kv, "nmf_max_iter"))
    c.nmf.max_iter = static_cast<int>(cfg_num(kv, "nmf_max_iter", io::parse_int));
  if (has(kv, "nmf_rel_tol"))
    c.nmf.rel_tol = cfg_num(kv, "nmf_rel_tol", io::parse_double);
  if (has(kv, "readout")) c.readout = parse_readout(kv.at("readout"));
  if (has(kv, "idf_mode")) c.idf_mode = parse_idf_mode(kv.at("idf_mode"));
  // Remaining pipeline keys (manifest, seed, ...) are legal here so one
  // config file can drive synth, run and experiment together.
  return c;
}

namespace {

ExperimentRun run_one(const ExperimentConfig& cfg, std::uint64_t seed,
                      Variant v) {
  SynthData data = synth_generate(cfg.spec, seed);
  CountMatrix A = data.histograms;
  auto captions = data.captions;
  reorder_captioned_first(A, captions);
  const auto m = static_cast<index_t>(captions.size());

  FusedMatrix M =
      build_variant_matrix(v, A, m, captions, data.woc, cfg.idf_mode, true);
  FactorPair f = nmf_factorize(M.dense(), cfg.nmf.k_star,
                               derive_seed(seed, "nmf"), cfg.nmf.max_iter,
                               cfg.nmf.rel_tol);
  std::vector<index_t> eval_rows(static_cast<std::size_t>(M.n));
  std::iota(eval_rows.begin(), eval_rows.end(), index_t{0});
  std::vector<std::string> ids(M.row_ids.begin(), M.row_ids.begin() + M.n);
  Clustering cl =
      cfg.readout == Readout::argmax
          ? assign_argmax(f.U, eval_rows, ids)
          : assign_kmeans(f.U, eval_rows, ids, cfg.nmf.k_star,
                          derive_seed(seed, "assign"), 100, 1e-9);
  MetricsBundle mb = score_clustering(cl, data.truth, 0, 0);

  ExperimentRun row;
  row.seed = seed;
  row.variant = v;
  row.purity = mb.purity;
  row.zrand = mb.zrand;
  return row;
}

Aggregate aggregate_rows(const std::vector<ExperimentRun>& rows, Variant v) {
  std::vector<double> ps, zs;
  for (const auto& r : rows)
    if (r.variant == v) {
      ps.push_back(r.purity);
      zs.push_back(r.zrand);
    }
  auto mean = [](const std::vector<double>& x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  };
  auto sstd = [&](const std::vector<double>& x, double mu) {
    if (x.size() < 2) return 0.0;
    double acc = 0;
    for (double xi : x) acc += (xi - mu) * (xi - mu);
    return std::sqrt(acc / static_cast<double>(x.size() - 1));
  };
  Aggregate a;
  a.runs = static_cast<int>(ps.size());
  a.mean_purity = mean(ps);
  a.std_purity = sstd(ps, a.mean_purity);
  a.mean_zrand = mean(zs);
  a.std_zrand = sstd(zs, a.mean_zrand);
  return a;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.spec.validate();
  if (cfg.variants.empty())
    fail(errkind::invalid_argument, "experiment needs at least one variant");
  if (cfg.spec.seeds.empty())
    fail(errkind::invalid_argument, "experiment needs at least one seed");

  const std::size_t nv = cfg.variants.size();
  const std::size_t total = cfg.spec.seeds.size() * nv;
  ExperimentReport rep;
  rep.rows.resize(total);
  // (seed, variant) cells are independent; slots keep seed-major order no
  // matter how the work is scheduled.
  parallel_for(total, [&](std::size_t i) {
    rep.rows[i] = run_one(cfg, cfg.spec.seeds[i / nv],
                          cfg.variants[i % nv]);
  });
  for (Variant v : cfg.variants)
    rep.aggregates[to_string(v)] = aggregate_rows(rep.rows, v);
  return rep;
}

void cmd_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                    Results* results) {
  if (results) results->clear();
  io::ensure_dir(out_dir);
  ExperimentReport rep = run_experiment(cfg);

  std::string csv = "seed,variant,purity,zrand\n";
  for (const auto& r : rep.rows)
    csv += std::to_string(r.seed) + "," + to_string(r.variant) + "," +
           io::fmt17(r.purity) + "," + io::fmt17(r.zrand) + "\n";
  io::write_file(io::join_path(out_dir, "runs.csv"), csv);

  json j;
  j["spec"] = {{"num_classes", cfg.spec.num_classes},
               {"images_per_class", cfg.spec.images_per_class},
               {"visual_words_per_class", cfg.spec.visual_words_per_class},
               {"vocab_per_class", cfg.spec.vocab_per_class},
               {"text_universe", cfg.spec.text_universe},
               {"caption_len", cfg.spec.caption_len},
               {"draws_per_image", cfg.spec.draws_per_image},
               {"woc_repeat", cfg.spec.woc_repeat},
               {"labeled_fraction", cfg.spec.labeled_fraction},
               {"visual_noise", cfg.spec.visual_noise},
               {"seeds", cfg.spec.seeds}};
  j["nmf"] = {{"k_star", cfg.nmf.k_star},
              {"max_iter", cfg.nmf.max_iter},
              {"rel_tol", cfg.nmf.rel_tol}};
  j["readout"] = to_string(cfg.readout);
  j["idf_mode"] = to_string(cfg.idf_mode);
  j["runs"] = json::array();
  for (const auto& r : rep.rows)
    j["runs"].push_back({{"seed", r.seed},
                         {"variant", to_string(r.variant)},
                         {"purity", r.purity},
                         {"zrand", r.zrand}});
  j["aggregates"] = json::object();
  for (const auto& [name, a] : rep.aggregates)
    j["aggregates"][name] = {{"mean_purity", a.mean_purity},
                             {"std_purity", a.std_purity},
                             {"mean_zrand", a.mean_zrand},
                             {"std_zrand", a.std_zrand},
                             {"runs", a.runs}};
  io::write_file(io::join_path(out_dir, "report.json"), j.dump(2) + "\n");

  if (results)
    for (const auto& [name, a] : rep.aggregates) {
      (*results)["mean_purity." + name] = a.mean_purity;
      (*results)["std_purity." + name] = a.std_purity;
      (*results)["mean_zrand." + name] = a.mean_zrand;
      (*results)["std_zrand." + name] = a.std_zrand;
      (*results)["runs." + name] = a.runs;
    }
}

}  // namespace fc
