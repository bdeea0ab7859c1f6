// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fusion.hpp"
#include "metrics.hpp"
#include "nmf.hpp"
#include "synth.hpp"
#include "types.hpp"

namespace fc {

enum class Variant { A, AB, M };
enum class Readout { argmax, kmeans };

Variant parse_variant(const std::string& s);
Readout parse_readout(const std::string& s);
IdfMode parse_idf_mode(const std::string& s);
std::string to_string(Variant v);
std::string to_string(Readout r);
std::string to_string(IdfMode m);

struct NmfParams {
  index_t k_star = 9;
  int max_iter = 500;
  double rel_tol = 1e-5;
};

struct PipelineConfig {
  // paths, resolved against the config file's directory at load
  std::string manifest;
  std::string captions_dir;  // base for bare caption filenames in the manifest
  std::string woc_dir;       // every *.txt inside is one WOC document
  std::string stopwords;
  std::string descriptors;   // binary blob path (descriptor_format=binary)
  std::string descriptors_sidecar;
  std::string histograms;    // precomputed histograms (skips codebook path)
  std::string descriptor_format = "csv";  // "csv" | "binary"

  index_t codebook_K = 0;  // required when descriptors are the input
  int kmeans_max_iter = 100;
  double kmeans_tol = 1e-9;
  NmfParams nmf;
  std::uint64_t seed = 1;
  IdfMode idf_mode = IdfMode::all_rows;
  Readout readout = Readout::argmax;
  Variant variant = Variant::M;
  bool stopwords_enabled = false;
  bool eval_include_woc = false;
  std::int64_t mc_trials = 10000;  // 0 disables the Monte-Carlo check

  static PipelineConfig from_file(const std::string& path);
  static PipelineConfig from_map(const std::map<std::string, std::string>& kv,
                                 const std::string& base_dir);
  // resolved canonical key=value view, echoed into metrics reports
  std::map<std::string, std::string> echo() const;
  // config error naming the first missing referenced path
  void validate_paths() const;
};

// Manifest-order corpus, then reordered captioned-first by the pipeline.
struct Corpus {
  std::vector<std::string> doc_ids;  // image docs
  index_t m = 0;                     // captioned count (after reorder: rows 0..m-1)
  CountMatrix A;                     // n x p histograms, row_ids = doc_ids
  std::vector<TextDocument> captions;  // aligned with rows 0..m-1
  std::vector<TextDocument> woc;
  GroundTruth truth;  // labeled docs only
};

// Stable reorder: captioned rows first (manifest order kept within each
// group); captions returned aligned with rows 0..m-1.
void reorder_captioned_first(CountMatrix& A,
                             std::vector<TextDocument>& captions);

// Assemble the per-variant matrix from pipeline-ordered blocks:
//   A  = raw counts, no text, no IDF;
//   AB = [A B] over the caption vocabulary, IDF over image rows;
//   M  = [A B; 0 C] over the WOC-first vocabulary, IDF over all rows.
// `captions` must be aligned with rows 0..m-1 of A. with_idf=false skips
// the reweighting (diagnostics and the A==AB-at-zero-captions identity).
FusedMatrix build_variant_matrix(Variant v, const CountMatrix& A, index_t m,
                                 const std::vector<TextDocument>& captions,
                                 const std::vector<TextDocument>& woc,
                                 IdfMode mode, bool with_idf = true);

struct MetricsBundle {
  double purity = 0, zrand = 0, mu_p = 0, sigma_p = 0;
  PairCounts pairs;
  bool mc_done = false;
  double mc_mean = 0, mc_std = 0;
  index_t evaluated_docs = 0;
};

// Score a clustering against ground truth, restricted to docs the truth
// covers; empty intersection is empty_input. mc_trials=0 skips the MC run.
MetricsBundle score_clustering(const Clustering& clustering,
                               const GroundTruth& truth,
                               std::int64_t mc_trials, std::uint64_t mc_seed);

// ---- CLI-facing commands (the C API maps onto these 1:1) ----
// Each writes its artifacts into out_dir; `results` (optional) receives
// scalar outputs like purity/zrand.
using Results = std::map<std::string, double>;

void cmd_run(const PipelineConfig& cfg, const std::string& out_dir,
             Results* results);
void cmd_vocab(const PipelineConfig& cfg, const std::string& out_dir);
void cmd_codebook(const PipelineConfig& cfg, const std::string& out_dir);
void cmd_quantize(const PipelineConfig& cfg, const std::string& out_dir);
void cmd_fuse(const PipelineConfig& cfg, const std::string& out_dir);
void cmd_factorize(const PipelineConfig& cfg, const std::string& out_dir,
                   Results* results);
void cmd_assign(const PipelineConfig& cfg, const std::string& out_dir);
void cmd_eval(const PipelineConfig& cfg, const std::string& out_dir,
              Results* results);

// ---- synthetic-data experiment driver ----
struct ExperimentConfig {
  SynthSpec spec;
  std::vector<Variant> variants = {Variant::A, Variant::AB, Variant::M};
  NmfParams nmf;
  Readout readout = Readout::argmax;
  IdfMode idf_mode = IdfMode::all_rows;

  static ExperimentConfig from_map(const std::map<std::string, std::string>& kv);
};

struct ExperimentRun {
  std::uint64_t seed = 0;
  Variant variant = Variant::A;
  double purity = 0, zrand = 0;
};

struct Aggregate {
  double mean_purity = 0, std_purity = 0;
  double mean_zrand = 0, std_zrand = 0;
  int runs = 0;
};

struct ExperimentReport {
  std::vector<ExperimentRun> rows;  // seed-major, variant order as requested
  std::map<std::string, Aggregate> aggregates;  // by variant name
};

// One full pipeline per (seed, variant): generate, fuse, factorize,
// argmax/kmeans readout, score. Runs execute in parallel; output is
// independent of thread count.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

// Write a generated dataset (manifest.csv, histograms.csv, captions/,
// woc/) for consumption by cmd_run and friends.
void cmd_synth(const SynthSpec& spec, std::uint64_t seed,
               const std::string& out_dir);
// Run the experiment and write report.json + runs.csv.
void cmd_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                    Results* results);

// key registry (typo detection): the union of pipeline + synth keys
bool is_known_config_key(const std::string& key);

}  // namespace fc
