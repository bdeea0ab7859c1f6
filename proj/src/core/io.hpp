// fusecluster
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <unordered_set>
#include <vector>

#include "cluster.hpp"
#include "fusion.hpp"
#include "nmf.hpp"
#include "text.hpp"
#include "types.hpp"
#include "visual.hpp"

// Serialization layer. Doubles are printed with %.17g everywhere so every
// artifact round-trips bit-exactly, which is what makes staged runs agree
// with single-shot runs to the byte.
namespace fc::io {

std::string fmt17(double v);
double parse_double(const std::string& s);         // bad_data on junk
std::int64_t parse_int(const std::string& s);      // bad_data on junk
std::uint64_t parse_uint(const std::string& s);

std::string read_file(const std::string& path);    // bad_data if unreadable
void write_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& path);
bool path_exists(const std::string& path);
std::string join_path(const std::string& a, const std::string& b);
std::string parent_dir(const std::string& path);
// base-relative resolution for paths found inside config files/manifests
std::string resolve(const std::string& base_dir, const std::string& path);

// Minimal CSV (quotes + doubled-quote escapes; no embedded newlines).
std::vector<std::string> split_csv_line(const std::string& line);
std::string csv_field(const std::string& s);

// key = value config ('#' comments, blank lines skipped); duplicate keys
// are a config error.
std::map<std::string, std::string> read_config(const std::string& path);

struct ManifestRow {
  std::string doc_id, path, label, caption;
};
// Header "doc_id,path,label,caption" (label/caption columns optional).
// Duplicate doc ids raise duplicate_id.
std::vector<ManifestRow> read_manifest(const std::string& path);
void write_manifest(const std::string& path,
                    const std::vector<ManifestRow>& rows);

// Histograms: header "doc_id,0,1,...,K-1", integer counts.
void write_histograms(const std::string& path, const CountMatrix& h);
CountMatrix read_histograms(const std::string& path);

// Dense matrix, one CSV row per matrix row, no header.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

void write_vocab(const std::string& path, const Vocabulary& v);
Vocabulary read_vocab(const std::string& path);

// newline-separated stopword file; entries are lowercased on read
std::unordered_set<std::string> read_stopwords(const std::string& path);

// FusedMatrix = JSON header {n,m,k,p,q,row_ids,col_ids} + triplet CSV
// "row,col,value".
void write_fused(const std::string& json_path, const std::string& csv_path,
                 const FusedMatrix& M);
FusedMatrix read_fused(const std::string& json_path,
                       const std::string& csv_path);

void write_nmf_report(const std::string& path, const FactorPair& f,
                      std::uint64_t seed);

void write_assignments(const std::string& path, const Clustering& c);
Clustering read_assignments(const std::string& path);

// Descriptor input, two forms:
//  - CSV: one file per image, one descriptor per row;
//  - binary: little-endian float32 blob + JSON sidecar
//    [{"doc_id","offset","count","dim"}], offset counted in elements.
Eigen::MatrixXd read_descriptor_csv(const std::string& path);
std::vector<DescriptorSet> read_descriptors_binary(
    const std::string& bin_path, const std::string& sidecar_path);
void write_descriptors_binary(const std::string& bin_path,
                              const std::string& sidecar_path,
                              const std::vector<DescriptorSet>& sets);

}  // namespace fc::io
