// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include "io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using nlohmann::json;

namespace fc::io {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(c, &end);
  if (end == c || *end != '\0' || errno == ERANGE)
    fail(errkind::bad_data, "not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(c, &end, 10);
  if (end == c || *end != '\0' || errno == ERANGE)
    fail(errkind::bad_data, "not an integer: '" + s + "'");
  return v;
}

std::uint64_t parse_uint(const std::string& s) {
  const char* c = s.c_str();
  char* end = nullptr;
  errno = 0;
  if (!s.empty() && s[0] == '-')
    fail(errkind::bad_data, "not a non-negative integer: '" + s + "'");
  const unsigned long long v = std::strtoull(c, &end, 10);
  if (end == c || *end != '\0' || errno == ERANGE)
    fail(errkind::bad_data, "not a non-negative integer: '" + s + "'");
  return v;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errkind::bad_data, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(errkind::internal, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(errkind::internal, "write failed for '" + path + "'");
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  fs::create_directories(path, ec);
  if (ec) fail(errkind::internal, "cannot create directory '" + path + "'");
}

bool path_exists(const std::string& path) {
  std::error_code ec;
  return fs::exists(path, ec);
}

std::string join_path(const std::string& a, const std::string& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  return (fs::path(a) / b).string();
}

std::string parent_dir(const std::string& path) {
  return fs::path(path).parent_path().string();
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return join_path(base_dir, path);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

namespace {

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::map<std::string, std::string> read_config(const std::string& path) {
  if (!path_exists(path))
    fail(errkind::config, "config file '" + path + "' does not exist");
  std::string text;
  try {
    text = read_file(path);
  } catch (const error&) {
    fail(errkind::config, "cannot read config file '" + path + "'");
  }
  std::map<std::string, std::string> kv;
  std::size_t lineno = 0;
  for (const auto& raw : lines_of(text)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errkind::config, path + ":" + std::to_string(lineno) +
                                ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty())
      fail(errkind::config,
           path + ":" + std::to_string(lineno) + ": empty key");
    if (kv.count(key))
      fail(errkind::config, path + ":" + std::to_string(lineno) +
                                ": duplicate key '" + key + "'");
    kv[key] = val;
  }
  return kv;
}

std::vector<ManifestRow> read_manifest(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty()) fail(errkind::bad_data, "manifest '" + path + "' is empty");
  const auto header = split_csv_line(lines[0]);
  int id_col = -1, path_col = -1, label_col = -1, caption_col = -1;
  for (std::size_t j = 0; j < header.size(); ++j) {
    if (header[j] == "doc_id") id_col = static_cast<int>(j);
    else if (header[j] == "path") path_col = static_cast<int>(j);
    else if (header[j] == "label") label_col = static_cast<int>(j);
    else if (header[j] == "caption") caption_col = static_cast<int>(j);
    else
      fail(errkind::bad_data,
           "manifest '" + path + "': unknown column '" + header[j] + "'");
  }
  if (id_col < 0 || path_col < 0)
    fail(errkind::bad_data,
         "manifest '" + path + "' needs doc_id and path columns");
  std::vector<ManifestRow> rows;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != header.size())
      fail(errkind::bad_data, "manifest '" + path + "' line " +
                                  std::to_string(i + 1) + ": expected " +
                                  std::to_string(header.size()) + " fields");
    ManifestRow r;
    r.doc_id = f[static_cast<std::size_t>(id_col)];
    r.path = f[static_cast<std::size_t>(path_col)];
    if (label_col >= 0) r.label = f[static_cast<std::size_t>(label_col)];
    if (caption_col >= 0) r.caption = f[static_cast<std::size_t>(caption_col)];
    if (r.doc_id.empty())
      fail(errkind::bad_data, "manifest '" + path + "' line " +
                                  std::to_string(i + 1) + ": empty doc_id");
    if (!seen.insert(r.doc_id).second)
      fail(errkind::duplicate_id,
           "manifest '" + path + "': duplicate doc_id '" + r.doc_id + "'");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_manifest(const std::string& path,
                    const std::vector<ManifestRow>& rows) {
  std::string out = "doc_id,path,label,caption\n";
  for (const auto& r : rows)
    out += csv_field(r.doc_id) + "," + csv_field(r.path) + "," +
           csv_field(r.label) + "," + csv_field(r.caption) + "\n";
  write_file(path, out);
}

void write_histograms(const std::string& path, const CountMatrix& h) {
  std::string out = "doc_id";
  for (index_t j = 0; j < h.cols; ++j) out += "," + std::to_string(j);
  out += "\n";
  for (index_t i = 0; i < h.rows; ++i) {
    out += csv_field(h.row_ids[static_cast<std::size_t>(i)]);
    for (index_t j = 0; j < h.cols; ++j)
      out += "," + std::to_string(h.at(i, j));
    out += "\n";
  }
  write_file(path, out);
}

CountMatrix read_histograms(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty())
    fail(errkind::bad_data, "histogram file '" + path + "' is empty");
  const auto header = split_csv_line(lines[0]);
  if (header.empty() || header[0] != "doc_id")
    fail(errkind::bad_data,
         "histogram file '" + path + "': header must start with doc_id");
  const auto K = static_cast<index_t>(header.size()) - 1;
  for (index_t j = 0; j < K; ++j)
    if (header[static_cast<std::size_t>(j + 1)] != std::to_string(j))
      fail(errkind::bad_data,
           "histogram file '" + path + "': columns must be 0.." +
               std::to_string(K - 1));
  CountMatrix h(static_cast<index_t>(lines.size()) - 1, K);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    if (static_cast<index_t>(f.size()) != K + 1)
      fail(errkind::bad_data, "histogram file '" + path + "' line " +
                                  std::to_string(i + 1) + ": expected " +
                                  std::to_string(K + 1) + " fields");
    h.row_ids.push_back(f[0]);
    for (index_t j = 0; j < K; ++j) {
      const auto v = parse_int(f[static_cast<std::size_t>(j + 1)]);
      if (v < 0)
        fail(errkind::negative_input, "histogram file '" + path + "' line " +
                                          std::to_string(i + 1) +
                                          ": negative count");
      h.add(static_cast<index_t>(i) - 1, j, v);
    }
  }
  return h;
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m) {
  std::string out;
  for (index_t i = 0; i < m.rows(); ++i) {
    for (index_t j = 0; j < m.cols(); ++j) {
      if (j) out += ",";
      out += fmt17(m(i, j));
    }
    out += "\n";
  }
  write_file(path, out);
}

Eigen::MatrixXd read_matrix_csv(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    std::vector<double> row;
    row.reserve(f.size());
    for (const auto& s : f) row.push_back(parse_double(s));
    if (!rows.empty() && rows[0].size() != row.size())
      fail(errkind::bad_data,
           "matrix file '" + path + "': ragged row at line " +
               std::to_string(i + 1));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<index_t>(rows.size()),
                    rows.empty() ? 0 : static_cast<index_t>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<index_t>(i), static_cast<index_t>(j)) = rows[i][j];
  return m;
}

void write_vocab(const std::string& path, const Vocabulary& v) {
  std::string out;
  for (const auto& f : v.features()) out += f + "\n";
  write_file(path, out);
}

Vocabulary read_vocab(const std::string& path) {
  Vocabulary v;
  for (const auto& line : lines_of(read_file(path)))
    if (!line.empty()) v.add_if_missing(line);
  return v;
}

std::unordered_set<std::string> read_stopwords(const std::string& path) {
  std::unordered_set<std::string> out;
  for (const auto& raw : lines_of(read_file(path))) {
    std::string w = trim(raw);
    for (char& c : w)
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    if (!w.empty()) out.insert(w);
  }
  return out;
}

void write_fused(const std::string& json_path, const std::string& csv_path,
                 const FusedMatrix& M) {
  json j;
  j["n"] = M.n;
  j["m"] = M.m;
  j["k"] = M.k;
  j["p"] = M.p;
  j["q"] = M.q;
  j["row_ids"] = M.row_ids;
  j["col_ids"] = M.col_ids;
  write_file(json_path, j.dump(2) + "\n");
  std::string csv = "row,col,value\n";
  for (const auto& [r, c, v] : M.triplets)
    csv += std::to_string(r) + "," + std::to_string(c) + "," + fmt17(v) + "\n";
  write_file(csv_path, csv);
}

FusedMatrix read_fused(const std::string& json_path,
                       const std::string& csv_path) {
  FusedMatrix M;
  try {
    const json j = json::parse(read_file(json_path));
    M.n = j.at("n").get<index_t>();
    M.m = j.at("m").get<index_t>();
    M.k = j.at("k").get<index_t>();
    M.p = j.at("p").get<index_t>();
    M.q = j.at("q").get<index_t>();
    M.row_ids = j.at("row_ids").get<std::vector<std::string>>();
    M.col_ids = j.at("col_ids").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    fail(errkind::bad_data,
         "fused header '" + json_path + "': " + e.what());
  }
  if (static_cast<index_t>(M.row_ids.size()) != M.rows() ||
      static_cast<index_t>(M.col_ids.size()) != M.cols())
    fail(errkind::bad_data,
         "fused header '" + json_path + "': id lists disagree with the shape");
  const auto lines = lines_of(read_file(csv_path));
  if (lines.empty() || lines[0] != "row,col,value")
    fail(errkind::bad_data,
         "fused triplets '" + csv_path + "': missing row,col,value header");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 3)
      fail(errkind::bad_data, "fused triplets '" + csv_path + "' line " +
                                  std::to_string(i + 1));
    const auto r = parse_int(f[0]), c = parse_int(f[1]);
    if (r < 0 || r >= M.rows() || c < 0 || c >= M.cols())
      fail(errkind::bad_data, "fused triplets '" + csv_path + "' line " +
                                  std::to_string(i + 1) + ": index out of range");
    M.triplets.push_back({r, c, parse_double(f[2])});
  }
  return M;
}

void write_nmf_report(const std::string& path, const FactorPair& f,
                      std::uint64_t seed) {
  json j;
  j["k_star"] = f.k_star;
  j["seed"] = seed;
  j["iterations"] = f.iterations;
  j["converged"] = f.converged;
  j["final_cost"] = fmt17(f.final_cost);
  json trace = json::array();
  for (double c : f.cost_trace) trace.push_back(fmt17(c));
  j["cost_trace"] = trace;
  write_file(path, j.dump(2) + "\n");
}

void write_assignments(const std::string& path, const Clustering& c) {
  std::string out = "doc_id,cluster\n";
  for (std::size_t i = 0; i < c.doc_ids.size(); ++i)
    out += csv_field(c.doc_ids[i]) + "," + std::to_string(c.assignment[i]) +
           "\n";
  write_file(path, out);
}

Clustering read_assignments(const std::string& path) {
  const auto lines = lines_of(read_file(path));
  if (lines.empty() || lines[0] != "doc_id,cluster")
    fail(errkind::bad_data,
         "assignments '" + path + "': missing doc_id,cluster header");
  Clustering c;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto f = split_csv_line(lines[i]);
    if (f.size() != 2)
      fail(errkind::bad_data,
           "assignments '" + path + "' line " + std::to_string(i + 1));
    const auto cl = parse_int(f[1]);
    if (cl < 0)
      fail(errkind::bad_data, "assignments '" + path + "' line " +
                                  std::to_string(i + 1) + ": negative cluster");
    c.doc_ids.push_back(f[0]);
    c.assignment.push_back(cl);
    c.num_clusters = std::max(c.num_clusters, cl + 1);
  }
  return c;
}

Eigen::MatrixXd read_descriptor_csv(const std::string& path) {
  return read_matrix_csv(path);
}

std::vector<DescriptorSet> read_descriptors_binary(
    const std::string& bin_path, const std::string& sidecar_path) {
  const std::string blob = read_file(bin_path);
  if (blob.size() % sizeof(float) != 0)
    fail(errkind::bad_data,
         "descriptor blob '" + bin_path + "': size is not a float multiple");
  const auto total = blob.size() / sizeof(float);
  std::vector<DescriptorSet> sets;
  try {
    const json j = json::parse(read_file(sidecar_path));
    for (const auto& e : j) {
      DescriptorSet s;
      s.doc_id = e.at("doc_id").get<std::string>();
      const auto offset = e.at("offset").get<std::size_t>();
      const auto count = e.at("count").get<index_t>();
      const auto dim = e.at("dim").get<index_t>();
      if (count < 0 || dim <= 0)
        fail(errkind::bad_data, "descriptor sidecar '" + sidecar_path +
                                    "': bad count/dim for '" + s.doc_id + "'");
      const auto need = static_cast<std::size_t>(count * dim);
      if (offset + need > total)
        fail(errkind::bad_data, "descriptor sidecar '" + sidecar_path +
                                    "': '" + s.doc_id + "' overruns the blob");
      s.descriptors = Eigen::MatrixXd(count, dim);
      for (index_t r = 0; r < count; ++r)
        for (index_t c = 0; c < dim; ++c) {
          float v;
          std::memcpy(&v,
                      blob.data() + (offset + static_cast<std::size_t>(r * dim + c)) *
                                        sizeof(float),
                      sizeof(float));
          s.descriptors(r, c) = static_cast<double>(v);
        }
      sets.push_back(std::move(s));
    }
  } catch (const json::exception& e) {
    fail(errkind::bad_data,
         "descriptor sidecar '" + sidecar_path + "': " + e.what());
  }
  return sets;
}

void write_descriptors_binary(const std::string& bin_path,
                              const std::string& sidecar_path,
                              const std::vector<DescriptorSet>& sets) {
  std::string blob;
  json j = json::array();
  std::size_t offset = 0;
  for (const auto& s : sets) {
    json e;
    e["doc_id"] = s.doc_id;
    e["offset"] = offset;
    e["count"] = s.descriptors.rows();
    e["dim"] = s.descriptors.cols();
    j.push_back(e);
    for (index_t r = 0; r < s.descriptors.rows(); ++r)
      for (index_t c = 0; c < s.descriptors.cols(); ++c) {
        const auto v = static_cast<float>(s.descriptors(r, c));
        char buf[sizeof(float)];
        std::memcpy(buf, &v, sizeof(float));
        blob.append(buf, sizeof(float));
        ++offset;
      }
  }
  write_file(bin_path, blob);
  write_file(sidecar_path, j.dump(2) + "\n");
}

}  // namespace fc::io
