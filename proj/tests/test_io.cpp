// fusecluster
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "core/io.hpp"
#include "core/rng.hpp"

namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path path;
  TmpDir() {
    path = fs::temp_directory_path() /
           ("fc_io_test_" + std::to_string(::getpid()) + "_" +
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
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("fmt17 round-trips doubles bit-exactly") {
  fc::rng r(55);
  std::vector<double> vals = {0.0, 1.0, -1.0, 1e-300, 1e300, 0.1,
                              2.0 / 3.0, 3.141592653589793};
  for (int i = 0; i < 500; ++i)
    vals.push_back((r.uniform() - 0.5) * std::pow(10.0, r.uniform(-12, 12)));
  for (double v : vals) {
    double back = fc::io::parse_double(fc::io::fmt17(v));
    CHECK(back == v);
  }
}

TEST_CASE("config files parse keys, comments, and blanks") {
  TmpDir t;
  fc::io::write_file(t.file("a.conf"),
                     "# comment\n"
                     "seed = 42\n"
                     "\n"
                     "variant=M\n"
                     "  nmf_rel_tol =  1e-5  \n");
  auto kv = fc::io::read_config(t.file("a.conf"));
  CHECK(kv.at("seed") == "42");
  CHECK(kv.at("variant") == "M");
  CHECK(kv.at("nmf_rel_tol") == "1e-5");
  CHECK(kv.size() == 3);

  fc::io::write_file(t.file("dup.conf"), "x = 1\nx = 2\n");
  CHECK_THROWS_AS(fc::io::read_config(t.file("dup.conf")), fc::error);
  CHECK_THROWS_AS(fc::io::read_config(t.file("missing.conf")), fc::error);
}

TEST_CASE("manifest round-trip and duplicate-id rejection") {
  TmpDir t;
  std::vector<fc::io::ManifestRow> rows = {
      {"img0", "d/img0.csv", "cat", "caps/img0.txt"},
      {"img1", "d/img1.csv", "dog", ""},
      {"img2", "d, with comma.csv", "", "caps/img2.txt"},
  };
  fc::io::write_manifest(t.file("m.csv"), rows);
  auto back = fc::io::read_manifest(t.file("m.csv"));
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].doc_id == rows[i].doc_id);
    CHECK(back[i].path == rows[i].path);
    CHECK(back[i].label == rows[i].label);
    CHECK(back[i].caption == rows[i].caption);
  }
  rows.push_back({"img0", "x", "", ""});
  fc::io::write_manifest(t.file("dup.csv"), rows);
  try {
    fc::io::read_manifest(t.file("dup.csv"));
    FAIL("expected duplicate_id");
  } catch (const fc::error& e) {
    CHECK(e.kind() == fc::errkind::duplicate_id);
  }
}

TEST_CASE("histograms round-trip") {
  TmpDir t;
  fc::CountMatrix h(3, 4);
  h.row_ids = {"a", "b", "c"};
  h.add(0, 0, 5);
  h.add(1, 3, 2);
  h.add(2, 2, 9);
  fc::io::write_histograms(t.file("h.csv"), h);
  auto back = fc::io::read_histograms(t.file("h.csv"));
  CHECK(back.rows == h.rows);
  CHECK(back.cols == h.cols);
  CHECK(back.row_ids == h.row_ids);
  CHECK(back.entries == h.entries);
}

TEST_CASE("dense matrix CSV round-trips bit-exactly") {
  TmpDir t;
  fc::rng r(8);
  Eigen::MatrixXd m(5, 3);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = r.uniform(-5, 5) * 1e-7;
  fc::io::write_matrix_csv(t.file("m.csv"), m);
  auto back = fc::io::read_matrix_csv(t.file("m.csv"));
  CHECK(back == m);
}

TEST_CASE("vocabulary file round-trips order") {
  TmpDir t;
  fc::Vocabulary v;
  v.add_if_missing("zeta");
  v.add_if_missing("alpha");
  v.add_if_missing("mid");
  fc::io::write_vocab(t.file("v.txt"), v);
  auto back = fc::io::read_vocab(t.file("v.txt"));
  CHECK(back.features() == v.features());
  CHECK(back.find("alpha").value() == 1);
}

TEST_CASE("stopword files are lowercased on read") {
  TmpDir t;
  fc::io::write_file(t.file("s.txt"), "The\na\n\nIS\n");
  auto s = fc::io::read_stopwords(t.file("s.txt"));
  CHECK(s.count("the") == 1);
  CHECK(s.count("a") == 1);
  CHECK(s.count("is") == 1);
  CHECK(s.size() == 3);
}

TEST_CASE("fused matrix round-trips bit-exactly") {
  TmpDir t;
  fc::FusedMatrix M;
  M.n = 3;
  M.m = 2;
  M.k = 1;
  M.p = 2;
  M.q = 2;
  M.row_ids = {"i0", "i1", "i2", "w0"};
  M.col_ids = {"v0", "v1", "cat", "dog"};
  fc::rng r(3);
  M.triplets = {{0, 0, r.uniform() * 1e-9},
                {0, 2, 1.0},
                {1, 1, 2.0 / 3.0},
                {2, 3, r.uniform(1, 2)},
                {3, 2, std::log(4.0)}};
  fc::io::write_fused(t.file("f.json"), t.file("f.csv"), M);
  auto back = fc::io::read_fused(t.file("f.json"), t.file("f.csv"));
  CHECK(back.n == M.n);
  CHECK(back.m == M.m);
  CHECK(back.k == M.k);
  CHECK(back.p == M.p);
  CHECK(back.q == M.q);
  CHECK(back.row_ids == M.row_ids);
  CHECK(back.col_ids == M.col_ids);
  CHECK(back.triplets == M.triplets);
}

TEST_CASE("assignments round-trip") {
  TmpDir t;
  fc::Clustering c;
  c.doc_ids = {"x", "y", "z"};
  c.assignment = {2, 0, 2};
  c.num_clusters = 3;
  fc::io::write_assignments(t.file("a.csv"), c);
  auto back = fc::io::read_assignments(t.file("a.csv"));
  CHECK(back.doc_ids == c.doc_ids);
  CHECK(back.assignment == c.assignment);
  CHECK(back.num_clusters == 3);
}

TEST_CASE("binary descriptors round-trip through the sidecar") {
  TmpDir t;
  std::vector<fc::DescriptorSet> sets(2);
  sets[0].doc_id = "im0";
  sets[0].descriptors = Eigen::MatrixXd(2, 3);
  sets[0].descriptors << 0.5, 1.25, -2.0, 3.5, 0.0, 7.0;  // float-exact values
  sets[1].doc_id = "im1";
  sets[1].descriptors = Eigen::MatrixXd(1, 3);
  sets[1].descriptors << -0.25, 0.75, 1.5;
  fc::io::write_descriptors_binary(t.file("d.bin"), t.file("d.json"), sets);
  auto back = fc::io::read_descriptors_binary(t.file("d.bin"), t.file("d.json"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].doc_id == "im0");
  CHECK(back[0].descriptors == sets[0].descriptors);
  CHECK(back[1].descriptors == sets[1].descriptors);
}

TEST_CASE("descriptor CSV reader parses rows of floats") {
  TmpDir t;
  fc::io::write_file(t.file("im.csv"), "0.5,1.5\n-2.25,3\n");
  auto m = fc::io::read_descriptor_csv(t.file("im.csv"));
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(0, 0) == 0.5);
  CHECK(m(1, 1) == 3.0);
  fc::io::write_file(t.file("bad.csv"), "0.5,xyz\n");
  CHECK_THROWS_AS(fc::io::read_descriptor_csv(t.file("bad.csv")), fc::error);
}
