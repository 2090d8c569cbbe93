// Copyright 2026 The splitstream Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "test_util.hpp"

namespace splitstream::cli {
namespace {

using splitstream::testing::TempDir;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "splitstream");
  std::ostringstream out, err;
  Run r;
  r.code = run(std::move(args), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

/// Value of a whitespace-separated "key=value" token in CLI output.
std::string field(const std::string& out, const std::string& key) {
  std::istringstream in(out);
  for (std::string tok; in >> tok;)
    if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
  return {};
}

class Cli : public ::testing::Test {
 protected:
  TempDir dir{"cli"};
  std::string f(const std::string& name) const { return dir.file(name); }

  std::string write_net(std::uint64_t seed = 1) {
    const auto path = f("net" + std::to_string(seed) + ".snet");
    EXPECT_EQ(run_cli({"init-net", "--seed", std::to_string(seed), "--out", path}).code, 0);
    return path;
  }

  void write_curve(const std::string& path, const std::vector<std::pair<double, double>>& qr) {
    std::ofstream o(path);
    o << "quality,kbpi\n";
    for (auto [q, r] : qr) o << q << ',' << r << '\n';
  }
};

TEST_F(Cli, HelpAndParseErrors) {
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_NE(run_cli({"--help"}).out.find("compress"), std::string::npos);
  EXPECT_EQ(run_cli({"profile", "--help"}).code, 0);
  EXPECT_EQ(run_cli({"profile", "--bogus"}).code, 2);
  EXPECT_EQ(run_cli({"profile"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
}

TEST_F(Cli, Profile) {
  const auto net = write_net();
  const auto r = run_cli({"profile", "--net", net});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[0], "layer,kind,out_volume,cum_cost");
  EXPECT_NE(rows[1].find(",8192,"), std::string::npos);
  EXPECT_NE(rows[3].find(",2048,"), std::string::npos);
  EXPECT_EQ(rows.back().substr(rows.back().rfind(',') + 1), "1");
  EXPECT_EQ(run_cli({"profile", "--net", f("missing.snet")}).code, 2);
}

TEST_F(Cli, PlanPrintsEveryCandidate) {
  const auto r = run_cli({"plan", "--net", write_net(), "--uplink", "1e12"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines(r.out).size(), 1u + 12u + 1u);
  EXPECT_EQ(field(r.out, "best_split"), "0");
  EXPECT_EQ(field(run_cli({"plan", "--net", write_net(), "--uplink", "1"}).out, "best_split"), "11");
}

TEST_F(Cli, CompressDecompressLossless) {
  std::mt19937_64 rng(101);
  const auto v = splitstream::testing::random_tensor(rng, {12, 9, 5});
  save_tensor_file(v, f("x.ften"));
  const auto c = run_cli({"compress", f("x.ften"), "--mode", "lossless"});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_EQ(field(c.out, "out"), f("x.ften") + ".dfcc");
  EXPECT_EQ(std::stoul(field(c.out, "bytes")), slurp(f("x.ften.dfcc")).size());
  const auto d = run_cli({"decompress", f("x.ften.dfcc"), "--out", f("y.ften")});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(field(d.out, "shape"), "12x9x5");
  const auto back = load_tensor_file(f("y.ften"));
  const auto st = minmax(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    ASSERT_LE(std::abs(double{v[i]} - back[i]), (double{st.max} - st.min) / 510.0 + 1e-6);
  }
  EXPECT_LE(std::stod(field(c.out, "max_abs_err")), (double{st.max} - st.min) / 510.0 + 1e-6);
}

TEST_F(Cli, LossyRateFallsWithQp) {
  std::mt19937_64 rng(102);
  save_tensor_file(splitstream::testing::smooth_tensor(rng, {32, 32, 8}), f("x.ften"));
  const auto lo = run_cli({"compress", f("x.ften"), "--mode", "lossy", "--qp", "22", "--out", f("a.dfcc")});
  const auto hi = run_cli({"compress", f("x.ften"), "--mode", "lossy", "--qp", "51", "--out", f("b.dfcc")});
  ASSERT_EQ(lo.code, 0) << lo.err;
  ASSERT_EQ(hi.code, 0) << hi.err;
  EXPECT_LT(std::stoul(field(hi.out, "bytes")), std::stoul(field(lo.out, "bytes")));
  EXPECT_EQ(run_cli({"decompress", f("b.dfcc"), "--out", f("b.ften")}).code, 0);
  EXPECT_EQ(run_cli({"compress", f("x.ften"), "--mode", "lossy", "--qp", "52"}).code, 2);
  EXPECT_EQ(run_cli({"compress", f("x.ften"), "--mode", "lossy", "--qp", "22,27"}).code, 2);
  EXPECT_EQ(run_cli({"compress", f("x.ften"), "--mode", "weird"}).code, 2);
}

TEST_F(Cli, MalformedInputsMapToExitCodes) {
  { std::ofstream(f("bad.ften")) << "NOPE0000000000000000000000"; }
  EXPECT_EQ(run_cli({"compress", f("bad.ften")}).code, 2);
  EXPECT_EQ(run_cli({"decompress", f("bad.ften")}).code, 2);
  std::mt19937_64 rng(103);
  save_tensor_file(splitstream::testing::random_tensor(rng, {4, 4, 2}), f("x.ften"));
  ASSERT_EQ(run_cli({"compress", f("x.ften"), "--out", f("x.dfcc")}).code, 0);
  auto bytes = slurp(f("x.dfcc"));
  bytes.back() ^= 0x01;
  { std::ofstream(f("flip.dfcc"), std::ios::binary) << bytes; }
  EXPECT_EQ(run_cli({"decompress", f("flip.dfcc")}).code, 3);
  bytes.resize(30);
  { std::ofstream(f("short.dfcc"), std::ios::binary) << bytes; }
  EXPECT_EQ(run_cli({"decompress", f("short.dfcc")}).code, 2);
}

TEST_F(Cli, BdRate) {
  write_curve(f("ref.csv"), {{0.80, 10}, {0.85, 20}, {0.88, 40}, {0.90, 80}});
  write_curve(f("half.csv"), {{0.80, 5}, {0.85, 10}, {0.88, 20}, {0.90, 40}});
  write_curve(f("far.csv"), {{0.10, 5}, {0.15, 10}, {0.18, 20}, {0.20, 40}});
  write_curve(f("short.csv"), {{0.80, 5}, {0.85, 10}});
  EXPECT_EQ(run_cli({"bd", f("ref.csv"), f("ref.csv")}).out, "0.00\n");
  EXPECT_EQ(run_cli({"bd", f("ref.csv"), f("half.csv")}).out, "-50.00\n");
  EXPECT_EQ(run_cli({"bd", f("ref.csv"), f("far.csv")}).code, 4);
  EXPECT_EQ(run_cli({"bd", f("ref.csv"), f("short.csv")}).code, 2);
  EXPECT_EQ(run_cli({"bd", f("ref.csv"), f("none.csv")}).code, 2);
}

TEST_F(Cli, GenDataIsDeterministic) {
  const auto r = run_cli({"gen-data", "--seed", "7", "--count", "10", "--out", f("a")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "images"), "10");
  ASSERT_EQ(run_cli({"gen-data", "--seed", "7", "--count", "10", "--out", f("b")}).code, 0);
  std::size_t n = 0;
  for (const auto& e : std::filesystem::directory_iterator(f("a"))) {
    if (e.path().extension() != ".ften") continue;
    ++n;
    EXPECT_EQ(slurp(e.path().string()), slurp(f("b") + "/" + e.path().filename().string()));
  }
  EXPECT_EQ(n, 10u);
  const auto bad = run_cli({"gen-data", "--count", "2", "--out", "/proc/definitely/not/here"});
  EXPECT_EQ(bad.code, 2);
  EXPECT_FALSE(bad.err.empty());
}

TEST_F(Cli, RdSweepRows) {
  const auto net = write_net(3);
  ASSERT_EQ(run_cli({"gen-data", "--seed", "4", "--count", "6", "--out", f("d")}).code, 0);
  const auto r = run_cli({"rd-sweep", "--net", net, "--data", f("d"), "--mode", "lossy", "--split", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "quality,kbpi");
  const auto all = run_cli({"rd-sweep", "--net", net, "--data", f("d"), "--mode", "float,lossless,lossy"});
  EXPECT_EQ(lines(all.out).size(), 7u);
  EXPECT_EQ(run_cli({"rd-sweep", "--net", net, "--data", f("d"), "--split", "99"}).code, 2);
}

TEST_F(Cli, TrainIsReproducible) {
  const auto net = write_net(5);
  ASSERT_EQ(run_cli({"gen-data", "--seed", "6", "--count", "12", "--out", f("d")}).code, 0);
  auto train = [&](const std::string& out, const std::string& epochs) {
    return run_cli({"train", "--net", net, "--data", f("d"), "--epochs", epochs, "--seed", "9", "--out", out,
                    "--log", out + ".csv"});
  };
  ASSERT_EQ(train(f("a.snet"), "2").code, 0);
  ASSERT_EQ(train(f("b.snet"), "2").code, 0);
  EXPECT_EQ(slurp(f("a.snet")), slurp(f("b.snet")));
  EXPECT_NE(slurp(f("a.snet")), slurp(net));
  EXPECT_EQ(lines(slurp(f("a.snet.csv"))).size(), 3u);
  ASSERT_EQ(train(f("z.snet"), "0").code, 0);
  EXPECT_EQ(slurp(f("z.snet")), slurp(net));
  const auto plain = run_cli({"train", "--net", net, "--data", f("d"), "--epochs", "1", "--plain", "--out", f("p.snet")});
  ASSERT_EQ(plain.code, 0) << plain.err;
  EXPECT_NE(plain.err.find("menu=none"), std::string::npos);
  const auto def = run_cli({"train", "--net", net, "--data", f("d"), "--epochs", "0", "--out", f("q.snet")});
  EXPECT_NE(def.err.find("menu=lossless,22,27,32,37"), std::string::npos);
  EXPECT_EQ(run_cli({"train", "--net", net, "--data", f("d"), "--qp", "lossless,99", "--out", f("r.snet")}).code, 2);
}

TEST_F(Cli, ConfigFileAndOverrides) {
  {
    std::ofstream o(f("gen.cfg"));
    o << "# dataset\ncount=3\nseed=7\nout=" << f("cfg") << "\n";
  }
  const auto r = run_cli({"gen-data", "--config", f("gen.cfg")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(field(r.out, "images"), "3");
  EXPECT_EQ(field(r.out, "seed"), "7");
  const auto o = run_cli({"gen-data", "--config", f("gen.cfg"), "--count", "2", "--out", f("cfg2")});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(field(o.out, "images"), "2");
  EXPECT_EQ(field(o.out, "dir"), f("cfg2"));
  EXPECT_EQ(run_cli({"gen-data", "--config", f("absent.cfg")}).code, 2);
  { std::ofstream(f("bad.cfg")) << "no equals sign\n"; }
  EXPECT_EQ(run_cli({"gen-data", "--config", f("bad.cfg")}).code, 2);
}

}  // namespace
}  // namespace splitstream::cli
