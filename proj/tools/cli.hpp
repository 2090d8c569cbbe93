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

// Command-line front end. Data goes to stdout (or --out), diagnostics to
// stderr. Exit codes: 0 success, 2 invalid arguments or malformed input,
// 3 codec failure, 4 non-overlapping RD curves.

#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "splitstream/splitstream.hpp"

namespace splitstream::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitCodec = 3;
inline constexpr int kExitNonOverlap = 4;

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIntegrity:
    case ErrorKind::kCodec:
    case ErrorKind::kRange:
      return kExitCodec;
    case ErrorKind::kNonOverlap:
      return kExitNonOverlap;
    default:
      return kExitInvalid;
  }
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::kInvalidArgument, std::string("bad ") + what + " '" + s + "'");
}

inline std::vector<int> parse_qp_list(const std::string& s) {
  std::vector<int> qps;
  for (const auto& item : split_list(s)) {
    const int qp = parse_int(item, "qp");
    if (qp < 0 || qp > codec::kMaxQp) fail(ErrorKind::kInvalidArgument, "qp " + item + " outside [0, 51]");
    qps.push_back(qp);
  }
  return qps;
}

inline std::vector<splitnet::QpChoice> parse_qp_menu(const std::string& s) {
  std::vector<splitnet::QpChoice> menu;
  for (const auto& item : split_list(s)) {
    if (item == "lossless") {
      menu.push_back(std::nullopt);
    } else {
      const int qp = parse_int(item, "qp");
      if (qp < 0 || qp > codec::kMaxQp) fail(ErrorKind::kInvalidArgument, "qp " + item + " outside [0, 51]");
      menu.push_back(qp);
    }
  }
  if (menu.empty()) fail(ErrorKind::kInvalidArgument, "empty qp menu");
  return menu;
}

inline std::string menu_string(const std::vector<splitnet::QpChoice>& menu) {
  std::string s;
  for (std::size_t i = 0; i < menu.size(); ++i) s += (i ? "," : "") + splitnet::to_string(menu[i]);
  return s;
}

inline TileMode parse_tiling(const std::string& s) {
  if (s == "tile") return TileMode::kTiling;
  if (s == "quilt") return TileMode::kQuilting;
  fail(ErrorKind::kInvalidArgument, "tiling must be tile or quilt");
}

inline void check_readable(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) fail(ErrorKind::kIo, "cannot read " + path);
}

inline void check_writable_parent(const std::string& path) {
  const auto parent = std::filesystem::absolute(path).parent_path();
  if (!std::filesystem::is_directory(parent)) fail(ErrorKind::kIo, "output directory does not exist: " + parent.string());
}

// Writes to --out when given, otherwise to `fallback`.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
    if (!path.empty()) {
      check_writable_parent(path);
      file_.open(path, std::ios::trunc);
      if (!file_) fail(ErrorKind::kIo, "cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : fallback_; }

 private:
  std::ofstream file_;
  std::ostream& fallback_;
};

// Reads "key=value" lines (blank lines and '#' comments ignored) and
// prepends "--key value" for every key the command line does not already set.
inline std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) fail(ErrorKind::kIo, "cannot read config " + path);
  std::set<std::string> given;
  for (const auto& a : rest) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  }
  std::vector<std::string> injected;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::kInvalidArgument, "config line " + std::to_string(lineno) + ": expected key=value");
    std::string key = line.substr(first, eq - first), value = line.substr(eq + 1);
    key.erase(key.find_last_not_of(" \t") + 1);
    value.erase(0, value.find_first_not_of(" \t"));
    value.erase(value.find_last_not_of(" \t") + 1);
    if (given.count(key)) continue;
    if (value == "true") {
      injected.push_back("--" + key);
    } else if (value != "false") {
      injected.push_back("--" + key);
      injected.push_back(value);
    }
  }
  // Injected flags go right after the subcommand name.
  if (rest.size() >= 2) {
    rest.insert(rest.begin() + 2, injected.begin(), injected.end());
  } else {
    rest.insert(rest.end(), injected.begin(), injected.end());
  }
  return rest;
}

inline std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

// Signed percentage with two decimals; never prints "-0.00".
inline std::string percent2(double v) {
  double r = std::round(v * 100.0) / 100.0;
  if (r == 0.0) r = 0.0;
  return fixed(r, 2);
}

}  // namespace detail

struct Options {
  std::string net, data, test, out, log, input;
  std::string ref_csv, test_csv;
  std::size_t split = 3;
  int n_bit = 8;
  std::string qp = "22,27,32,37";
  std::string qp_menu = "lossless,22,27,32,37";
  std::string mode = "lossless";
  std::string tiling = "tile";
  std::uint64_t seed = 1;
  std::size_t count = 100;
  std::size_t epochs = 10;
  std::size_t classes = 3;
  std::size_t train_count = 3000;
  std::size_t test_count = 600;
  double lr = 0.002;
  bool plain = false;
  double mobile_mac = 1e-9, cloud_mac = 1e-10, uplink = 1e6, bits_per_sample = 32.0;
};

// ---------------------------------------------------------------------------
// commands

inline int cmd_gen_data(const Options& o, std::ostream& out) {
  const auto d = splitnet::generate_shapes(o.seed, o.count);
  splitnet::write_dataset(d, o.out);
  out << "images=" << d.size() << " dir=" << o.out << " seed=" << o.seed << "\n";
  return kExitOk;
}

inline int cmd_init_net(const Options& o, std::ostream& out) {
  detail::check_writable_parent(o.out);
  const auto net = splitnet::reference_net(o.seed, o.classes);
  splitnet::save_network_file(net, o.out);
  out << "layers=" << net.size() << " seed=" << o.seed << " out=" << o.out << "\n";
  return kExitOk;
}

inline int cmd_profile(const Options& o, std::ostream& out) {
  detail::check_readable(o.net);
  const auto net = splitnet::load_network_file(o.net);
  const auto p = splitnet::layer_profile(net);
  detail::Sink sink(o.out, out);
  auto& s = sink.stream();
  s << "layer,kind,out_volume,cum_cost\n";
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    s << i + 1 << ',' << to_string(p.layers[i].kind) << ',' << p.layers[i].output_volume << ','
      << std::setprecision(10) << p.layers[i].cum_cost << '\n';
  }
  return kExitOk;
}

inline int cmd_plan(const Options& o, std::ostream& out) {
  detail::check_readable(o.net);
  const auto net = splitnet::load_network_file(o.net);
  const auto p = splitnet::layer_profile(net);
  const splitnet::LinkModel link{o.mobile_mac, o.cloud_mac, o.uplink, o.bits_per_sample};
  const std::size_t best = splitnet::choose_split(p, link);
  out << "split,latency_s\n";
  for (std::size_t k = 0; k <= p.layers.size(); ++k) out << k << ',' << std::setprecision(10) << split_latency(p, link, k) << '\n';
  out << "best_split=" << best << "\n";
  return kExitOk;
}

inline int cmd_compress(const Options& o, std::ostream& out) {
  detail::check_readable(o.input);
  CompressOptions opt;
  if (o.mode == "lossless") {
    opt.mode = CodecMode::kLossless;
  } else if (o.mode == "lossy") {
    opt.mode = CodecMode::kLossy;
    const auto qps = detail::parse_qp_list(o.qp);
    if (qps.size() != 1) fail(ErrorKind::kInvalidArgument, "compress takes exactly one --qp");
    opt.qp = qps[0];
  } else {
    fail(ErrorKind::kInvalidArgument, "compress --mode must be lossless or lossy");
  }
  opt.n_bit = o.n_bit;
  opt.tiling = detail::parse_tiling(o.tiling);
  if (!is_supported_bit_depth(opt.n_bit)) fail(ErrorKind::kInvalidArgument, "--nbit must be 8, 10 or 12");

  const FeatureTensor v = load_tensor_file(o.input);
  const Bitstream bs = compress(v, opt);
  const auto wire = codec::pack(bs);
  const std::string dst = o.out.empty() ? o.input + ".dfcc" : o.out;
  detail::check_writable_parent(dst);
  write_file(dst, wire);

  const FeatureTensor back = decompress(codec::unpack(wire));
  double max_err = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) max_err = std::max(max_err, std::abs(double{v[i]} - double{back[i]}));
  const std::size_t bytes[] = {wire.size()};
  out << "bytes=" << wire.size() << "\n";
  out << "kbpi=" << detail::fixed(metrics::kbpi_from_bytes(bytes, 1), 3) << "\n";
  out << "max_abs_err=" << std::setprecision(9) << max_err << "\n";
  out << "out=" << dst << "\n";
  return kExitOk;
}

inline int cmd_decompress(const Options& o, std::ostream& out) {
  detail::check_readable(o.input);
  const auto wire = read_file(o.input);
  const FeatureTensor v = decompress(codec::unpack(wire));
  const std::string dst = o.out.empty() ? o.input + ".ften" : o.out;
  detail::check_writable_parent(dst);
  save_tensor_file(v, dst);
  out << "shape=" << to_string(v.shape()) << "\n";
  out << "out=" << dst << "\n";
  return kExitOk;
}

inline std::vector<splitnet::SplitPlan> sweep_plans(const Options& o) {
  const TileMode tiling = detail::parse_tiling(o.tiling);
  if (!is_supported_bit_depth(o.n_bit)) fail(ErrorKind::kInvalidArgument, "--nbit must be 8, 10 or 12");
  std::vector<splitnet::SplitPlan> plans;
  for (const auto& m : detail::split_list(o.mode)) {
    if (m == "float") {
      plans.push_back(splitnet::SplitPlan::float32(o.split));
    } else if (m == "lossless") {
      plans.push_back(splitnet::SplitPlan::lossless(o.split, o.n_bit, tiling));
    } else if (m == "lossy") {
      for (int qp : detail::parse_qp_list(o.qp)) plans.push_back(splitnet::SplitPlan::lossy(o.split, qp, o.n_bit, tiling));
    } else {
      fail(ErrorKind::kInvalidArgument, "unknown mode '" + m + "'");
    }
  }
  if (plans.empty()) fail(ErrorKind::kInvalidArgument, "no sweep plans");
  return plans;
}

inline int cmd_rd_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  detail::check_readable(o.net);
  const auto net = splitnet::load_network_file(o.net);
  const auto data = splitnet::load_dataset(o.data);
  const auto plans = sweep_plans(o);
  std::vector<splitnet::PlanResult> results;
  for (const auto& p : plans) {
    results.push_back(splitnet::evaluate_plan(net, data, p));
    err << describe(p) << " kbpi=" << detail::fixed(results.back().kbpi, 4)
        << " accuracy=" << detail::fixed(results.back().accuracy, 4) << "\n";
  }
  detail::Sink sink(o.out, out);
  metrics::write_curve_csv(splitnet::to_curve(results), sink.stream());
  return kExitOk;
}

inline int cmd_bd(const Options& o, std::ostream& out) {
  const auto ref = metrics::read_curve_csv(o.ref_csv);
  const auto test = metrics::read_curve_csv(o.test_csv);
  out << detail::percent2(metrics::bd_delta_rate(ref, test)) << "\n";
  return kExitOk;
}

inline splitnet::TrainConfig train_config(const Options& o) {
  splitnet::TrainConfig cfg;
  cfg.split_index = o.split;
  cfg.qp_menu = o.plain ? std::vector<splitnet::QpChoice>{} : detail::parse_qp_menu(o.qp_menu);
  cfg.n_bit = o.n_bit;
  cfg.tiling = detail::parse_tiling(o.tiling);
  cfg.epochs = o.epochs;
  cfg.learning_rate = o.lr;
  cfg.seed = o.seed;
  if (!is_supported_bit_depth(cfg.n_bit)) fail(ErrorKind::kInvalidArgument, "--nbit must be 8, 10 or 12");
  return cfg;
}

inline void write_train_log(const std::vector<splitnet::EpochLog>& log, std::ostream& s) {
  s << "epoch,train_loss,test_acc\n";
  for (const auto& e : log) s << e.epoch << ',' << std::setprecision(10) << e.train_loss << ',' << e.test_acc << '\n';
}

inline int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  detail::check_readable(o.net);
  detail::check_writable_parent(o.out);
  const auto cfg = train_config(o);
  const auto net = splitnet::load_network_file(o.net);
  const auto train = splitnet::load_dataset(o.data);
  std::optional<splitnet::Dataset> test;
  if (!o.test.empty()) test = splitnet::load_dataset(o.test);
  err << "seed=" << cfg.seed << " split=" << cfg.split_index << " menu="
      << (cfg.qp_menu.empty() ? std::string("none") : detail::menu_string(cfg.qp_menu)) << "\n";
  const auto result = splitnet::train_augmented(net, train, cfg, test ? &*test : nullptr);
  splitnet::save_network_file(result.net, o.out);
  if (!o.log.empty()) {
    detail::Sink sink(o.log, out);
    write_train_log(result.log, sink.stream());
  } else {
    write_train_log(result.log, out);
  }
  return kExitOk;
}

// gen-data -> train (plain and augmented) -> rd-sweep -> bd, all under one directory.
inline int cmd_pipeline(const Options& o, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(o.out, ec);
  if (ec || !fs::is_directory(o.out)) fail(ErrorKind::kIo, "cannot create " + o.out);
  const fs::path dir(o.out);
  err << "seed=" << o.seed << " split=" << o.split << " epochs=" << o.epochs << "\n";

  const auto train = splitnet::generate_shapes(o.seed * 2 + 1000, o.train_count);
  const auto test = splitnet::generate_shapes(o.seed * 2 + 1001, o.test_count);
  splitnet::write_dataset(train, (dir / "train").string());
  splitnet::write_dataset(test, (dir / "test").string());
  const auto init = splitnet::reference_net(o.seed);
  splitnet::save_network_file(init, (dir / "init.snet").string());

  Options plain_opt = o;
  plain_opt.plain = true;
  const auto plain = splitnet::train_augmented(init, train, train_config(plain_opt), &test);
  const auto aug = splitnet::train_augmented(init, train, train_config(o), &test);
  splitnet::save_network_file(plain.net, (dir / "plain.snet").string());
  splitnet::save_network_file(aug.net, (dir / "augmented.snet").string());
  {
    std::ofstream s(dir / "plain_log.csv");
    write_train_log(plain.log, s);
  }
  {
    std::ofstream s(dir / "augmented_log.csv");
    write_train_log(aug.log, s);
  }

  Options sweep = o;
  sweep.mode = "lossless,lossy";
  const auto plans = sweep_plans(sweep);
  auto run = [&](const splitnet::Network& net, const char* name) {
    std::vector<splitnet::PlanResult> results;
    for (const auto& p : plans) results.push_back(splitnet::evaluate_plan(net, test, p));
    const auto curve = splitnet::to_curve(results);
    std::ofstream s(dir / (std::string(name) + "_rd.csv"));
    metrics::write_curve_csv(curve, s);
    for (const auto& r : results) {
      out << name << ',' << describe(r.plan) << ",kbpi=" << detail::fixed(r.kbpi, 4)
          << ",accuracy=" << detail::fixed(r.accuracy, 4) << "\n";
    }
    return curve;
  };
  const auto plain_curve = run(plain.net, "plain");
  const auto aug_curve = run(aug.net, "augmented");
  try {
    const double bd = metrics::bd_delta_rate(metrics::monotone_hull(plain_curve), metrics::monotone_hull(aug_curve));
    out << "bd_rate_augmented_vs_plain=" << detail::percent2(bd) << "\n";
  } catch (const Error& e) {
    err << "bd-rate unavailable: " << e.what() << "\n";
    out << "bd_rate_augmented_vs_plain=nan\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"splitstream: feature compression for split inference"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto* gen = app.add_subcommand("gen-data", "generate the synthetic shape dataset");
  gen->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  gen->add_option("--count", o.count, "number of images")->capture_default_str();
  gen->add_option("--out", o.out, "output directory")->required();

  auto* init = app.add_subcommand("init-net", "write the reference network with random weights");
  init->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  init->add_option("--classes", o.classes, "class count")->capture_default_str();
  init->add_option("--out", o.out, "output SNET file")->required();

  auto* prof = app.add_subcommand("profile", "per-layer output volume and cumulative cost");
  prof->add_option("--net", o.net, "SNET model")->required();
  prof->add_option("--out", o.out, "CSV output (default stdout)");

  auto* plan = app.add_subcommand("plan", "latency-optimal split point");
  plan->add_option("--net", o.net, "SNET model")->required();
  plan->add_option("--mobile-mac-time", o.mobile_mac, "mobile seconds per MAC")->capture_default_str();
  plan->add_option("--cloud-mac-time", o.cloud_mac, "cloud seconds per MAC")->capture_default_str();
  plan->add_option("--uplink", o.uplink, "uplink bits per second")->capture_default_str();
  plan->add_option("--bits-per-sample", o.bits_per_sample, "bits per transferred sample")->capture_default_str();

  auto* comp = app.add_subcommand("compress", "compress an FTEN tensor into a DFCC file");
  comp->add_option("input", o.input, "FTEN tensor")->required();
  comp->add_option("--mode", o.mode, "lossless|lossy")->capture_default_str();
  comp->add_option("--nbit", o.n_bit, "Q-layer bit depth (8|10|12)")->capture_default_str();
  comp->add_option("--qp", o.qp, "lossy QP")->capture_default_str();
  comp->add_option("--tiling", o.tiling, "tile|quilt")->capture_default_str();
  comp->add_option("--out", o.out, "output DFCC file (default <input>.dfcc)");

  auto* decomp = app.add_subcommand("decompress", "decode a DFCC file back to an FTEN tensor");
  decomp->add_option("input", o.input, "DFCC file")->required();
  decomp->add_option("--out", o.out, "output FTEN file (default <input>.ften)");

  auto* sweep = app.add_subcommand("rd-sweep", "accuracy vs KBPI over transfer modes and QPs");
  sweep->add_option("--net", o.net, "SNET model")->required();
  sweep->add_option("--data", o.data, "dataset directory")->required();
  sweep->add_option("--split", o.split, "split index")->capture_default_str();
  sweep->add_option("--nbit", o.n_bit, "Q-layer bit depth")->capture_default_str();
  sweep->add_option("--qp", o.qp, "comma-separated QP list")->capture_default_str();
  sweep->add_option("--mode", o.mode, "comma-separated modes: float,lossless,lossy")->capture_default_str();
  sweep->add_option("--tiling", o.tiling, "tile|quilt")->capture_default_str();
  sweep->add_option("--out", o.out, "CSV output (default stdout)");

  auto* bd = app.add_subcommand("bd", "Bjontegaard delta rate of test vs reference curve, percent");
  bd->add_option("reference", o.ref_csv, "reference curve CSV")->required();
  bd->add_option("test", o.test_csv, "test curve CSV")->required();

  auto* train = app.add_subcommand("train", "(compression-augmented) training");
  train->add_option("--net", o.net, "initial SNET model")->required();
  train->add_option("--data", o.data, "training dataset directory")->required();
  train->add_option("--test", o.test, "test dataset directory for test_acc");
  train->add_option("--split", o.split, "split index")->capture_default_str();
  train->add_option("--qp", o.qp_menu, "QP menu, e.g. lossless,22,27,32,37")->capture_default_str();
  train->add_flag("--plain", o.plain, "train without the codec in the loop");
  train->add_option("--nbit", o.n_bit, "Q-layer bit depth")->capture_default_str();
  train->add_option("--tiling", o.tiling, "tile|quilt")->capture_default_str();
  train->add_option("--epochs", o.epochs, "epochs")->capture_default_str();
  train->add_option("--lr", o.lr, "learning rate")->capture_default_str();
  train->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  train->add_option("--out", o.out, "output SNET file")->required();
  train->add_option("--log", o.log, "training log CSV (default stdout)");

  auto* pipe = app.add_subcommand("pipeline", "gen-data, train plain and augmented, sweep, bd");
  pipe->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  pipe->add_option("--split", o.split, "split index")->capture_default_str();
  pipe->add_option("--epochs", o.epochs, "epochs")->capture_default_str();
  pipe->add_option("--train-count", o.train_count, "training images")->capture_default_str();
  pipe->add_option("--test-count", o.test_count, "test images")->capture_default_str();
  pipe->add_option("--qp", o.qp, "sweep QP list")->capture_default_str();
  pipe->add_option("--nbit", o.n_bit, "Q-layer bit depth")->capture_default_str();
  pipe->add_option("--tiling", o.tiling, "tile|quilt")->capture_default_str();
  pipe->add_option("--lr", o.lr, "learning rate")->capture_default_str();
  pipe->add_option("--out", o.out, "output directory")->required();

  try {
    args = detail::apply_config(std::move(args));
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();  // program name
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  }

  try {
    if (*gen) return cmd_gen_data(o, out);
    if (*init) return cmd_init_net(o, out);
    if (*prof) return cmd_profile(o, out);
    if (*plan) return cmd_plan(o, out);
    if (*comp) return cmd_compress(o, out);
    if (*decomp) return cmd_decompress(o, out);
    if (*sweep) return cmd_rd_sweep(o, out, err);
    if (*bd) return cmd_bd(o, out);
    if (*train) return cmd_train(o, out, err);
    if (*pipe) return cmd_pipeline(o, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCodec;
  }
  return kExitInvalid;
}

}  // namespace splitstream::cli
