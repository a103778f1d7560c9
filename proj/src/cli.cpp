// Copyright 2026 The ste-forge Authors
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

#include "steforge/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "steforge/config.hpp"
#include "steforge/generator.hpp"
#include "steforge/ground_truth.hpp"
#include "steforge/losses.hpp"
#include "steforge/metrics.hpp"
#include "steforge/png_io.hpp"
#include "steforge/text_render.hpp"

namespace steforge {

namespace fs = std::filesystem;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Io:
      return kExitIo;
    case ErrorKind::NoPairs:
      return kExitNoPairs;
    case ErrorKind::MalformedFile:
    case ErrorKind::LengthMismatch:
    case ErrorKind::EmptyLists:
    case ErrorKind::TooFewSamples:
    case ErrorKind::NonFinite:
    case ErrorKind::NonSymmetric:
    case ErrorKind::NotPSD:
      return kExitMalformed;
    case ErrorKind::InvalidImage:
    case ErrorKind::DimMismatch:
    case ErrorKind::PairDimMismatch:
    case ErrorKind::TooSmall:
      return kExitInvalidImage;
    case ErrorKind::CorruptSample:
    case ErrorKind::IndexOutOfRange:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

namespace {

/// Raised for argument problems detected after CLI11 parsing succeeded.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

unsigned default_threads() {
  if (const char* env = std::getenv("STE_FORGE_THREADS")) {
    unsigned v = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc{} && ptr == s.data() + s.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

double parse_number(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw UsageError("not a number: '" + s + "'");
  return v;
}

/// "0.9,0.8" -> {0.9, 0.8}
std::vector<double> parse_number_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string cell;
  while (std::getline(in, cell, ',')) out.push_back(parse_number(cell));
  if (out.empty()) throw UsageError("empty number list");
  return out;
}

void require_arity(const std::vector<std::string>& inputs, std::size_t n, const std::string& loss) {
  if (inputs.size() != n) {
    throw UsageError("--loss " + loss + " takes " + std::to_string(n) + " inputs, got " +
                     std::to_string(inputs.size()));
  }
}

Image read_gray(const fs::path& path) {
  Image img = read_image(path);
  return img.channels() == 1 ? img : to_luma(img);
}

bool is_binary(const Image& gray) {
  return std::all_of(gray.data().begin(), gray.data().end(), [](float v) { return v == 0.0f || v == 1.0f; });
}

/// Binary inputs convert losslessly; anything else needs an explicit threshold.
Mask read_binary_mask(const fs::path& path, std::optional<float> threshold, std::ostream& err) {
  const Image gray = read_gray(path);
  if (is_binary(gray)) return extract_mask(gray, 0.5f);
  if (!threshold) {
    fail(ErrorKind::InvalidImage, path.string() + " is not a binary mask; pass --threshold to binarize it");
  }
  err << "warning: " << path.string() << " is not binary; thresholding at " << *threshold << "\n";
  return extract_mask(gray, *threshold);
}

std::vector<double> read_prob_rows(const fs::path& path, std::size_t& steps, std::size_t& classes) {
  const FeatureMatrix m = read_feature_file(path);
  steps = m.n;
  classes = m.d;
  return m.values;
}

void write_text(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << "\n";
    return;
  }
  std::ofstream file(out_path, std::ios::binary | std::ios::trunc);
  if (!file) fail(ErrorKind::Io, "cannot write " + out_path);
  file << text;
  if (!text.empty() && text.back() != '\n') file << "\n";
  if (!file) fail(ErrorKind::Io, "cannot write " + out_path);
}

struct GenerateArgs {
  std::string config;
  std::size_t count = 0;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
};

int cmd_generate(const GenerateArgs& a, std::ostream& out, std::ostream& err) {
  GenConfig config = load_config(a.config);
  if (a.seed) config.master_seed = *a.seed;

  GenerateOptions options;
  options.threads = a.threads.value_or(default_threads());
  std::mutex progress_mutex;
  const std::size_t step = std::max<std::size_t>(1, a.count / 20);
  options.progress = [&](std::size_t done, std::size_t total) {
    if (done % step != 0 && done != total) return;
    std::lock_guard lock(progress_mutex);
    err << "generated " << done << "/" << total << "\n";
  };

  const DatasetManifest manifest = generate_dataset(config, a.count, a.out, options);
  if (!manifest.skipped.empty()) {
    err << "warning: " << manifest.skipped.size() << " of " << a.count
        << " requested samples were skipped after " << kMaxRetries << " retries\n";
  }
  out << (fs::path(a.out) / "manifest.json").string() << "\n";
  return kExitOk;
}

struct EvaluateArgs {
  std::string pred, gt, fid_a, fid_b, wra_pred, wra_target, out;
  std::string format = "json";
  bool case_insensitive = false;
  bool per_channel = false;
  std::optional<unsigned> threads;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  EvaluateOptions options;
  options.fid_features_a = a.fid_a;
  options.fid_features_b = a.fid_b;
  options.wra_pred = a.wra_pred;
  options.wra_target = a.wra_target;
  options.case_sensitive = !a.case_insensitive;
  options.ssim.per_channel = a.per_channel;
  options.threads = a.threads.value_or(default_threads());
  if (options.fid_features_a.empty() != options.fid_features_b.empty()) {
    throw UsageError("--fid-features-a and --fid-features-b go together");
  }
  if (options.wra_pred.empty() != options.wra_target.empty()) {
    throw UsageError("--wra-pred and --wra-target go together");
  }
  const MetricReport report = evaluate_dirs(a.pred, a.gt, options);
  write_text(a.format == "csv" ? report_to_csv(report) : report_to_json(report), a.out, out);
  return kExitOk;
}

struct ToolArgs {
  std::string in, out, fg, alpha, bg, text;
  std::optional<float> threshold;
  int height = 64;
  int width = 256;
};

int cmd_tool(const std::string& which, const ToolArgs& a, std::ostream& err) {
  if (which == "skeletonize") {
    write_mask(a.out, skeletonize(read_binary_mask(a.in, a.threshold, err)));
  } else if (which == "mask") {
    write_mask(a.out, extract_mask(read_gray(a.in), a.threshold.value_or(kDefaultMaskThreshold)));
  } else if (which == "invert") {
    write_mask(a.out, invert_mask(read_binary_mask(a.in, a.threshold, err)));
  } else if (which == "composite") {
    GlyphLayer layer{read_image(a.fg), read_gray(a.alpha)};
    if (layer.color.channels() != 3) {
      Image rgb(layer.color.height(), layer.color.width(), 3);
      for (int y = 0; y < rgb.height(); ++y) {
        for (int x = 0; x < rgb.width(); ++x) {
          for (int c = 0; c < 3; ++c) rgb.at(y, x, c) = layer.color.at(y, x);
        }
      }
      layer.color = std::move(rgb);
    }
    write_image(a.out, composite(layer, read_image(a.bg)));
  } else if (which == "content") {
    write_image(a.out, render_content_image(a.text, Dims{a.height, a.width}));
  }
  return kExitOk;
}

struct LossArgs {
  std::string loss;
  std::vector<std::string> inputs;
  bool digits = false;
};

int cmd_loss(const LossArgs& a, std::ostream& out) {
  double value = 0.0;
  if (a.loss == "l2") {
    require_arity(a.inputs, 2, a.loss);
    value = l2_loss(read_image(a.inputs[0]), read_image(a.inputs[1]));
  } else if (a.loss == "dice") {
    require_arity(a.inputs, 2, a.loss);
    const Image target = read_gray(a.inputs[0]);
    if (!is_binary(target)) fail(ErrorKind::InvalidImage, a.inputs[0] + " is not a binary mask");
    value = dice_loss(extract_mask(target, 0.5f), read_gray(a.inputs[1]));
  } else if (a.loss == "gan") {
    require_arity(a.inputs, 2, a.loss);
    value = gan_loss_value(DiscriminatorScore(parse_number_list(a.inputs[0])),
                           DiscriminatorScore(parse_number_list(a.inputs[1])));
  } else if (a.loss == "rec") {
    require_arity(a.inputs, 2, a.loss);
    std::size_t steps = 0, classes = 0;
    auto rows = read_prob_rows(a.inputs[0], steps, classes);
    const CharProbs probs(steps, classes, std::move(rows));
    const Charset charset = a.digits ? Charset::letters_digits() : Charset::letters();
    std::vector<std::size_t> target;
    for (char ch : a.inputs[1]) {
      const auto idx = charset.index_of(ch);
      if (!idx) fail(ErrorKind::InvalidCharacter, std::string("'") + ch + "' is not in the charset");
      target.push_back(*idx);
    }
    value = recognizer_loss(probs, target);
  } else {
    require_arity(a.inputs, 9, a.loss);
    std::vector<double> v;
    for (const auto& s : a.inputs) v.push_back(parse_number(s));
    value = total_losses(LossComponents{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8]}).total;
  }
  out << fixed6(value) << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"ste_forge: scene-text editing data generator, loss oracles and metrics", "ste_forge"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Synthesize a dataset of paired training tuples");
  generate->add_option("--config", gen.config, "Generator config file (key = value)")->required();
  generate->add_option("--count", gen.count, "Number of samples")->required();
  generate->add_option("--out", gen.out, "Output directory")->required();
  generate->add_option("--seed", gen.seed, "Master seed (overrides the config)");
  generate->add_option("--threads", gen.threads, "Worker threads (default: $STE_FORGE_THREADS or all cores)")
      ->check(CLI::PositiveNumber);

  EvaluateArgs eval;
  auto* evaluate = app.add_subcommand("evaluate", "Compare predicted and ground-truth image directories");
  evaluate->add_option("--pred", eval.pred, "Directory of predicted PNGs")->required();
  evaluate->add_option("--gt", eval.gt, "Directory of ground-truth PNGs")->required();
  evaluate->add_option("--fid-features-a", eval.fid_a, "Feature file for the first set");
  evaluate->add_option("--fid-features-b", eval.fid_b, "Feature file for the second set");
  evaluate->add_option("--wra-pred", eval.wra_pred, "Recognized words, one per line");
  evaluate->add_option("--wra-target", eval.wra_target, "Target words, one per line");
  evaluate->add_option("--format", eval.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  evaluate->add_option("--out", eval.out, "Write the report here instead of standard output");
  evaluate->add_flag("--case-insensitive", eval.case_insensitive, "Compare words ignoring case");
  evaluate->add_flag("--ssim-per-channel", eval.per_channel, "Average SSIM over RGB instead of luma");
  evaluate->add_option("--threads", eval.threads, "Worker threads")->check(CLI::PositiveNumber);

  ToolArgs tool_args;
  auto* tool = app.add_subcommand("tool", "Ground-truth helpers operating on PNG files");
  tool->require_subcommand(1);
  auto add_threshold = [&](CLI::App* sub) {
    sub->add_option("--threshold", tool_args.threshold, "Binarization threshold in [0,1]")
        ->check(CLI::Range(0.0, 1.0));
  };
  auto* t_skel = tool->add_subcommand("skeletonize", "One-pixel skeleton of a binary mask");
  auto* t_mask = tool->add_subcommand("mask", "Threshold an alpha/grayscale image into a mask");
  auto* t_inv = tool->add_subcommand("invert", "Complement of a binary mask");
  for (auto* sub : {t_skel, t_mask, t_inv}) {
    sub->add_option("--in", tool_args.in, "Input PNG")->required();
    sub->add_option("--out", tool_args.out, "Output PNG")->required();
    add_threshold(sub);
  }
  auto* t_comp = tool->add_subcommand("composite", "Alpha-composite a foreground over a background");
  t_comp->add_option("--fg", tool_args.fg, "Foreground color PNG")->required();
  t_comp->add_option("--alpha", tool_args.alpha, "Foreground alpha PNG")->required();
  t_comp->add_option("--bg", tool_args.bg, "Background PNG")->required();
  t_comp->add_option("--out", tool_args.out, "Output PNG")->required();
  auto* t_content = tool->add_subcommand("content", "Render a word in the standard content format");
  t_content->add_option("--text", tool_args.text, "Word to render")->required();
  t_content->add_option("--out", tool_args.out, "Output PNG")->required();
  t_content->add_option("--height", tool_args.height, "Canvas height")->check(CLI::PositiveNumber);
  t_content->add_option("--width", tool_args.width, "Canvas width")->check(CLI::PositiveNumber);

  LossArgs loss_args;
  auto* loss = app.add_subcommand("loss", "Evaluate one training loss and print it");
  loss->add_option("--loss", loss_args.loss, "Loss to evaluate")
      ->required()
      ->check(CLI::IsMember({"l2", "dice", "gan", "rec", "total"}));
  loss->add_option("--inputs", loss_args.inputs,
                   "l2/dice: two PNGs; gan: D(real) D(fake) as comma lists; rec: probability CSV and word; "
                   "total: b_i ts_fg ts_sk ts_gan f_l2 f_gan per style rec")
      ->expected(1, -1);
  loss->add_flag("--digits", loss_args.digits, "rec: use the 62-character charset");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub != nullptr;
         sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
      target = sub;
    }
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const CLI::App* target = &app;
    for (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front(); sub != nullptr;
         sub = sub->get_subcommands().empty() ? nullptr : sub->get_subcommands().front()) {
      target = sub;
    }
    err << "error: " << e.what() << "\n\n" << target->help();
    return kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen, out, err);
    if (evaluate->parsed()) return cmd_evaluate(eval, out);
    if (loss->parsed()) return cmd_loss(loss_args, out);
    for (auto* sub : {t_skel, t_mask, t_inv, t_comp, t_content}) {
      if (sub->parsed()) return cmd_tool(sub->get_name(), tool_args, err);
    }
    err << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace steforge
