// Copyright 2026 The wmeval Authors. All Rights Reserved.
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

// wmeval: evaluate a manifest, render reports, check artifacts and work with
// human preference records.
//
// Exit status: 0 on success, 1 when validate-artifacts finds diagnostics,
// 2 on any error.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "wmeval/wmeval.hpp"

namespace {

namespace fs = std::filesystem;
using namespace wmeval;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void write_or_print(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-")
    std::cout << text;
  else
    write_text_file(out, text);
}

std::vector<preference::ScoreRecord> load_records(const std::string& path) {
  return preference::parse_records(read_jsonl_file(path));
}

Json stats_json(const preference::DimensionStats& s) {
  return Json{{"count", s.count}, {"min", s.min},       {"max", s.max}, {"mean", s.mean},
              {"std", s.std},     {"median", s.median}, {"q25", s.q25}, {"q75", s.q75}};
}

struct EvalOptions {
  std::string manifest;
  std::string metrics;
  int workers = 1;
  std::string out;
  std::vector<std::string> formats = {"json"};
};

int run_eval(const EvalOptions& o) {
  RunConfig config;
  config.manifest = o.manifest;
  config.metrics = split_list(o.metrics);
  config.workers = o.workers;
  config.out_dir = o.out;
  if (config.out_dir.empty()) {
    const char* env = std::getenv("WMEVAL_OUT_DIR");
    config.out_dir = env && *env ? env : ".";
  }
  std::vector<ReportFormat> formats;
  for (const auto& f : o.formats) formats.push_back(parse_report_format(f));

  auto report = run_evaluation(config);
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) fail(ErrorCode::kIoFailure, "cannot create " + config.out_dir.string() + ": " + ec.message());
  for (const auto& path : emit_report(report, config.out_dir, formats)) std::cout << path.string() << "\n";
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int run_validate(const std::string& manifest) {
  auto diags = validate_artifacts(fs::path(manifest));
  for (const auto& d : diags)
    std::cout << d.code << "\t" << d.metric << "\t" << (d.video.empty() ? "-" : d.video) << "\t" << d.message
              << "\n";
  std::cerr << diags.size() << " diagnostic(s)\n";
  return diags.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"World-model evaluation engine"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kEngineVersion));

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score a manifest and write reports");
  eval_cmd->add_option("--manifest", eval.manifest, "Evaluation manifest")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--metrics", eval.metrics, "Comma-separated metric ids (default: the manifest's list)");
  eval_cmd->add_option("--workers", eval.workers, "Per-video worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", eval.out, "Output directory (default: $WMEVAL_OUT_DIR, then .)");
  eval_cmd->add_option("--format", eval.formats, "json, csv, md or radar; repeatable")->delimiter(',');

  std::string report_in, report_format = "json", report_out;
  auto* report_cmd = app.add_subcommand("report", "Render a stored JSON report in another format");
  report_cmd->add_option("--in", report_in, "report.json from a previous run")->required()->check(CLI::ExistingFile);
  report_cmd->add_option("--format", report_format, "json, csv, md or radar");
  report_cmd->add_option("--out", report_out, "Output file (default: stdout)");

  std::string validate_manifest;
  auto* validate_cmd = app.add_subcommand("validate-artifacts", "Check every declared artifact without scoring");
  validate_cmd->add_option("--manifest", validate_manifest, "Evaluation manifest")->required();

  auto* prefs_cmd = app.add_subcommand("prefs", "Human preference records");
  prefs_cmd->require_subcommand(1);
  std::string prefs_in, prefs_dimension, prefs_model, prefs_out;
  double threshold = 0.0;

  auto* stats_cmd = prefs_cmd->add_subcommand("stats", "Per-dimension summary statistics");
  stats_cmd->add_option("--in", prefs_in, "Score records (JSON lines)")->required()->check(CLI::ExistingFile);
  stats_cmd->add_option("--dimension", prefs_dimension, "Single dimension (default: all present)");
  stats_cmd->add_option("--model", prefs_model, "Restrict to one model");
  stats_cmd->add_flag("--keywords", "Also print rationale keyword counts");

  auto* reconcile_cmd = prefs_cmd->add_subcommand("reconcile", "List items whose two groups diverge");
  reconcile_cmd->add_option("--in", prefs_in, "Score records (JSON lines)")->required()->check(CLI::ExistingFile);
  reconcile_cmd->add_option("--threshold", threshold, "Minimum absolute score gap")->required();

  auto* sft_cmd = prefs_cmd->add_subcommand("export-sft", "Emit {score, reason} training lines");
  sft_cmd->add_option("--in", prefs_in, "Score records (JSON lines)")->required()->check(CLI::ExistingFile);
  sft_cmd->add_option("--out", prefs_out, "Output file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval_cmd) return run_eval(eval);
    if (*report_cmd) {
      auto report = report_from_json(read_json_file(report_in));
      write_or_print(render_report(report, parse_report_format(report_format)), report_out);
      return 0;
    }
    if (*validate_cmd) return run_validate(validate_manifest);
    if (*stats_cmd) {
      auto records = load_records(prefs_in);
      std::optional<std::string_view> model;
      if (!prefs_model.empty()) model = prefs_model;
      Json out = Json::object();
      if (!prefs_dimension.empty()) {
        out[prefs_dimension] = stats_json(preference::dimension_stats(records, prefs_dimension, model));
      } else {
        for (auto dim : preference::kDimensions) {
          bool any = std::any_of(records.begin(), records.end(), [&](const auto& r) {
            return r.dimension == dim && (!model || r.model_id == *model);
          });
          if (any) out[std::string(dim)] = stats_json(preference::dimension_stats(records, dim, model));
        }
        if (out.empty()) fail(ErrorCode::kNoRecords, "no matching records");
      }
      if (stats_cmd->count("--keywords")) out["keywords"] = preference::keyword_counts(records);
      std::cout << canonical_json(out);
      return 0;
    }
    if (*reconcile_cmd) {
      auto records = load_records(prefs_in);
      for (const auto& d : preference::reconcile_groups(records, threshold))
        std::cout << Json{{"video_id", d.video_id}, {"model_id", d.model_id}, {"dimension", d.dimension},
                          {"score_a", d.score_a}, {"score_b", d.score_b}}
                         .dump()
                  << "\n";
      return 0;
    }
    if (*sft_cmd) {
      write_or_print(preference::export_sft(load_records(prefs_in)), prefs_out);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
