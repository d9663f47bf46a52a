// Copyright 2026 The Bhadra Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bhadra/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "bhadra/analytics.hpp"
#include "bhadra/attack_model.hpp"
#include "bhadra/comparison.hpp"
#include "bhadra/http_api.hpp"
#include "bhadra/render.hpp"
#include "bhadra/repository.hpp"
#include "bhadra/taxonomy.hpp"
#include "json_support.hpp"

namespace bhadra {

namespace fs = std::filesystem;

namespace {

struct Options {
  std::string taxonomy = std::string(BHADRA_DATA_DIR) + "/bhadra-v1.json";
  std::string repo;
  std::string format = "text";
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse:
    case ErrorCode::kVersion:
    case ErrorCode::kConflict:
    case ErrorCode::kUndefined:
      return kExitInvalid;
    case ErrorCode::kNotFound:
    case ErrorCode::kArgument:
    case ErrorCode::kIo:
      return kExitUsage;
  }
  return kExitUsage;
}

void print_findings(std::ostream& out, const ValidationReport& report, std::string_view indent = "  ") {
  for (const auto& f : report.findings()) {
    out << indent << (f.severity == FindingSeverity::kError ? "error" : "warning") << ' ' << f.code;
    if (!f.subject.empty()) out << " [" << f.subject << ']';
    out << ": " << f.message << '\n';
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error(ErrorCode::kIo, "cannot open for writing", path);
  file << text;
  if (!file.flush()) throw Error(ErrorCode::kIo, "write failed", path);
}

std::string fixed4(double value) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(4) << value;
  return s.str();
}

class Context {
 public:
  Context(const Options& options, std::ostream& out, std::ostream& err) : options_(options), out_(out), err_(err) {}

  const Taxonomy& taxonomy() {
    if (!taxonomy_) taxonomy_ = load_valid_taxonomy_file(options_.taxonomy);
    return *taxonomy_;
  }

  Repository& repository() {
    if (!repository_) {
      if (options_.repo.empty()) throw Error(ErrorCode::kArgument, "no repository given (use --repo or BHADRA_REPO)");
      repository_.emplace(options_.repo, taxonomy());
      for (const auto& warning : repository_->warnings()) err_ << "warning: skipped " << warning << '\n';
    }
    return *repository_;
  }

  // A reference is a model file if such a path exists, otherwise a repository id.
  // Files are validated on the way in; repository models already are.
  std::vector<AttackModel> resolve(const std::vector<std::string>& refs) {
    std::vector<AttackModel> models;
    for (const auto& ref : refs) {
      if (fs::is_regular_file(ref)) {
        AttackModel model = load_model_file(ref);
        ValidationReport report = validate_model(model, taxonomy());
        if (!report.valid()) throw ValidationFailure(std::move(report), ref + ": invalid attack model");
        models.push_back(std::move(model));
        continue;
      }
      if (options_.repo.empty()) throw Error(ErrorCode::kNotFound, "no such model file", ref);
      auto model = repository().get(ref);
      if (!model) throw Error(ErrorCode::kNotFound, "no attack model '" + ref + "' in " + options_.repo);
      models.push_back(std::move(*model));
    }
    return models;
  }

  std::vector<AttackModel> corpus(const std::vector<std::string>& refs) {
    if (!refs.empty()) return resolve(refs);
    return repository().all();
  }

  bool json() const { return options_.format == "json"; }
  std::ostream& out() { return out_; }
  std::ostream& err() { return err_; }
  const Options& options() const { return options_; }

 private:
  const Options& options_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<Taxonomy> taxonomy_;
  std::optional<Repository> repository_;
};

int cmd_taxonomy_validate(Context& ctx, const std::string& file) {
  const std::string path = file.empty() ? ctx.options().taxonomy : file;
  auto loaded = load_taxonomy_file(path);
  if (auto* report = std::get_if<ValidationReport>(&loaded)) {
    if (ctx.json()) {
      auto doc = report_to_json(*report);
      doc["file"] = path;
      ctx.out() << doc.dump(2) << '\n';
    } else {
      ctx.out() << path << ": invalid, " << report->error_count() << " error(s)\n";
      print_findings(ctx.out(), *report);
    }
    return kExitInvalid;
  }
  const Taxonomy& taxonomy = std::get<Taxonomy>(loaded);
  if (ctx.json()) {
    nlohmann::ordered_json doc;
    doc["file"] = path;
    doc["status"] = "Valid";
    doc["version"] = taxonomy.version();
    doc["tactics"] = taxonomy.tactics().size();
    doc["techniques"] = taxonomy.techniques().size();
    ctx.out() << doc.dump(2) << '\n';
  } else {
    ctx.out() << path << ": valid, version " << taxonomy.version() << ", " << taxonomy.tactics().size()
              << " tactics, " << taxonomy.techniques().size() << " techniques\n";
  }
  return kExitOk;
}

int cmd_model_validate(Context& ctx, const std::vector<std::string>& files, bool lint,
                       const std::string& capabilities) {
  const Taxonomy& taxonomy = ctx.taxonomy();
  std::optional<CapabilityRuleset> ruleset;
  if (lint) {
    ruleset = capabilities.empty() ? capabilities_from_taxonomy(taxonomy) : load_capabilities_file(capabilities, taxonomy);
  }
  bool all_valid = true;
  auto results = nlohmann::ordered_json::array();
  for (const auto& file : files) {
    ValidationReport report;
    try {
      const AttackModel model = load_model_file(file);
      report = validate_model(model, taxonomy);
      if (ruleset && ruleset->mode != LintMode::kOff) report.merge(lint_capabilities(model, *ruleset));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kParse && e.code() != ErrorCode::kVersion) throw;
      report.error(std::string(to_string(e.code())), e.locus(), e.what());
    }
    all_valid = all_valid && report.valid();
    if (ctx.json()) {
      auto doc = report_to_json(report);
      doc["file"] = file;
      results.push_back(std::move(doc));
    } else {
      ctx.out() << file << ": " << (report.valid() ? "valid" : "invalid");
      if (report.warning_count() > 0) ctx.out() << ", " << report.warning_count() << " warning(s)";
      ctx.out() << '\n';
      print_findings(ctx.out(), report);
    }
  }
  if (ctx.json()) ctx.out() << results.dump(2) << '\n';
  return all_valid ? kExitOk : kExitInvalid;
}

int cmd_model_new(Context& ctx, const std::string& title, const std::vector<std::string>& adversaries,
                  const std::string& output) {
  std::set<AdversaryClass> classes;
  for (const auto& text : adversaries) {
    auto parsed = parse_adversary_class(text);
    if (!parsed) throw Error(ErrorCode::kArgument, "unknown adversary class '" + text + "'");
    classes.insert(*parsed);
  }
  ValidationReport report;
  if (title.find_first_not_of(" \t\r\n\f\v") == std::string::npos) {
    report.error("EMPTY_NAME", "title", "model title must not be empty");
  }
  if (!report.valid()) throw ValidationFailure(std::move(report), "cannot create model");
  const AttackModel model = new_model(title, classes, ctx.taxonomy());
  write_output(output, serialize_model(model), ctx.out());
  return kExitOk;
}

int cmd_model_tag(Context& ctx, const std::string& file, const std::string& technique, const std::string& evidence,
                  const std::string& confidence, bool remove, const std::string& output) {
  const AttackModel model = load_model_file(file);
  AttackModel updated;
  if (remove) {
    updated = untag_technique(model, technique);
  } else {
    auto parsed = parse_confidence(confidence);
    if (!parsed) throw Error(ErrorCode::kArgument, "confidence must be Confirmed or Suspected");
    updated = tag_technique(model, TechniqueTag{technique, evidence, *parsed}, ctx.taxonomy());
  }
  ValidationReport report = validate_model(updated, ctx.taxonomy());
  if (!report.valid()) throw ValidationFailure(std::move(report), file + ": result would be invalid, not written");
  write_output(output.empty() ? file : output, serialize_model(updated), ctx.out());
  print_findings(ctx.err(), report);
  return kExitOk;
}

std::vector<std::string> palette_or_default(const std::vector<std::string>& palette) {
  return palette.empty() ? default_palette() : palette;
}

int cmd_compare(Context& ctx, const std::vector<std::string>& refs, const std::vector<std::string>& palette) {
  const Taxonomy& taxonomy = ctx.taxonomy();
  const auto models = ctx.resolve(refs);
  const ComparisonResult result = compare(models, palette_or_default(palette), taxonomy);
  if (ctx.json()) {
    auto doc = comparison_to_json(result, taxonomy);
    auto pairs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < models.size(); ++i) {
      for (std::size_t j = i + 1; j < models.size(); ++j) {
        const Ratio r = similarity(models[i], models[j]);
        pairs.push_back({{"a", models[i].id}, {"b", models[j].id}, {"numerator", r.numerator},
                         {"denominator", r.denominator}, {"value", r.value()}});
      }
    }
    doc["similarity"] = std::move(pairs);
    ctx.out() << doc.dump(2) << '\n';
    return kExitOk;
  }
  std::ostream& out = ctx.out();
  out << "similarity (shared / union):\n";
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      const Ratio r = similarity(models[i], models[j]);
      out << "  " << models[i].id << " ~ " << models[j].id << "  " << r.numerator << '/' << r.denominator << "  "
          << fixed4(r.value()) << '\n';
    }
  }
  out << "layers:\n";
  for (const auto& layer : result.layers) {
    out << "  " << std::left << std::setw(6) << layer.technique << ' ' << layer.color << ' ';
    bool first = true;
    for (const auto& id : result.overlap.models) {
      if (!layer.members.count(id)) continue;
      out << (first ? "" : ",") << id;
      first = false;
    }
    out << '\n';
  }
  return kExitOk;
}

int cmd_stats(Context& ctx, const std::vector<std::string>& refs) {
  const Taxonomy& taxonomy = ctx.taxonomy();
  const auto corpus = ctx.corpus(refs);
  const CorpusStats stats = technique_frequency(corpus, taxonomy);
  if (ctx.json()) {
    ctx.out() << stats_to_json(stats, taxonomy).dump(2) << '\n';
    return kExitOk;
  }
  std::ostream& out = ctx.out();
  out << "corpus: " << stats.corpus_size << " model(s), taxonomy " << stats.taxonomy_version << '\n';
  for (const auto& cell : heatmap_grid(stats, taxonomy)) {
    if (cell.count == 0) continue;
    out << "  " << std::left << std::setw(6) << cell.technique << std::right << std::setw(4) << cell.count << "  "
        << taxonomy.technique(cell.technique).name << '\n';
  }
  out << "tactic totals:";
  for (const auto& tactic : taxonomy.tactics()) out << ' ' << tactic.id << '=' << stats.tactic_totals.at(tactic.id);
  out << "\nunused: " << stats.unused.size() << " technique(s)\n";
  return kExitOk;
}

void require_version(const std::string& version, const Taxonomy& taxonomy, const std::string& input) {
  if (version != taxonomy.version()) {
    throw Error(ErrorCode::kVersion, "document targets taxonomy " + version + ", not " + taxonomy.version(), input);
  }
}

// Input is either a saved compare/stats JSON document or a list of models.
int cmd_render(Context& ctx, const std::string& kind, const std::vector<std::string>& refs, const std::string& input,
               const std::string& to, const std::vector<std::string>& palette, const std::string& output) {
  const Taxonomy& taxonomy = ctx.taxonomy();
  if (!input.empty() && !refs.empty()) throw Error(ErrorCode::kArgument, "give either --input or models, not both");
  std::string text;
  if (kind == "layers") {
    ComparisonResult result;
    if (!input.empty()) {
      result = comparison_from_json(detail::parse_ordered_json(detail::read_text_file(input)));
      require_version(result.taxonomy_version, taxonomy, input);
      for (const auto& layer : result.layers) {
        if (!taxonomy.find_technique(layer.technique)) {
          throw Error(ErrorCode::kParse, "unknown technique " + layer.technique, input);
        }
      }
    } else {
      result = compare(ctx.resolve(refs), palette_or_default(palette), taxonomy);
    }
    text = to == "svg" ? render_layers_svg(result, taxonomy) : render_layers_csv(result, taxonomy);
  } else {
    CorpusStats stats;
    if (!input.empty()) {
      stats = stats_from_json(detail::parse_ordered_json(detail::read_text_file(input)));
      require_version(stats.taxonomy_version, taxonomy, input);
    } else {
      stats = technique_frequency(ctx.corpus(refs), taxonomy);
    }
    text = to == "svg" ? render_stats_svg(stats, taxonomy) : render_stats_csv(stats, taxonomy);
  }
  write_output(output, text, ctx.out());
  return kExitOk;
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::kArgument, "--listen expects HOST:PORT");
  const std::string host = listen.substr(0, colon);
  int port = 0;
  try {
    std::size_t used = 0;
    port = std::stoi(listen.substr(colon + 1), &used);
    if (used != listen.size() - colon - 1) throw std::invalid_argument("trailing characters");
  } catch (const std::exception&) {
    throw Error(ErrorCode::kArgument, "invalid port in '" + listen + "'");
  }
  if (host.empty() || port < 0 || port > 65535) throw Error(ErrorCode::kArgument, "invalid address '" + listen + "'");
  return {host, port};
}

int cmd_serve(Context& ctx, const std::string& listen, bool check_only) {
  const auto [host, port] = split_listen(listen);
  const std::string document = detail::read_text_file(ctx.options().taxonomy);
  Repository& repository = ctx.repository();
  ctx.out() << "taxonomy " << repository.taxonomy().version() << ", " << repository.size() << " model(s) in "
            << ctx.options().repo << '\n';
  if (check_only) {
    if (!repository.warnings().empty()) {
      ctx.out() << repository.warnings().size() << " document(s) skipped\n";
      return kExitInvalid;
    }
    ctx.out() << "configuration ok\n";
    return kExitOk;
  }

  ApiServer server(repository, document);
  sigset_t signals, previous;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  std::thread waiter([&] {
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
  });
  ctx.out() << "listening on " << host << ':' << port << std::endl;
  const bool ok = server.listen(host, port);
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  if (!ok) throw Error(ErrorCode::kIo, "cannot listen on " + listen);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options options;
  CLI::App app{"Threat modeling for mobile networks", "bhadra"};
  app.require_subcommand(1);
  app.add_option("--taxonomy", options.taxonomy, "Taxonomy document")->envname("BHADRA_TAXONOMY");
  app.add_option("--repo", options.repo, "Attack model directory")->envname("BHADRA_REPO");
  app.add_option("--format", options.format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string file, title, output, input, technique, evidence, confidence = "Confirmed", capabilities, kind, to = "csv";
  std::string listen = "127.0.0.1:8080";
  std::vector<std::string> files, adversaries, refs, palette;
  bool lint = false, remove = false, check_only = false;

  auto* tv = app.add_subcommand("taxonomy-validate", "Check a taxonomy document");
  tv->add_option("file", file, "Taxonomy document (defaults to --taxonomy)");

  auto* mv = app.add_subcommand("model-validate", "Validate attack model files");
  mv->add_option("files", files, "Model files")->required();
  mv->add_flag("--lint", lint, "Also check adversary capabilities");
  mv->add_option("--capabilities", capabilities, "Capability ruleset (default: derived from the taxonomy)");

  auto* mn = app.add_subcommand("model-new", "Create a Draft model");
  mn->add_option("--title", title, "Title")->required();
  mn->add_option("--adversary", adversaries, "Adversary class (repeatable)");
  mn->add_option("--out", output, "Output file (default: stdout)");

  auto* mt = app.add_subcommand("model-tag", "Tag or untag a technique in a model file");
  mt->add_option("file", file, "Model file")->required();
  mt->add_option("--technique", technique, "Technique id")->required();
  mt->add_option("--evidence", evidence, "Evidence text");
  mt->add_option("--confidence", confidence, "Confirmed or Suspected");
  mt->add_flag("--remove", remove, "Remove the tag instead");
  mt->add_option("--out", output, "Output file (default: rewrite the input)");

  auto* cmp = app.add_subcommand("compare", "Compare two or more models");
  cmp->add_option("models", refs, "Model files or repository ids")->required();
  cmp->add_option("--palette", palette, "Colors, one per model then the overlap color")->delimiter(',');

  auto* st = app.add_subcommand("stats", "Technique frequency over a corpus");
  st->add_option("models", refs, "Model files or ids (default: the whole repository)");

  auto* rd = app.add_subcommand("render", "Export layers or a heatmap");
  rd->add_option("kind", kind, "layers or heatmap")->required()->check(CLI::IsMember({"layers", "heatmap"}));
  rd->add_option("models", refs, "Model files or ids");
  rd->add_option("--input", input, "Saved compare or stats JSON document");
  rd->add_option("--to", to, "csv or svg")->check(CLI::IsMember({"csv", "svg"}));
  rd->add_option("--palette", palette, "Colors for layers")->delimiter(',');
  rd->add_option("--out", output, "Output file (default: stdout)");

  auto* sv = app.add_subcommand("serve", "Serve the HTTP API");
  sv->add_option("--listen", listen, "HOST:PORT");
  sv->add_flag("--check-config", check_only, "Load everything, then exit");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context ctx(options, out, err);
  try {
    if (*tv) return cmd_taxonomy_validate(ctx, file);
    if (*mv) return cmd_model_validate(ctx, files, lint, capabilities);
    if (*mn) return cmd_model_new(ctx, title, adversaries, output);
    if (*mt) return cmd_model_tag(ctx, file, technique, evidence, confidence, remove, output);
    if (*cmp) return cmd_compare(ctx, refs, palette);
    if (*st) return cmd_stats(ctx, refs);
    if (*rd) return cmd_render(ctx, kind, refs, input, to, palette, output);
    if (*sv) return cmd_serve(ctx, listen, check_only);
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << '\n';
    print_findings(err, e.report());
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace bhadra
