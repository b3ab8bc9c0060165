// tailfit: power-law tail analysis for citation-style count data.
//
//   tailfit run --input data/*.counts --seed 42 --out report.json
//   tailfit gen-corpus --out-dir data
//
// Exit status: 0 on success, 1 on runtime failure, 2 on bad flags or config;
// failures print a one-line JSON error summary to stderr.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tailfit/errors.hpp"
#include "tailfit/pipeline.hpp"

namespace {

void print_error(const char* kind, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = kind;
  j["message"] = message;
  std::cerr << j.dump() << "\n";
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw tailfit::io_error("cannot write " + path);
  out << content;
  if (!out) throw tailfit::io_error("error while writing " + path);
}

int run_command(const std::vector<std::string>& inputs, const std::string& format_name,
                tailfit::RunConfig config, const std::string& out_path, std::string ccdf_dir) {
  tailfit::Format format = tailfit::Format::auto_detect;
  if (format_name == "raw") format = tailfit::Format::raw;
  if (format_name == "histogram") format = tailfit::Format::histogram;

  auto t0 = std::chrono::steady_clock::now();
  std::vector<tailfit::CountSample> fields;
  fields.reserve(inputs.size());
  for (const std::string& path : inputs) fields.push_back(tailfit::ingest(path, format));

  tailfit::AnalysisReport report = tailfit::run(fields, config);

  std::string out_parent = std::filesystem::path(out_path).parent_path().string();
  if (!out_parent.empty()) std::filesystem::create_directories(out_parent);
  write_file(out_path, tailfit::render_json(report));
  std::string csv_path = std::filesystem::path(out_path).replace_extension(".csv").string();
  write_file(csv_path, tailfit::render_csv(report));

  if (ccdf_dir.empty()) ccdf_dir = std::filesystem::path(out_path).parent_path().string();
  if (ccdf_dir.empty()) ccdf_dir = ".";
  std::filesystem::create_directories(ccdf_dir);
  // exports pair each row's sample with its fit; pooled rows have no single
  // source file but are rebuilt from the concatenation
  for (const tailfit::FieldRow& row : report.rows) {
    if (!row.fit) continue;
    const tailfit::CountSample* src = nullptr;
    for (const auto& f : fields)
      if (f.name == row.field) src = &f;
    tailfit::CountSample pooled;
    if (!src && row.field == "ALL") {
      std::vector<std::int64_t> all;
      for (const auto& f : fields) all.insert(all.end(), f.counts.begin(), f.counts.end());
      pooled = tailfit::CountSample::from_values("ALL", std::move(all));
      src = &pooled;
    }
    if (!src) continue;
    std::string path = (std::filesystem::path(ccdf_dir) / (row.field + ".ccdf.csv")).string();
    tailfit::export_ccdf(*src, *row.fit, path);
  }

  auto t1 = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(t1 - t0).count();
  std::fprintf(stderr, "tailfit: %zu field(s) -> %s, %s (%.1fs)\n", fields.size(),
               out_path.c_str(), csv_path.c_str(), secs);
  return 0;
}

struct CorpusSpec {
  const char* file;
  const char* field;
  tailfit::Model model;
  std::uint64_t seed;
};

int gen_corpus_command(const std::string& out_dir, std::size_t n) {
  using namespace tailfit;
  const std::vector<CorpusSpec> specs = {
      {"power_law.counts", "power_law", Model{PowerLaw(3.5, 1)}, 101},
      {"log_normal.counts", "log_normal", Model{LogNormal(1.0, 1.2, 1)}, 202},
      {"yule.counts", "yule", Model{Yule(3.2, 1)}, 303},
      {"pl_cutoff.counts", "pl_cutoff", Model{PowerLawCutoff(2.5, 0.01, 1)}, 404},
      {"exponential.counts", "exponential", Model{Exponential(0.25, 1)}, 505},
  };

  std::filesystem::create_directories(out_dir);
  nlohmann::ordered_json manifest;
  manifest["generator"] = std::string("tailfit ") + kVersion + " gen-corpus";
  manifest["n_per_field"] = n;
  manifest["fields"] = nlohmann::ordered_json::array();
  for (const CorpusSpec& s : specs) {
    std::vector<std::int64_t> draws = sample(s.model, n, s.seed);
    std::string path = (std::filesystem::path(out_dir) / s.file).string();
    std::ostringstream body;
    body << "# field: " << s.field << "\n";
    body << "# model: " << describe(s.model) << "\n";
    body << "# seed: " << s.seed << "\n";
    for (std::int64_t v : draws) body << v << "\n";
    write_file(path, body.str());

    nlohmann::ordered_json f;
    f["file"] = s.file;
    f["field"] = s.field;
    f["model"] = describe(s.model);
    f["seed"] = s.seed;
    f["n"] = n;
    manifest["fields"].push_back(f);
    std::fprintf(stderr, "tailfit: wrote %s (%zu draws)\n", path.c_str(), n);
  }
  write_file((std::filesystem::path(out_dir) / "MANIFEST.json").string(),
             manifest.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete power-law tail analysis for count data"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "Analyze one or more input files");
  std::vector<std::string> inputs;
  std::string format_name = "auto";
  std::string out_path = "report.json";
  std::string ccdf_dir;
  std::string profile = "paper";
  tailfit::RunConfig config;
  bool seed_given = false, reps_given = false, sims_given = false;
  run_cmd->add_option("--input", inputs, "Input files (.counts raw, .hist histogram)")
      ->required()
      ->expected(-1);
  run_cmd->add_option("--format", format_name, "Input format")
      ->check(CLI::IsMember({"auto", "raw", "histogram"}));
  run_cmd->add_option("--seed", config.master_seed, "Master seed")->each([&](const std::string&) {
    seed_given = true;
  });
  run_cmd->add_option("--bootstrap-reps", config.bootstrap_reps, "Bootstrap replications")
      ->each([&](const std::string&) { reps_given = true; });
  run_cmd->add_option("--gof-sims", config.gof_sims, "Goodness-of-fit synthetic data sets")
      ->each([&](const std::string&) { sims_given = true; });
  run_cmd->add_option("--gof-threshold", config.gof_threshold, "Rejection threshold");
  run_cmd->add_option("--min-tail", config.min_tail, "Minimum tail size per cutoff candidate");
  run_cmd->add_flag("--pooled", config.pooled, "Append an ALL row pooling every input");
  run_cmd->add_option("--out", out_path, "Report path (.json; a .csv sibling is written)");
  run_cmd->add_option("--ccdf-dir", ccdf_dir, "Directory for per-field CCDF exports");
  run_cmd->add_option("--profile", profile, "test: 200 reps/sims, paper: 1000/1000")
      ->check(CLI::IsMember({"test", "paper"}));

  // gen-corpus
  auto* gen_cmd = app.add_subcommand("gen-corpus", "Regenerate the bundled synthetic corpus");
  std::string out_dir = "data";
  std::size_t corpus_n = 50000;
  gen_cmd->add_option("--out-dir", out_dir, "Output directory");
  gen_cmd->add_option("--n", corpus_n, "Draws per field");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    print_error("cli", e.what());
    return 2;
  }

  try {
    if (*gen_cmd) return gen_corpus_command(out_dir, corpus_n);
    if (!reps_given) config.bootstrap_reps = profile == "test" ? 200 : 1000;
    if (!sims_given) config.gof_sims = profile == "test" ? 200 : 1000;
    (void)seed_given;
    config.validate();
    return run_command(inputs, format_name, config, out_path, ccdf_dir);
  } catch (const tailfit::config_error& e) {
    print_error("config", e.what());
    return 2;
  } catch (const tailfit::error& e) {
    print_error("runtime", e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
}
