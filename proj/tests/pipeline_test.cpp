#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tailfit/errors.hpp"
#include "tailfit/pipeline.hpp"
#include "tailfit/rng.hpp"

using namespace tailfit;

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::filesystem::path temp_dir() {
  static const std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() / "tailfit_pipeline_tests";
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write_temp(const std::string& name, const std::string& body) {
  auto path = temp_dir() / name;
  std::ofstream out(path);
  out << body;
  return path.string();
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

// splits one CSV line on raw commas; good enough for unquoted numeric rows
std::vector<std::string> split_cells(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

CountSample power_law_corpus(const std::string& name, double alpha, std::int64_t n,
                             std::uint64_t seed) {
  return CountSample::from_values(name, sample(PowerLaw(alpha, 1), n, seed));
}

}  // namespace

TEST_CASE("describe_sample matches hand-computed moments") {
  DescriptiveStats d = describe_sample(CountSample::from_values("t", {0, 3, 3, 12}));
  CHECK(d.n == 4);
  CHECK(d.mean == doctest::Approx(4.5).epsilon(1e-15));
  CHECK(d.sd == doctest::Approx(5.196152422706632).epsilon(1e-14));
  CHECK(d.max == 12);

  DescriptiveStats one = describe_sample(CountSample::from_values("one", {7}));
  CHECK(one.n == 1);
  CHECK(one.mean == 7.0);
  CHECK(one.sd == 0.0);
  CHECK(one.max == 7);

  DescriptiveStats empty = describe_sample(CountSample{});
  CHECK(empty.n == 0);
  CHECK(empty.mean == 0.0);
  CHECK(empty.max == 0);
}

TEST_CASE("run configuration rejects out-of-range settings") {
  RunConfig good;
  CHECK_NOTHROW(good.validate());

  RunConfig c = good;
  c.bootstrap_reps = 1;
  CHECK_THROWS_WITH_AS(c.validate(), "bootstrap_reps must be >= 2", config_error);

  c = good;
  c.gof_sims = 99;
  CHECK_THROWS_WITH_AS(c.validate(), "gof_sims must be >= 100", config_error);

  c = good;
  c.gof_threshold = 0.0;
  CHECK_THROWS_WITH_AS(c.validate(), "gof_threshold must lie in (0, 1)", config_error);
  c.gof_threshold = 1.0;
  CHECK_THROWS_AS(c.validate(), config_error);

  c = good;
  c.min_tail = 1;
  CHECK_THROWS_WITH_AS(c.validate(), "min_tail must be >= 2", config_error);

  c = good;
  c.alpha_lo = 1.0;
  CHECK_THROWS_WITH_AS(c.validate(), "alpha bounds must satisfy 1 < lo < hi", config_error);
  c = good;
  c.alpha_hi = c.alpha_lo;
  CHECK_THROWS_AS(c.validate(), config_error);

  // series tolerances are validated through the same entry point
  c = good;
  c.series.rel_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), domain_error);
}

TEST_CASE("derived option blocks mirror the run configuration") {
  RunConfig c;
  c.min_tail = 75;
  c.alpha_lo = 1.5;
  c.alpha_hi = 8.0;
  c.gof_sims = 150;
  c.gof_threshold = 0.2;

  ScanOptions s = c.scan_options();
  CHECK(s.min_tail == 75);
  CHECK(s.fit.alpha_lo == 1.5);
  CHECK(s.fit.alpha_hi == 8.0);

  GofOptions g = c.gof_options();
  CHECK(g.n_sims == 150);
  CHECK(g.threshold == 0.2);
  CHECK(g.scan.min_tail == 75);
  CHECK(g.scan.fit.alpha_hi == 8.0);
}

TEST_CASE("ingest reads raw counts with comments and a field header") {
  std::string path = write_temp("raw_named.txt",
                                "# field: medicine\n"
                                "5\n"
                                "\n"
                                "1\n"
                                "# trailing comment\n"
                                "  3 \n"
                                "1\n");
  CountSample s = ingest(path);
  CHECK(s.name == "medicine");
  CHECK((s.counts == std::vector<std::int64_t>{1, 1, 3, 5}));

  // unnamed files take the stem
  std::string anon = write_temp("physics_counts.txt", "2\n0\n9\n");
  CountSample a = ingest(anon);
  CHECK(a.name == "physics_counts");
  CHECK((a.counts == std::vector<std::int64_t>{0, 2, 9}));
}

TEST_CASE("ingest expands histogram rows and skips a leading header") {
  std::string path = write_temp("hist_basic.hist",
                                "value,count\n"
                                "1,3\n"
                                "4,0\n"
                                "7,2\n");
  CountSample s = ingest(path);  // .hist extension selects the format
  CHECK(s.name == "hist_basic");
  CHECK((s.counts == std::vector<std::int64_t>{1, 1, 1, 7, 7}));

  // explicit format overrides the extension; bare word headers are skipped too
  std::string txt = write_temp("hist_plain.txt",
                               "counts\n"
                               "# field: chemistry\n"
                               "0,2\n"
                               "2,1\n");
  CountSample t = ingest(txt, Format::histogram);
  CHECK(t.name == "chemistry");
  CHECK((t.counts == std::vector<std::int64_t>{0, 0, 2}));
}

TEST_CASE("ingest reports parse failures with line numbers") {
  std::string bad_token = write_temp("bad_token.txt", "4\nabc\n7\n");
  try {
    ingest(bad_token);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("non-integer token 'abc'") != std::string::npos);
  }

  std::string negative = write_temp("negative.txt", "-3\n");
  try {
    ingest(negative);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("negative value -3") != std::string::npos);
  }

  // raw format does not silently accept histogram rows
  std::string csv_in_raw = write_temp("csv_in_raw.txt", "12,5\n");
  CHECK_THROWS_AS(ingest(csv_in_raw, Format::raw), parse_error);

  std::string no_comma = write_temp("no_comma.hist", "value,count\n5;3\n");
  try {
    ingest(no_comma);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("expected 'value,count'") != std::string::npos);
  }

  // only the first non-comment line may be a header
  std::string two_headers = write_temp("two_headers.hist", "value,count\nx,y\n");
  CHECK_THROWS_AS(ingest(two_headers), parse_error);

  std::string empty_cell = write_temp("empty_cell.hist", "5,\n");
  try {
    ingest(empty_cell);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 1);
    CHECK(std::string(e.what()).find("empty value") != std::string::npos);
  }

  std::string overflow = write_temp("overflow.txt", "99999999999999999999\n");
  try {
    ingest(overflow);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(std::string(e.what()).find("integer out of range") != std::string::npos);
  }

  std::string comments_only = write_temp("comments_only.txt", "# field: x\n# nothing\n");
  try {
    ingest(comments_only);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("no observations") != std::string::npos);
  }

  CHECK_THROWS_AS(ingest((temp_dir() / "does_not_exist.txt").string()), io_error);
}

TEST_CASE("analyze_field derives stage seeds from the master seed and field name") {
  CountSample s = power_law_corpus("alpha_field", 2.5, 1500, 99);
  RunConfig c;
  c.master_seed = 1234;
  c.bootstrap_reps = 30;
  c.gof_sims = 100;

  FieldRow row = analyze_field(s, c);
  CHECK(row.field == "alpha_field");
  CHECK(row.skip_reason.empty());
  REQUIRE(row.fit.has_value());
  CHECK(row.stats.n == 1500);

  std::uint64_t field_seed = mix_seed(std::uint64_t{1234}, "alpha_field");
  CHECK(row.bootstrap_seed == mix_seed(field_seed, "bootstrap"));
  CHECK(row.gof_seed == mix_seed(field_seed, "gof"));

  // the row is exactly what the stage functions produce with those seeds
  REQUIRE(row.bootstrap.has_value());
  BootstrapResult b = bootstrap_se(s, 30, row.bootstrap_seed, c.scan_options());
  CHECK(row.bootstrap->se_alpha == b.se_alpha);
  CHECK(row.bootstrap->se_x0 == b.se_x0);
  CHECK(row.fit->se_alpha == b.se_alpha);
  CHECK(row.fit->se_x0 == b.se_x0);

  REQUIRE(row.gof.has_value());
  GofResult g = gof_pvalue(s, *row.fit, c.gof_options(), row.gof_seed);
  CHECK(row.gof->p_value == g.p_value);
  CHECK(row.gof->n_exceed == g.n_exceed);

  REQUIRE(row.comparisons.size() == 6);
  CHECK(row.comparisons[0].alternative == Family::exponential);
  CHECK(row.comparisons[5].alternative == Family::power_law_cutoff);
}

TEST_CASE("fields that cannot support a tail fit are skipped with a reason") {
  std::vector<std::int64_t> v(30);
  for (int i = 0; i < 30; ++i) v[i] = i + 1;
  CountSample s = CountSample::from_values("tiny", std::move(v));

  FieldRow row = analyze_field(s, RunConfig{});  // default min_tail 50 > n
  CHECK(!row.skip_reason.empty());
  CHECK(!row.fit.has_value());
  CHECK(!row.bootstrap.has_value());
  CHECK(!row.gof.has_value());
  CHECK(row.comparisons.empty());
  CHECK(row.stats.n == 30);
  CHECK(row.stats.max == 30);
}

TEST_CASE("run assembles a sorted report and is reproducible across workers") {
  std::vector<CountSample> fields;
  fields.push_back(power_law_corpus("zeta", 2.5, 1200, 11));
  fields.push_back(power_law_corpus("alpha", 2.0, 1200, 12));

  RunConfig c;
  c.bootstrap_reps = 25;
  c.gof_sims = 100;
  c.pooled = true;

  AnalysisReport rep = run(fields, c);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].field == "ALL");
  CHECK(rep.rows[1].field == "alpha");
  CHECK(rep.rows[2].field == "zeta");
  CHECK(rep.rows[0].stats.n == 2400);

  // a row only depends on its own field, never on the rest of the run
  FieldRow solo = analyze_field(fields[1], c);
  REQUIRE(solo.fit.has_value());
  REQUIRE(rep.rows[1].fit.has_value());
  CHECK(solo.fit->model.alpha() == rep.rows[1].fit->model.alpha());
  CHECK(solo.fit->model.x0() == rep.rows[1].fit->model.x0());
  CHECK(solo.fit->se_alpha == rep.rows[1].fit->se_alpha);
  REQUIRE(solo.gof.has_value());
  CHECK(solo.gof->p_value == rep.rows[1].gof->p_value);
  REQUIRE(solo.comparisons.size() == 6);
  for (std::size_t i = 0; i < 6; ++i)
    CHECK(solo.comparisons[i].stat == rep.rows[1].comparisons[i].stat);

  // worker count must not leak into the report
  RunConfig flat = c;
  flat.pooled = false;
  setenv("TAILFIT_THREADS", "3", 1);
  AnalysisReport wide = run(fields, flat);
  setenv("TAILFIT_THREADS", "1", 1);
  AnalysisReport narrow = run(fields, flat);
  unsetenv("TAILFIT_THREADS");
  CHECK(render_json(wide) == render_json(narrow));

  // structural checks on the rendered report
  std::string js = render_json(rep);
  CHECK(js.back() == '\n');
  CHECK(js.rfind("{\n  \"version\": \"0.1.0\",", 0) == 0);
  nlohmann::json j = nlohmann::json::parse(js);
  CHECK(j["config"]["seed"] == 42);
  CHECK(j["config"]["bootstrap_reps"] == 25);
  CHECK(j["config"]["gof_sims"] == 100);
  CHECK(j["config"]["alpha_bounds"][1] == doctest::Approx(20.0));
  CHECK(j["config"]["pooled"] == true);
  REQUIRE(j["fields"].size() == 3);
  const auto& f = j["fields"][1];
  CHECK(f["name"] == "alpha");
  CHECK(f["stats"]["n"] == 1200);
  CHECK(f["power_law"]["x0"].get<std::int64_t>() == rep.rows[1].fit->model.x0());
  CHECK(f["power_law"]["n_tail"].get<std::int64_t>() == rep.rows[1].fit->n_tail);
  CHECK(f["bootstrap"]["seed"].get<std::uint64_t>() == rep.rows[1].bootstrap_seed);
  CHECK(f["gof"]["seed"].get<std::uint64_t>() == rep.rows[1].gof_seed);
  REQUIRE(f["comparisons"].size() == 6);
  CHECK(f["comparisons"][0]["family"] == "exponential");
  CHECK(f["comparisons"][5]["family"] == "power_law_cutoff");
  CHECK(f["comparisons"][5]["nested"] == true);
  for (int i = 0; i < 5; ++i) CHECK(f["comparisons"][i]["nested"] == false);

  CHECK_THROWS_AS(run(fields, [] {
                    RunConfig bad;
                    bad.gof_sims = 5;
                    return bad;
                  }()),
                  config_error);
}

TEST_CASE("fixed-decimal cells never print negative zero") {
  CHECK(format_fixed(kNaN, 2) == "-");
  CHECK(format_fixed(std::numeric_limits<double>::infinity(), 1) == "-");
  CHECK(format_fixed(0.0, 3) == "0.000");
  CHECK(format_fixed(-0.0, 2) == "0.00");
  CHECK(format_fixed(-0.0001, 2) == "0.00");
  CHECK(format_fixed(-0.006, 2) == "-0.01");
  CHECK(format_fixed(12.345, 1) == "12.3");
  CHECK(format_estimate_cell(32.0, 5.4, 0, 1) == "32 (5.4)");
  CHECK(format_estimate_cell(3.91, 0.22, 2, 2) == "3.91 (0.22)");
  CHECK(format_estimate_cell(3.91, kNaN, 2, 2) == "3.91 (-)");
}

TEST_CASE("csv rendering lays out header, cells, and skip rows exactly") {
  AnalysisReport rep;

  FieldRow medicine;
  medicine.field = "med,icine";  // forces CSV quoting
  medicine.stats = DescriptiveStats{71000, 21.46, 103.7, 4321};
  medicine.fit = PowerLawFit{PowerLaw(3.91, 32), 0.22, 5.4, 356, 0.005, 0.031};
  GofResult g;
  g.k = 0.031;
  g.n_sims = 1000;
  g.n_exceed = 825;
  g.p_value = 0.825;
  medicine.gof = g;
  ComparisonResult exp_row;
  exp_row.alternative = Family::exponential;
  exp_row.lr = -12.25;
  exp_row.sigma_lr = 2.0;
  exp_row.stat = -2.5;
  exp_row.p_value = 0.125;
  medicine.comparisons.push_back(exp_row);
  rep.rows.push_back(medicine);

  FieldRow physics;
  physics.field = "physics";
  physics.stats = DescriptiveStats{30, 15.5, 8.8, 30};
  physics.skip_reason = "insufficient tail";
  rep.rows.push_back(physics);

  FieldRow chem;  // fit present, bootstrap and gof both failed
  chem.field = "chem";
  chem.stats = DescriptiveStats{100, 2.0, 1.25, 9};
  chem.fit = PowerLawFit{PowerLaw(2.5, 1), kNaN, kNaN, 100, 1.0, 0.1};
  rep.rows.push_back(chem);

  std::vector<std::string> lines = split_lines(render_csv(rep));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] ==
        "field,n,mean,sd,max,x0,alpha,n_tail,pct_tail,gof_p,"
        "exponential_lr,exponential_stat,exponential_p,"
        "weibull_lr,weibull_stat,weibull_p,"
        "log_normal_lr,log_normal_stat,log_normal_p,"
        "tsallis_lr,tsallis_stat,tsallis_p,"
        "yule_lr,yule_stat,yule_p,"
        "power_law_cutoff_lr,power_law_cutoff_stat,power_law_cutoff_p");

  std::string want_medicine =
      "\"med,icine\",71000,21.46,103.70,4321,32 (5.4),3.91 (0.22),356,0.5,0.825,"
      "-12.250,-2.500,0.125";
  for (int i = 0; i < 15; ++i) want_medicine += ",-";
  CHECK(lines[1] == want_medicine);

  std::string want_physics = "physics,30,15.50,8.80,30";
  for (int i = 0; i < 23; ++i) want_physics += ",-";
  CHECK(lines[2] == want_physics);

  std::string want_chem = "chem,100,2.00,1.25,9,1 (-),2.50 (-),100,100.0,-";
  for (int i = 0; i < 18; ++i) want_chem += ",-";
  CHECK(lines[3] == want_chem);
}

TEST_CASE("json rendering maps failures and non-finite values to explicit fields") {
  AnalysisReport rep;

  FieldRow q;
  q.field = "q";
  q.stats = DescriptiveStats{5, 2.0, 1.0, 4};
  q.fit = PowerLawFit{PowerLaw(2.0, 1), kNaN, kNaN, 5, 1.0, 0.1};
  q.bootstrap_failure = "all replicates failed";
  q.bootstrap_seed = 77;
  q.gof_failure = "too many refit failures";
  q.gof_seed = 88;
  rep.rows.push_back(q);

  FieldRow r;
  r.field = "r";
  r.stats = DescriptiveStats{3, 1.0, 0.0, 1};
  r.skip_reason = "no usable tail";
  rep.rows.push_back(r);

  nlohmann::json j = nlohmann::json::parse(render_json(rep));
  REQUIRE(j["fields"].size() == 2);

  const auto& fq = j["fields"][0];
  CHECK(fq["name"] == "q");
  CHECK(fq["power_law"]["alpha"] == doctest::Approx(2.0));
  CHECK(fq["power_law"]["se_alpha"].is_null());
  CHECK(fq["power_law"]["se_x0"].is_null());
  CHECK(fq["bootstrap"]["seed"] == 77);
  CHECK(fq["bootstrap"]["failure"] == "all replicates failed");
  CHECK(!fq["bootstrap"].contains("n_ok"));
  CHECK(fq["gof"]["failure"] == "too many refit failures");
  CHECK(!fq["gof"].contains("p_value"));
  CHECK(fq["comparisons"].is_array());
  CHECK(fq["comparisons"].empty());

  const auto& fr = j["fields"][1];
  CHECK(fr["skipped"] == "no usable tail");
  CHECK(!fr.contains("power_law"));
  CHECK(fr["stats"]["n"] == 3);
}

TEST_CASE("ccdf export anchors the fitted curve to the empirical tail") {
  CountSample s = CountSample::from_values("hand", {0, 1, 1, 2, 4});
  PowerLawFit fit{PowerLaw(2.0, 2), kNaN, kNaN, 2, 0.4, 0.0};
  std::string path = (temp_dir() / "hand_ccdf.csv").string();
  export_ccdf(s, fit, path);

  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::string> lines = split_lines(text);
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "x,ccdf_empirical,ccdf_fit");
  CHECK(lines[1] == "1,0.8,");     // zeros are dropped, below-cutoff rows have no fit value
  CHECK(lines[2] == "2,0.4,0.4");  // at the cutoff the fit is anchored to the empirical CCDF
  std::vector<std::string> last = split_cells(lines[3]);
  REQUIRE(last.size() == 3);
  CHECK(last[0] == "4");
  CHECK(std::stod(last[1]) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(std::stod(last[2]) ==
        doctest::Approx(0.4 * PowerLaw(2.0, 2).ccdf(4)).epsilon(1e-10));

  CHECK_THROWS_AS(export_ccdf(s, fit, "/nonexistent_dir_xyz/out.csv"), io_error);
}

TEST_CASE("exported ccdf tracks a genuine power-law corpus") {
  CountSample s = power_law_corpus("track", 2.5, 20000, 13);
  PowerLawFit fit = estimate_xmin(s);
  std::string path = (temp_dir() / "track_ccdf.csv").string();
  export_ccdf(s, fit, path);

  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  REQUIRE(header == "x,ccdf_empirical,ccdf_fit");

  // within the well-populated tail the fit stays within a quarter decade
  double n = static_cast<double>(s.n());
  std::string line;
  int checked = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells = split_cells(line);
    REQUIRE(cells.size() == 3);
    if (cells[2].empty()) continue;
    double emp = std::stod(cells[1]);
    double fitted = std::stod(cells[2]);
    if (emp * n < 50.0 || fitted * n < 50.0) continue;
    CHECK(std::fabs(std::log10(emp / fitted)) <= 0.25);
    ++checked;
  }
  CHECK(checked >= 10);
}
