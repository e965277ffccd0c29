#include "logforms/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "logforms/smooth.hpp"

namespace logforms::cli {

using Json = nlohmann::ordered_json;

namespace {

std::vector<std::int64_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::int64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = std::min(text.find(',', pos), text.size());
    const std::string item = text.substr(pos, comma - pos);
    std::int64_t v = 0;
    const auto* first = item.data();
    const auto* last = item.data() + item.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (item.empty() || ec != std::errc() || ptr != last) {
      throw UsageError(std::string("malformed list for ") + flag + ": '" + text + "'");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  return out;
}

Command parse_command(const std::string& name) {
  if (name == "census") return Command::census;
  if (name == "e-set") return Command::e_set;
  if (name == "lemmas") return Command::lemmas;
  if (name == "asymptotic") return Command::asymptotic;
  if (name == "verify-theorem") return Command::verify_theorem;
  if (name == "converge") return Command::converge;
  throw UsageError("unknown command '" + name + "'");
}

std::string join(const std::vector<std::int64_t>& v, char sep) {
  std::string out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k) out.push_back(sep);
    out += std::to_string(v[k]);
  }
  return out;
}

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_number(v).c_str(), nullptr);
}

template <class T>
Json optional_json(const std::optional<T>& v) {
  if (!v) return nullptr;
  return *v;
}

std::string csv_field(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string csv_lists(const Bounds& b) { return join(b.A, ';') + "," + join(b.B, ';'); }

FactorTable table_for(std::int64_t max_a) { return FactorTable(static_cast<std::uint64_t>(std::max<std::int64_t>(max_a, 1))); }

Json tuple_json(const FormTuple& t) { return Json{{"a", t.a}, {"b", t.b}}; }

Json census_record(const CensusReport& r) {
  Json j;
  j["A"] = r.bounds.A;
  j["B"] = r.bounds.B;
  j["tuple_space"] = r.tuple_space;
  j["exact_R"] = r.exact_R;
  j["formula"] = std::string(to_string(r.formula));
  j["formula_value"] = number(r.formula_value);
  j["ratio"] = number(r.ratio);
  j["C"] = r.param ? number(r.param->C) : Json(nullptr);
  j["coeff_bound"] = r.param ? Json(r.param->coeff_bound) : Json(nullptr);
  j["e_count"] = optional_json(r.e_count);
  return j;
}

std::string census_csv_row(const std::string& scale, const CensusReport& r) {
  const auto rec = census_record(r);
  std::ostringstream os;
  os << scale << ',' << r.bounds.n() << ',' << csv_lists(r.bounds) << ',' << r.tuple_space << ',' << r.exact_R << ','
     << csv_field(rec["formula"]) << ',' << csv_field(rec["formula_value"]) << ',' << csv_field(rec["ratio"]) << ','
     << csv_field(rec["e_count"]) << '\n';
  return os.str();
}

constexpr const char* kCensusHeader = "scale,n,A,B,tuple_space,exact_R,formula,formula_value,ratio,e_count\n";

struct Outcome {
  Json results;
  std::string csv;
  int exit_code = 0;
};

Outcome run_census(const RunConfig& c) {
  const auto& bounds = *c.bounds;
  const auto table = table_for(bounds.max_A());
  CensusOptions opts;
  opts.budget = c.budget;
  opts.threads = c.threads;
  const auto report = census(bounds, table, Formula::proposition, opts);
  return {census_record(report), std::string(kCensusHeader) + census_csv_row("", report), 0};
}

Outcome run_e_set(const RunConfig& c) {
  const auto& bounds = *c.bounds;
  const auto table = table_for(bounds.max_A());
  EnumerationOptions opts{c.budget, c.threads};
  const auto e = count_E(bounds, *c.param, table, opts);
  Json j;
  j["tuple_space"] = bounds.tuple_space();
  j["e_count"] = e.count;
  j["density"] = number(e.density);
  j["base_tuples"] = e.base_tuples;
  j["exponent_tuples"] = e.exponent_tuples;
  std::ostringstream os;
  os << "n,A,B,C,coeff_bound,tuple_space,e_count,density\n"
     << bounds.n() << ',' << csv_lists(bounds) << ',' << format_number(c.param->C) << ',' << c.param->coeff_bound
     << ',' << bounds.tuple_space() << ',' << e.count << ',' << csv_field(j["density"]) << '\n';
  return {j, os.str(), 0};
}

Outcome run_lemmas(const RunConfig& c) {
  const auto& bounds = *c.bounds;
  const auto table = table_for(bounds.max_A());
  EnumerationOptions opts{c.budget, c.threads};
  Json lemmas = Json::array();
  std::ostringstream os;
  os << "lemma,n,A,B,C,exact_count,bound_value,ratio\n";
  for (auto lemma : {Lemma::one, Lemma::two, Lemma::three}) {
    const auto r = lemma_check(lemma, bounds, *c.param, table, opts);
    Json j;
    j["lemma"] = std::string(to_string(lemma));
    j["exact_count"] = r.exact_count;
    j["bound_value"] = number(r.bound_value);
    j["ratio"] = number(r.ratio);
    os << to_string(lemma) << ',' << bounds.n() << ',' << csv_lists(bounds) << ',' << format_number(c.param->C)
       << ',' << r.exact_count << ',' << csv_field(j["bound_value"]) << ',' << csv_field(j["ratio"]) << '\n';
    lemmas.push_back(std::move(j));
  }
  Json de_bruijn = Json::array();
  for (auto A : bounds.A) {
    const auto psi = psi_count(static_cast<std::uint64_t>(A), c.param->C, table);
    de_bruijn.push_back(Json{{"A", A},
                             {"psi", psi},
                             {"ratio", number(de_bruijn_ratio(static_cast<std::uint64_t>(A), *c.param, table))}});
  }
  return {Json{{"lemmas", lemmas}, {"de_bruijn", de_bruijn}}, os.str(), 0};
}

Outcome run_asymptotic(const RunConfig& c) {
  const auto& bounds = *c.bounds;
  const auto ob = order_bounds(bounds);
  const auto exact = proposition_exact(ob, c.sentinel);
  const auto c3 = corollary3_bounds(bounds);
  Json j;
  j["proposition_value"] = number(to_double(exact));
  j["proposition_exact"] = exact.str();
  j["corollary1_value"] =
      bounds.symmetric() ? number(corollary1_value(bounds.n(), bounds.A[0], bounds.B[0])) : Json(nullptr);
  j["corollary2_value"] = number(corollary2_value(bounds));
  j["corollary3"] = Json{{"lower", number(c3.lower)}, {"upper", number(c3.upper)}};
  j["two_factor_value"] = bounds.n() == 2 ? number(two_factor_value(bounds)) : Json(nullptr);
  if (bounds.n() <= 4) {
    PermissibilityOptions popts;
    popts.budget = std::min<std::uint64_t>(c.budget, 1'000'000);
    popts.samples = 100'000;
    if (c.seed) popts.seed = *c.seed;
    Json perms = Json::array();
    for (const auto& sigma : all_permutations(bounds.n())) {
      if (sigma.is_identity()) continue;
      const auto measured = permissibility_fraction(sigma, bounds, popts);
      perms.push_back(Json{{"sigma", std::vector<std::size_t>(sigma.images().begin(), sigma.images().end())},
                           {"closed_form", number(to_double(permissibility_closed_form(sigma, bounds)))},
                           {"measured", number(measured.fraction)},
                           {"exhaustive", measured.exhaustive}});
    }
    j["permissibility"] = std::move(perms);
  }
  std::ostringstream os;
  os << "n,A,B,proposition_value,corollary1_value,corollary2_value,corollary3_lower,corollary3_upper,two_factor_value\n"
     << bounds.n() << ',' << csv_lists(bounds) << ',' << csv_field(j["proposition_value"]) << ','
     << csv_field(j["corollary1_value"]) << ',' << csv_field(j["corollary2_value"]) << ','
     << csv_field(j["corollary3"]["lower"]) << ',' << csv_field(j["corollary3"]["upper"]) << ','
     << csv_field(j["two_factor_value"]) << '\n';
  return {j, os.str(), 0};
}

Outcome run_verify(const RunConfig& c) {
  const auto& bounds = *c.bounds;
  const auto table = table_for(bounds.max_A());
  EnumerationOptions opts{c.budget, c.threads};
  const auto check = verify_theorem(bounds, table, c.param, opts);
  Json violations = Json::array();
  for (const auto& v : check.violations) {
    violations.push_back(
        Json{{"value", v.value.to_string()}, {"first", tuple_json(v.first)}, {"second", tuple_json(v.second)}});
  }
  Json j;
  j["e_count"] = check.e_count;
  j["distinct_values"] = check.distinct_values;
  j["shared_values"] = check.shared_values;
  j["violations"] = std::move(violations);
  std::ostringstream os;
  os << "n,A,B,C,coeff_bound,e_count,distinct_values,shared_values,violations\n"
     << bounds.n() << ',' << csv_lists(bounds) << ',' << format_number(check.param.C) << ','
     << check.param.coeff_bound << ',' << check.e_count << ',' << check.distinct_values << ','
     << check.shared_values << ',' << check.violations.size() << '\n';
  return {j, os.str(), check.violations.empty() ? 0 : 1};
}

Outcome run_converge(const RunConfig& c) {
  std::int64_t max_a = 1;
  for (auto s : c.scales) {
    try {
      max_a = std::max(max_a, bounds_for_scale(c.shape, c.n, s, c.bounds ? &*c.bounds : nullptr).max_A());
    } catch (const ResourceError&) {
      break;
    }
  }
  const auto table = table_for(max_a);
  CensusOptions opts;
  opts.budget = c.budget;
  opts.threads = c.threads;
  const auto run = convergence_run(c.scales, c.shape, c.n, table, opts, c.bounds ? &*c.bounds : nullptr);
  Json records = Json::array();
  std::string csv = kCensusHeader;
  for (std::size_t k = 0; k < run.reports.size(); ++k) {
    Json rec;
    rec["scale"] = run.scales[k];
    rec.update(census_record(run.reports[k]));
    records.push_back(std::move(rec));
    csv += census_csv_row(std::to_string(run.scales[k]), run.reports[k]);
  }
  Json j;
  j["records"] = std::move(records);
  j["truncated"] = run.truncated;
  j["truncation_reason"] = run.truncated ? Json(run.truncation_reason) : Json(nullptr);
  return {j, csv, run.truncated ? 2 : 0};
}

Json config_json(const RunConfig& c) {
  Json j;
  j["command"] = std::string(to_string(c.command));
  if (c.bounds) {
    j["n"] = c.bounds->n();
    j["A"] = c.bounds->A;
    j["B"] = c.bounds->B;
  } else {
    j["n"] = c.n;
  }
  if (c.param) {
    j["C"] = number(c.param->C);
    j["C_source"] = c.C_override ? "override" : "default";
    j["coeff_bound"] = c.param->coeff_bound;
  }
  j["budget"] = c.budget;
  j["threads"] = c.threads;
  j["format"] = c.format == Format::json ? "json" : "csv";
  if (c.command == Command::converge) {
    j["shape"] = std::string(to_string(c.shape));
    j["scales"] = c.scales;
  }
  if (c.command == Command::asymptotic) {
    j["sentinel"] = c.sentinel == Sentinel::one ? 1 : 0;
    j["seed"] = optional_json(c.seed);
  }
  return j;
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::census: return "census";
    case Command::e_set: return "e-set";
    case Command::lemmas: return "lemmas";
    case Command::asymptotic: return "asymptotic";
    case Command::verify_theorem: return "verify-theorem";
    case Command::converge: return "converge";
  }
  return "?";
}

std::string format_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Exact census of rationals a_1^b_1...a_n^b_n and checks of their counting formulas", "logforms"};
  std::string command, a_text, b_text, format = "json", shape = "equal", scales_text;
  std::optional<std::size_t> n_flag;
  std::optional<double> c_flag;
  std::optional<std::string> out_flag;
  std::optional<std::uint64_t> seed_flag;
  std::uint64_t budget = kDefaultBudget;
  unsigned threads = 1;
  bool zero_sentinel = false;

  app.add_option("command", command, "census | e-set | lemmas | asymptotic | verify-theorem | converge")->required();
  app.add_option("-A", a_text, "comma-separated base bounds A_1,...,A_n");
  app.add_option("-B", b_text, "comma-separated exponent bounds B_1,...,B_n");
  app.add_option("-n", n_flag, "number of factors (checked against -A/-B)");
  app.add_option("--C", c_flag, "override the cutoff C (must be >= 2)");
  app.add_option("--budget", budget, "maximum number of tuples to enumerate");
  app.add_option("--threads", threads, "worker threads");
  app.add_option("--format", format, "json | csv");
  app.add_option("--out", out_flag, "write the report to this path");
  app.add_option("--scales", scales_text, "comma-separated scales for converge");
  app.add_option("--shape", shape, "equal | separated | custom");
  app.add_option("--seed", seed_flag, "seed for sampled permissibility estimates");
  app.add_flag("--zero-sentinel", zero_sentinel, "block sum with A_0 = B_pi(0) = 0");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig c;
  c.command = parse_command(command);
  if (format == "json") {
    c.format = Format::json;
  } else if (format == "csv") {
    c.format = Format::csv;
  } else {
    throw UsageError("--format must be json or csv, got '" + format + "'");
  }
  if (shape == "equal") {
    c.shape = Shape::equal;
  } else if (shape == "separated") {
    c.shape = Shape::separated;
  } else if (shape == "custom") {
    c.shape = Shape::custom;
  } else {
    throw UsageError("--shape must be equal, separated or custom, got '" + shape + "'");
  }
  if (budget < 1) throw UsageError("--budget must be >= 1");
  if (threads < 1) throw UsageError("--threads must be >= 1");
  c.budget = budget;
  c.threads = threads;
  c.output_path = out_flag;
  c.seed = seed_flag;
  c.sentinel = zero_sentinel ? Sentinel::zero : Sentinel::one;

  if (c_flag) {
    if (!(*c_flag >= 2.0)) throw UsageError("--C must be >= 2");
    c.C_override = c_flag;
  }

  const bool has_bounds = !a_text.empty() || !b_text.empty();
  if (has_bounds) {
    if (a_text.empty()) throw UsageError("-B given without -A");
    if (b_text.empty()) throw UsageError("-A given without -B");
    c.bounds = Bounds::make(parse_list(a_text, "-A"), parse_list(b_text, "-B"));
    if (n_flag && *n_flag != c.bounds->n()) {
      throw UsageError("-n " + std::to_string(*n_flag) + " does not match " + std::to_string(c.bounds->n()) +
                       " entries in -A/-B");
    }
    c.n = c.bounds->n();
  } else if (n_flag) {
    if (*n_flag < 1) throw UsageError("-n must be >= 1");
    c.n = *n_flag;
  }

  if (c.command == Command::converge) {
    if (scales_text.empty()) throw UsageError("converge needs --scales");
    c.scales = parse_list(scales_text, "--scales");
    if (c.shape == Shape::custom && !c.bounds) throw UsageError("--shape custom needs -A and -B");
    if (c.shape != Shape::custom && has_bounds) throw UsageError("-A/-B are only used with --shape custom");
  } else {
    if (!c.bounds) throw UsageError(std::string(to_string(c.command)) + " needs -A and -B");
    if (!scales_text.empty()) throw UsageError("--scales is only used by converge");
  }

  const bool needs_cutoff =
      c.command == Command::e_set || c.command == Command::lemmas || c.command == Command::verify_theorem;
  if (needs_cutoff) {
    c.param = c.C_override ? FilterParameter::from_C(*c.C_override) : default_C(*c.bounds);
    if (c.command == Command::lemmas && static_cast<double>(c.bounds->min_A()) < c.param->C) {
      throw UsageError("lemmas needs min A_i >= C");
    }
  }
  if (c.command == Command::asymptotic && c.bounds->n() > kMaxPropositionSize) {
    throw UsageError("asymptotic supports n <= " + std::to_string(kMaxPropositionSize));
  }
  return c;
}

RunResult run(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    switch (config.command) {
      case Command::census: outcome = run_census(config); break;
      case Command::e_set: outcome = run_e_set(config); break;
      case Command::lemmas: outcome = run_lemmas(config); break;
      case Command::asymptotic: outcome = run_asymptotic(config); break;
      case Command::verify_theorem: outcome = run_verify(config); break;
      case Command::converge: outcome = run_converge(config); break;
    }
  } catch (const std::exception& e) {
    return {2, "", e.what()};
  }
  const auto elapsed =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  RunResult result;
  result.exit_code = outcome.exit_code;
  if (config.format == Format::csv) {
    result.report = outcome.csv;
  } else {
    Json report;
    report["config"] = config_json(config);
    report["results"] = std::move(outcome.results);
    report["metadata"] = Json{{"elapsed_ms", number(elapsed)}, {"version", kVersion}};
    result.report = report.dump(2) + "\n";
  }
  return result;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_args(args);
  } catch (const std::exception& e) {
    err << e.what() << '\n';
    return 2;
  }
  const auto result = run(config);
  if (!result.error.empty()) err << "error: " << result.error << '\n';
  if (!result.report.empty()) {
    if (config.output_path) {
      std::ofstream file(*config.output_path, std::ios::binary);
      if (!file) {
        err << "error: cannot open " << *config.output_path << '\n';
        return 2;
      }
      file << result.report;
    } else {
      out << result.report;
    }
  }
  return result.exit_code;
}

}  // namespace logforms::cli
