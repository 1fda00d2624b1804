#include "ssfilter/cli.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include <json.hpp>

#include "ssfilter/errors.hpp"

namespace ssfilter {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kFamilies = {"uconf-plane", "uconf-general", "tuples", "pencils-p1",
                                         "pencils-curve"};
const std::set<std::string> kArtifacts = {"e1", "e2", "betti", "checks"};
const std::set<std::string> kFormats = {"text", "json", "csv"};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

int parse_int(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'");
  }
}

bool parse_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ConfigError(what + ": expected true or false, got '" + text + "'");
}

std::string params_string(const std::map<std::string, int>& params) {
  std::string s;
  for (const auto& [k, v] : params) s += (s.empty() ? "" : " ") + k + "=" + std::to_string(v);
  return s;
}

}  // namespace

// ------------------------------------------------------------------ config

JobConfig parse_config(std::istream& in) {
  JobConfig c;
  std::string line;
  int line_no = 0;
  bool in_betti = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const bool indented = !line.empty() && (line[0] == ' ' || line[0] == '\t');
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(line_no);
    if (in_betti && (indented || line.find('=') == std::string::npos)) {
      std::istringstream row(line);
      std::string deg, rank, extra;
      if (!(row >> deg >> rank) || (row >> extra))
        throw ConfigError(where + ": betti rows are 'degree rank'");
      const int d = parse_int(deg, where);
      const int r = parse_int(rank, where);
      if (r < 0) throw ConfigError(where + ": negative rank");
      c.betti.add(d, static_cast<std::uint64_t>(r));
      continue;
    }
    in_betti = false;
    if (line == "betti:") {
      in_betti = true;
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "family") c.family = value;
    else if (key == "n") c.n = parse_int(value, where);
    else if (key == "g" || key == "genus") c.g = parse_int(value, where);
    else if (key == "r") c.r = parse_int(value, where);
    else if (key == "m") c.m = parse_int(value, where);
    else if (key == "convention") c.convention = value;
    else if (key == "format") c.format = value;
    else if (key == "out") c.out = value;
    else if (key == "labels") c.labels = parse_bool(value, where);
    else if (key == "reverse_order") c.reverse_order = parse_bool(value, where);
    else if (key == "pmax") c.pmax = parse_int(value, where);
    else if (key == "artifacts") {
      const auto items = split(value, ',');
      c.artifacts = {items.begin(), items.end()};
    } else if (key == "families") {
      const auto items = split(value, ',');
      c.families = {items.begin(), items.end()};
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  return c;
}

void validate(const JobConfig& c) {
  if (!kFamilies.contains(c.family))
    throw ConfigError("unknown family '" + c.family +
                      "' (expected uconf-plane, uconf-general, tuples, pencils-p1 or pencils-curve)");
  if (!kFormats.contains(c.format)) throw ConfigError("unknown format '" + c.format + "'");
  for (const auto& a : c.artifacts)
    if (!kArtifacts.contains(a)) throw ConfigError("unknown artifact '" + a + "'");
  if (!c.n) throw ConfigError("family " + c.family + " needs n");
  auto forbid = [&](const std::optional<int>& v, const char* name) {
    if (v) throw ConfigError(std::string("parameter ") + name + " does not apply to family " + c.family);
  };
  const bool general = c.family == "uconf-general";
  if (c.family != "pencils-curve") forbid(c.g, "g");
  if (c.family != "tuples") forbid(c.r, "r");
  if (c.family != "pencils-p1") forbid(c.m, "m");
  if (!general && !c.betti.empty()) throw ConfigError("a betti table applies only to uconf-general");
  if (!general && c.convention) throw ConfigError("convention applies only to uconf-general");
  if (c.family == "pencils-curve" && !c.g) throw ConfigError("pencils-curve needs g");
  if (c.family == "tuples" && !c.r) throw ConfigError("tuples needs r");
  if (general) {
    if (c.betti.empty()) throw ConfigError("uconf-general needs a betti table");
    if (!c.convention)
      throw ConfigError("uconf-general needs convention = compact-support or ordinary");
    if (*c.convention != "compact-support" && *c.convention != "ordinary")
      throw ConfigError("convention must be compact-support or ordinary");
    for (const auto& [d, r] : c.betti.entries())
      if (d < 0) throw ConfigError("betti degrees must be nonnegative");
  }
}

FamilyDescriptor make_family(const JobConfig& c) {
  validate(c);
  if (c.family == "uconf-plane") return family_uconf_plane(*c.n);
  if (c.family == "tuples") return family_tuples(*c.r, *c.n);
  if (c.family == "pencils-p1") return family_pencils_p1(c.m.value_or(1), *c.n);
  if (c.family == "pencils-curve") return family_pencils_curve(*c.g, *c.n);
  return family_uconf_general(c.betti, *c.n,
                              *c.convention == "ordinary" ? CohomologyKind::Ordinary : CohomologyKind::CompactSupport);
}

// ------------------------------------------------------------------- jobs

bool JobReport::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

namespace {

FamilyReport family_report(const FamilyDescriptor& f) {
  FamilyReport r;
  r.name = f.name;
  r.params = f.params;
  r.filter_gap = f.filter_gap;
  r.p_max = f.p_max;
  r.e1_kind = to_string(f.e1_kind);
  r.convergence = to_string(f.convergence);
  r.duality_dim = f.duality_dim;
  r.degeneration_assumed = f.degeneration_assumed;
  r.degeneration_justification = f.degeneration_justification;
  r.pullback_template = f.pullback_template;
  return r;
}

PageReport page_report(const Page& page, bool with_ranks) {
  PageReport r;
  r.page = page.page_index;
  for (const auto& [pq, cell] : page.cells) r.cells.push_back({pq.first, pq.second, cell.dim, cell.labels});
  if (with_ranks)
    for (const auto& [pq, d] : page.differentials)
      r.differential_ranks.push_back({pq.first, pq.second, rank(d)});
  r.open_column = page.open_column;
  r.euler = euler_characteristic(page);
  return r;
}

BettiReport betti_report(const std::string& role, const BettiTable& t) {
  return {role, t.kind, t.dims, t.converged_assumed, t.valid_up_to_degree, t.valid_from_degree, t.duality_dim};
}

EngineOptions engine_options(const JobConfig& c) {
  EngineOptions o;
  o.attach_labels = c.labels;
  o.reverse_order = c.reverse_order;
  o.fault_face = c.fault_face;
  return o;
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

std::string instance_name(const FamilyDescriptor& f) { return f.name + " " + params_string(f.params); }

}  // namespace

std::vector<CheckResult> instance_checks(const FamilyDescriptor& fam, const EngineOptions& options) {
  std::vector<CheckResult> out;
  const std::string who = instance_name(fam);
  if (fam.presented()) {
    CheckResult faces{"face pullbacks multiplicative: " + who, true, ""};
    for (int p = 0; p < fam.p_max && faces.passed; ++p)
      for (int i = 1; i <= p + 1; ++i) {
        const FacePullback f = face_pullback(fam, p, i);
        if (!f.degree_preserving() || !f.multiplicative_on_generators()) {
          faces.passed = false;
          faces.detail = "face (p, i) = (" + std::to_string(p) + ", " + std::to_string(i) + ")";
          break;
        }
      }
    out.push_back(faces);
  }
  EngineOptions quiet = options;
  quiet.attach_labels = false;
  std::optional<Page> built;
  if (fam.presented()) {
    CheckResult routes{"differential routes agree: " + who, true, ""};
    try {
      built = build_e1(fam, quiet);
    } catch (const ConfigError&) {
      throw;
    } catch (const RangeError&) {
      throw;
    } catch (const Error& e) {
      routes.passed = false;
      routes.detail = e.what();
      quiet.verify_differentials = false;
    }
    out.push_back(routes);
  }
  const Page e1 = built ? std::move(*built) : build_e1(fam, quiet);
  CheckResult dd{"d d = 0: " + who, true, ""};
  if (auto bad = first_nonzero_composite(e1)) {
    dd.passed = false;
    dd.detail = "d_{p+2} d_{p+1} != 0 at (p, q) = (" + std::to_string(bad->first) + ", " +
                std::to_string(bad->second) + ")";
    out.push_back(dd);
    return out;
  }
  out.push_back(dd);
  if (e1.missing_differentials.empty()) {
    const Page e2 = compute_e2(e1);
    const auto c1 = euler_characteristic(e1), c2 = euler_characteristic(e2);
    out.push_back({"chi(E1) = chi(E2): " + who, c1 == c2,
                   "chi(E1) = " + std::to_string(c1) + ", chi(E2) = " + std::to_string(c2)});
  }
  return out;
}

JobReport run(const JobConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  JobReport report;
  report.command = "compute";
  report.config = config;
  const FamilyDescriptor fam = make_family(config);
  report.family = family_report(fam);
  const EngineOptions options = engine_options(config);

  if (config.artifacts.contains("checks")) report.checks = instance_checks(fam, options);
  const bool healthy = report.all_checks_passed();

  EngineOptions build = options;
  build.attach_labels = config.labels && config.artifacts.contains("e1");
  // A failed check has already been reported; the page is still shown.
  if (!healthy) build.verify_differentials = false;
  const Page e1 = build_e1(fam, build);
  if (config.artifacts.contains("e1")) report.pages.push_back(page_report(e1, true));
  if (healthy && (config.artifacts.contains("e2") || config.artifacts.contains("betti"))) {
    const Page e2 = compute_e2(e1);
    if (config.artifacts.contains("e2")) report.pages.push_back(page_report(e2, false));
    if (config.artifacts.contains("betti")) {
      const StratumBetti b = betti_from_e2(fam, e2);
      report.betti.push_back(betti_report("abutment", b.primary));
      if (b.dual) report.betti.push_back(betti_report("dual", *b.dual));
    }
  }
  report.duration_ms = elapsed_ms(start);
  return report;
}

namespace {

Integer falling_binomial(long chi, long n) {
  Integer num = 1, den = 1;
  for (long k = 0; k < n; ++k) {
    num *= chi - k;
    den *= k + 1;
  }
  return num / den;
}

bool wants(const std::set<std::string>& families, const std::string& name) {
  return families.contains("all") || families.contains(name);
}

std::string page_signature(const Page& p) {
  std::ostringstream os;
  for (const auto& [pq, cell] : p.cells) os << pq.first << "," << pq.second << ":" << cell.dim << ";";
  return os.str();
}

std::string stratum_signature(const StratumBetti& b) {
  std::string s = b.primary.kind + b.primary.dims.to_string();
  if (b.dual) s += "|" + b.dual->dims.to_string();
  return s;
}

}  // namespace

JobReport check(const JobConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  JobReport report;
  report.command = "check";
  report.config = config;
  for (const auto& f : config.families)
    if (f != "all" && !kFamilies.contains(f)) throw ConfigError("unknown family '" + f + "'");
  if (config.pmax < 1) throw ConfigError("pmax must be at least 1");

  const StalkReport stalk = stalk_acyclicity_check(config.pmax);
  {
    CheckResult c{"stalk complexes exact for p <= " + std::to_string(config.pmax), stalk.exact, ""};
    for (const auto& level : stalk.levels)
      if (!level.exact) {
        c.detail = "p = " + std::to_string(level.p) + " is not exact";
        break;
      }
    report.checks.push_back(c);
  }

  EngineOptions options = engine_options(config);
  options.attach_labels = false;
  auto add = [&](const FamilyDescriptor& fam) {
    for (auto& c : instance_checks(fam, options)) report.checks.push_back(std::move(c));
  };

  if (wants(config.families, "uconf-plane"))
    for (int n = 0; n <= 10; ++n) add(family_uconf_plane(n));
  if (wants(config.families, "tuples"))
    for (int r = 1; r <= 3; ++r)
      for (int n = 0; n <= 10; ++n) add(family_tuples(r, n));
  if (wants(config.families, "pencils-p1")) {
    for (int n = 2; n <= 10; ++n) add(family_pencils_p1(1, n));
    for (int n = 3; n <= 6; ++n) add(family_pencils_p1(2, n));
  }
  if (wants(config.families, "pencils-curve")) {
    for (int g = 0; g <= 2; ++g)
      for (int n = std::max(2, 2 * g); n <= (g == 2 ? 8 : 10); ++n) add(family_pencils_curve(g, n));
    for (int n = 2; n <= 8; ++n) {
      const auto a = betti_of_stratum(family_pencils_curve(0, n), options);
      const auto b = betti_of_stratum(family_pencils_p1(1, n), options);
      const auto ea = build_e1(family_pencils_curve(0, n), options);
      const auto eb = build_e1(family_pencils_p1(1, n), options);
      const bool same = stratum_signature(a) == stratum_signature(b) && page_signature(ea) == page_signature(eb);
      report.checks.push_back({"g = 0 reduction: n=" + std::to_string(n), same, same ? "" : "pages differ"});
    }
    for (int g = 1; g <= 2; ++g) {
      const int n = 2 * g + 2;
      std::vector<std::size_t> relabel(2 * g);
      for (std::size_t k = 0; k < relabel.size(); ++k) relabel[k] = relabel.size() - 1 - k;
      const auto base = build_e1(family_pencils_curve(g, n), options);
      const auto moved = build_e1(family_pencils_curve(g, n, relabel), options);
      EngineOptions reversed = options;
      reversed.reverse_order = !options.reverse_order;
      const auto flipped = build_e1(family_pencils_curve(g, n), reversed);
      const std::string who = "pencils-curve g=" + std::to_string(g) + " n=" + std::to_string(n);
      const bool relabel_ok = page_signature(compute_e2(base)) == page_signature(compute_e2(moved));
      const bool order_ok = page_signature(compute_e2(base)) == page_signature(compute_e2(flipped));
      report.checks.push_back({"relabelling invariance: " + who, relabel_ok, ""});
      report.checks.push_back({"basis order invariance: " + who, order_ok, ""});
    }
  }
  if (wants(config.families, "uconf-general")) {
    const std::vector<GradedDims> inputs = {
        {{0, 1}, {1, 3}}, {{0, 1}, {1, 2}}, {{0, 1}, {1, 1}}, {{2, 1}}, {{0, 1}, {2, 1}}, {{0, 1}, {2, 1}, {4, 1}}};
    for (const auto& dims : inputs)
      for (int n = 0; n <= 6; ++n) {
        const Page e1 = build_e1(family_uconf_general(dims, n, CohomologyKind::CompactSupport), options);
        const Integer want = falling_binomial(dims.euler_characteristic(), n);
        const std::int64_t got = euler_characteristic(e1);
        report.checks.push_back({"chi(E1) = C(chi(X), n): X = " + dims.to_string() + " n=" + std::to_string(n),
                                 Integer(got) == want,
                                 "chi(E1) = " + std::to_string(got) + ", expected " + want.get_str()});
      }
  }
  report.duration_ms = elapsed_ms(start);
  return report;
}

std::string explain(const JobConfig& config) {
  const FamilyDescriptor f = make_family(config);
  std::ostringstream os;
  os << "family " << f.name << " (" << params_string(f.params) << ")\n";
  os << "filter gap e = " << f.filter_gap << "\n";
  os << "columns: 0 <= p <= " << f.p_max;
  if (f.beyond_range_empty) os << " (later columns vanish)";
  os << "\n";
  if (!f.range_note.empty()) os << "range: " << f.range_note << "\n";
  const std::string level = f.filter_gap == 1 ? "n-p" : "n-" + std::to_string(f.filter_gap) + "p";
  os << "E1^{p,q} = sum over l+m=q of (Sym odd (x) Lambda even)^{(l)} of M, in p slots, (x) H^m(X_{" << level
     << "})\n";
  os << "E1 cohomology: " << to_string(f.e1_kind) << "\n";
  os << "convergence: " << to_string(f.convergence);
  if (f.duality_dim) os << ", duality with complex dimension " << *f.duality_dim;
  os << "\n";
  os << "differential: d_{p+1} = sum_{i=1}^{p+1} (-1)^{i-1} f_{p,i}^*, restricted to sgn-twisted invariants\n";
  os << "face pullback f_{p,i}^*: slot j -> slot j (j < i) or j+1 (j >= i); new slot class <i> carries a\n"
        "  Koszul sign for every slot it passes\n";
  os << "template:\n";
  for (const auto& t : f.pullback_template) os << "  " << t << "\n";
  os << "degeneration at E2: ";
  if (f.degeneration_assumed)
    os << "assumed (" << f.degeneration_justification << ")\n";
  else
    os << "not assumed; refused when a higher differential could act\n";
  return os.str();
}

// ------------------------------------------------------------------- json

namespace {

template <class T>
void put_optional(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json dims_json(const GradedDims& d) {
  json a = json::array();
  for (const auto& [deg, r] : d.entries()) a.push_back({{"degree", deg}, {"rank", r}});
  return a;
}

GradedDims dims_from(const json& a) {
  GradedDims d;
  for (const auto& e : a) d.add(e.at("degree").get<int>(), e.at("rank").get<std::uint64_t>());
  return d;
}

json config_json(const JobConfig& c) {
  json j;
  j["family"] = c.family;
  put_optional(j, "n", c.n);
  put_optional(j, "g", c.g);
  put_optional(j, "r", c.r);
  put_optional(j, "m", c.m);
  if (!c.betti.empty()) j["betti"] = dims_json(c.betti);
  put_optional(j, "convention", c.convention);
  j["format"] = c.format;
  j["artifacts"] = json(std::vector<std::string>(c.artifacts.begin(), c.artifacts.end()));
  j["out"] = c.out;
  j["labels"] = c.labels;
  j["reverse_order"] = c.reverse_order;
  put_optional(j, "fault_face", c.fault_face);
  j["pmax"] = c.pmax;
  j["families"] = json(std::vector<std::string>(c.families.begin(), c.families.end()));
  return j;
}

JobConfig config_from(const json& j) {
  JobConfig c;
  c.family = j.at("family").get<std::string>();
  c.n = get_optional<int>(j, "n");
  c.g = get_optional<int>(j, "g");
  c.r = get_optional<int>(j, "r");
  c.m = get_optional<int>(j, "m");
  if (j.contains("betti")) c.betti = dims_from(j.at("betti"));
  c.convention = get_optional<std::string>(j, "convention");
  c.format = j.at("format").get<std::string>();
  const auto artifacts = j.at("artifacts").get<std::vector<std::string>>();
  c.artifacts = {artifacts.begin(), artifacts.end()};
  c.out = j.at("out").get<std::string>();
  c.labels = j.at("labels").get<bool>();
  c.reverse_order = j.at("reverse_order").get<bool>();
  c.fault_face = get_optional<int>(j, "fault_face");
  c.pmax = j.at("pmax").get<int>();
  const auto families = j.at("families").get<std::vector<std::string>>();
  c.families = {families.begin(), families.end()};
  return c;
}

}  // namespace

std::string to_json(const JobReport& r) {
  json j;
  j["schema"] = r.schema;
  j["command"] = r.command;
  j["config"] = config_json(r.config);
  if (r.family) {
    const FamilyReport& f = *r.family;
    json fj;
    fj["name"] = f.name;
    fj["params"] = f.params;
    fj["filter_gap"] = f.filter_gap;
    fj["p_max"] = f.p_max;
    fj["e1_kind"] = f.e1_kind;
    fj["convergence"] = f.convergence;
    put_optional(fj, "duality_dim", f.duality_dim);
    fj["degeneration_assumed"] = f.degeneration_assumed;
    fj["degeneration_justification"] = f.degeneration_justification;
    fj["pullback_template"] = f.pullback_template;
    j["family"] = fj;
  }
  j["pages"] = json::array();
  for (const auto& p : r.pages) {
    json pj;
    pj["page"] = p.page;
    pj["cells"] = json::array();
    for (const auto& c : p.cells) {
      json cj{{"p", c.p}, {"q", c.q}, {"dim", c.dim}};
      if (!c.labels.empty()) cj["labels"] = c.labels;
      pj["cells"].push_back(cj);
    }
    pj["differential_ranks"] = json::array();
    for (const auto& d : p.differential_ranks) pj["differential_ranks"].push_back({{"p", d.p}, {"q", d.q}, {"rank", d.rank}});
    put_optional(pj, "open_column", p.open_column);
    pj["euler"] = p.euler;
    j["pages"].push_back(pj);
  }
  j["betti"] = json::array();
  for (const auto& b : r.betti) {
    json bj;
    bj["role"] = b.role;
    bj["kind"] = b.kind;
    bj["dims"] = dims_json(b.dims);
    bj["converged_assumed"] = b.converged_assumed;
    put_optional(bj, "valid_up_to_degree", b.valid_up_to_degree);
    put_optional(bj, "valid_from_degree", b.valid_from_degree);
    put_optional(bj, "duality_dim", b.duality_dim);
    j["betti"].push_back(bj);
  }
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["duration_ms"] = r.duration_ms;
  return j.dump(2) + "\n";
}

JobReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  try {
    JobReport r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kReportSchema) throw ConfigError("unsupported report schema '" + r.schema + "'");
    r.command = j.at("command").get<std::string>();
    r.config = config_from(j.at("config"));
    if (j.contains("family")) {
      const json& fj = j.at("family");
      FamilyReport f;
      f.name = fj.at("name").get<std::string>();
      f.params = fj.at("params").get<std::map<std::string, int>>();
      f.filter_gap = fj.at("filter_gap").get<int>();
      f.p_max = fj.at("p_max").get<int>();
      f.e1_kind = fj.at("e1_kind").get<std::string>();
      f.convergence = fj.at("convergence").get<std::string>();
      f.duality_dim = get_optional<int>(fj, "duality_dim");
      f.degeneration_assumed = fj.at("degeneration_assumed").get<bool>();
      f.degeneration_justification = fj.at("degeneration_justification").get<std::string>();
      f.pullback_template = fj.at("pullback_template").get<std::vector<std::string>>();
      r.family = f;
    }
    for (const auto& pj : j.at("pages")) {
      PageReport p;
      p.page = pj.at("page").get<int>();
      for (const auto& cj : pj.at("cells")) {
        CellReport c{cj.at("p").get<int>(), cj.at("q").get<int>(), cj.at("dim").get<std::uint64_t>(), {}};
        if (cj.contains("labels")) c.labels = cj.at("labels").get<std::vector<std::string>>();
        p.cells.push_back(std::move(c));
      }
      for (const auto& dj : pj.at("differential_ranks"))
        p.differential_ranks.push_back({dj.at("p").get<int>(), dj.at("q").get<int>(), dj.at("rank").get<std::uint64_t>()});
      p.open_column = get_optional<int>(pj, "open_column");
      p.euler = pj.at("euler").get<std::int64_t>();
      r.pages.push_back(std::move(p));
    }
    for (const auto& bj : j.at("betti")) {
      BettiReport b;
      b.role = bj.at("role").get<std::string>();
      b.kind = bj.at("kind").get<std::string>();
      b.dims = dims_from(bj.at("dims"));
      b.converged_assumed = bj.at("converged_assumed").get<bool>();
      b.valid_up_to_degree = get_optional<int>(bj, "valid_up_to_degree");
      b.valid_from_degree = get_optional<int>(bj, "valid_from_degree");
      b.duality_dim = get_optional<int>(bj, "duality_dim");
      r.betti.push_back(std::move(b));
    }
    for (const auto& cj : j.at("checks"))
      r.checks.push_back({cj.at("name").get<std::string>(), cj.at("passed").get<bool>(), cj.at("detail").get<std::string>()});
    r.duration_ms = j.at("duration_ms").get<std::int64_t>();
    return r;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
}

// ------------------------------------------------------------- text / csv

std::string to_text(const JobReport& r) {
  std::ostringstream os;
  os << "ssfilter " << r.command << " (" << r.schema << ")\n";
  if (r.family) {
    const FamilyReport& f = *r.family;
    os << "family " << f.name << " " << params_string(f.params) << "\n";
    os << "  filter_gap=" << f.filter_gap << " p_max=" << f.p_max << " e1_kind=" << f.e1_kind
       << " convergence=" << f.convergence;
    if (f.duality_dim) os << " duality_dim=" << *f.duality_dim;
    os << "\n";
    os << "  degeneration " << (f.degeneration_assumed ? "assumed: " + f.degeneration_justification : "not assumed")
       << "\n";
    for (const auto& t : f.pullback_template) os << "  template " << t << "\n";
  }
  for (const auto& p : r.pages) {
    os << "page E" << p.page << "\n";
    for (const auto& c : p.cells) {
      os << "  cell p=" << c.p << " q=" << c.q << " dim=" << c.dim << "\n";
      for (const auto& l : c.labels) os << "    " << l << "\n";
    }
    for (const auto& d : p.differential_ranks)
      os << "  rank p=" << d.p << " q=" << d.q << " rank=" << d.rank << "\n";
    if (p.open_column) os << "  open_column=" << *p.open_column << "\n";
    os << "  euler=" << p.euler << "\n";
  }
  for (const auto& b : r.betti) {
    os << "betti " << b.role << " kind=" << b.kind << " converged_assumed=" << (b.converged_assumed ? "yes" : "no");
    if (b.duality_dim) os << " duality_dim=" << *b.duality_dim;
    if (b.valid_up_to_degree) os << " valid_up_to_degree=" << *b.valid_up_to_degree;
    if (b.valid_from_degree) os << " valid_from_degree=" << *b.valid_from_degree;
    os << "\n";
    for (const auto& [deg, rank] : b.dims.entries()) os << "  degree=" << deg << " rank=" << rank << "\n";
  }
  if (!r.checks.empty()) {
    std::size_t passed = 0;
    for (const auto& c : r.checks) passed += c.passed;
    os << "checks passed=" << passed << " total=" << r.checks.size() << "\n";
    for (const auto& c : r.checks) {
      os << "  " << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) os << " -- " << c.detail;
      os << "\n";
    }
  }
  os << "duration_ms=" << r.duration_ms << "\n";
  return os.str();
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_csv(const JobReport& r) {
  std::ostringstream os;
  os << "section,page,p,q,value,text\n";
  for (const auto& p : r.pages) {
    for (const auto& c : p.cells) os << "cell," << p.page << "," << c.p << "," << c.q << "," << c.dim << ",\n";
    for (const auto& d : p.differential_ranks)
      os << "rank," << p.page << "," << d.p << "," << d.q << "," << d.rank << ",\n";
    os << "euler," << p.page << ",,," << p.euler << ",\n";
  }
  for (const auto& b : r.betti)
    for (const auto& [deg, rank] : b.dims.entries())
      os << "betti,," << deg << ",," << rank << "," << csv_field(b.role + " " + b.kind) << "\n";
  for (const auto& c : r.checks) os << "check,,,," << (c.passed ? 1 : 0) << "," << csv_field(c.name) << "\n";
  os << "duration_ms,,,," << r.duration_ms << ",\n";
  return os.str();
}

std::string render(const JobReport& report, const std::string& format) {
  if (format == "json") return to_json(report);
  if (format == "csv") return to_csv(report);
  if (format == "text") return to_text(report);
  throw ConfigError("unknown format '" + format + "'");
}

}  // namespace ssfilter
