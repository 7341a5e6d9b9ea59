#include "entangle/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "entangle/error.hpp"

namespace entangle::cli {
namespace {

using json = nlohmann::ordered_json;

// Field path -> 1-based source line; empty for JSON input.
using LineMap = std::map<std::string, int>;
using Report = std::function<void(const std::string& path, const std::string& what)>;

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

json yaml_scalar(const YAML::Node& node) {
  const std::string& s = node.Scalar();
  if (node.Tag() == "!") return s;
  if (s.empty() || s == "~" || s == "null") return nullptr;
  if (s == "true") return true;
  if (s == "false") return false;
  const char* end = s.data() + s.size();
  std::int64_t i = 0;
  if (auto [p, ec] = std::from_chars(s.data(), end, i); ec == std::errc{} && p == end) return i;
  std::uint64_t u = 0;
  if (auto [p, ec] = std::from_chars(s.data(), end, u); ec == std::errc{} && p == end) return u;
  double d = 0.0;
  if (auto [p, ec] = std::from_chars(s.data(), end, d); ec == std::errc{} && p == end) return d;
  return s;
}

// A field's line is that of its key, so block mappings point at their header.
void lower_yaml(const YAML::Node& node, const std::string& path, json& out, LineMap& lines,
                const std::string& source) {
  lines.emplace(path, node.Mark().line + 1);
  switch (node.Type()) {
    case YAML::NodeType::Map:
      out = json::object();
      for (const auto& kv : node) {
        const std::string key = kv.first.Scalar();
        if (out.contains(key))
          throw Error(ErrorKind::ConfigError,
                      fmt::format("{}:{}: {}: duplicate key", source, kv.first.Mark().line + 1, join(path, key)));
        lines[join(path, key)] = kv.first.Mark().line + 1;
        lower_yaml(kv.second, join(path, key), out[key], lines, source);
      }
      break;
    case YAML::NodeType::Sequence: {
      out = json::array();
      std::size_t i = 0;
      for (const auto& item : node) {
        json child;
        lower_yaml(item, fmt::format("{}[{}]", path, i++), child, lines, source);
        out.push_back(std::move(child));
      }
      break;
    }
    case YAML::NodeType::Scalar:
      out = yaml_scalar(node);
      break;
    default:
      out = nullptr;
  }
}

class Reader {
 public:
  explicit Reader(Report report) : report_(std::move(report)) {}

  [[noreturn]] void fail(const std::string& path, const std::string& what) const {
    report_(path, what);
    throw Error(ErrorKind::ConfigError, path + ": " + what);  // report_ always throws
  }

  const json& object(const json& j, const std::string& path, std::set<std::string> allowed) const {
    if (!j.is_object()) fail(path, "expected a mapping");
    for (const auto& [key, value] : j.items())
      if (!allowed.contains(key)) fail(join(path, key), "unknown field");
    return j;
  }

  double number(const json& j, const std::string& path) const {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
  }

  double number(const json& obj, const std::string& path, const std::string& key, double fallback) const {
    return obj.contains(key) ? number(obj[key], join(path, key)) : fallback;
  }

  std::int64_t integer(const json& j, const std::string& path) const {
    if (!j.is_number_integer()) fail(path, "expected an integer");
    return j.get<std::int64_t>();
  }

  std::string string(const json& j, const std::string& path) const {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
  }

  bool boolean(const json& j, const std::string& path) const {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
  }

 private:
  Report report_;
};

ScenarioKind parse_kind(const Reader& r, const std::string& s, const std::string& path) {
  if (s == "example") return ScenarioKind::example;
  if (s == "custom") return ScenarioKind::custom;
  if (s == "popper") return ScenarioKind::popper;
  if (s == "check") return ScenarioKind::check;
  r.fail(path, "expected example, custom, popper or check, got '" + s + "'");
}

SlitWindow read_slit(const Reader& r, const json& j, const std::string& path) {
  r.object(j, path, {"center", "width", "profile", "edge_fraction"});
  SlitWindow s;
  s.center = r.number(j, path, "center", 0.0);
  if (!j.contains("width")) r.fail(join(path, "width"), "required");
  s.width = r.number(j["width"], join(path, "width"));
  if (j.contains("profile")) {
    const std::string p = r.string(j["profile"], join(path, "profile"));
    if (p == "rectangular")
      s.profile = SlitProfile::rectangular;
    else if (p == "smoothed")
      s.profile = SlitProfile::smoothed;
    else
      r.fail(join(path, "profile"), "expected rectangular or smoothed");
  }
  s.edge_fraction = r.number(j, path, "edge_fraction", s.edge_fraction);
  return s;
}

TermConfig read_term(const Reader& r, const json& j, const std::string& path) {
  r.object(j, path, {"coeff", "mu1", "sigma1", "mu2", "sigma2"});
  TermConfig t;
  if (j.contains("coeff")) {
    const json& c = j["coeff"];
    const std::string cp = join(path, "coeff");
    if (c.is_array()) {
      if (c.size() != 2) r.fail(cp, "expected [re, im]");
      t.re = r.number(c[0], cp + "[0]");
      t.im = r.number(c[1], cp + "[1]");
    } else {
      t.re = r.number(c, cp);
    }
  }
  t.mu1 = r.number(j, path, "mu1", t.mu1);
  t.sigma1 = r.number(j, path, "sigma1", t.sigma1);
  t.mu2 = r.number(j, path, "mu2", t.mu2);
  t.sigma2 = r.number(j, path, "sigma2", t.sigma2);
  return t;
}

StateConfig read_state(const Reader& r, const json& j) {
  r.object(j, "state", {"paper", "terms", "symmetrize", "sign"});
  StateConfig s;
  if (j.contains("paper")) {
    const json& p = r.object(j["paper"], "state.paper", {"a", "k0"});
    if (!p.contains("a")) r.fail("state.paper.a", "required");
    if (!p.contains("k0")) r.fail("state.paper.k0", "required");
    s.paper = PaperParams{r.number(p["a"], "state.paper.a"), r.number(p["k0"], "state.paper.k0")};
  }
  if (j.contains("terms")) {
    const json& terms = j["terms"];
    if (!terms.is_array()) r.fail("state.terms", "expected a list");
    for (std::size_t i = 0; i < terms.size(); ++i)
      s.terms.push_back(read_term(r, terms[i], fmt::format("state.terms[{}]", i)));
  }
  if (j.contains("symmetrize")) s.symmetrize = r.boolean(j["symmetrize"], "state.symmetrize");
  if (j.contains("sign")) {
    const std::string sign = r.string(j["sign"], "state.sign");
    if (sign == "symmetric")
      s.sign = Parity::symmetric;
    else if (sign == "antisymmetric")
      s.sign = Parity::antisymmetric;
    else
      r.fail("state.sign", "expected symmetric or antisymmetric");
  }
  return s;
}

PopperConfig read_popper(const Reader& r, const json& j) {
  r.object(j, "popper", {"slit_a", "slit_b", "sweep"});
  PopperConfig p;
  if (!j.contains("slit_a")) r.fail("popper.slit_a", "required");
  p.slit_a = read_slit(r, j["slit_a"], "popper.slit_a");
  if (j.contains("slit_b")) p.slit_b = read_slit(r, j["slit_b"], "popper.slit_b");
  if (j.contains("sweep")) {
    const json& sw = j["sweep"];
    if (!sw.is_array()) r.fail("popper.sweep", "expected a list of widths");
    for (std::size_t i = 0; i < sw.size(); ++i) p.sweep.push_back(r.number(sw[i], fmt::format("popper.sweep[{}]", i)));
  }
  return p;
}

ScenarioConfig read_config(const Reader& r, const json& root) {
  r.object(root, "", {"kind", "hbar", "grid", "state", "popper", "check", "output"});
  ScenarioConfig cfg;
  if (!root.contains("kind")) r.fail("kind", "required");
  cfg.kind = parse_kind(r, r.string(root["kind"], "kind"), "kind");
  cfg.hbar = r.number(root, "", "hbar", 1.0);

  if (cfg.kind == ScenarioKind::popper) cfg.grid = GridConfig{512, 0.02, 0.0};
  if (root.contains("grid")) {
    const json& g = r.object(root["grid"], "grid", {"n", "dx", "x0"});
    if (g.contains("n")) {
      const std::int64_t n = r.integer(g["n"], "grid.n");
      if (n < 1) r.fail("grid.n", "must be positive");
      cfg.grid.n = static_cast<std::size_t>(n);
    }
    cfg.grid.dx = r.number(g, "grid", "dx", cfg.grid.dx);
    cfg.grid.x0 = r.number(g, "grid", "x0", cfg.grid.x0);
  }
  if (root.contains("state")) cfg.state = read_state(r, root["state"]);
  if (root.contains("popper")) cfg.popper = read_popper(r, root["popper"]);
  if (root.contains("check")) {
    const json& c = r.object(root["check"], "check", {"seed", "count"});
    CheckConfig cc;
    if (c.contains("seed")) {
      if (!c["seed"].is_number_integer() || (!c["seed"].is_number_unsigned() && c["seed"].get<std::int64_t>() < 0))
        r.fail("check.seed", "expected a non-negative integer");
      cc.seed = c["seed"].get<std::uint64_t>();
    }
    if (c.contains("count")) {
      const std::int64_t count = r.integer(c["count"], "check.count");
      if (count < 1 || count > 1000000) r.fail("check.count", "must be in [1, 1000000]");
      cc.count = static_cast<int>(count);
    }
    cfg.check = cc;
  } else if (cfg.kind == ScenarioKind::check) {
    cfg.check = CheckConfig{};
  }
  if (root.contains("output")) {
    const json& o = r.object(root["output"], "output", {"format", "path", "precision"});
    if (o.contains("format")) {
      const std::string f = r.string(o["format"], "output.format");
      if (f != "table" && f != "csv" && f != "json") r.fail("output.format", "expected table, csv or json");
      cfg.output.format = parse_format(f);
    }
    if (o.contains("path")) cfg.output.path = r.string(o["path"], "output.path");
    if (o.contains("precision")) {
      const std::int64_t p = r.integer(o["precision"], "output.precision");
      if (p < 1 || p > 17) r.fail("output.precision", "must be in [1, 17]");
      cfg.output.precision = static_cast<int>(p);
    }
  }
  return cfg;
}

void validate_with(const ScenarioConfig& cfg, const Reader& r) {
  if (!(cfg.hbar > 0.0) || !std::isfinite(cfg.hbar)) r.fail("hbar", "must be positive and finite");
  try {
    (void)cfg.grid.spec();
  } catch (const Error& e) {
    r.fail("grid", e.what());
  }
  if (cfg.output.precision < 1 || cfg.output.precision > 17) r.fail("output.precision", "must be in [1, 17]");

  const std::string kind = to_string(cfg.kind);
  if (cfg.kind == ScenarioKind::check) {
    if (cfg.state) r.fail("state", "not allowed for kind check");
    if (cfg.popper) r.fail("popper", "not allowed for kind check");
    if (!cfg.check) r.fail("check", "required for kind check");
    if (cfg.check->count < 1) r.fail("check.count", "must be at least 1");
    return;
  }
  if (cfg.check) r.fail("check", "only allowed for kind check");
  if (!cfg.state) r.fail("state", "required for kind " + kind);
  const StateConfig& s = *cfg.state;
  if (s.paper && !s.terms.empty()) r.fail("state", "give either paper or terms, not both");
  if (!s.paper && s.terms.empty()) r.fail("state", "needs paper or a non-empty terms list");
  if (cfg.kind != ScenarioKind::custom) {
    if (!s.paper) r.fail("state.paper", "required for kind " + kind);
    if (s.symmetrize) r.fail("state.symmetrize", "only allowed for kind custom");
  }
  if (s.paper) {
    if (!(s.paper->a > 0.0)) r.fail("state.paper.a", "must be positive");
  }
  try {
    (void)cfg.gaussian_sum();
  } catch (const Error& e) {
    r.fail(s.paper ? "state.paper" : "state.terms", e.what());
  }

  if (cfg.kind == ScenarioKind::popper) {
    if (!cfg.popper) r.fail("popper", "required for kind popper");
    const PopperConfig& p = *cfg.popper;
    try {
      p.slit_a.validate();
    } catch (const Error& e) {
      r.fail("popper.slit_a", e.what());
    }
    if (p.slit_b) try {
        p.slit_b->validate();
      } catch (const Error& e) {
        r.fail("popper.slit_b", e.what());
      }
    for (std::size_t i = 0; i < p.sweep.size(); ++i)
      if (!(p.sweep[i] > 0.0)) r.fail(fmt::format("popper.sweep[{}]", i), "widths must be positive");
  } else if (cfg.popper) {
    r.fail("popper", "only allowed for kind popper");
  }
}

Report plain_report() {
  return [](const std::string& path, const std::string& what) {
    throw Error(ErrorKind::ConfigError, (path.empty() ? "config" : path) + ": " + what);
  };
}

Report located_report(const std::string& source, const LineMap& lines) {
  return [source, &lines](const std::string& path, const std::string& what) {
    // Fall back to the nearest enclosing field that has a recorded line.
    std::string p = path;
    while (!p.empty() && !lines.contains(p)) {
      const auto cut = p.find_last_of(".[");
      p = cut == std::string::npos ? std::string() : p.substr(0, cut);
    }
    const auto it = lines.find(p);
    const std::string where = it == lines.end() ? source : fmt::format("{}:{}", source, it->second);
    throw Error(ErrorKind::ConfigError, fmt::format("{}: {}: {}", where, path.empty() ? "config" : path, what));
  };
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

json slit_json(const SlitWindow& s) {
  return json{{"center", s.center},
              {"width", s.width},
              {"profile", std::string(to_string(s.profile))},
              {"edge_fraction", s.edge_fraction}};
}

// Doubles go out in shortest round-trip form so re-parsing is exact; strings
// are quoted so they never re-parse as numbers.
void emit(YAML::Emitter& out, const json& j) {
  if (j.is_object()) {
    out << YAML::BeginMap;
    for (const auto& [k, v] : j.items()) {
      out << YAML::Key << k << YAML::Value;
      emit(out, v);
    }
    out << YAML::EndMap;
  } else if (j.is_array()) {
    out << YAML::Flow << YAML::BeginSeq;
    for (const auto& v : j) emit(out, v);
    out << YAML::EndSeq;
  } else if (j.is_number_float()) {
    out << fmt::format("{}", j.get<double>());
  } else if (j.is_string()) {
    out << YAML::DoubleQuoted << j.get<std::string>();
  } else {
    out << j.dump();
  }
}

}  // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::example: return "example";
    case ScenarioKind::custom: return "custom";
    case ScenarioKind::popper: return "popper";
    case ScenarioKind::check: return "check";
  }
  return "?";
}

std::string to_string(OutputFormat f) {
  switch (f) {
    case OutputFormat::table: return "table";
    case OutputFormat::csv: return "csv";
    case OutputFormat::json: return "json";
  }
  return "?";
}

OutputFormat parse_format(const std::string& s) {
  if (s == "table") return OutputFormat::table;
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw Error(ErrorKind::ConfigError, "format: expected table, csv or json, got '" + s + "'");
}

void ScenarioConfig::validate() const { validate_with(*this, Reader(plain_report())); }

GaussianSum ScenarioConfig::gaussian_sum() const {
  if (!state) throw Error(ErrorKind::ConfigError, "state: required");
  if (state->paper) return paper_state(state->paper->a, state->paper->k0, hbar);
  std::vector<GaussianTerm> terms;
  for (const auto& t : state->terms) terms.push_back(GaussianTerm{{t.re, t.im}, t.mu1, t.sigma1, t.mu2, t.sigma2});
  return GaussianSum(std::move(terms), hbar);
}

ScenarioConfig parse_config(const std::string& text, const std::string& source_name) {
  json root;
  LineMap lines;
  if (ends_with(source_name, ".json")) {
    try {
      root = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorKind::ConfigError, fmt::format("{}: byte {}: malformed JSON", source_name, e.byte));
    }
  } else {
    YAML::Node doc;
    try {
      doc = YAML::Load(text);
    } catch (const YAML::Exception& e) {
      throw Error(ErrorKind::ConfigError, fmt::format("{}:{}: {}", source_name, e.mark.line + 1, e.msg));
    }
    lower_yaml(doc, "", root, lines, source_name);
  }
  const Reader reader(located_report(source_name, lines));
  ScenarioConfig cfg = read_config(reader, root);
  validate_with(cfg, reader);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ConfigError, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

nlohmann::ordered_json to_json(const ScenarioConfig& cfg) {
  json j;
  j["kind"] = to_string(cfg.kind);
  j["hbar"] = cfg.hbar;
  j["grid"] = {{"n", cfg.grid.n}, {"dx", cfg.grid.dx}, {"x0", cfg.grid.x0}};
  if (cfg.state) {
    const StateConfig& s = *cfg.state;
    json st = json::object();
    if (s.paper) st["paper"] = {{"a", s.paper->a}, {"k0", s.paper->k0}};
    if (!s.terms.empty()) {
      st["terms"] = json::array();
      for (const auto& t : s.terms)
        st["terms"].push_back({{"coeff", {t.re, t.im}},
                               {"mu1", t.mu1},
                               {"sigma1", t.sigma1},
                               {"mu2", t.mu2},
                               {"sigma2", t.sigma2}});
    }
    st["symmetrize"] = s.symmetrize;
    st["sign"] = s.sign == Parity::symmetric ? "symmetric" : "antisymmetric";
    j["state"] = st;
  }
  if (cfg.popper) {
    json p;
    p["slit_a"] = slit_json(cfg.popper->slit_a);
    if (cfg.popper->slit_b) p["slit_b"] = slit_json(*cfg.popper->slit_b);
    if (!cfg.popper->sweep.empty()) p["sweep"] = cfg.popper->sweep;
    j["popper"] = p;
  }
  if (cfg.check) j["check"] = {{"seed", cfg.check->seed}, {"count", cfg.check->count}};
  json o;
  o["format"] = to_string(cfg.output.format);
  if (cfg.output.path) o["path"] = *cfg.output.path;
  o["precision"] = cfg.output.precision;
  j["output"] = o;
  return j;
}

std::string to_yaml(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  emit(out, to_json(cfg));
  return std::string(out.c_str()) + "\n";
}

}  // namespace entangle::cli
