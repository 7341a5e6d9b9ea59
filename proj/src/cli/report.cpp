#include "entangle/cli/report.hpp"

#include <algorithm>
#include <cstdlib>

#include <fmt/format.h>

namespace entangle::cli {
namespace {

using json = nlohmann::ordered_json;

struct Field {
  std::string name;
  double value;
};

std::vector<Field> moment_fields(const MomentSet& m) {
  return {{"mean_q1", m.mean_q1}, {"mean_q2", m.mean_q2}, {"mean_p1", m.mean_p1}, {"mean_p2", m.mean_p2},
          {"m_q1q1", m.m_q1q1},   {"m_q2q2", m.m_q2q2},   {"m_p1p1", m.m_p1p1},   {"m_p2p2", m.m_p2p2},
          {"m_q1q2", m.m_q1q2},   {"m_p1p2", m.m_p1p2},   {"var_q1", m.var_q1()}, {"var_q2", m.var_q2()},
          {"var_p1", m.var_p1()}, {"var_p2", m.var_p2()}};
}

std::vector<Field> qcf_fields(const MomentSet& m) { return {{"cov_q", m.cov_q()}, {"cov_p", m.cov_p()}}; }

std::vector<std::pair<std::string, const BoundCheck*>> bound_checks(const UncertaintyReport& r) {
  std::vector<std::pair<std::string, const BoundCheck*>> out = {
      {"heis_1", &r.heis_1}, {"heis_2", &r.heis_2}, {"general", &r.general}};
  if (r.symmetric_form) out.emplace_back("symmetric_form", &*r.symmetric_form);
  return out;
}

std::vector<Field> paper_fields(const PaperComparison& p) {
  return {{"a", p.a},
          {"k0", p.k0},
          {"x1x2", p.computed.cov_q()},
          {"p1p2", p.computed.cov_p()},
          {"quoted_x1x2", p.quoted_x1x2},
          {"quoted_p1p2", p.quoted_p1p2},
          {"ratio_x", p.ratio_x},
          {"ratio_p", p.ratio_p},
          {"oracle_x1x2", p.oracle_x1x2},
          {"oracle_p1p2", p.oracle_p1p2},
          {"grid_x1x2", p.grid_x1x2},
          {"grid_p1p2", p.grid_p1p2}};
}

const char* yes_no(bool b) { return b ? "true" : "false"; }

json slit_json(const SlitWindow& s, int p) {
  return {{"center", round_to_digits(s.center, p)},
          {"width", round_to_digits(s.width, p)},
          {"profile", std::string(to_string(s.profile))},
          {"edge_fraction", round_to_digits(s.edge_fraction, p)}};
}

std::string render_json(const ScenarioResult& r, int p) {
  const auto num = [p](double v) { return round_to_digits(v, p); };
  json j;
  j["schema_version"] = kSchemaVersion;
  j["config"] = to_json(r.config);
  json moments;
  for (const auto& f : moment_fields(r.moments)) moments[f.name] = num(f.value);
  j["moments"] = moments;
  json qcf;
  for (const auto& f : qcf_fields(r.moments)) qcf[f.name] = num(f.value);
  j["qcf"] = qcf;

  json rel;
  for (const auto& [name, b] : bound_checks(r.relations)) {
    rel[name] = {{"value", num(b->value)}, {"bound", num(b->bound)}, {"slack", num(b->slack)}, {"satisfied", b->satisfied}};
  }
  if (r.relations.symmetric_form) rel["symmetric_form"]["mismatch"] = num(r.relations.symmetric_form->mismatch);
  rel["q_factor"] = num(r.relations.q_factor);
  rel["p_factor"] = num(r.relations.p_factor);
  rel["position_mismatch"] = num(r.relations.position_mismatch);
  j["relations"] = rel;

  if (r.paper) {
    json pc;
    for (const auto& f : paper_fields(*r.paper)) pc[f.name] = num(f.value);
    pc["oracle_agreement"] = r.paper->oracle_agreement;
    j["paper_comparison"] = pc;
  }
  if (!r.popper.empty()) {
    const PopperReport& first = r.popper.front().report;
    json pj;
    pj["case"] = first.case_label == PopperCase::a ? "a" : "b";
    pj["slit_a"] = slit_json(first.slit_a, p);
    if (first.slit_b) pj["slit_b"] = slit_json(*first.slit_b, p);
    pj["unconditioned"] = {{"dq2", num(first.unconditioned.dq())},
                           {"dp2", num(first.unconditioned.dp())},
                           {"product", num(first.unconditioned.product())}};
    pj["rows"] = json::array();
    for (const auto& row : r.popper) {
      const PopperReport& x = row.report;
      pj["rows"].push_back({{"width", num(row.width)},
                            {"dq2", num(x.conditioned_dq2)},
                            {"dp2", num(x.conditioned_dp2)},
                            {"product", num(x.product)},
                            {"bound", num(x.heisenberg_bound)},
                            {"satisfied", x.satisfied},
                            {"projected_dq2", num(x.projected_dq2)},
                            {"projected_dp2", num(x.projected_dp2)},
                            {"projected_product", num(x.projected_product)}});
    }
    if (r.ghost_image_monotone) pj["ghost_image_monotone"] = *r.ghost_image_monotone;
    j["popper"] = pj;
  }
  return j.dump(2) + "\n";
}

std::string render_csv(const ScenarioResult& r, int p) {
  std::string out = fmt::format("# schema_version: {}\n", kSchemaVersion);
  if (!r.popper.empty()) {
    out += "width,dq2,dp2,product,bound,satisfied\n";
    for (const auto& row : r.popper) {
      const PopperReport& x = row.report;
      out += fmt::format("{},{},{},{},{},{}\n", csv_number(row.width, p), csv_number(x.conditioned_dq2, p),
                         csv_number(x.conditioned_dp2, p), csv_number(x.product, p),
                         csv_number(x.heisenberg_bound, p), yes_no(x.satisfied));
    }
    return out;
  }
  out += "section,quantity,value\n";
  const auto put = [&](const std::string& section, const std::string& name, const std::string& value) {
    out += fmt::format("{},{},{}\n", section, name, value);
  };
  for (const auto& f : moment_fields(r.moments)) put("moments", f.name, csv_number(f.value, p));
  for (const auto& f : qcf_fields(r.moments)) put("qcf", f.name, csv_number(f.value, p));
  for (const auto& [name, b] : bound_checks(r.relations)) {
    put("relations", name + ".value", csv_number(b->value, p));
    put("relations", name + ".bound", csv_number(b->bound, p));
    put("relations", name + ".satisfied", yes_no(b->satisfied));
  }
  put("relations", "q_factor", csv_number(r.relations.q_factor, p));
  put("relations", "p_factor", csv_number(r.relations.p_factor, p));
  if (r.paper) {
    for (const auto& f : paper_fields(*r.paper)) put("paper_comparison", f.name, csv_number(f.value, p));
    put("paper_comparison", "oracle_agreement", yes_no(r.paper->oracle_agreement));
  }
  return out;
}

std::string render_table(const ScenarioResult& r, int p) {
  const auto num = [p](double v) { return table_number(v, p); };
  const GridConfig& g = r.config.grid;
  std::string out = fmt::format("schema_version: {}\n", kSchemaVersion);
  out += fmt::format("scenario: {}  hbar: {}  grid: n={} dx={} x0={}\n", to_string(r.config.kind),
                     num(r.config.hbar), g.n, num(g.dx), num(g.x0));

  out += "\nmoments\n";
  for (const auto& f : moment_fields(r.moments)) out += fmt::format("  {:<20}{}\n", f.name, num(f.value));
  out += "\nqcf\n";
  for (const auto& f : qcf_fields(r.moments)) out += fmt::format("  {:<20}{}\n", f.name, num(f.value));

  out += "\nrelations\n";
  out += fmt::format("  {:<16}{:>{w}}  {:>{w}}  {:>{w}}  {}\n", "relation", "value", "bound", "slack", "satisfied",
                     fmt::arg("w", p + 7));
  for (const auto& [name, b] : bound_checks(r.relations))
    out += fmt::format("  {:<16}{:>{w}}  {:>{w}}  {:>{w}}  {}\n", name, num(b->value), num(b->bound), num(b->slack),
                       yes_no(b->satisfied), fmt::arg("w", p + 7));
  out += fmt::format("  {:<20}{}\n", "q_factor", num(r.relations.q_factor));
  out += fmt::format("  {:<20}{}\n", "p_factor", num(r.relations.p_factor));
  if (!r.relations.symmetric_form)
    out += fmt::format("  symmetric_form not applicable (position mismatch {})\n", num(r.relations.position_mismatch));

  if (r.paper) {
    out += "\npaper_comparison\n";
    for (const auto& f : paper_fields(*r.paper)) out += fmt::format("  {:<20}{}\n", f.name, num(f.value));
    out += fmt::format("  {:<20}{}\n", "oracle_agreement", yes_no(r.paper->oracle_agreement));
  }

  if (!r.popper.empty()) {
    const PopperReport& first = r.popper.front().report;
    out += fmt::format("\npopper case ({})  unconditioned dq2={} dp2={}\n", first.case_label == PopperCase::a ? "a" : "b",
                       num(first.unconditioned.dq()), num(first.unconditioned.dp()));
    const int w = p + 7;
    out += fmt::format("  {:>{w}}  {:>{w}}  {:>{w}}  {:>{w}}  {:>{w}}  {:>9}  {:>{w}}  {:>{w}}\n", "width", "dq2", "dp2",
                       "product", "bound", "satisfied", "proj_dq2", "proj_product", fmt::arg("w", w));
    for (const auto& row : r.popper) {
      const PopperReport& x = row.report;
      out += fmt::format("  {:>{w}}  {:>{w}}  {:>{w}}  {:>{w}}  {:>{w}}  {:>9}  {:>{w}}  {:>{w}}\n", num(row.width),
                         num(x.conditioned_dq2), num(x.conditioned_dp2), num(x.product), num(x.heisenberg_bound),
                         yes_no(x.satisfied), num(x.projected_dq2), num(x.projected_product), fmt::arg("w", w));
    }
    if (r.ghost_image_monotone)
      out += fmt::format("  ghost_image_monotone  {}\n", yes_no(*r.ghost_image_monotone));
  }
  return out;
}

}  // namespace

double round_to_digits(double v, int precision) {
  return std::strtod(fmt::format("{:.{}g}", v, precision).c_str(), nullptr);
}

std::string table_number(double v, int precision) { return fmt::format("{:.{}e}", v, precision - 1); }

std::string csv_number(double v, int precision) { return fmt::format("{}", round_to_digits(v, precision)); }

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  ScenarioResult r;
  r.config = cfg;
  const GridSpec grid = cfg.grid.spec();
  TwoParticleState state = synthesize(cfg.gaussian_sum(), grid);
  if (cfg.state->symmetrize) state = symmetrize(state, cfg.state->sign);
  r.moments = moment_set(state);
  r.relations = evaluate_relations(r.moments);

  const auto& paper = cfg.state->paper;
  if (cfg.kind == ScenarioKind::example && paper->k0 != 0.0)
    r.paper = compare_with_paper(paper->a, paper->k0, grid, cfg.hbar);

  if (cfg.kind == ScenarioKind::popper) {
    const PopperConfig& pc = *cfg.popper;
    std::vector<double> widths = pc.sweep;
    if (widths.empty()) widths.push_back(pc.slit_a.width);
    for (double w : widths) {
      SlitWindow slit = pc.slit_a;
      slit.width = w;
      r.popper.push_back({w, popper_run(paper->a, paper->k0, slit, pc.slit_b, grid, cfg.hbar)});
    }
    if (r.popper.size() >= 2) {
      std::vector<PopperRow> sorted = r.popper;
      std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) { return x.width < y.width; });
      bool monotone = true;
      for (std::size_t i = 1; i < sorted.size(); ++i)
        monotone = monotone && sorted[i].width > sorted[i - 1].width &&
                   sorted[i].report.conditioned_dq2 > sorted[i - 1].report.conditioned_dq2;
      r.ghost_image_monotone = monotone;
    }
  }
  r.state = std::move(state);
  return r;
}

std::string render(const ScenarioResult& result, OutputFormat format, int precision) {
  switch (format) {
    case OutputFormat::json: return render_json(result, precision);
    case OutputFormat::csv: return render_csv(result, precision);
    case OutputFormat::table: break;
  }
  return render_table(result, precision);
}

}  // namespace entangle::cli
