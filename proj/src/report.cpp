#include "chainlab/report.hpp"

#include <sstream>

#include "json.hpp"

#include "chainlab/chainspec.hpp"
#include "chainlab/distances.hpp"
#include "chainlab/generators.hpp"
#include "chainlab/hitting.hpp"
#include "chainlab/mc_sim.hpp"
#include "chainlab/stopping.hpp"
#include "chainlab/verify_suite.hpp"

namespace chainlab {

using nlohmann::json;

namespace {

ParamValue threshold_param(std::string key, const ThresholdResult& r) {
  ParamValue p;
  p.key = std::move(key);
  if (r.attained) {
    p.value = double(r.time);
  } else {
    p.value = -1.0;
    p.attained = false;
    p.note = "level " + format_decimal(r.level) + " not attained by t = " +
             std::to_string(r.searched_to);
  }
  return p;
}

std::string set_brief(const StateSet& a) {
  std::string s = "{";
  const std::size_t shown = std::min<std::size_t>(a.size(), 8);
  for (std::size_t i = 0; i < shown; ++i) {
    if (i) s += ",";
    s += std::to_string(a[i]);
  }
  if (shown < a.size()) s += ",...";
  return s + "}";
}

json check_to_json(const CheckResult& c) {
  json j;
  j["name"] = c.name;
  j["status"] = to_string(c.status);
  if (c.status != CheckStatus::skipped) {
    j["lhs"] = c.lhs;
    j["rhs"] = c.rhs;
    j["slack"] = c.slack;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json report_to_json_value(const ParamReport& rep) {
  json j;
  j["chain"] = rep.chain;
  j["n"] = rep.n;
  j["reversible"] = rep.reversible;
  j["provenance"] = {{"epsilon", rep.provenance.epsilon},
                     {"separation_threshold", rep.provenance.sep_level},
                     {"alpha", rep.provenance.alpha},
                     {"horizon", rep.provenance.horizon},
                     {"tol", rep.provenance.tol},
                     {"seed", rep.provenance.seed}};
  json params = json::array();
  for (const auto& p : rep.parameters) {
    json e;
    e["key"] = p.key;
    e["value"] = p.value;
    e["attained"] = p.attained;
    if (!p.note.empty()) e["note"] = p.note;
    params.push_back(std::move(e));
  }
  j["parameters"] = std::move(params);
  json checks = json::array();
  for (const auto& c : rep.inequalities) checks.push_back(check_to_json(c));
  j["inequalities"] = std::move(checks);
  return j;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

ParamReport analyze(const MarkovChain<double>& mc, const std::string& name,
                    const AnalyzeOptions& opt) {
  ParamReport rep;
  rep.chain = name;
  rep.n = mc.size();
  rep.reversible = mc.reversibility_defect() <= 1e-9;
  rep.provenance = opt;
  if (rep.provenance.horizon < 0)
    rep.provenance.horizon = config::auto_horizon(mc.size());
  const Index horizon = rep.provenance.horizon;
  const double eps = opt.epsilon;

  auto& ps = rep.parameters;
  ps.push_back({"stationary_min", mc.stationary().minCoeff(), true, ""});
  ps.push_back({"reversibility_defect", mc.reversibility_defect(), true, ""});

  ps.push_back(threshold_param("t_mix", mixing_time(mc, eps, horizon)));
  ps.push_back(
      threshold_param("t_mix_ave", average_mixing_time(mc, eps, horizon)));
  ps.push_back(
      threshold_param("t_sep", separation_time(mc, opt.sep_level, horizon)));
  ps.push_back(
      threshold_param("t_mix_geo", geometric_mixing_time(mc, eps, horizon)));
  ps.push_back(threshold_param(
      "t_sep_geo2", geometric_doubled_sep_time(mc, opt.sep_level, horizon)));
  ps.push_back(
      threshold_param("t_mix_cesaro", cesaro_mixing_time(mc, eps, horizon)));

  const auto stop = t_stop(mc);
  ps.push_back({"t_stop", stop.value, true,
                "argmax start " + std::to_string(stop.argmax_state)});
  const auto stop_lazy = t_stop_lazy(mc);
  ps.push_back({"t_stop_lazy", stop_lazy.value, true,
                "argmax start " + std::to_string(stop_lazy.argmax_state)});

  {
    ParamValue p;
    p.key = "t_hit";
    const bool exact = mc.size() <= 20;
    THitEstimateOptions est_opt;
    est_opt.seed = opt.seed;
    const HittingReport hit = exact ? t_hit_alpha(mc, opt.alpha)
                                    : estimate_t_hit_alpha(mc, opt.alpha, est_opt);
    p.value = hit.value;
    p.note = "argmax start " + std::to_string(hit.argmax_state) + ", set " +
             set_brief(hit.argmax_set);
    if (!hit.warning.empty()) p.note += "; " + hit.warning;
    ps.push_back(std::move(p));
  }

  {
    ParamValue p;
    p.key = "t_prod";
    try {
      const HittingReport prod = t_prod(mc);
      p.value = prod.value;
      p.note = "argmax start " + std::to_string(prod.argmax_state) + ", set " +
               set_brief(prod.argmax_set);
      if (!prod.warning.empty()) p.note += "; " + prod.warning;
    } catch (const ScaleError& e) {
      p.value = -1.0;
      p.attained = false;
      p.note = e.what();
    }
    ps.push_back(std::move(p));
  }

  if (opt.with_checks) {
    VerifyOptions vopt;
    vopt.epsilon = opt.epsilon;
    vopt.sep_level = opt.sep_level;
    vopt.alpha = opt.alpha;
    vopt.horizon = horizon;
    rep.inequalities = verify_chain(mc, vopt);
  }
  return rep;
}

std::string report_to_json(const ParamReport& rep) {
  return report_to_json_value(rep).dump(2);
}

std::string reports_to_json(const std::vector<ParamReport>& reps) {
  json arr = json::array();
  for (const auto& r : reps) arr.push_back(report_to_json_value(r));
  return arr.dump(2);
}

std::string reports_to_csv(const std::vector<ParamReport>& reps) {
  std::ostringstream out;
  out << "chain,n,reversible,provenance.epsilon,provenance.separation_threshold,"
         "provenance.alpha,provenance.horizon,provenance.tol,provenance.seed";
  if (!reps.empty()) {
    for (const auto& p : reps.front().parameters)
      out << ",param." << p.key << ".value,param." << p.key << ".attained";
    for (const auto& c : reps.front().inequalities)
      out << ",check." << c.name << ".status,check." << c.name
          << ".lhs,check." << c.name << ".rhs,check." << c.name << ".slack";
  }
  out << "\n";
  for (const auto& r : reps) {
    out << csv_escape(r.chain) << "," << r.n << ","
        << (r.reversible ? "true" : "false") << ","
        << format_decimal(r.provenance.epsilon) << ","
        << format_decimal(r.provenance.sep_level) << ","
        << format_decimal(r.provenance.alpha) << "," << r.provenance.horizon
        << "," << format_decimal(r.provenance.tol) << ","
        << r.provenance.seed;
    for (const auto& p : r.parameters)
      out << "," << format_decimal(p.value) << ","
          << (p.attained ? "true" : "false");
    for (const auto& c : r.inequalities) {
      out << "," << to_string(c.status);
      if (c.status == CheckStatus::skipped)
        out << ",,,";
      else
        out << "," << format_decimal(c.lhs) << "," << format_decimal(c.rhs)
            << "," << format_decimal(c.slack);
    }
    out << "\n";
  }
  return out.str();
}

std::vector<ParamReport> sweep_family(const std::string& family,
                                      const std::string& param, Index from,
                                      Index to, Index step,
                                      const AnalyzeOptions& opt) {
  if (step < 1) throw ValidationError("sweep_family: step must be positive");
  if (to < from) throw ValidationError("sweep_family: empty range");
  std::vector<ParamReport> out;
  for (Index v = from; v <= to; v += step) {
    FamilySpec spec;
    spec.family = family;
    spec.params[param] = double(v);
    spec.params["seed"] = double(opt.seed);
    const std::string name =
        family + ":" + param + "=" + std::to_string(v);
    out.push_back(analyze(make_chain(spec), name, opt));
  }
  return out;
}

}  // namespace chainlab
