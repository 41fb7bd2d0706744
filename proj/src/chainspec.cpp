#include "chainlab/chainspec.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <system_error>

#include "json.hpp"

#include "chainlab/generators.hpp"
#include "chainlab/trees.hpp"

namespace chainlab {

using nlohmann::json;

std::string format_decimal(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc())
    throw NumericalError("format_decimal: conversion failed");
  return std::string(buf, res.ptr);
}

double parse_decimal(const std::string& text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw ParseError("parse_decimal: bad number '" + text + "'");
  return v;
}

namespace {

double number_from(const json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_decimal(j.get<std::string>());
  throw ParseError("chain_from_json: " + where + " must be a number or string");
}

MarkovChain<double> kernel_from(const json& rows) {
  if (!rows.is_array() || rows.empty())
    throw ParseError("chain_from_json: matrix must be a nonempty array");
  const Index n = static_cast<Index>(rows.size());
  Matrix<double> p(n, n);
  for (Index i = 0; i < n; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      throw ParseError("chain_from_json: matrix rows must all have length " +
                       std::to_string(n));
    for (Index j = 0; j < n; ++j)
      p(i, j) = number_from(row[static_cast<std::size_t>(j)], "matrix entry");
  }
  return MarkovChain<double>(p);
}

MarkovChain<double> tree_from(const json& tree) {
  const json& edges = tree.is_object() ? tree.at("edges") : tree;
  if (!edges.is_array() || edges.empty())
    throw ParseError("chain_from_json: tree needs a nonempty edge array");
  std::vector<TreeEdge<double>> list;
  Index n = 0;
  for (const json& e : edges) {
    if (!e.is_array() || e.size() != 3)
      throw ParseError("chain_from_json: tree edges are [u, v, conductance]");
    TreeEdge<double> edge;
    edge.u = e[0].get<Index>();
    edge.v = e[1].get<Index>();
    edge.c = number_from(e[2], "edge conductance");
    n = std::max({n, edge.u + 1, edge.v + 1});
    list.push_back(edge);
  }
  return WeightedTree<double>(n, list).walk();
}

MarkovChain<double> apply_transform(MarkovChain<double> mc, const json& t) {
  if (t.is_string()) {
    const std::string name = t.get<std::string>();
    if (name == "lazy") return lazy(mc);
    if (name == "reverse") return reversed_chain(mc);
    throw ParseError("chain_from_json: unknown transform '" + name + "'");
  }
  if (t.is_object() && t.contains("loop"))
    return loop_perturbation(mc, number_from(t.at("loop"), "loop holding"));
  throw ParseError("chain_from_json: transforms are \"lazy\", \"reverse\", "
                   "or {\"loop\": a}");
}

ChainDescription from_parsed(const json& doc) {
  if (!doc.is_object())
    throw ParseError("chain_from_json: top level must be an object");
  std::string name = doc.value("name", std::string());

  std::optional<MarkovChain<double>> built;
  if (doc.contains("matrix")) {
    built = kernel_from(doc.at("matrix"));
  } else if (doc.contains("tree")) {
    built = tree_from(doc.at("tree"));
  } else if (doc.contains("family")) {
    FamilySpec spec;
    spec.family = doc.at("family").get<std::string>();
    if (doc.contains("params")) {
      const json& ps = doc.at("params");
      if (!ps.is_object())
        throw ParseError("chain_from_json: params must be an object");
      for (auto it = ps.begin(); it != ps.end(); ++it)
        spec.params[it.key()] = number_from(it.value(), "param " + it.key());
    }
    try {
      built = make_chain(spec);
    } catch (const ValidationError& e) {
      throw ParseError(std::string("chain_from_json: ") + e.what());
    }
    if (name.empty()) name = spec.family;
  }
  if (!built)
    throw ParseError(
        "chain_from_json: need one of \"family\", \"matrix\", \"tree\"");

  if (doc.contains("transform")) {
    const json& ts = doc.at("transform");
    if (ts.is_array())
      for (const json& t : ts) built = apply_transform(std::move(*built), t);
    else
      built = apply_transform(std::move(*built), ts);
  }
  return {std::move(name), std::move(*built)};
}

}  // namespace

ChainDescription chain_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("chain_from_json: ") + e.what());
  }
  return from_parsed(doc);
}

ChainDescription chain_from_shorthand(const std::string& text) {
  auto strip = [](std::string s) {
    const auto a = s.find_first_not_of(" \t");
    const auto b = s.find_last_not_of(" \t");
    if (a == std::string::npos) return std::string();
    return s.substr(a, b - a + 1);
  };
  std::string body = strip(text);
  if (body.empty()) throw ParseError("chain_from_shorthand: empty spec");

  // Wrapper forms compose: lazy(biased_cycle:n=6), reverse(...).
  for (const char* wrap : {"lazy", "reverse"}) {
    const std::string head = std::string(wrap) + "(";
    if (body.rfind(head, 0) == 0 && body.back() == ')') {
      ChainDescription inner = chain_from_shorthand(
          body.substr(head.size(), body.size() - head.size() - 1));
      auto mc = std::string(wrap) == "lazy" ? lazy(inner.chain)
                                            : reversed_chain(inner.chain);
      return {std::string(wrap) + "(" + inner.name + ")", std::move(mc)};
    }
  }
  if (const auto paren = body.find('(');
      paren != std::string::npos && paren > 0 && body.back() == ')' &&
      body.find(':') > paren)
    throw ParseError("chain_from_shorthand: unknown transform '" +
                     body.substr(0, paren) + "'");

  FamilySpec spec;
  const auto colon = body.find(':');
  spec.family = strip(body.substr(0, colon));
  if (colon != std::string::npos) {
    std::stringstream rest(body.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ParseError("chain_from_shorthand: expected key=value in '" +
                         item + "'");
      const std::string key = strip(item.substr(0, eq));
      const std::string val = strip(item.substr(eq + 1));
      if (key.empty() || val.empty())
        throw ParseError("chain_from_shorthand: empty key or value in '" +
                         item + "'");
      spec.params[key] = parse_decimal(val);
    }
  }
  try {
    return {body, make_chain(spec)};
  } catch (const ValidationError& e) {
    throw ParseError(std::string("chain_from_shorthand: ") + e.what());
  }
}

ChainDescription chain_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("chain_from_file: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  ChainDescription d = chain_from_json(buf.str());
  if (d.name.empty()) d.name = path;
  return d;
}

ChainDescription resolve_chain_argument(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return chain_from_file(arg.substr(1));
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{')
    return chain_from_json(arg);
  return chain_from_shorthand(arg);
}

std::string chain_to_json(const MarkovChain<double>& mc,
                          const std::string& name) {
  json doc = json::object();
  if (!name.empty()) doc["name"] = name;
  json rows = json::array();
  for (Index i = 0; i < mc.size(); ++i) {
    json row = json::array();
    for (Index j = 0; j < mc.size(); ++j) row.push_back(format_decimal(mc(i, j)));
    rows.push_back(std::move(row));
  }
  doc["matrix"] = std::move(rows);
  return doc.dump(2);
}

}  // namespace chainlab
