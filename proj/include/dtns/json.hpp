/**
 * @file json.hpp
 * @brief JSON views of substitutions, positionality reports and
 *        classifications. Integers are emitted as decimal strings.
 */
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "dtns/classify.hpp"
#include "dtns/core.hpp"
#include "dtns/positionality.hpp"

namespace dtns {

using Json = nlohmann::ordered_json;

inline Json substitution_json(const Substitution& sub) {
  Json images = Json::object();
  for (Letter x = 0; x < sub.size(); ++x) images[sub.name(x)] = sub.format_word(sub.image(x));
  return Json{{"alphabet", Json(std::vector<std::string>(sub.alphabet().begin(), sub.alphabet().end()))},
              {"images", images}};
}

inline Json letters_json(const Substitution& sub, const std::vector<Letter>& letters) {
  Json out = Json::array();
  for (Letter x : letters) out.push_back(sub.name(x));
  return out;
}

inline Json bigints_json(const std::vector<BigInt>& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

inline Json counterexample_json(const Substitution& sub, const Counterexample& c) {
  return Json{{"kind", c.kind == Counterexample::Kind::Constancy ? "constancy" : "condition_C"},
              {"j", c.j},
              {"ell", c.ell},
              {"letters", Json{sub.name(c.first), sub.name(c.second)}},
              {"lengths", Json{to_string(c.first_length), to_string(c.second_length)}}};
}

inline Json report_json(const PositionalityReport& report) {
  const auto& sub = report.system.substitution();
  Json E = Json::object();
  Json c2 = Json::object();
  for (std::size_t j = 0; j < report.sets.E.size(); ++j) {
    E[std::to_string(j)] = letters_json(sub, report.sets.E[j]);
    if (!report.sets.c2_added[j].empty()) c2[std::to_string(j)] = letters_json(sub, report.sets.c2_added[j]);
  }
  Json cond = Json::array();
  for (const auto& ob : report.sets.condition_c) {
    cond.push_back(Json{{"j", ob.j}, {"letter", sub.name(ob.letter)}, {"exponent", ob.exponent}});
  }
  Json out{{"positional", report.positional}, {"E", E}, {"c2_added", c2}, {"condition_C", cond}};
  if (report.weights) {
    out["U"] = bigints_json(report.weights->U);
    out["V"] = bigints_json(report.weights->V);
    out["unconstrained"] = report.weights->unconstrained;
  }
  out["counterexample"] = report.counterexample ? counterexample_json(sub, *report.counterexample) : Json(nullptr);
  out["removed"] = report.removed;
  out["notes"] = report.notes;
  return out;
}

inline Json weights_json(const WeightTable& table) {
  return Json{{"U", bigints_json(table.U)}, {"V", bigints_json(table.V)}, {"unconstrained", table.unconstrained}};
}

inline Json upword_json(const UPWord& w) { return Json{{"preperiod", w.preperiod}, {"cycle", w.cycle}}; }

inline Json classification_json(const Substitution& sub, const Classification& c) {
  Json out;
  out["fabre"] = c.fabre ? Json{{"digits", c.fabre->digits}, {"cycle_entry", c.fabre->cycle_entry}} : Json(nullptr);
  out["d_word"] = c.dword ? upword_json(*c.dword) : Json(nullptr);
  out["parry"] = c.parry ? Json(c.parry->pass ? std::string("pass") : "fail@" + std::to_string(c.parry->shift))
                         : Json(nullptr);
  out["class"] = std::string(bertrand_name(c.kind));
  if (c.d_beta) out["d_beta"] = upword_json(*c.d_beta);
  if (c.fabre_like_periodic) out["fabre_like_periodic"] = letters_json(sub, *c.fabre_like_periodic);
  return out;
}

}  // namespace dtns
