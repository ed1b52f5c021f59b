// Copyright 2026 The hlearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <string>

#include "json.hpp"

#include "hlearn/hamiltonian_io.hpp"
#include "hlearn/learner.hpp"
#include "hlearn/lemma_verifier.hpp"
#include "hlearn/oracle.hpp"

namespace hlearn {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

/// Non-finite values serialize as null.
inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json to_json(const SparseHamiltonian& h) {
  Json out = Json::object();
  for (const auto& [label, value] : h.terms()) out[label.to_string()] = value;
  return out;
}

inline Json to_json(const QueryLedger& ledger) {
  return Json{{"t_tot", ledger.t_tot}, {"t_min", finite_or_null(ledger.t_min)}, {"queries", ledger.queries}};
}

inline Json to_json(const RegimeParams& p) {
  Json literal{{"s", p.s}, {"c_F", p.literal_c_f}, {"c_inf", p.literal_c_inf}, {"c", p.c}, {"eta_sw", p.literal_eta_sw}};
  Json relaxed{{"s", p.s}, {"c_F", p.c_f}, {"c_inf", p.c_inf}, {"c", p.c}, {"eta_sw", p.eta_sw}};
  Json out{{"regime", regime_name(p.regime)},
           {"m", p.m},
           {"T", p.T},
           {"rho", p.rho},
           {"literal", literal},
           {"relaxed", relaxed}};
  if (p.regime == Regime::poly_sparse) {
    out["K"] = p.K;
    out["time_warning"] = p.time_warning;
  }
  return out;
}

inline Json to_json(const LearnReport& r) {
  Json iterations = Json::array();
  for (const auto& it : r.iterations) {
    iterations.push_back(Json{{"j", it.j},
                              {"eta", it.eta},
                              {"t_j", it.t_j},
                              {"N_j", it.n_j},
                              {"branch", it.heisenberg ? "heisenberg" : "sql"},
                              {"t_w", it.t_w},
                              {"true_error", finite_or_null(it.true_error)},
                              {"t_tot_delta", it.t_tot_delta},
                              {"queries_delta", it.queries_delta}});
  }
  return Json{{"schema", kReportSchema},
              {"params", to_json(r.params)},
              {"epsilon", r.epsilon},
              {"delta", r.delta},
              {"J", r.J},
              {"iterations", iterations},
              {"estimate", to_json(r.estimate)},
              {"final_error", finite_or_null(r.final_error)},
              {"halving_ok", r.halving_ok},
              {"support_exceeds_m", r.support_exceeds_m},
              {"violations", r.violations},
              {"ledger", to_json(r.ledger)}};
}

inline Json to_json(const CheckReport& r) {
  Json out{{"name", r.name},
           {"trials", r.trials},
           {"skipped", r.skipped},
           {"max_violation", finite_or_null(r.max_violation)},
           {"pass", r.pass},
           {"worst_instance", r.worst_instance}};
  if (r.name == "span_4m") {
    out["max_offspan"] = r.max_offspan;
    out["span_size_ok"] = r.span_size_ok;
  }
  return out;
}

}  // namespace hlearn
