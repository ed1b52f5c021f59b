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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "hlearn/errors.hpp"
#include "hlearn/pauli_polynomial.hpp"

namespace hlearn {

/// Shortest decimal form that round-trips a double.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Reads lines "<pauli-string> <coefficient>"; '#' starts a comment line.
inline SparseHamiltonian read_hamiltonian(std::istream& in) {
  std::optional<SparseHamiltonian> h;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    std::string label_text, value_text, extra;
    fields >> label_text >> value_text;
    const auto where = "line " + std::to_string(lineno) + ": ";
    if (value_text.empty()) throw ParseError(where + "expected '<pauli-string> <coefficient>'");
    if (fields >> extra) throw ParseError(where + "unexpected trailing field '" + extra + "'");
    PauliLabel label;
    try {
      label = PauliLabel::from_string(label_text);
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    double value = 0.0;
    const char* end = value_text.data() + value_text.size();
    auto [ptr, ec] = std::from_chars(value_text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      throw ParseError(where + "invalid coefficient '" + value_text + "'");
    }
    if (label.is_identity()) throw ParseError(where + "identity term not allowed");
    if (!h) h.emplace(label.n);
    if (label.n != h->num_qubits()) throw ParseError(where + "inconsistent qubit count");
    if (h->contains(label)) throw ParseError(where + "duplicate label " + label_text);
    if (value == 0.0) throw ParseError(where + "zero coefficient for " + label_text);
    h->set(label, value);
  }
  if (!h) throw ParseError("no Hamiltonian terms found");
  return *h;
}

inline SparseHamiltonian read_hamiltonian_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return read_hamiltonian(in);
}

inline void write_hamiltonian(std::ostream& out, const SparseHamiltonian& h) {
  for (const auto& [label, value] : h.terms()) out << label.to_string() << ' ' << format_double(value) << '\n';
}

inline std::string hamiltonian_to_string(const SparseHamiltonian& h) {
  std::ostringstream out;
  write_hamiltonian(out, h);
  return out.str();
}

}  // namespace hlearn
