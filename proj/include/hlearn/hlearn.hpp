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

#include "hlearn/bch.hpp"
#include "hlearn/control_emulation.hpp"
#include "hlearn/dense.hpp"
#include "hlearn/errors.hpp"
#include "hlearn/f2_span.hpp"
#include "hlearn/hamiltonian_io.hpp"
#include "hlearn/learner.hpp"
#include "hlearn/lemma_verifier.hpp"
#include "hlearn/oracle.hpp"
#include "hlearn/pauli.hpp"
#include "hlearn/pauli_polynomial.hpp"
#include "hlearn/random.hpp"
#include "hlearn/tomography.hpp"
#include "hlearn/truncation.hpp"
