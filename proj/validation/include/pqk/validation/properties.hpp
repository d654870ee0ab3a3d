// Copyright 2026 The pqk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Property suites over random inputs. Each check returns a result record;
// `pqk validate` serializes them and the acceptance binary prints them.

#include <cstdint>
#include <string>
#include <vector>

namespace pqk::validation {

struct CheckResult {
    std::string id;
    std::string name;
    bool passed = false;
    double value = 0.0;      // observed worst-case metric
    double threshold = 0.0;  // bound it is compared against
    std::string detail;
};

CheckResult check_simulator_oracle(std::uint64_t seed);
CheckResult check_rdm_oracle(std::uint64_t seed);
CheckResult check_rotx_identities(std::uint64_t seed);
CheckResult check_pqk_rbf_equivalence(std::uint64_t seed);
CheckResult check_gram_psd(std::uint64_t seed);
CheckResult check_svm_oracle(std::uint64_t seed);
CheckResult check_shot_statistics(std::uint64_t seed);

std::vector<CheckResult> run_property_suite(std::uint64_t seed);

}  // namespace pqk::validation
