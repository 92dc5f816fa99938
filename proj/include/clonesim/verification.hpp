// Acceptance suite shared by `clonesim verify` and the acceptance test
// binary, plus hand-written reference states it checks against.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "clonesim/ideal_cloner.hpp"
#include "clonesim/qstate.hpp"

namespace clonesim {

// Reference states written out amplitude by amplitude, independent of the
// optics and protocol code paths.
namespace reference {

// |g_0>_A (a|H>_A + b|V>_A)(|g_R>|H>_B - |g_L>|V>_B)/sqrt2
StateVector pre_interference(const InputQubit& q);
// Heralded state of photons 3,4 and atom B.
StateVector heralded(const InputQubit& q);
// Output of the ideal cloning circuit on qubits q1,q2,q3 (normalized).
StateVector ideal_output(const InputQubit& q);
// Symmetric projection of |xy>_AB, x,y in {H,V}, written on paths 3,4.
StateVector projection_table(char x, char y);

}  // namespace reference

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;  // deterministic text, numbers at 12 digits
    double seconds = 0.0;
};

// Criteria 1-9. `on_result` fires as each one finishes.
std::vector<CriterionResult> run_criteria(std::uint64_t seed,
                                          const std::function<void(const CriterionResult&)>& on_result = {});

// Criteria 1-10. Criterion 10 reruns 1-9 with the same seed and compares
// the serialized reports byte for byte.
std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

// JSON report of the results. Timings are left out so reruns match.
std::string acceptance_report(std::uint64_t seed, const std::vector<CriterionResult>& results);

// One line per criterion: "[PASS] 1 name (0.12 s) detail".
std::string format_result_line(const CriterionResult& r);

}  // namespace clonesim
