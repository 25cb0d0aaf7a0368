#pragma once
// Instance families used by the tests, the acceptance harness and the CLI.

#include "qlll/instance.hpp"

#include <cstdint>

namespace qlll {

// Two qubits: |0><0| ⊗ I, I ⊗ |0><0| and |ψ><ψ| + |01><01| + |10><10| with
// |ψ> = sqrt(a)|00> + sqrt(1-a)|11>.
QlllInstance counterexample_instance(double a);

// Local basis projector onto the listed states of `qudits`.
Projector basis_projector(int id, std::vector<int> qudits, const std::vector<int>& states, int d);

struct RandomInstanceOptions {
    int n = 3;
    int m = 4;
    int d = 2;
    int max_arity = 2;
    bool commuting = false;   // diagonal projectors only
    bool planted = true;      // all projectors annihilate a planted product state
};

// Projectors on random subsets. With `planted`, a random product state (a
// basis state in the commuting case) lies in every kernel, so the instance is
// frustration-free.
QlllInstance random_instance(std::uint64_t seed, const RandomInstanceOptions& opt);

// Commuting rank-1 basis projectors on a ring of n qubits (arity 1 or 2),
// resampled until the Lovász conditions admit a certificate.
QlllInstance random_certified_commuting(std::uint64_t seed, int n, int m);

}  // namespace qlll
