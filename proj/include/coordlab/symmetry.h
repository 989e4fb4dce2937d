// Copyright 2026 The Coordlab Authors
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

// Equivalence mappings (relabelings of states, actions and observations that
// leave a Dec-POMDP unchanged) and finite groups of them.

#ifndef COORDLAB_SYMMETRY_H_
#define COORDLAB_SYMMETRY_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coordlab/decpomdp.h"
#include "coordlab/permutation.h"
#include "coordlab/rng.h"

namespace coordlab {

// A triple of bijections plus optional named attribute maps for environments
// whose states and observations are not enumerable (mini-Hanabi relabels card
// "color" and "rank"). An empty permutation is the identity on any index set.
// Rewards are scalars and are never relabeled.
struct Relabeling {
  Permutation states;
  Permutation observations;
  std::array<Permutation, kNumPlayers> actions;
  std::map<std::string, Permutation> labels;

  static Relabeling Identity() { return {}; }
  // Same action permutation for both players; states and observations fixed.
  static Relabeling OfActions(const Permutation& actions);

  int State(int s) const { return Apply(states, s); }
  int Observation(int o) const { return Apply(observations, o); }
  int Action(int player, int a) const {
    return a == kNoAction ? a : Apply(actions[player], a);
  }
  int Label(const std::string& name, int x) const;

  Relabeling Inverse() const;
  // (*this * other) applies `other` first.
  Relabeling operator*(const Relabeling& other) const;
  // Drops identity maps so that equal relabelings compare equal.
  Relabeling Normalized() const;
  bool IsIdentity() const;
  bool operator==(const Relabeling& other) const;

  // e.g. "actions=[1 0 2]" or "states=[...] observations=[...] actions0=[...]
  // actions1=[...] color=[1 0]"; "identity" when nothing moves.
  std::string ToString() const;
  static Relabeling Parse(std::string_view text);

  static int Apply(const Permutation& p, int x) {
    return p.size() == 0 ? x : p(x);
  }
};

struct VerificationReport {
  bool passed = true;
  // "initial", "transition", "reward", "observation", "legal_actions", ...
  std::string condition;
  std::string witness;
};

// Checks P, R, O (and the initial distribution) are unchanged under phi,
// entrywise within 1e-12. Index-range mismatches throw.
VerificationReport VerifyEquivalence(const TabularDecPOMDP& game,
                                     const Relabeling& phi);

// phi applied to player `player`'s history; rewards pass through.
Aoh ApplyToHistory(const Relabeling& phi, const Aoh& history, int player);

// phi(pi): pi'(phi(a) | phi(tau)) = pi(a | tau) on every stored history.
TabularPolicy ApplyToPolicy(const Relabeling& phi, const TabularPolicy& policy);

// Group that permutes the labels of `target` ("actions" for tabular games,
// "color" or "rank" for mini-Hanabi) by every permutation that maps each
// orbit onto itself; labels outside all orbits are fixed.
struct OrbitDescriptor {
  std::string target;
  int degree = 0;
  std::vector<std::vector<int>> orbits;
};

// Turns a label permutation into the full relabeling for one environment.
using Realizer = std::function<Relabeling(const Permutation&)>;
// Looks up the realizer for (target, degree); used when parsing descriptors.
using RealizerFactory =
    std::function<Realizer(const std::string& target, int degree)>;

class SymmetryGroup {
 public:
  enum class Kind { kExplicit, kOrbits, kGenerators };

  static SymmetryGroup Trivial();
  static SymmetryGroup Explicit(std::vector<Relabeling> elements);
  static SymmetryGroup FromOrbits(OrbitDescriptor orbits, Realizer realizer);
  // No uniform sampler is available for a bare generator set.
  static SymmetryGroup FromGenerators(std::vector<Relabeling> generators);

  Kind kind() const { return kind_; }
  // Saturates at UINT64_MAX.
  uint64_t Size() const;
  const std::vector<Relabeling>& elements() const;
  const std::vector<Relabeling>& generators() const { return elements_; }
  const OrbitDescriptor& orbits() const;

  // All elements, enumerating orbit groups when Size() <= max_elements.
  std::vector<Relabeling> Enumerate(uint64_t max_elements = 10'000) const;
  Relabeling Sample(Rng& rng) const;
  Relabeling Realize(const Permutation& label_permutation) const;
  // Orbit averaging applies to groups that move only actions.
  bool ActsOnActionsOnly() const;

  std::string Descriptor() const;
  static SymmetryGroup Parse(std::string_view descriptor,
                             const RealizerFactory& realizers);

 private:
  Kind kind_ = Kind::kExplicit;
  std::vector<Relabeling> elements_;
  OrbitDescriptor orbits_;
  Realizer realizer_;
};

// Closed-form uniform draw from an orbit group's label permutations.
Permutation SampleOrbitPermutation(const OrbitDescriptor& orbits, Rng& rng);

// pi_Phi(a | tau) = (1/|Phi|) sum_phi phi(pi)(a | tau).
TabularPolicy MixturePolicy(const TabularPolicy& policy,
                            const SymmetryGroup& group);

// Adjoint of MixturePolicy: maps dJ/d pi_Phi to dJ/d pi over `domain`.
std::map<Aoh, std::vector<double>> MixtureAdjoint(
    const std::map<Aoh, std::vector<double>>& grad_wrt_mixture,
    const std::vector<Aoh>& domain, int player, const SymmetryGroup& group);

struct GroupAxiomReport {
  bool passed = true;
  std::string witness;
};

// Identity, inverses and {phi * phi' : phi' in Phi} = Phi for every phi,
// exactly for explicit groups of at most 10^4 elements; orbit and generator
// groups are spot-checked on `samples` sampled triples.
GroupAxiomReport CheckGroupAxioms(const SymmetryGroup& group, int samples = 200,
                                  uint64_t seed = 0);

// Brute-force discovery for tiny games: every relabeling with a shared action
// permutation (|A| <= 8) and matching state/observation bijections that
// passes VerifyEquivalence.
SymmetryGroup EnumerateSymmetries(const TabularDecPOMDP& game);

}  // namespace coordlab

#endif  // COORDLAB_SYMMETRY_H_
