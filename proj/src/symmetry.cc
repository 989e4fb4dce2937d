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

#include "coordlab/symmetry.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "coordlab/error.h"
#include "coordlab/text.h"

namespace coordlab {

namespace {

constexpr double kTableTolerance = 1e-12;
constexpr int kMaxEnumeratedActions = 8;
constexpr uint64_t kMaxExplicitElements = 10'000;
constexpr int64_t kMaxSearchNodes = 50'000'000;

Permutation Compose(const Permutation& a, const Permutation& b) {
  if (a.size() == 0) return b;
  if (b.size() == 0) return a;
  return a * b;
}

Permutation InverseOf(const Permutation& p) {
  return p.size() == 0 ? p : p.Inverse();
}

Permutation Normalize(const Permutation& p) {
  return p.IsIdentity() ? Permutation() : p;
}

bool Close(double a, double b) { return std::abs(a - b) <= kTableTolerance; }

uint64_t SaturatingMul(uint64_t a, uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

uint64_t Factorial(int n) {
  uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f = SaturatingMul(f, k);
  return f;
}

void CheckSize(const Permutation& p, int expected, const char* what) {
  if (p.size() != 0 && p.size() != expected) {
    Fail("relabeling ", what, " map has size ", p.size(), " but the game has ",
         expected);
  }
}

std::string JointString(const TabularDecPOMDP& game, int joint) {
  if (joint == game.InitialSlot()) return "init";
  return internal::StrCat("(", joint / game.num_actions(), ",",
                          joint % game.num_actions(), ")");
}

int MapJoint(const TabularDecPOMDP& game, const Relabeling& phi, int joint) {
  if (joint == game.InitialSlot()) return joint;
  const int n = game.num_actions();
  return game.JointAction(phi.Action(0, joint / n), phi.Action(1, joint % n));
}

}  // namespace

Relabeling Relabeling::OfActions(const Permutation& actions) {
  Relabeling phi;
  phi.actions = {actions, actions};
  return phi;
}

int Relabeling::Label(const std::string& name, int x) const {
  auto it = labels.find(name);
  return it == labels.end() ? x : Apply(it->second, x);
}

Relabeling Relabeling::Inverse() const {
  Relabeling inv;
  inv.states = InverseOf(states);
  inv.observations = InverseOf(observations);
  for (int i = 0; i < kNumPlayers; ++i) inv.actions[i] = InverseOf(actions[i]);
  for (const auto& [name, p] : labels) inv.labels[name] = InverseOf(p);
  return inv;
}

Relabeling Relabeling::operator*(const Relabeling& other) const {
  Relabeling out;
  out.states = Compose(states, other.states);
  out.observations = Compose(observations, other.observations);
  for (int i = 0; i < kNumPlayers; ++i) {
    out.actions[i] = Compose(actions[i], other.actions[i]);
  }
  out.labels = other.labels;
  for (const auto& [name, p] : labels) {
    auto it = out.labels.find(name);
    out.labels[name] = it == out.labels.end() ? p : Compose(p, it->second);
  }
  return out;
}

Relabeling Relabeling::Normalized() const {
  Relabeling out;
  out.states = Normalize(states);
  out.observations = Normalize(observations);
  for (int i = 0; i < kNumPlayers; ++i) out.actions[i] = Normalize(actions[i]);
  for (const auto& [name, p] : labels) {
    if (!p.IsIdentity()) out.labels[name] = p;
  }
  return out;
}

bool Relabeling::IsIdentity() const {
  const Relabeling n = Normalized();
  return n.states.size() == 0 && n.observations.size() == 0 &&
         n.actions[0].size() == 0 && n.actions[1].size() == 0 &&
         n.labels.empty();
}

bool Relabeling::operator==(const Relabeling& other) const {
  const Relabeling a = Normalized();
  const Relabeling b = other.Normalized();
  return a.states == b.states && a.observations == b.observations &&
         a.actions == b.actions && a.labels == b.labels;
}

std::string Relabeling::ToString() const {
  const Relabeling n = Normalized();
  std::vector<std::string> parts;
  if (n.states.size() > 0) parts.push_back("states=" + n.states.ToString());
  if (n.observations.size() > 0) {
    parts.push_back("observations=" + n.observations.ToString());
  }
  if (n.actions[0] == n.actions[1]) {
    if (n.actions[0].size() > 0) {
      parts.push_back("actions=" + n.actions[0].ToString());
    }
  } else {
    for (int i = 0; i < kNumPlayers; ++i) {
      if (n.actions[i].size() > 0) {
        parts.push_back(internal::StrCat("actions", i, "=",
                                         n.actions[i].ToString()));
      }
    }
  }
  for (const auto& [name, p] : n.labels) {
    parts.push_back(name + "=" + p.ToString());
  }
  return parts.empty() ? "identity" : Join(parts, " ");
}

Relabeling Relabeling::Parse(std::string_view text) {
  Relabeling phi;
  const std::string_view trimmed = Trim(text);
  if (trimmed == "identity" || trimmed.empty()) return phi;
  size_t pos = 0;
  const std::string body(trimmed);
  while (pos < body.size()) {
    while (pos < body.size() && std::isspace(static_cast<unsigned char>(body[pos]))) {
      ++pos;
    }
    if (pos >= body.size()) break;
    const size_t eq = body.find('=', pos);
    const size_t close = body.find(']', pos);
    if (eq == std::string::npos || close == std::string::npos || close < eq) {
      Fail("malformed relabeling '", text, "'");
    }
    const std::string name = std::string(Trim(body.substr(pos, eq - pos)));
    const Permutation p = Permutation::Parse(body.substr(eq + 1, close - eq));
    if (name == "states") {
      phi.states = p;
    } else if (name == "observations") {
      phi.observations = p;
    } else if (name == "actions") {
      phi.actions = {p, p};
    } else if (name == "actions0") {
      phi.actions[0] = p;
    } else if (name == "actions1") {
      phi.actions[1] = p;
    } else if (!name.empty()) {
      phi.labels[name] = p;
    } else {
      Fail("malformed relabeling '", text, "'");
    }
    pos = close + 1;
  }
  return phi;
}

VerificationReport VerifyEquivalence(const TabularDecPOMDP& game,
                                     const Relabeling& phi) {
  CheckSize(phi.states, game.num_states(), "state");
  CheckSize(phi.observations, game.num_observations(), "observation");
  for (int i = 0; i < kNumPlayers; ++i) {
    CheckSize(phi.actions[i], game.num_actions(), "action");
  }
  if (!phi.labels.empty()) {
    Fail("tabular games have no attribute labels; got '", phi.ToString(), "'");
  }
  VerificationReport report;
  auto fail = [&](std::string condition, std::string witness) {
    report.passed = false;
    report.condition = std::move(condition);
    report.witness = std::move(witness);
    return report;
  };
  for (int s = 0; s < game.num_states(); ++s) {
    if (!Close(game.Initial(phi.State(s)), game.Initial(s))) {
      return fail("initial", internal::StrCat(
                                 "P0(s=", s, ")=", FormatDouble(game.Initial(s)),
                                 " but P0(phi(s)=", phi.State(s),
                                 ")=", FormatDouble(game.Initial(phi.State(s)))));
    }
  }
  for (int s = 0; s < game.num_states(); ++s) {
    for (int joint = 0; joint < game.num_joint_actions(); ++joint) {
      const int pj = MapJoint(game, phi, joint);
      for (int s2 = 0; s2 < game.num_states(); ++s2) {
        const double p = game.Transition(s, joint, s2);
        const double pp = game.Transition(phi.State(s), pj, phi.State(s2));
        if (!Close(p, pp)) {
          return fail("transition",
                      internal::StrCat("P(s'=", s2, "|s=", s, ",a=",
                                       JointString(game, joint),
                                       ")=", FormatDouble(p), " but P(s'=",
                                       phi.State(s2), "|s=", phi.State(s),
                                       ",a=", JointString(game, pj),
                                       ")=", FormatDouble(pp)));
        }
      }
    }
  }
  for (int s = 0; s < game.num_states(); ++s) {
    for (int joint = 0; joint < game.num_joint_actions(); ++joint) {
      const int pj = MapJoint(game, phi, joint);
      for (int s2 = 0; s2 < game.num_states(); ++s2) {
        const double r = game.Reward(s2, joint, s);
        const double rr = game.Reward(phi.State(s2), pj, phi.State(s));
        if (!Close(r, rr)) {
          return fail("reward",
                      internal::StrCat("R(s'=", s2, ",a=",
                                       JointString(game, joint), ",s=", s,
                                       ")=", FormatDouble(r), " but R(s'=",
                                       phi.State(s2), ",a=",
                                       JointString(game, pj), ",s=",
                                       phi.State(s), ")=", FormatDouble(rr)));
        }
      }
    }
  }
  for (int i = 0; i < kNumPlayers; ++i) {
    for (int s = 0; s < game.num_states(); ++s) {
      for (int slot = 0; slot <= game.num_joint_actions(); ++slot) {
        const int ps = MapJoint(game, phi, slot);
        for (int o = 0; o < game.num_observations(); ++o) {
          const double q = game.Observation(o, s, slot, i);
          const double qq =
              game.Observation(phi.Observation(o), phi.State(s), ps, i);
          if (!Close(q, qq)) {
            return fail("observation",
                        internal::StrCat("O(o=", o, "|s=", s, ",a=",
                                         JointString(game, slot), ",i=", i,
                                         ")=", FormatDouble(q), " but O(o=",
                                         phi.Observation(o), "|s=",
                                         phi.State(s), ",a=",
                                         JointString(game, ps),
                                         ")=", FormatDouble(qq)));
          }
        }
      }
    }
  }
  return report;
}

Aoh ApplyToHistory(const Relabeling& phi, const Aoh& history, int player) {
  Aoh out;
  out.observations.reserve(history.observations.size());
  for (int o : history.observations) {
    out.observations.push_back(phi.Observation(o));
  }
  for (int a : history.actions) out.actions.push_back(phi.Action(player, a));
  out.rewards = history.rewards;
  return out;
}

TabularPolicy ApplyToPolicy(const Relabeling& phi, const TabularPolicy& policy) {
  TabularPolicy out(policy.player(), policy.num_actions());
  for (const auto& [history, probs] : policy.table()) {
    std::vector<double> mapped(probs.size(), 0.0);
    for (int a = 0; a < policy.num_actions(); ++a) {
      mapped[phi.Action(policy.player(), a)] = probs[a];
    }
    out.Set(ApplyToHistory(phi, history, policy.player()), std::move(mapped));
  }
  return out;
}

// ---------------------------------------------------------------------------
// SymmetryGroup

SymmetryGroup SymmetryGroup::Trivial() {
  return Explicit({Relabeling::Identity()});
}

SymmetryGroup SymmetryGroup::Explicit(std::vector<Relabeling> elements) {
  COORD_CHECK(!elements.empty(), "explicit group without elements");
  SymmetryGroup group;
  group.kind_ = Kind::kExplicit;
  group.elements_ = std::move(elements);
  return group;
}

SymmetryGroup SymmetryGroup::FromOrbits(OrbitDescriptor orbits,
                                        Realizer realizer) {
  std::vector<bool> seen(orbits.degree, false);
  for (auto& orbit : orbits.orbits) {
    std::sort(orbit.begin(), orbit.end());
    for (int x : orbit) {
      if (x < 0 || x >= orbits.degree || seen[x]) {
        Fail("orbits of '", orbits.target, "' are not disjoint subsets of [0, ",
             orbits.degree, ")");
      }
      seen[x] = true;
    }
  }
  std::sort(orbits.orbits.begin(), orbits.orbits.end());
  // Singleton orbits contribute nothing.
  std::erase_if(orbits.orbits, [](const auto& o) { return o.size() < 2; });
  SymmetryGroup group;
  group.kind_ = Kind::kOrbits;
  group.orbits_ = std::move(orbits);
  group.realizer_ = std::move(realizer);
  return group;
}

SymmetryGroup SymmetryGroup::FromGenerators(std::vector<Relabeling> generators) {
  SymmetryGroup group;
  group.kind_ = Kind::kGenerators;
  group.elements_ = std::move(generators);
  return group;
}

uint64_t SymmetryGroup::Size() const {
  switch (kind_) {
    case Kind::kExplicit:
      return elements_.size();
    case Kind::kOrbits: {
      uint64_t size = 1;
      for (const auto& orbit : orbits_.orbits) {
        size = SaturatingMul(size, Factorial(static_cast<int>(orbit.size())));
      }
      return size;
    }
    case Kind::kGenerators:
      break;
  }
  Fail("the order of a generator-only group is not known");
}

const std::vector<Relabeling>& SymmetryGroup::elements() const {
  COORD_CHECK(kind_ == Kind::kExplicit, "group is not explicit");
  return elements_;
}

const OrbitDescriptor& SymmetryGroup::orbits() const {
  COORD_CHECK(kind_ == Kind::kOrbits, "group is not orbit-based");
  return orbits_;
}

Relabeling SymmetryGroup::Realize(const Permutation& label_permutation) const {
  COORD_CHECK(kind_ == Kind::kOrbits, "group is not orbit-based");
  return realizer_(label_permutation);
}

bool SymmetryGroup::ActsOnActionsOnly() const {
  return kind_ == Kind::kOrbits && orbits_.target == "actions";
}

std::vector<Relabeling> SymmetryGroup::Enumerate(uint64_t max_elements) const {
  if (kind_ == Kind::kExplicit) return elements_;
  if (kind_ == Kind::kGenerators) {
    Fail("cannot enumerate a generator-only group");
  }
  if (Size() > max_elements) {
    Fail("group of size ", Size(), " exceeds the enumeration limit ",
         max_elements);
  }
  std::vector<Permutation> partial{Permutation::Identity(orbits_.degree)};
  for (const auto& orbit : orbits_.orbits) {
    std::vector<Permutation> next;
    std::vector<int> arrangement = orbit;
    do {
      std::vector<int> images(orbits_.degree);
      std::iota(images.begin(), images.end(), 0);
      for (size_t k = 0; k < orbit.size(); ++k) images[orbit[k]] = arrangement[k];
      const Permutation step(std::move(images));
      for (const Permutation& p : partial) next.push_back(step * p);
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    partial = std::move(next);
  }
  std::vector<Relabeling> out;
  out.reserve(partial.size());
  for (const Permutation& p : partial) out.push_back(realizer_(p));
  return out;
}

Permutation SampleOrbitPermutation(const OrbitDescriptor& orbits, Rng& rng) {
  std::vector<int> images(orbits.degree);
  std::iota(images.begin(), images.end(), 0);
  for (const auto& orbit : orbits.orbits) {
    std::vector<int> shuffled = orbit;
    rng.Shuffle(shuffled);
    for (size_t k = 0; k < orbit.size(); ++k) images[orbit[k]] = shuffled[k];
  }
  return Permutation(std::move(images));
}

Relabeling SymmetryGroup::Sample(Rng& rng) const {
  switch (kind_) {
    case Kind::kExplicit:
      return elements_[rng.UniformInt(static_cast<int>(elements_.size()))];
    case Kind::kOrbits:
      return realizer_(SampleOrbitPermutation(orbits_, rng));
    case Kind::kGenerators:
      break;
  }
  Fail("generator-only group has no certified uniform sampler");
}

std::string SymmetryGroup::Descriptor() const {
  switch (kind_) {
    case Kind::kExplicit: {
      if (elements_.size() == 1 && elements_[0].IsIdentity()) return "trivial";
      std::vector<std::string> parts{"explicit"};
      for (const auto& e : elements_) parts.push_back(e.ToString());
      return Join(parts, "; ");
    }
    case Kind::kOrbits: {
      std::ostringstream out;
      out << "orbits " << orbits_.target << ' ' << orbits_.degree;
      for (const auto& orbit : orbits_.orbits) {
        out << " [";
        for (size_t k = 0; k < orbit.size(); ++k) {
          out << (k ? " " : "") << orbit[k];
        }
        out << ']';
      }
      return out.str();
    }
    case Kind::kGenerators: {
      std::vector<std::string> parts{"generators"};
      for (const auto& e : elements_) parts.push_back(e.ToString());
      return Join(parts, "; ");
    }
  }
  return "";
}

SymmetryGroup SymmetryGroup::Parse(std::string_view descriptor,
                                   const RealizerFactory& realizers) {
  const std::string_view text = Trim(descriptor);
  if (text == "trivial" || text == "none" || text == "identity") return Trivial();
  if (text.starts_with("explicit") || text.starts_with("generators")) {
    auto parts = Split(text, ';');
    const std::string head(Trim(parts[0]));
    std::vector<Relabeling> elements;
    for (size_t i = 1; i < parts.size(); ++i) {
      elements.push_back(Relabeling::Parse(parts[i]));
    }
    if (head == "explicit") return Explicit(std::move(elements));
    if (head == "generators") return FromGenerators(std::move(elements));
    Fail("unknown group descriptor '", descriptor, "'");
  }
  if (text.starts_with("orbits")) {
    const size_t bracket = text.find('[');
    const auto head = SplitWhitespace(text.substr(0, bracket));
    if (head.size() != 3) Fail("malformed orbit descriptor '", descriptor, "'");
    OrbitDescriptor orbits;
    orbits.target = head[1];
    orbits.degree = static_cast<int>(ParseInt(head[2]));
    size_t pos = bracket;
    while (pos != std::string_view::npos && pos < text.size()) {
      const size_t close = text.find(']', pos);
      if (close == std::string_view::npos) {
        Fail("unterminated orbit in '", descriptor, "'");
      }
      std::vector<int> orbit;
      for (const auto& token : SplitWhitespace(text.substr(pos + 1, close - pos - 1))) {
        orbit.push_back(static_cast<int>(ParseInt(token)));
      }
      orbits.orbits.push_back(std::move(orbit));
      pos = text.find('[', close);
    }
    Realizer realizer = realizers(orbits.target, orbits.degree);
    return FromOrbits(std::move(orbits), std::move(realizer));
  }
  Fail("unknown group descriptor '", descriptor, "'");
}

// ---------------------------------------------------------------------------
// Mixtures

namespace {

bool AllHistoriesActionFree(const TabularPolicy& policy) {
  for (const auto& [history, unused] : policy.table()) {
    if (history.timestep() > 0) return false;
  }
  return true;
}

// orbit_of[a] lists the orbit containing a ({a} when fixed).
std::vector<std::vector<int>> ActionOrbits(const OrbitDescriptor& orbits,
                                           int num_actions) {
  if (orbits.degree != num_actions) {
    Fail("orbit group over ", orbits.degree, " actions used with ", num_actions);
  }
  std::vector<std::vector<int>> orbit_of(num_actions);
  for (int a = 0; a < num_actions; ++a) orbit_of[a] = {a};
  for (const auto& orbit : orbits.orbits) {
    for (int a : orbit) orbit_of[a] = orbit;
  }
  return orbit_of;
}

std::vector<double> OrbitAverage(const std::vector<double>& values,
                                 const std::vector<std::vector<int>>& orbit_of) {
  std::vector<double> out(values.size(), 0.0);
  for (size_t a = 0; a < values.size(); ++a) {
    double total = 0.0;
    for (int b : orbit_of[a]) total += values[b];
    out[a] = total / static_cast<double>(orbit_of[a].size());
  }
  return out;
}

}  // namespace

TabularPolicy MixturePolicy(const TabularPolicy& policy,
                            const SymmetryGroup& group) {
  const int player = policy.player();
  const int n = policy.num_actions();
  if (group.Size() == 1) return policy;
  TabularPolicy mixture(player, n);
  if (group.ActsOnActionsOnly() && AllHistoriesActionFree(policy)) {
    const auto orbit_of = ActionOrbits(group.orbits(), n);
    for (const auto& [history, probs] : policy.table()) {
      mixture.Set(history, OrbitAverage(probs, orbit_of));
    }
    return mixture;
  }
  if (group.kind() == SymmetryGroup::Kind::kGenerators ||
      (group.kind() == SymmetryGroup::Kind::kOrbits &&
       group.Size() > kMaxExplicitElements)) {
    Fail("mixture over '", group.Descriptor(),
         "' needs explicit enumeration or orbit averaging; neither applies");
  }
  const std::vector<Relabeling> elements = group.Enumerate(kMaxExplicitElements);
  std::vector<Relabeling> inverses;
  for (const auto& phi : elements) inverses.push_back(phi.Inverse());
  std::set<Aoh> domain;
  for (const auto& [history, unused] : policy.table()) {
    for (const auto& phi : elements) {
      domain.insert(ApplyToHistory(phi, history, player));
    }
  }
  const double weight = 1.0 / static_cast<double>(elements.size());
  for (const Aoh& history : domain) {
    std::vector<double> probs(n, 0.0);
    for (const auto& inv : inverses) {
      const auto& source = policy.Probs(ApplyToHistory(inv, history, player));
      for (int a = 0; a < n; ++a) {
        probs[a] += weight * source[inv.Action(player, a)];
      }
    }
    // Renormalize away rounding so the row passes the 1e-12 check.
    double total = 0.0;
    for (double p : probs) total += p;
    for (double& p : probs) p /= total;
    mixture.Set(history, std::move(probs));
  }
  return mixture;
}

std::map<Aoh, std::vector<double>> MixtureAdjoint(
    const std::map<Aoh, std::vector<double>>& grad_wrt_mixture,
    const std::vector<Aoh>& domain, int player, const SymmetryGroup& group) {
  std::map<Aoh, std::vector<double>> out;
  if (domain.empty()) return out;
  bool action_free = true;
  for (const Aoh& h : domain) action_free &= h.timestep() == 0;
  auto lookup = [&](const Aoh& h) -> const std::vector<double>* {
    auto it = grad_wrt_mixture.find(h);
    return it == grad_wrt_mixture.end() ? nullptr : &it->second;
  };
  if (group.ActsOnActionsOnly() && action_free) {
    for (const Aoh& h : domain) {
      const auto* g = lookup(h);
      if (g == nullptr) continue;
      out[h] = OrbitAverage(*g, ActionOrbits(group.orbits(),
                                             static_cast<int>(g->size())));
    }
    return out;
  }
  const std::vector<Relabeling> elements = group.Enumerate(kMaxExplicitElements);
  const double weight = 1.0 / static_cast<double>(elements.size());
  for (const Aoh& h : domain) {
    std::vector<double> row;
    for (const auto& phi : elements) {
      const auto* g = lookup(ApplyToHistory(phi, h, player));
      if (g == nullptr) continue;
      if (row.empty()) row.assign(g->size(), 0.0);
      for (size_t b = 0; b < g->size(); ++b) {
        row[b] += weight * (*g)[phi.Action(player, static_cast<int>(b))];
      }
    }
    if (!row.empty()) out[h] = std::move(row);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group axioms

GroupAxiomReport CheckGroupAxioms(const SymmetryGroup& group, int samples,
                                  uint64_t seed) {
  GroupAxiomReport report;
  auto fail = [&](std::string witness) {
    report.passed = false;
    report.witness = std::move(witness);
    return report;
  };
  if (group.kind() == SymmetryGroup::Kind::kExplicit) {
    const auto& elements = group.elements();
    if (elements.size() > kMaxExplicitElements) {
      Fail("explicit axiom check limited to ", kMaxExplicitElements,
           " elements");
    }
    std::set<std::string> members;
    for (const auto& e : elements) {
      if (!members.insert(e.ToString()).second) {
        return fail("duplicate element " + e.ToString());
      }
    }
    if (!members.count("identity")) return fail("identity missing");
    for (const auto& e : elements) {
      if (!members.count(e.Inverse().ToString())) {
        return fail("inverse of " + e.ToString() + " missing");
      }
      std::set<std::string> coset;
      for (const auto& f : elements) {
        const std::string product = (e * f).ToString();
        if (!members.count(product)) {
          return fail("product " + e.ToString() + " * " + f.ToString() +
                      " = " + product + " not in group");
        }
        coset.insert(product);
      }
      if (coset.size() != elements.size()) {
        return fail("left coset of " + e.ToString() + " is not the group");
      }
    }
    return report;
  }

  Rng rng(seed);
  auto draw = [&]() -> Relabeling {
    if (group.kind() == SymmetryGroup::Kind::kOrbits) return group.Sample(rng);
    const auto& gens = group.generators();
    Relabeling word;
    const int length = 1 + rng.UniformInt(4);
    for (int k = 0; k < length && !gens.empty(); ++k) {
      word = word * gens[rng.UniformInt(static_cast<int>(gens.size()))];
    }
    return word;
  };
  for (int k = 0; k < samples; ++k) {
    const Relabeling a = draw();
    const Relabeling b = draw();
    const Relabeling c = draw();
    if (!(a * a.Inverse()).IsIdentity()) {
      return fail("a * a^-1 != id for a = " + a.ToString());
    }
    if (!((a * b) * c == a * (b * c))) {
      return fail("associativity fails on " + a.ToString() + ", " +
                  b.ToString() + ", " + c.ToString());
    }
    if (group.kind() == SymmetryGroup::Kind::kOrbits) {
      const Permutation pa = SampleOrbitPermutation(group.orbits(), rng);
      const Permutation pb = SampleOrbitPermutation(group.orbits(), rng);
      if (!(group.Realize(pa * pb) == group.Realize(pa) * group.Realize(pb))) {
        return fail("realization is not a homomorphism at " + pa.ToString() +
                    ", " + pb.ToString());
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Brute-force discovery

namespace {

class StateMatcher {
 public:
  StateMatcher(const TabularDecPOMDP& game, const Relabeling& action_map,
               int64_t* budget)
      : game_(game), sigma_(action_map), budget_(budget) {
    const int n = game.num_states();
    for (int j = 0; j <= game.num_joint_actions(); ++j) {
      joint_map_.push_back(MapJoint(game, sigma_, j));
    }
    BuildOrder();
    signatures_.resize(n);
    for (int s = 0; s < n; ++s) signatures_[s] = Signature(s, false);
    mapped_signatures_.resize(n);
    for (int s = 0; s < n; ++s) mapped_signatures_[s] = Signature(s, true);
  }

  std::vector<std::vector<int>> Solve() {
    assignment_.assign(game_.num_states(), -1);
    used_.assign(game_.num_states(), false);
    Search(0);
    return solutions_;
  }

 private:
  // Row summaries that any matching psi must preserve. The mapped variant
  // indexes joint actions through sigma so that sig(s) == mapped(psi(s)).
  std::vector<std::vector<double>> Signature(int s, bool through_sigma) const {
    std::vector<std::vector<double>> sig;
    const int slots = game_.num_joint_actions();
    sig.push_back({game_.Initial(s)});
    for (int j = 0; j < slots; ++j) {
      const int jj = through_sigma ? joint_map_[j] : j;
      std::vector<double> row;
      for (int s2 = 0; s2 < game_.num_states(); ++s2) {
        const double p = game_.Transition(s, jj, s2);
        const double r = game_.Reward(s2, jj, s);
        if (p != 0.0 || r != 0.0) {
          row.push_back(p);
          row.push_back(r);
        }
      }
      std::sort(row.begin(), row.end());
      sig.push_back(std::move(row));
    }
    for (int i = 0; i < kNumPlayers; ++i) {
      for (int j = 0; j <= slots; ++j) {
        const int jj = through_sigma ? joint_map_[j] : j;
        std::vector<double> row;
        for (int o = 0; o < game_.num_observations(); ++o) {
          row.push_back(game_.Observation(o, s, jj, i));
        }
        std::sort(row.begin(), row.end());
        sig.push_back(std::move(row));
      }
    }
    return sig;
  }

  void BuildOrder() {
    const int n = game_.num_states();
    std::vector<bool> seen(n, false);
    std::deque<int> queue;
    auto visit_from = [&](int root) {
      if (seen[root]) return;
      seen[root] = true;
      queue.push_back(root);
      while (!queue.empty()) {
        const int s = queue.front();
        queue.pop_front();
        order_.push_back(s);
        for (int j = 0; j < game_.num_joint_actions(); ++j) {
          for (int s2 = 0; s2 < n; ++s2) {
            if (game_.Transition(s, j, s2) > 0.0 && !seen[s2]) {
              seen[s2] = true;
              queue.push_back(s2);
            }
          }
        }
      }
    };
    for (int s = 0; s < n; ++s) {
      if (game_.Initial(s) > 0.0) visit_from(s);
    }
    for (int s = 0; s < n; ++s) visit_from(s);
  }

  bool Consistent(int s, int t) const {
    if (signatures_[s] != mapped_signatures_[t]) return false;
    for (int j = 0; j < game_.num_joint_actions(); ++j) {
      const int jj = joint_map_[j];
      if (!Close(game_.Transition(s, j, s), game_.Transition(t, jj, t)) ||
          !Close(game_.Reward(s, j, s), game_.Reward(t, jj, t))) {
        return false;
      }
    }
    for (int u = 0; u < game_.num_states(); ++u) {
      const int pu = assignment_[u];
      if (pu < 0) continue;
      for (int j = 0; j < game_.num_joint_actions(); ++j) {
        const int jj = joint_map_[j];
        if (!Close(game_.Transition(s, j, u), game_.Transition(t, jj, pu)) ||
            !Close(game_.Transition(u, j, s), game_.Transition(pu, jj, t)) ||
            !Close(game_.Reward(u, j, s), game_.Reward(pu, jj, t)) ||
            !Close(game_.Reward(s, j, u), game_.Reward(t, jj, pu))) {
          return false;
        }
      }
    }
    return true;
  }

  void Search(size_t depth) {
    if (--*budget_ < 0) {
      Fail("symmetry search budget exhausted on '", game_.name(), "'");
    }
    if (depth == order_.size()) {
      solutions_.push_back(assignment_);
      return;
    }
    const int s = order_[depth];
    for (int t = 0; t < game_.num_states(); ++t) {
      if (used_[t] || !Consistent(s, t)) continue;
      assignment_[s] = t;
      used_[t] = true;
      Search(depth + 1);
      assignment_[s] = -1;
      used_[t] = false;
    }
  }

  const TabularDecPOMDP& game_;
  Relabeling sigma_;
  int64_t* budget_;
  std::vector<int> joint_map_;
  std::vector<int> order_;
  std::vector<std::vector<std::vector<double>>> signatures_;
  std::vector<std::vector<std::vector<double>>> mapped_signatures_;
  std::vector<int> assignment_;
  std::vector<bool> used_;
  std::vector<std::vector<int>> solutions_;
};

// All observation bijections chi compatible with (psi, sigma).
std::vector<std::vector<int>> MatchObservations(const TabularDecPOMDP& game,
                                                const Relabeling& partial) {
  const int m = game.num_observations();
  std::vector<std::vector<int>> candidates(m);
  for (int o = 0; o < m; ++o) {
    for (int o2 = 0; o2 < m; ++o2) {
      bool ok = true;
      for (int i = 0; i < kNumPlayers && ok; ++i) {
        for (int s = 0; s < game.num_states() && ok; ++s) {
          for (int slot = 0; slot <= game.num_joint_actions() && ok; ++slot) {
            ok = Close(game.Observation(o, s, slot, i),
                       game.Observation(o2, partial.State(s),
                                        MapJoint(game, partial, slot), i));
          }
        }
      }
      if (ok) candidates[o].push_back(o2);
    }
  }
  std::vector<std::vector<int>> solutions;
  std::vector<int> chi(m, -1);
  std::vector<bool> used(m, false);
  std::function<void(int)> assign = [&](int o) {
    if (solutions.size() > kMaxExplicitElements) {
      Fail("observation relabelings of '", game.name(), "' exceed ",
           kMaxExplicitElements);
    }
    if (o == m) {
      solutions.push_back(chi);
      return;
    }
    for (int o2 : candidates[o]) {
      if (used[o2]) continue;
      chi[o] = o2;
      used[o2] = true;
      assign(o + 1);
      used[o2] = false;
    }
    chi[o] = -1;
  };
  assign(0);
  return solutions;
}

}  // namespace

SymmetryGroup EnumerateSymmetries(const TabularDecPOMDP& game) {
  if (game.num_actions() > kMaxEnumeratedActions) {
    Fail("symmetry enumeration limited to ", kMaxEnumeratedActions,
         " actions; '", game.name(), "' has ", game.num_actions());
  }
  std::vector<Relabeling> found;
  int64_t budget = kMaxSearchNodes;
  std::vector<int> sigma(game.num_actions());
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    const Relabeling action_map = Relabeling::OfActions(Permutation(sigma));
    StateMatcher matcher(game, action_map, &budget);
    for (auto& psi : matcher.Solve()) {
      Relabeling partial = action_map;
      partial.states = Permutation(std::move(psi));
      for (auto& chi : MatchObservations(game, partial)) {
        Relabeling phi = partial;
        phi.observations = Permutation(std::move(chi));
        if (VerifyEquivalence(game, phi).passed) {
          found.push_back(phi.Normalized());
          if (found.size() > kMaxExplicitElements) {
            Fail("symmetry group of '", game.name(), "' exceeds ",
                 kMaxExplicitElements, " elements");
          }
        }
      }
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return SymmetryGroup::Explicit(std::move(found));
}

}  // namespace coordlab
