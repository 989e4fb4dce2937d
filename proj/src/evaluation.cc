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

#include "coordlab/evaluation.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "coordlab/error.h"
#include "coordlab/hanabi_play.h"
#include "coordlab/parallel.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

double Mean(std::span<const double> xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / static_cast<double>(xs.size());
}

void CheckName(const std::string& name) {
  if (name.empty() || name.find_first_of("\t\n,") != std::string::npos) {
    Fail("agent name '", name, "' is empty or holds a tab, comma or newline");
  }
}

// Header lines "# key value" until the first non-comment line.
std::map<std::string, std::string> ReadHeader(const std::vector<std::string>& lines,
                                              size_t& next) {
  std::map<std::string, std::string> header;
  for (; next < lines.size() && !lines[next].empty() && lines[next][0] == '#';
       ++next) {
    const std::string body(Trim(std::string_view(lines[next]).substr(1)));
    const size_t space = body.find(' ');
    header[body.substr(0, space)] =
        space == std::string::npos ? "" : body.substr(space + 1);
  }
  return header;
}

const std::string& Need(const std::map<std::string, std::string>& header,
                        const std::string& key) {
  auto it = header.find(key);
  if (it == header.end()) Fail("file header lacks '", key, "'");
  return it->second;
}

std::vector<std::string> NonEmptyLines(std::string_view text) {
  std::vector<std::string> lines = Split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> SplitNames(const std::string& text) {
  return text.empty() ? std::vector<std::string>{} : Split(text, ',');
}

}  // namespace

double Sem(std::span<const double> samples) {
  const size_t n = samples.size();
  if (n < 2) return 0.0;
  const double mean = Mean(samples);
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(n - 1)) /
         std::sqrt(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Cross-play

CrossPlayMatrix CrossPlay(const EnvSpec& env,
                          const std::vector<const Agent*>& rows,
                          const std::vector<const Agent*>& cols,
                          const std::vector<std::string>& row_names,
                          const std::vector<std::string>& col_names,
                          const CrossPlayOptions& options) {
  if (rows.size() != row_names.size() || cols.size() != col_names.size()) {
    Fail("cross-play needs one name per agent");
  }
  if (rows.empty() || cols.empty()) Fail("cross-play needs agents on both axes");
  if (options.games < 1) Fail("cross-play needs at least one game per cell");
  const uint64_t hash = env.Hash();
  for (const auto* group : {&rows, &cols}) {
    for (const Agent* agent : *group) {
      if (agent->metadata().env_hash != hash) {
        Fail("agent trained on '", agent->metadata().env_config, "' (hash ",
             HexU64(agent->metadata().env_hash), ") cannot be evaluated on '",
             env.RulesString(), "' (hash ", HexU64(hash), ")");
      }
      if (agent->num_actions() != env.NumActions()) {
        Fail("agent action count does not match the environment");
      }
    }
  }
  for (const auto& n : row_names) CheckName(n);
  for (const auto& n : col_names) CheckName(n);

  CrossPlayMatrix m;
  m.rows = row_names;
  m.cols = col_names;
  m.env_config = env.RulesString();
  m.games = options.games;
  m.seed = options.seed;
  m.scheme = env.IsTabular() ? "return" : RewardSchemeName(options.scheme);
  m.both_orders = options.both_orders;
  m.greedy = options.greedy;
  const int R = static_cast<int>(rows.size());
  const int C = static_cast<int>(cols.size());
  m.mean.assign(R, std::vector<double>(C));
  m.sem.assign(R, std::vector<double>(C));

  std::optional<TabularDecPOMDP> tabular;
  if (env.IsTabular()) tabular = env.Tabular();
  const MiniHanabi hanabi(env.hanabi);

  // Score of one game with `first` in seat 0.
  auto play = [&](const Agent& first, const Agent& second, int cell, int g) {
    if (tabular) {
      const TabularPolicy p0 = SeatPolicy(first, 0, options.greedy);
      const TabularPolicy p1 = SeatPolicy(second, 1, options.greedy);
      return EpisodeReturn(Rollout(*tabular, p0, p1, DeriveSeed(options.seed, g)),
                           tabular->discount());
    }
    Rng rng = Rng::ForEpisode(DeriveSeed(options.seed, cell + 1), g);
    return static_cast<double>(
        PlayHanabi(hanabi, {&first, &second}, DeriveSeed(options.seed, g), rng,
                   options.greedy)
            .Score(options.scheme));
  };
  ParallelFor(R * C, [&](int cell) {
    const int i = cell / C;
    const int j = cell % C;
    std::vector<double> scores;
    scores.reserve(options.games);
    for (int g = 0; g < options.games; ++g) {
      double s = play(*rows[i], *cols[j], cell, g);
      if (options.both_orders) s = 0.5 * (s + play(*cols[j], *rows[i], cell, g));
      scores.push_back(s);
    }
    m.mean[i][j] = Mean(scores);
    m.sem[i][j] = Sem(scores);
  });
  return m;
}

std::string CrossPlayMatrix::ToTsv() const {
  std::ostringstream out;
  out << "# coordlab-crossplay 1\n"
      << "# env " << env_config << "\n"
      << "# games " << games << "\n"
      << "# seed " << seed << "\n"
      << "# scheme " << scheme << "\n"
      << "# seats " << (both_orders ? "both_orders" : "fixed") << "\n"
      << "# policy " << (greedy ? "greedy" : "stochastic") << "\n"
      << "# rows " << Join(rows, ",") << "\n"
      << "# cols " << Join(cols, ",") << "\n"
      << "row\tcol\tmean\tsem\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < cols.size(); ++j) {
      out << rows[i] << "\t" << cols[j] << "\t" << FormatDouble(mean[i][j])
          << "\t" << FormatDouble(sem[i][j]) << "\n";
    }
  }
  return out.str();
}

CrossPlayMatrix CrossPlayMatrix::ParseTsv(std::string_view text) {
  const std::vector<std::string> lines = NonEmptyLines(text);
  size_t next = 0;
  const auto header = ReadHeader(lines, next);
  if (Need(header, "coordlab-crossplay") != "1") {
    Fail("unsupported cross-play file version");
  }
  CrossPlayMatrix m;
  m.env_config = Need(header, "env");
  m.games = static_cast<int>(ParseInt(Need(header, "games")));
  m.seed = std::stoull(Need(header, "seed"));
  m.scheme = Need(header, "scheme");
  m.both_orders = Need(header, "seats") == "both_orders";
  m.greedy = Need(header, "policy") == "greedy";
  m.rows = SplitNames(Need(header, "rows"));
  m.cols = SplitNames(Need(header, "cols"));
  if (next >= lines.size() || lines[next] != "row\tcol\tmean\tsem") {
    Fail("cross-play file lacks its column header");
  }
  ++next;
  const size_t R = m.rows.size(), C = m.cols.size();
  if (lines.size() - next != R * C) {
    Fail("cross-play file holds ", lines.size() - next, " cells, expected ",
         R * C);
  }
  m.mean.assign(R, std::vector<double>(C));
  m.sem.assign(R, std::vector<double>(C));
  for (size_t i = 0; i < R; ++i) {
    for (size_t j = 0; j < C; ++j, ++next) {
      const auto f = Split(lines[next], '\t');
      if (f.size() != 4 || f[0] != m.rows[i] || f[1] != m.cols[j]) {
        Fail("cross-play file line ", next + 1, " is out of order or malformed");
      }
      m.mean[i][j] = ParseDouble(f[2]);
      m.sem[i][j] = ParseDouble(f[3]);
    }
  }
  return m;
}

std::string CrossPlayMatrix::ToGrid() const {
  std::ostringstream out;
  out << "row";
  for (const auto& c : cols) out << "\t" << c;
  out << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out << rows[i];
    for (size_t j = 0; j < cols.size(); ++j) out << "\t" << FormatDouble(mean[i][j]);
    out << "\n";
  }
  return out.str();
}

CrossPlaySummary Summarize(const CrossPlayMatrix& m) {
  const int n = static_cast<int>(m.rows.size());
  if (n == 0 || m.cols.size() != m.rows.size()) {
    Fail("summary needs a square cross-play matrix, got ", m.rows.size(), "x",
         m.cols.size());
  }
  CrossPlaySummary s;
  auto off_diagonal = [&](int skip) {
    std::vector<double> cells;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (i != j && i != skip && j != skip) cells.push_back(m.mean[i][j]);
      }
    }
    return cells;
  };
  std::vector<double> diagonal;
  for (int i = 0; i < n; ++i) diagonal.push_back(m.mean[i][i]);
  s.self_play = Mean(diagonal);
  s.self_play_sem = Sem(diagonal);
  const std::vector<double> cross = off_diagonal(-1);
  s.cross_play = Mean(cross);
  s.cross_play_sem = Sem(cross);
  s.cross_play_star = s.cross_play;
  s.cross_play_star_sem = s.cross_play_sem;
  if (n >= 3) {
    double worst_score = 0.0;
    for (int k = 0; k < n; ++k) {
      double total = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j != k) total += m.mean[k][j] + m.mean[j][k];
      }
      const double score = total / (2.0 * (n - 1));
      if (s.worst < 0 || score < worst_score) {
        s.worst = k;
        worst_score = score;
      }
    }
    s.worst_name = m.rows[s.worst];
    const std::vector<double> star = off_diagonal(s.worst);
    s.cross_play_star = Mean(star);
    s.cross_play_star_sem = Sem(star);
  }
  return s;
}

std::string CrossPlaySummary::ToString() const {
  std::ostringstream out;
  out << "cross_play\t" << FormatDouble(cross_play) << "\t"
      << FormatDouble(cross_play_sem) << "\n"
      << "cross_play_star\t" << FormatDouble(cross_play_star) << "\t"
      << FormatDouble(cross_play_star_sem) << "\n"
      << "self_play\t" << FormatDouble(self_play) << "\t"
      << FormatDouble(self_play_sem) << "\n"
      << "worst_model\t" << (worst < 0 ? "-" : worst_name) << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Conventions

ConventionMatrix ComputeConventions(const MiniHanabi& game, const Agent& agent,
                                    int episodes, uint64_t seed, bool greedy) {
  if (episodes < 1) Fail("conventions need at least one episode");
  const int n = game.NumActions();
  ConventionMatrix m;
  for (int a = 0; a < n; ++a) m.actions.push_back(game.ActionName(a));
  m.counts.assign(n, std::vector<int64_t>(n, 0));
  m.uniform_reference.assign(n, std::vector<double>(n, 0.0));
  m.episodes = episodes;
  for (int e = 0; e < episodes; ++e) {
    Rng rng = Rng::ForEpisode(seed, e);
    HanabiState state = game.NewGame(DeriveSeed(seed, e));
    int prev = kNoAction;
    while (!state.IsTerminal()) {
      const int p = state.current_player();
      const std::vector<bool> legal = state.LegalMask();
      const std::string key = EncodeCompact(state.Observe(p));
      const int a = agent.Act(key, legal, rng, greedy);
      if (prev != kNoAction) {
        ++m.counts[prev][a];
        int count = 0;
        for (bool b : legal) count += b;
        for (int b = 0; b < n; ++b) {
          if (legal[b]) m.uniform_reference[prev][b] += 1.0 / count;
        }
      }
      state.Apply(a);
      prev = a;
    }
  }
  m.probs.assign(n, std::vector<double>(n, 0.0));
  for (int prev = 0; prev < n; ++prev) {
    int64_t total = 0;
    for (int64_t c : m.counts[prev]) total += c;
    if (total == 0) continue;
    for (int b = 0; b < n; ++b) {
      m.probs[prev][b] = static_cast<double>(m.counts[prev][b]) / total;
      m.uniform_reference[prev][b] /= static_cast<double>(total);
    }
  }
  return m;
}

std::string ConventionMatrix::ToTsv() const {
  std::ostringstream out;
  out << "# coordlab-conventions 1\n"
      << "# episodes " << episodes << "\n"
      << "# actions " << Join(actions, ",") << "\n"
      << "prev\tnext\tcount\tprob\tuniform_reference\n";
  for (size_t i = 0; i < actions.size(); ++i) {
    for (size_t j = 0; j < actions.size(); ++j) {
      out << actions[i] << "\t" << actions[j] << "\t" << counts[i][j] << "\t"
          << FormatDouble(probs[i][j]) << "\t"
          << FormatDouble(uniform_reference[i][j]) << "\n";
    }
  }
  return out.str();
}

ConventionMatrix ConventionMatrix::ParseTsv(std::string_view text) {
  const std::vector<std::string> lines = NonEmptyLines(text);
  size_t next = 0;
  const auto header = ReadHeader(lines, next);
  if (Need(header, "coordlab-conventions") != "1") {
    Fail("unsupported convention file version");
  }
  ConventionMatrix m;
  m.episodes = static_cast<int>(ParseInt(Need(header, "episodes")));
  m.actions = SplitNames(Need(header, "actions"));
  const size_t n = m.actions.size();
  if (next >= lines.size() || lines[next] != "prev\tnext\tcount\tprob\tuniform_reference") {
    Fail("convention file lacks its column header");
  }
  ++next;
  if (lines.size() - next != n * n) Fail("convention file has the wrong size");
  m.counts.assign(n, std::vector<int64_t>(n));
  m.probs.assign(n, std::vector<double>(n));
  m.uniform_reference.assign(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j, ++next) {
      const auto f = Split(lines[next], '\t');
      if (f.size() != 5 || f[0] != m.actions[i] || f[1] != m.actions[j]) {
        Fail("convention file line ", next + 1, " is out of order or malformed");
      }
      m.counts[i][j] = ParseInt(f[2]);
      m.probs[i][j] = ParseDouble(f[3]);
      m.uniform_reference[i][j] = ParseDouble(f[4]);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Paired comparisons

double ExactBinomialTest(int wins, int losses) {
  using boost::multiprecision::cpp_int;
  using boost::multiprecision::cpp_rational;
  if (wins < 0 || losses < 0) Fail("win and loss counts must be nonnegative");
  const int n = wins + losses;
  if (n < 1) Fail("binomial test needs at least one non-tied comparison");
  cpp_int tail = 0;
  cpp_int choose = 1;  // C(n, k), built up from k = 0
  for (int k = 0; k <= n; ++k) {
    if (k >= wins) tail += choose;
    choose = choose * (n - k) / (k + 1);
  }
  const cpp_rational p(tail, cpp_int(1) << n);
  return p.convert_to<double>();
}

PairedComparison ComparePairs(std::vector<PairedDeck> decks) {
  if (decks.empty()) Fail("paired comparison needs at least one deck");
  PairedComparison c;
  for (const auto& d : decks) {
    if (d.score_a > d.score_b) {
      ++c.wins;
    } else if (d.score_a < d.score_b) {
      ++c.losses;
    } else {
      ++c.ties;
    }
  }
  c.decks = std::move(decks);
  c.ties_only = c.wins + c.losses == 0;
  c.p_value = c.ties_only ? 1.0 : ExactBinomialTest(c.wins, c.losses);
  return c;
}

PairedComparison PairedSeedComparison(const MiniHanabi& game, const Agent& a,
                                      const Agent& b, const Agent& partner,
                                      const std::vector<uint64_t>& decks,
                                      RewardScheme scheme) {
  if (decks.empty()) Fail("paired comparison needs at least one deck");
  std::vector<PairedDeck> results;
  for (size_t k = 0; k < decks.size(); ++k) {
    auto score = [&](const Agent& agent) {
      Rng rng = Rng::ForEpisode(decks[k], 0);
      std::array<const Agent*, kNumPlayers> seats{&agent, &partner};
      if (k % 2 == 1) std::swap(seats[0], seats[1]);
      return PlayHanabi(game, seats, decks[k], rng).Score(scheme);
    };
    results.push_back({decks[k], score(a), score(b)});
  }
  return ComparePairs(std::move(results));
}

std::string PairedComparison::ToTsv() const {
  std::ostringstream out;
  out << "# coordlab-paired 1\n"
      << "# wins " << wins << "\n"
      << "# ties " << ties << "\n"
      << "# losses " << losses << "\n"
      << "# p_value " << FormatDouble(p_value) << "\n"
      << "# ties_only " << (ties_only ? "true" : "false") << "\n"
      << "deck_seed\tscore_a\tscore_b\n";
  for (const auto& d : decks) {
    out << d.deck_seed << "\t" << d.score_a << "\t" << d.score_b << "\n";
  }
  return out.str();
}

PairedComparison PairedComparison::ParseTsv(std::string_view text) {
  const std::vector<std::string> lines = NonEmptyLines(text);
  size_t next = 0;
  const auto header = ReadHeader(lines, next);
  if (Need(header, "coordlab-paired") != "1") Fail("unsupported paired file version");
  if (next >= lines.size() || lines[next] != "deck_seed\tscore_a\tscore_b") {
    Fail("paired file lacks its column header");
  }
  std::vector<PairedDeck> decks;
  for (++next; next < lines.size(); ++next) {
    const auto f = Split(lines[next], '\t');
    if (f.size() != 3) Fail("paired file line ", next + 1, " is malformed");
    decks.push_back({std::stoull(f[0]), static_cast<int>(ParseInt(f[1])),
                     static_cast<int>(ParseInt(f[2]))});
  }
  PairedComparison c = ComparePairs(std::move(decks));
  if (c.wins != ParseInt(Need(header, "wins")) ||
      c.ties != ParseInt(Need(header, "ties")) ||
      c.losses != ParseInt(Need(header, "losses"))) {
    Fail("paired file counts disagree with its rows");
  }
  return c;
}

}  // namespace coordlab
