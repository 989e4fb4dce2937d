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

#include "coordlab/play_service.h"

#include <optional>
#include <sstream>

#include "httplib.h"

#include "coordlab/env_spec.h"
#include "coordlab/error.h"
#include "coordlab/hanabi_play.h"

namespace coordlab {
namespace {

using nlohmann::json;

constexpr uint64_t kAgentStream = 0x6167656e74;

[[noreturn]] void Reject(const std::string& code, int status,
                         const std::string& message) {
  throw ServiceError(code, status, message);
}

json CardJson(const Card& card) {
  return {{"color", card.color}, {"rank", card.rank}};
}

json KnowledgeJson(const CardKnowledge& k) {
  return {{"color", k.color < 0 ? json(nullptr) : json(k.color)},
          {"rank", k.rank < 0 ? json(nullptr) : json(k.rank)}};
}

template <typename T, typename F>
json ListJson(const std::vector<T>& items, F&& convert) {
  json out = json::array();
  for (const T& item : items) out.push_back(convert(item));
  return out;
}

uint64_t RequireSeed(const json& request) {
  if (!request.contains("deck_seed")) return 0;
  const json& v = request["deck_seed"];
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<int64_t>() < 0)) {
    Reject("bad_request", 400, "deck_seed must be a nonnegative integer");
  }
  return v.get<uint64_t>();
}

int RequireSeat(const json& request) {
  if (!request.contains("human_seat")) return 0;
  const json& v = request["human_seat"];
  if (!v.is_number_integer() || v.get<int64_t>() < 0 ||
      v.get<int64_t>() >= kNumPlayers) {
    Reject("invalid_seat", 400, "human_seat must be 0 or 1");
  }
  return v.get<int>();
}

std::string RequireString(const json& request, const char* key) {
  if (!request.contains(key) || !request[key].is_string()) {
    Reject("bad_request", 400, std::string("missing string field '") + key + "'");
  }
  return request[key].get<std::string>();
}

}  // namespace

std::string StateDigest(const HanabiState& state) {
  std::ostringstream out;
  auto cards = [&](const std::vector<Card>& cs) {
    for (const Card& c : cs) out << c.ToString() << " ";
    out << "|";
  };
  cards(state.deck());
  for (int p = 0; p < kNumPlayers; ++p) {
    cards(state.hand(p));
    for (const auto& k : state.knowledge(p)) out << k.color << ":" << k.rank << " ";
    out << "|";
  }
  for (int f : state.fireworks()) out << f << " ";
  out << "|";
  cards(state.discards());
  cards(state.played());
  out << state.hint_tokens() << " " << state.life_tokens() << " "
      << state.current_player() << " " << state.turn() << " "
      << state.IsTerminal();
  for (int p = 0; p < kNumPlayers; ++p) out << "|" << state.Observe(p).ToString();
  return out.str();
}

struct SessionManager::Session {
  std::string id;
  std::string agent_id;
  const Agent* agent = nullptr;
  EnvSpec env;
  std::unique_ptr<MiniHanabi> game;
  std::optional<HanabiState> state;
  uint64_t deck_seed = 0;
  int human_seat = 0;
  bool greedy = true;
  std::string pair_id;
  json history = json::array();
  Rng rng{0};
  mutable std::mutex mu;

  bool finished() const { return state->IsTerminal(); }

  void Apply(int player, int action) {
    json entry{{"player", player},
               {"action", action},
               {"name", game->ActionName(action)}};
    const Move move = game->ActionToMove(action);
    std::optional<Card> card;
    if (move.type == MoveType::kPlay || move.type == MoveType::kDiscard) {
      card = state->hand(player)[move.value];
    }
    entry["reward"] = state->Apply(action);
    entry["card"] = card ? CardJson(*card) : json(nullptr);
    history.push_back(std::move(entry));
  }

  void AgentMoves() {
    while (!finished() && state->current_player() != human_seat) {
      const int p = state->current_player();
      const std::string key = EncodeCompact(state->Observe(p));
      Apply(p, agent->Act(key, state->LegalMask(), rng, greedy));
    }
  }

  // The human seat's view; own cards appear only as hinted facts.
  json View() const {
    const HanabiObservation obs = state->Observe(human_seat);
    json view{{"id", id},
              {"env", env.RulesString()},
              {"agent", agent_id},
              {"deck_seed", deck_seed},
              {"human_seat", human_seat},
              {"status", finished() ? "finished" : "active"},
              {"current_player", obs.current_player},
              {"your_turn", !finished() && obs.current_player == human_seat},
              {"turn", state->turn()},
              {"own_hand", ListJson(obs.own_knowledge, KnowledgeJson)},
              {"partner_hand", ListJson(obs.partner_hand, CardJson)},
              {"partner_knowledge", ListJson(obs.partner_knowledge, KnowledgeJson)},
              {"fireworks", obs.fireworks},
              {"hint_tokens", obs.hint_tokens},
              {"max_hint_tokens", env.hanabi.hint_tokens},
              {"life_tokens", obs.life_tokens},
              {"deck_size", obs.deck_size},
              {"discards", ListJson(obs.discards, CardJson)},
              {"history", history},
              {"score", state->FireworksTotal()},
              {"paired", pair_id.empty() ? json(nullptr) : json(pair_id)}};
    json names = json::array();
    for (int a = 0; a < game->NumActions(); ++a) names.push_back(game->ActionName(a));
    view["action_names"] = names;
    json legal = json::array();
    if (view["your_turn"].get<bool>()) {
      for (int a : state->LegalActions()) legal.push_back(a);
    }
    view["legal_actions"] = legal;
    if (finished()) {
      view["score_keep"] = Score(*state, RewardScheme::kKeepOnBomb);
      view["score_zero"] = Score(*state, RewardScheme::kZeroOnBomb);
      view["score"] = view["score_keep"];
      view["bombed"] = state->BombedOut();
    }
    return view;
  }
};

struct SessionManager::Pair {
  std::string id;
  std::string agent_a;
  std::string agent_b;
  uint64_t deck_seed = 0;
  // Session ids in presentation order, and which agent each one faces.
  std::array<std::string, 2> sessions;
  std::array<std::string, 2> order;
};

SessionManager::SessionManager(std::map<std::string, Agent> agents)
    : agents_(std::move(agents)) {
  for (const auto& [id, agent] : agents_) {
    const EnvSpec env = EnvSpec::ParseRules(agent.metadata().env_config);
    if (env.kind != EnvKind::kMiniHanabi) {
      Fail("agent '", id, "' was trained on '", agent.metadata().env_config,
           "', not mini-Hanabi");
    }
    if (agent.metadata().encoder != kHanabiEncoder) {
      Fail("agent '", id, "' uses encoder '", agent.metadata().encoder, "'");
    }
  }
}

SessionManager::~SessionManager() = default;

json SessionManager::ListAgents() const {
  json out = json::array();
  for (const auto& [id, agent] : agents_) {
    out.push_back({{"id", id},
                   {"env", agent.metadata().env_config},
                   {"learner", agent.metadata().learner},
                   {"symmetry", agent.metadata().symmetry},
                   {"seed", agent.metadata().seed}});
  }
  return {{"agents", out}};
}

std::shared_ptr<SessionManager::Session> SessionManager::NewSession(
    const json& request, const std::string& agent_id) {
  auto it = agents_.find(agent_id);
  if (it == agents_.end()) Reject("unknown_agent", 404, "no agent '" + agent_id + "'");
  auto s = std::make_shared<Session>();
  s->agent_id = agent_id;
  s->agent = &it->second;
  s->env = EnvSpec::ParseRules(s->agent->metadata().env_config);
  if (request.contains("env")) {
    if (!request["env"].is_string()) Reject("bad_request", 400, "env must be a string");
    EnvSpec wanted;
    try {
      wanted = EnvSpec::ParseRules(request["env"].get<std::string>());
    } catch (const CoordError& e) {
      Reject("bad_request", 400, e.what());
    }
    if (wanted.Hash() != s->agent->metadata().env_hash) {
      Reject("env_mismatch", 409,
             "agent '" + agent_id + "' was trained on '" +
                 s->agent->metadata().env_config + "', not '" +
                 wanted.RulesString() + "'");
    }
  }
  s->env.hanabi.reward_scheme = RewardScheme::kKeepOnBomb;
  s->deck_seed = RequireSeed(request);
  s->human_seat = RequireSeat(request);
  if (request.contains("greedy")) {
    if (!request["greedy"].is_boolean()) Reject("bad_request", 400, "greedy must be a boolean");
    s->greedy = request["greedy"].get<bool>();
  }
  s->game = std::make_unique<MiniHanabi>(s->env.hanabi);
  s->state.emplace(s->game->NewGame(s->deck_seed));
  s->rng = Rng(DeriveSeed(s->deck_seed, kAgentStream));
  s->AgentMoves();
  std::lock_guard<std::mutex> lock(mu_);
  s->id = "g" + std::to_string(next_session_++);
  sessions_[s->id] = s;
  return s;
}

json SessionManager::CreateSession(const json& request) {
  if (!request.is_object()) Reject("bad_request", 400, "expected a JSON object");
  auto s = NewSession(request, RequireString(request, "agent"));
  std::lock_guard<std::mutex> lock(s->mu);
  return s->View();
}

std::shared_ptr<SessionManager::Session> SessionManager::Find(
    const std::string& id) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) Reject("unknown_session", 404, "no session '" + id + "'");
  return it->second;
}

json SessionManager::GetSession(const std::string& id) const {
  auto s = Find(id);
  std::lock_guard<std::mutex> lock(s->mu);
  return s->View();
}

std::string SessionManager::SessionDigest(const std::string& id) const {
  auto s = Find(id);
  std::lock_guard<std::mutex> lock(s->mu);
  return StateDigest(*s->state);
}

json SessionManager::SubmitAction(const std::string& id, const json& request) {
  auto s = Find(id);
  if (!request.is_object()) Reject("bad_request", 400, "expected a JSON object");
  std::lock_guard<std::mutex> lock(s->mu);
  if (s->finished()) Reject("finished", 409, "session '" + id + "' has finished");
  if (request.contains("seat")) {
    if (!request["seat"].is_number_integer()) Reject("bad_request", 400, "seat must be an integer");
    if (request["seat"].get<int64_t>() != s->human_seat) {
      Reject("not_your_turn", 409, "only the human seat acts in this session");
    }
  }
  if (s->state->current_player() != s->human_seat) {
    Reject("not_your_turn", 409, "it is the agent's turn");
  }
  int action = -1;
  if (request.contains("action")) {
    if (!request["action"].is_number_integer()) {
      Reject("bad_request", 400, "action must be an integer");
    }
    const int64_t a = request["action"].get<int64_t>();
    if (a < 0 || a >= s->game->NumActions()) {
      Reject("illegal_action", 422, "action " + std::to_string(a) + " is out of range");
    }
    action = static_cast<int>(a);
  } else if (request.contains("type")) {
    static const std::map<std::string, MoveType> kTypes{
        {"hint_color", MoveType::kHintColor},
        {"hint_rank", MoveType::kHintRank},
        {"discard", MoveType::kDiscard},
        {"play", MoveType::kPlay}};
    const std::string type = RequireString(request, "type");
    auto t = kTypes.find(type);
    if (t == kTypes.end()) Reject("bad_request", 400, "unknown move type '" + type + "'");
    if (!request.contains("value") || !request["value"].is_number_integer()) {
      Reject("bad_request", 400, "move needs an integer 'value'");
    }
    const int64_t value = request["value"].get<int64_t>();
    const MiniHanabiConfig& c = s->env.hanabi;
    const int64_t limit = t->second == MoveType::kHintColor ? c.colors
                          : t->second == MoveType::kHintRank ? c.ranks
                                                             : c.hand_size;
    if (value < 0 || value >= limit) {
      Reject("illegal_action", 422, type + " " + std::to_string(value) + " is out of range");
    }
    action = s->game->MoveToAction({t->second, static_cast<int>(value)});
  } else {
    Reject("bad_request", 400, "request needs 'action' or 'type' and 'value'");
  }
  const std::string reason = s->state->IllegalReason(action);
  if (!reason.empty()) {
    Reject("illegal_action", 422, s->game->ActionName(action) + ": " + reason);
  }
  s->Apply(s->human_seat, action);
  s->AgentMoves();
  return s->View();
}

json SessionManager::CreatePaired(const json& request) {
  if (!request.is_object()) Reject("bad_request", 400, "expected a JSON object");
  auto pair = std::make_shared<Pair>();
  pair->agent_a = RequireString(request, "agent_a");
  pair->agent_b = RequireString(request, "agent_b");
  pair->deck_seed = RequireSeed(request);
  // Even deck seeds present agent A first, odd ones agent B.
  const bool a_first = pair->deck_seed % 2 == 0;
  pair->order = a_first ? std::array<std::string, 2>{"a", "b"}
                        : std::array<std::string, 2>{"b", "a"};
  std::array<std::shared_ptr<Session>, 2> created;
  for (int k = 0; k < 2; ++k) {
    const std::string& agent = pair->order[k] == "a" ? pair->agent_a : pair->agent_b;
    created[k] = NewSession(request, agent);
    pair->sessions[k] = created[k]->id;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    pair->id = "p" + std::to_string(next_pair_++);
    pairs_[pair->id] = pair;
  }
  json out{{"id", pair->id},
           {"deck_seed", pair->deck_seed},
           {"agent_a", pair->agent_a},
           {"agent_b", pair->agent_b},
           {"order", pair->order}};
  json views = json::array();
  for (auto& s : created) {
    std::lock_guard<std::mutex> lock(s->mu);
    s->pair_id = pair->id;
    views.push_back(s->View());
  }
  out["sessions"] = views;
  return out;
}

json SessionManager::GetPaired(const std::string& id) const {
  std::shared_ptr<Pair> pair;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = pairs_.find(id);
    if (it == pairs_.end()) Reject("unknown_session", 404, "no pair '" + id + "'");
    pair = it->second;
  }
  json out{{"id", pair->id},
           {"deck_seed", pair->deck_seed},
           {"agent_a", pair->agent_a},
           {"agent_b", pair->agent_b},
           {"order", pair->order},
           {"sessions", pair->sessions}};
  bool complete = true;
  json score_a = nullptr, score_b = nullptr;
  for (int k = 0; k < 2; ++k) {
    const json view = GetSession(pair->sessions[k]);
    if (view["status"] != "finished") {
      complete = false;
      continue;
    }
    (pair->order[k] == "a" ? score_a : score_b) = view["score_keep"];
  }
  out["complete"] = complete;
  out["score_a"] = score_a;
  out["score_b"] = score_b;
  return out;
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

void Send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <typename F>
void Handle(httplib::Response& res, F&& body) {
  try {
    Send(res, 200, body());
  } catch (const ServiceError& e) {
    Send(res, e.status(), {{"error", {{"code", e.code()}, {"message", e.what()}}}});
  } catch (const std::exception& e) {
    Send(res, 400, {{"error", {{"code", "bad_request"}, {"message", e.what()}}}});
  }
}

json ParseBody(const httplib::Request& req) {
  try {
    return req.body.empty() ? json::object() : json::parse(req.body);
  } catch (const json::exception& e) {
    Reject("bad_request", 400, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

PlayServer::PlayServer(SessionManager* manager)
    : manager_(manager), server_(std::make_unique<httplib::Server>()) {
  httplib::Server& s = *server_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"}});
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });
  s.Get("/agents", [this](const httplib::Request&, httplib::Response& res) {
    Handle(res, [&] { return manager_->ListAgents(); });
  });
  s.Post("/games", [this](const httplib::Request& req, httplib::Response& res) {
    Handle(res, [&] { return manager_->CreateSession(ParseBody(req)); });
  });
  s.Get(R"(/games/([^/]+))", [this](const httplib::Request& req,
                                    httplib::Response& res) {
    Handle(res, [&] { return manager_->GetSession(req.matches[1]); });
  });
  s.Post(R"(/games/([^/]+)/actions)", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    Handle(res, [&] { return manager_->SubmitAction(req.matches[1], ParseBody(req)); });
  });
  s.Post("/paired", [this](const httplib::Request& req, httplib::Response& res) {
    Handle(res, [&] { return manager_->CreatePaired(ParseBody(req)); });
  });
  s.Get(R"(/paired/([^/]+))", [this](const httplib::Request& req,
                                     httplib::Response& res) {
    Handle(res, [&] { return manager_->GetPaired(req.matches[1]); });
  });
}

PlayServer::~PlayServer() { Stop(); }

int PlayServer::Bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool PlayServer::Serve() { return server_->listen_after_bind(); }

void PlayServer::Stop() { server_->stop(); }

}  // namespace coordlab
