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

// Live mini-Hanabi games between one human seat and one agent seat, served
// as JSON over HTTP:
//
//   POST /games                 {"agent", "deck_seed", "human_seat", "env"?}
//   GET  /games/{id}
//   POST /games/{id}/actions    {"action"} or {"type", "value"}, "seat"?
//   POST /paired                {"agent_a", "agent_b", "deck_seed", ...}
//   GET  /paired/{id}
//   GET  /agents
//
// Errors are {"error": {"code", "message"}} with codes illegal_action,
// not_your_turn, finished, unknown_session, unknown_agent, invalid_seat,
// env_mismatch and bad_request.

#ifndef COORDLAB_PLAY_SERVICE_H_
#define COORDLAB_PLAY_SERVICE_H_

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "coordlab/agent.h"
#include "coordlab/mini_hanabi.h"

namespace httplib {
class Server;
}

namespace coordlab {

class ServiceError : public std::runtime_error {
 public:
  ServiceError(std::string code, int status, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)), status_(status) {}
  const std::string& code() const { return code_; }
  int status() const { return status_; }

 private:
  std::string code_;
  int status_;
};

// Every field of a state, hidden cards included; equal digests mean equal
// states.
std::string StateDigest(const HanabiState& state);

class SessionManager {
 public:
  explicit SessionManager(std::map<std::string, Agent> agents);
  ~SessionManager();

  nlohmann::json ListAgents() const;
  nlohmann::json CreateSession(const nlohmann::json& request);
  nlohmann::json GetSession(const std::string& id) const;
  nlohmann::json SubmitAction(const std::string& id,
                              const nlohmann::json& request);
  nlohmann::json CreatePaired(const nlohmann::json& request);
  nlohmann::json GetPaired(const std::string& id) const;

  // Full hidden state, for replay checks.
  std::string SessionDigest(const std::string& id) const;

 private:
  struct Session;
  struct Pair;

  std::shared_ptr<Session> Find(const std::string& id) const;
  std::shared_ptr<Session> NewSession(const nlohmann::json& request,
                                      const std::string& agent_id);

  std::map<std::string, Agent> agents_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::map<std::string, std::shared_ptr<Pair>> pairs_;
  int next_session_ = 1;
  int next_pair_ = 1;
};

// Routes the HTTP interface onto a SessionManager.
class PlayServer {
 public:
  explicit PlayServer(SessionManager* manager);
  ~PlayServer();

  // Binds host:port (port 0 picks a free one) and returns the port, or -1.
  int Bind(const std::string& host, int port);
  // Serves until Stop(); call after Bind.
  bool Serve();
  void Stop();

 private:
  SessionManager* manager_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace coordlab

#endif  // COORDLAB_PLAY_SERVICE_H_
