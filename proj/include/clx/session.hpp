// Copyright 2026 The clx authors.
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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "clx/dataio.hpp"
#include "clx/profiler.hpp"
#include "clx/synthesizer.hpp"
#include "json.hpp"

namespace clx {

struct SessionConfig {
  std::size_t row_cap = 1'000'000;
  std::size_t preview_limit = 20;
  std::size_t k = 5;
  std::optional<std::filesystem::path> state_dir;
};

// Error with an HTTP-ish status and a short machine-readable code.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& detail)
      : std::runtime_error(detail), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }

 private:
  int status_;
  std::string code_;
};

struct RepairAction {
  Pattern source;
  std::size_t index = 0;
};

struct Synthesis {
  SynthesisResult initial;
  SynthesisResult current;
  std::vector<AppliedRow> applied;
};

// Immutable view of a session; every mutation publishes a new one.
struct SessionState {
  std::string id;
  std::string column;
  std::shared_ptr<const std::vector<std::string>> rows;
  std::shared_ptr<const PatternHierarchy> hierarchy;
  std::optional<Pattern> target;
  std::shared_ptr<const Synthesis> synthesis;
  std::vector<RepairAction> history;
};

struct ExportDocument {
  std::string body;
  std::string content_type;
};

class SessionService {
 public:
  explicit SessionService(SessionConfig config = {});

  const SessionConfig& config() const { return config_; }

  // Returns {id, column, rows, empty, clusters: [top layer]}.
  nlohmann::json create(std::vector<std::string> rows,
                        std::string column = std::string(kDefaultColumn));
  // Parses an upload body by content type (text/plain, text/csv,
  // application/json) and creates a session from it.
  nlohmann::json create_from_payload(const std::string& body, const std::string& content_type,
                                     const std::optional<std::string>& column);

  nlohmann::json hierarchy(const std::string& id) const;
  nlohmann::json label_cluster(const std::string& id, std::size_t cluster);
  nlohmann::json label_pattern(const std::string& id, const std::string& pattern_text);
  nlohmann::json program(const std::string& id) const;
  nlohmann::json preview(const std::string& id, std::optional<std::size_t> branch,
                         std::optional<std::size_t> limit) const;
  nlohmann::json repair(const std::string& id, const std::string& source_text,
                        std::size_t index);
  ExportDocument export_document(const std::string& id, const std::string& format) const;

  std::shared_ptr<const SessionState> snapshot(const std::string& id) const;
  std::vector<std::string> session_ids() const;

 private:
  struct Session {
    std::mutex write_mu;
    mutable std::mutex snap_mu;
    std::shared_ptr<const SessionState> state;

    std::shared_ptr<const SessionState> load() const {
      std::lock_guard lock(snap_mu);
      return state;
    }
    void publish(std::shared_ptr<const SessionState> s) {
      std::lock_guard lock(snap_mu);
      state = std::move(s);
    }
  };

  std::shared_ptr<Session> find(const std::string& id) const;
  nlohmann::json label(const std::string& id, const Pattern& target);
  nlohmann::json synthesis_summary(const SessionState& s) const;
  void persist(const SessionState& s) const;
  void restore();

  SessionConfig config_;
  mutable std::mutex map_mu_;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions_;
};

// Re-applies repairs, in order, to a freshly synthesized result.
SynthesisResult replay_history(const SynthesisResult& initial,
                               std::span<const RepairAction> history);

// Leaf clusters of the transformed outputs for rows that now conform or
// were transformed; unmatched rows are reported under their original
// leaf pattern.
nlohmann::json post_transform_clusters(std::span<const std::string> rows,
                                       std::span<const AppliedRow> applied);

}  // namespace clx
