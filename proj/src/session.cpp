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

#include "clx/session.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

namespace clx {

namespace {

using nlohmann::json;

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  auto v = rng();
  for (int i = 0; i < 16; ++i, v >>= 4) id += kHex[v & 0xf];
  return id;
}

std::string dump(const json& j) {
  return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

[[noreturn]] void no_synthesis(const std::string& id) {
  throw ServiceError(409, "no_target", "session " + id + " has no target yet");
}

std::string media_type(const std::string& content_type) {
  std::string t = content_type.substr(0, content_type.find(';'));
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
          t.end());
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  return t;
}

std::pair<std::vector<std::string>, std::string> rows_from_csv(
    const std::string& text, const std::optional<std::string>& column) {
  CsvTable table = read_csv(text);
  std::string name;
  if (column) {
    name = *column;
  } else if (table.header.size() == 1) {
    name = table.header.front();
  } else {
    throw ServiceError(400, "missing_column", "CSV upload needs a column name");
  }
  auto rows = column_values(table, name);
  return {std::move(rows), name};
}

json counts_json(std::span<const AppliedRow> applied) {
  std::map<std::string, std::size_t> counts{
      {"Transformed", 0}, {"Unmatched", 0}, {"AlreadyConforming", 0}};
  for (const auto& a : applied) ++counts[std::string(to_string(a.status))];
  return counts;
}

}  // namespace

SynthesisResult replay_history(const SynthesisResult& initial,
                               std::span<const RepairAction> history) {
  SynthesisResult r = initial;
  for (const auto& a : history) r = repair(r, a.source, a.index);
  return r;
}

json post_transform_clusters(std::span<const std::string> rows,
                             std::span<const AppliedRow> applied) {
  std::vector<std::string> outputs;
  std::vector<std::string> unmatched;
  for (std::size_t i = 0; i < applied.size(); ++i) {
    if (applied[i].status == RowStatus::Unmatched)
      unmatched.push_back(rows[i]);
    else
      outputs.push_back(applied[i].output);
  }
  auto leaves_json = [](const std::vector<std::string>& values) {
    const auto h = build_hierarchy(values);
    auto arr = json::array();
    for (std::size_t id : h.leaves()) arr.push_back(cluster_to_json(h.node(id).cluster, values));
    return arr;
  };
  return {{"clusters", leaves_json(outputs)}, {"unmatched", leaves_json(unmatched)}};
}

SessionService::SessionService(SessionConfig config) : config_(std::move(config)) {
  if (config_.state_dir) {
    std::filesystem::create_directories(*config_.state_dir);
    restore();
  }
}

std::shared_ptr<SessionService::Session> SessionService::find(const std::string& id) const {
  std::lock_guard lock(map_mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session " + id);
  return it->second;
}

std::shared_ptr<const SessionState> SessionService::snapshot(const std::string& id) const {
  return find(id)->load();
}

std::vector<std::string> SessionService::session_ids() const {
  std::lock_guard lock(map_mu_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

json SessionService::create(std::vector<std::string> rows, std::string column) {
  if (rows.empty()) throw ServiceError(400, "empty_payload", "no rows to ingest");
  if (rows.size() > config_.row_cap)
    throw ServiceError(413, "too_many_rows",
                       std::to_string(rows.size()) + " rows exceed the cap of " +
                           std::to_string(config_.row_cap));

  auto state = std::make_shared<SessionState>();
  state->id = new_session_id();
  state->column = std::move(column);
  auto shared_rows = std::make_shared<const std::vector<std::string>>(std::move(rows));
  state->hierarchy = std::make_shared<const PatternHierarchy>(build_hierarchy(*shared_rows));
  state->rows = std::move(shared_rows);

  auto session = std::make_shared<Session>();
  session->publish(state);
  persist(*state);
  {
    std::lock_guard lock(map_mu_);
    sessions_[state->id] = session;
  }

  auto clusters = json::array();
  for (std::size_t id : state->hierarchy->roots()) {
    const auto& node = state->hierarchy->node(id);
    json c = cluster_to_json(node.cluster, *state->rows);
    c["id"] = id;
    c["layer"] = node.layer;
    clusters.push_back(std::move(c));
  }
  return {{"id", state->id},
          {"column", state->column},
          {"rows", state->rows->size()},
          {"empty", state->hierarchy->empty_rows().size()},
          {"clusters", std::move(clusters)}};
}

json SessionService::create_from_payload(const std::string& body,
                                         const std::string& content_type,
                                         const std::optional<std::string>& column) {
  const std::string type = media_type(content_type);
  try {
    if (type.empty() || type == "text/plain")
      return create(read_lines(body), column.value_or(std::string(kDefaultColumn)));
    if (type == "text/csv") {
      auto [rows, name] = rows_from_csv(body, column);
      return create(std::move(rows), std::move(name));
    }
    if (type == "application/json") {
      const json j = json::parse(body);
      std::optional<std::string> col = column;
      if (j.contains("column") && j["column"].is_string()) col = j["column"].get<std::string>();
      const std::string format = j.value("format", std::string("text"));
      const json& data = j.at("data");
      if (data.is_array()) {
        auto rows = data.get<std::vector<std::string>>();
        return create(std::move(rows), col.value_or(std::string(kDefaultColumn)));
      }
      const auto text = data.get<std::string>();
      if (format == "csv") {
        auto [rows, name] = rows_from_csv(text, col);
        return create(std::move(rows), std::move(name));
      }
      if (format != "text")
        throw ServiceError(400, "bad_format", "format must be text or csv");
      return create(read_lines(text), col.value_or(std::string(kDefaultColumn)));
    }
  } catch (const DataError& e) {
    throw ServiceError(400, "bad_data", e.what());
  } catch (const json::exception& e) {
    throw ServiceError(400, "bad_json", e.what());
  }
  throw ServiceError(415, "unsupported_media_type", "cannot ingest " + content_type);
}

json SessionService::hierarchy(const std::string& id) const {
  const auto s = snapshot(id);
  json j = to_json(*s->hierarchy, *s->rows);
  j["id"] = s->id;
  j["column"] = s->column;
  return j;
}

json SessionService::label_cluster(const std::string& id, std::size_t cluster) {
  const auto s = snapshot(id);
  if (cluster >= s->hierarchy->nodes().size())
    throw ServiceError(404, "unknown_cluster", "no cluster " + std::to_string(cluster));
  return label(id, s->hierarchy->node(cluster).cluster.pattern);
}

json SessionService::label_pattern(const std::string& id, const std::string& pattern_text) {
  Pattern target;
  try {
    target = parse_pattern(pattern_text);
  } catch (const PatternSyntaxError& e) {
    throw ServiceError(400, "bad_pattern", e.what());
  }
  return label(id, target);
}

json SessionService::label(const std::string& id, const Pattern& target) {
  auto session = find(id);
  std::lock_guard lock(session->write_mu);
  auto next = std::make_shared<SessionState>(*session->load());
  auto syn = std::make_shared<Synthesis>();
  syn->initial = synthesize(*next->hierarchy, target, SynthesisOptions{config_.k});
  syn->current = syn->initial;
  syn->applied = apply_program(syn->current.program, *next->rows);
  next->target = target;
  next->synthesis = std::move(syn);
  next->history.clear();
  persist(*next);
  session->publish(next);
  return synthesis_summary(*next);
}

json SessionService::synthesis_summary(const SessionState& s) const {
  const auto& syn = *s.synthesis;
  json j = to_json(syn.current, s.column);
  j["id"] = s.id;
  j["program"] = to_json(syn.current.program);
  j["counts"] = counts_json(syn.applied);
  j["post_transform"] = post_transform_clusters(*s.rows, syn.applied);
  return j;
}

json SessionService::program(const std::string& id) const {
  const auto s = snapshot(id);
  if (!s->synthesis) no_synthesis(id);
  json j = to_json(s->synthesis->current, s->column);
  j["id"] = s->id;
  j["program"] = to_json(s->synthesis->current.program);
  return j;
}

json SessionService::preview(const std::string& id, std::optional<std::size_t> branch,
                             std::optional<std::size_t> limit) const {
  const auto s = snapshot(id);
  if (!s->synthesis) no_synthesis(id);
  const auto& syn = *s->synthesis;
  if (branch && *branch >= syn.current.program.branches.size())
    throw ServiceError(400, "unknown_branch", "no branch " + std::to_string(*branch));
  const std::size_t cap = limit.value_or(config_.preview_limit);

  // Up to `cap` rows for every (status, branch) group.
  std::map<std::pair<int, std::size_t>, std::size_t> taken;
  auto rows = json::array();
  for (std::size_t i = 0; i < syn.applied.size(); ++i) {
    const auto& a = syn.applied[i];
    if (branch && a.branch != branch) continue;
    const std::pair<int, std::size_t> key{static_cast<int>(a.status), a.branch.value_or(0)};
    if (taken[key]++ >= cap) continue;
    json r = {{"row", i},
              {"before", (*s->rows)[i]},
              {"after", a.output},
              {"status", to_string(a.status)}};
    r["branch"] = a.branch ? json(*a.branch) : json(nullptr);
    rows.push_back(std::move(r));
  }
  return {{"id", s->id}, {"limit", cap}, {"rows", std::move(rows)}};
}

json SessionService::repair(const std::string& id, const std::string& source_text,
                            std::size_t index) {
  Pattern source;
  try {
    source = parse_pattern(source_text);
  } catch (const PatternSyntaxError& e) {
    throw ServiceError(400, "bad_pattern", e.what());
  }
  auto session = find(id);
  std::lock_guard lock(session->write_mu);
  const auto prev = session->load();
  if (!prev->synthesis) no_synthesis(id);

  auto syn = std::make_shared<Synthesis>();
  syn->initial = prev->synthesis->initial;
  try {
    syn->current = clx::repair(prev->synthesis->current, source, index);
  } catch (const RepairError& e) {
    throw ServiceError(400, "bad_repair", e.what());
  }
  syn->applied = apply_program(syn->current.program, *prev->rows);

  auto delta = json::array();
  for (std::size_t i = 0; i < syn->applied.size() && delta.size() < config_.preview_limit; ++i) {
    const auto& before = prev->synthesis->applied[i];
    const auto& after = syn->applied[i];
    if (before.output == after.output && before.status == after.status) continue;
    delta.push_back({{"row", i},
                     {"before", (*prev->rows)[i]},
                     {"old", before.output},
                     {"new", after.output},
                     {"status", to_string(after.status)}});
  }

  auto next = std::make_shared<SessionState>(*prev);
  next->synthesis = std::move(syn);
  next->history.push_back(RepairAction{source, index});
  persist(*next);
  session->publish(next);
  json j = synthesis_summary(*next);
  j["delta"] = std::move(delta);
  return j;
}

ExportDocument SessionService::export_document(const std::string& id,
                                               const std::string& format) const {
  const auto s = snapshot(id);
  if (format == "transformed-data") {
    if (s->synthesis) return {transformed_csv(s->column, s->synthesis->applied), "text/csv"};
    const auto applied = apply_program(UniFiProgram{}, *s->rows);
    return {transformed_csv(s->column, applied), "text/csv"};
  }
  if (format == "script") {
    if (!s->synthesis) no_synthesis(id);
    std::string out;
    for (const auto& op : explain(s->synthesis->current, s->column)) out += op.to_string() + "\n";
    return {std::move(out), "text/plain"};
  }
  if (format == "program-json") {
    if (!s->synthesis) no_synthesis(id);
    return {dump(to_json(s->synthesis->current.program)) + "\n", "application/json"};
  }
  throw ServiceError(400, "unknown_format",
                     "format must be script, transformed-data or program-json");
}

void SessionService::persist(const SessionState& s) const {
  if (!config_.state_dir) return;
  json history = json::array();
  for (const auto& a : s.history)
    history.push_back({{"source", render_pattern(a.source)}, {"index", a.index}});
  json doc = {{"id", s.id},
              {"column", s.column},
              {"rows", *s.rows},
              {"k", config_.k},
              {"target", s.target ? json(render_pattern(*s.target)) : json(nullptr)},
              {"history", std::move(history)}};
  const auto path = *config_.state_dir / (s.id + ".json");
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ServiceError(500, "persist_failed", "cannot write " + tmp);
    out << dump(doc);
  }
  std::filesystem::rename(tmp, path);
}

void SessionService::restore() {
  for (const auto& entry : std::filesystem::directory_iterator(*config_.state_dir)) {
    if (entry.path().extension() != ".json") continue;
    try {
      const json doc = json::parse(read_file(entry.path().string()));
      auto state = std::make_shared<SessionState>();
      state->id = doc.at("id").get<std::string>();
      state->column = doc.at("column").get<std::string>();
      auto rows = std::make_shared<const std::vector<std::string>>(
          doc.at("rows").get<std::vector<std::string>>());
      state->hierarchy = std::make_shared<const PatternHierarchy>(build_hierarchy(*rows));
      state->rows = rows;
      if (doc.contains("target") && !doc["target"].is_null()) {
        const Pattern target = parse_pattern(doc["target"].get<std::string>());
        const std::size_t k = doc.value("k", config_.k);
        for (const auto& a : doc.at("history"))
          state->history.push_back(RepairAction{parse_pattern(a.at("source").get<std::string>()),
                                                a.at("index").get<std::size_t>()});
        auto syn = std::make_shared<Synthesis>();
        syn->initial = synthesize(*state->hierarchy, target, SynthesisOptions{k});
        syn->current = replay_history(syn->initial, state->history);
        syn->applied = apply_program(syn->current.program, *rows);
        state->target = target;
        state->synthesis = std::move(syn);
      }
      auto session = std::make_shared<Session>();
      session->publish(state);
      sessions_[state->id] = std::move(session);
    } catch (const std::exception& e) {
      std::cerr << "skipping session file " << entry.path() << ": " << e.what() << "\n";
    }
  }
}

}  // namespace clx
