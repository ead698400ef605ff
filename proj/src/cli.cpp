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

#include "clx/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "clx/dataio.hpp"
#include "clx/http.hpp"
#include "clx/profiler.hpp"
#include "clx/session.hpp"
#include "clx/synthesizer.hpp"

namespace clx {

namespace {

using nlohmann::json;

struct Options {
  std::string input = "-";
  std::string column;
  std::string target;
  std::string program;
  std::string out;
  std::string listen = "127.0.0.1:8080";
  std::string state_dir;
  std::size_t k = 5;
  bool json = false;
  bool strict = false;
  bool values_only = false;
};

struct Column {
  std::vector<std::string> rows;
  std::string name;
};

Column load_column(const Options& o) {
  const std::string text = o.input == "-" ? std::string(std::istreambuf_iterator<char>(std::cin), {})
                                          : read_file(o.input);
  if (o.column.empty()) return {read_lines(text), std::string(kDefaultColumn)};
  return {column_values(read_csv(text), o.column), o.column};
}

void emit(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + o.out);
  f << text;
}

std::string dump(const json& j) {
  return j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

void render_tree(const PatternHierarchy& h, std::span<const std::string> rows, std::size_t id,
                 int depth, std::ostringstream& os) {
  const auto& node = h.node(id);
  os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "#" << id << " "
     << render_pattern(node.cluster.pattern) << "  " << node.cluster.count() << " rows  e.g.";
  const std::size_t n = std::min<std::size_t>(3, node.cluster.count());
  for (std::size_t i = 0; i < n; ++i)
    os << (i ? ", " : " ") << '"' << rows[node.cluster.members[i]] << '"';
  os << "\n";
  for (std::size_t c : node.children) render_tree(h, rows, c, depth + 1, os);
}

int cmd_profile(const Options& o, std::ostream& out) {
  const auto col = load_column(o);
  const auto h = build_hierarchy(col.rows);
  if (o.json) {
    emit(o, out, dump(to_json(h, col.rows)));
    return kExitOk;
  }
  std::ostringstream os;
  for (std::size_t r : h.roots()) render_tree(h, col.rows, r, 0, os);
  if (!h.empty_rows().empty()) os << "(" << h.empty_rows().size() << " empty rows)\n";
  emit(o, out, os.str());
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const auto col = load_column(o);
  const Pattern target = parse_pattern(o.target);
  const auto h = build_hierarchy(col.rows);
  const auto result = synthesize(h, target, SynthesisOptions{o.k});

  if (!o.program.empty()) {
    std::ofstream f(o.program, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write " + o.program);
    f << to_json(result.program).dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
  }
  if (o.json) {
    json j = to_json(result, col.name);
    j["program"] = to_json(result.program);
    emit(o, out, dump(j));
    return kExitOk;
  }
  std::ostringstream os;
  for (const auto& op : explain(result, col.name)) os << op.to_string() << "\n";
  for (std::size_t b = 0; b < result.per_source.size(); ++b) {
    const auto& r = result.per_source[b];
    os << "\nbranch " << b + 1 << ": " << render_pattern(r.source) << "\n";
    for (std::size_t i = 0; i < r.plans.size(); ++i) {
      std::ostringstream dl;
      dl.precision(4);
      dl << std::fixed << r.plans[i].dl;
      os << (i == r.default_index ? "  * " : "    ") << "#" << i << " dl=" << dl.str() << "  "
         << to_string(r.plans[i].plan) << "\n";
    }
    if (r.overflow) os << "    (path limit reached)\n";
  }
  for (const auto& p : result.unmatched_patterns) os << "\nunmatched: " << render_pattern(p);
  if (!result.unmatched_patterns.empty()) os << "\n";
  emit(o, out, os.str());
  return kExitOk;
}

int cmd_apply(const Options& o, std::ostream& out, std::ostream& err) {
  const auto program = program_from_json(json::parse(read_file(o.program)));
  const auto col = load_column(o);
  const auto applied = apply_program(program, col.rows);

  std::size_t transformed = 0, conforming = 0, unmatched = 0;
  for (const auto& a : applied) {
    if (a.status == RowStatus::Transformed) ++transformed;
    if (a.status == RowStatus::AlreadyConforming) ++conforming;
    if (a.status == RowStatus::Unmatched) ++unmatched;
  }

  if (o.json) {
    auto rows = json::array();
    for (std::size_t i = 0; i < applied.size(); ++i)
      rows.push_back({{"row", i},
                      {"before", col.rows[i]},
                      {"after", applied[i].output},
                      {"status", to_string(applied[i].status)}});
    emit(o, out,
         dump({{"column", col.name},
               {"rows", std::move(rows)},
               {"counts",
                {{"Transformed", transformed},
                 {"AlreadyConforming", conforming},
                 {"Unmatched", unmatched}}}}));
  } else if (o.values_only) {
    std::string text;
    for (const auto& a : applied) text += a.output + "\n";
    emit(o, out, text);
  } else {
    emit(o, out, transformed_csv(col.name, applied));
  }
  err << transformed << " transformed, " << conforming << " already conforming, " << unmatched
      << " unmatched\n";
  return o.strict && unmatched > 0 ? kExitUnmatched : kExitOk;
}

int cmd_serve(const Options& o, std::ostream& err) {
  SessionConfig config;
  config.k = o.k;
  if (!o.state_dir.empty()) config.state_dir = o.state_dir;
  SessionService service(config);
  if (!serve(service, o.listen, err)) {
    err << "cannot listen on " << o.listen << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Cluster, label and transform a column of strings"};
  app.require_subcommand(1);

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "Input file, one value per line (or CSV with --column)");
    sub->add_option("--column", o.column, "Read CSV and use this column");
    sub->add_option("--out", o.out, "Write output here instead of stdout");
    sub->add_flag("--json", o.json, "Machine-readable output");
  };

  auto* profile = app.add_subcommand("profile", "Print the pattern cluster hierarchy");
  add_input(profile);

  auto* synth = app.add_subcommand("synth", "Suggest replace operations for a target pattern");
  add_input(synth);
  synth->add_option("--target", o.target, "Target pattern, e.g. \"'('<D>3')'' '<D>3'-'<D>4\"")
      ->required();
  synth->add_option("-k", o.k, "Alternates kept per branch")->check(CLI::NonNegativeNumber);
  synth->add_option("--program", o.program, "Also save the program JSON here");

  auto* apply = app.add_subcommand("apply", "Run a saved program over a column");
  add_input(apply);
  apply->add_option("--program", o.program, "Program JSON written by synth")->required();
  apply->add_flag("--strict", o.strict, "Exit 3 if any row is left unmatched");
  apply->add_flag("--values-only", o.values_only, "Write bare output values, one per line");

  auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
  serve_cmd->add_option("--listen", o.listen, "ADDR:PORT");
  serve_cmd->add_option("--state-dir", o.state_dir, "Persist sessions here");
  serve_cmd->add_option("-k", o.k, "Alternates kept per branch")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    for (auto* sub : app.get_subcommands()) err << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitUsage;
  }

  try {
    if (profile->parsed()) return cmd_profile(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
    if (apply->parsed()) return cmd_apply(o, out, err);
    if (serve_cmd->parsed()) return cmd_serve(o, err);
  } catch (const PatternSyntaxError& e) {
    err << "bad pattern: " << e.what() << "\n";
    return kExitData;
  } catch (const DataError& e) {
    err << e.what() << "\n";
    return kExitData;
  } catch (const json::exception& e) {
    err << "bad JSON: " << e.what() << "\n";
    return kExitData;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return kExitData;
  } catch (const EvalError& e) {
    err << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace clx
