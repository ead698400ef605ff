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

#include <cmath>

#include "clx/dataio.hpp"
#include "clx/synthesizer.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace clx;

namespace {

Pattern P(const char* text) { return parse_pattern(text); }

std::set<StringExpression> edge(const AlignmentDag& dag, std::size_t a, std::size_t b) {
  const auto* e = dag.at(a, b);
  return e ? *e : std::set<StringExpression>{};
}

std::size_t edge_count(const AlignmentDag& dag) {
  std::size_t n = 0;
  for (const auto& [k, v] : dag.edges) n += v.size();
  return n;
}

}  // namespace

TEST_CASE("validate") {
  const Pattern target = P("'['<U>+'-'<D>+']'");
  CHECK(validate(P("'['<U>3'-'<D>5"), target));
  CHECK_FALSE(validate(P("'['<U>3'-'"), target));
  CHECK(validate(target, target));
  CHECK(validate(P("<D>3'.'<D>3'.'<D>4"), P("'('<D>3')'' '<D>3'-'<D>4")));
  CHECK_FALSE(validate(P("<D>3'.'<D>3"), P("'('<D>3')'' '<D>3'-'<D>4")));
  SUBCASE("constants count as their characters") {
    CHECK(validate(P("'CPT''-'<D>5"), target));
    CHECK(validate(P("'586''-'<D>4"), P("<D>3'-'<D>4")));
  }
  SUBCASE("target constants need no supply") {
    CHECK(validate(P("<D>+"), P("'CPT''-'<D>+")));
  }
}

TEST_CASE("syntactically_similar") {
  const Token d3 = Token::base(TokenKind::Digit, Quantifier::exactly(3));
  const Token d4 = Token::base(TokenKind::Digit, Quantifier::exactly(4));
  const Token dplus = Token::base(TokenKind::Digit, Quantifier::plus());
  CHECK(syntactically_similar(d3, d3));
  CHECK_FALSE(syntactically_similar(d3, d4));
  CHECK(syntactically_similar(d3, dplus));
  CHECK(syntactically_similar(dplus, dplus));
  CHECK_FALSE(syntactically_similar(dplus, d3));
  CHECK_FALSE(syntactically_similar(Token::base(TokenKind::Lower, Quantifier::exactly(3)), d3));
  CHECK(syntactically_similar(Token::literal("586"), d3));
  CHECK(syntactically_similar(Token::literal("586"), dplus));
  CHECK_FALSE(syntactically_similar(Token::literal("58"), d3));
  CHECK_FALSE(syntactically_similar(Token::literal("-"), Token::literal("-")));
}

TEST_CASE("find_token_alignment") {
  SUBCASE("dotted phone to parenthesized") {
    const auto dag = find_token_alignment(P("<D>3'.'<D>3'.'<D>4"), P("'('<D>3')'' '<D>3'-'<D>4"));
    CHECK(dag.node_count == 8);
    using S = std::set<StringExpression>;
    CHECK(edge(dag, 0, 1) == S{ConstStr{"("}});
    CHECK(edge(dag, 1, 2) == S{Extract{1, 1}, Extract{3, 3}});
    CHECK(edge(dag, 2, 3) == S{ConstStr{")"}});
    CHECK(edge(dag, 3, 4) == S{ConstStr{" "}});
    CHECK(edge(dag, 4, 5) == S{Extract{1, 1}, Extract{3, 3}});
    CHECK(edge(dag, 5, 6) == S{ConstStr{"-"}});
    CHECK(edge(dag, 6, 7) == S{Extract{5, 5}});
    CHECK(edge_count(dag) == 9);
  }
  SUBCASE("single token") {
    const auto dag = find_token_alignment(P("<L>+"), P("<L>+"));
    CHECK(dag.node_count == 2);
    CHECK(edge_count(dag) == 1);
    CHECK(edge(dag, 0, 1) == std::set<StringExpression>{Extract{1, 1}});
  }
  SUBCASE("combined extracts") {
    const auto dag = find_token_alignment(P("<U><D>+"), P("<U><D>+"));
    CHECK(edge(dag, 0, 1) == std::set<StringExpression>{Extract{1, 1}});
    CHECK(edge(dag, 1, 2) == std::set<StringExpression>{Extract{2, 2}});
    CHECK(edge(dag, 0, 2) == std::set<StringExpression>{Extract{1, 2}});
  }
  SUBCASE("combination chains across several nodes") {
    const auto dag = find_token_alignment(P("<U><D><L>"), P("<U><D><L>"));
    CHECK(edge(dag, 0, 3) == std::set<StringExpression>{Extract{1, 3}});
    CHECK(edge(dag, 1, 3) == std::set<StringExpression>{Extract{2, 3}});
  }
  SUBCASE("no path") {
    const auto dag = find_token_alignment(P("<L>+"), P("<D>+"));
    CHECK(all_paths(dag).plans.empty());
  }
}

TEST_CASE("description_length") {
  const Pattern source = P("<D>2'/'<D>2'/'<D>4");
  const Pattern target = P("<D>2'/'<D>2");
  const TransformationPlan e1{Extract{1, 3}};
  const TransformationPlan e2{Extract{1, 1}, ConstStr{"/"}, Extract{3, 3}};
  const double l1 = description_length(e1, source, target);
  const double l2 = description_length(e2, source, target);
  CHECK(l1 == doctest::Approx(std::log2(25.0)));
  CHECK(l2 == doctest::Approx(3 + 2 * std::log2(25.0) + std::log2(95.0)));
  CHECK(l1 < l2);

  // Same formulas with three source tokens.
  const Pattern three = P("<D>2'/'<D>2");
  CHECK(description_length(e1, three, target) == doctest::Approx(std::log2(9.0)));
  CHECK(description_length(e2, three, target) ==
        doctest::Approx(3 + 2 * std::log2(9.0) + std::log2(95.0)));
  CHECK(description_length(e1, three, target) < description_length(e2, three, target));

  CHECK(description_length(TransformationPlan{ConstStr{"ab"}}, source, target) ==
        doctest::Approx(2 * std::log2(95.0)));
}

TEST_CASE("all_paths") {
  const auto dag = find_token_alignment(P("<D>3'.'<D>3'.'<D>4"), P("'('<D>3')'' '<D>3'-'<D>4"));
  const auto all = all_paths(dag);
  CHECK(all.plans.size() == 4);
  CHECK_FALSE(all.overflow);
  const auto capped = all_paths(dag, 2);
  CHECK(capped.plans.size() <= 2);
  CHECK(capped.overflow);
}

TEST_CASE("plans_equivalent") {
  const Pattern source = P("<D>2'/'<D>2");
  const TransformationPlan a{Extract{3, 3}, ConstStr{"/"}, Extract{1, 1}};
  const TransformationPlan b{Extract{3, 3}, Extract{2, 2}, Extract{1, 1}};
  CHECK(plans_equivalent(a, b, source));
  CHECK(plans_equivalent(a, a, source));
  CHECK_FALSE(plans_equivalent(TransformationPlan{Extract{1, 1}}, TransformationPlan{Extract{3, 3}},
                               source));
  CHECK(plans_equivalent(TransformationPlan{Extract{1, 3}},
                         TransformationPlan{Extract{1, 2}, Extract{3, 3}}, source));
  CHECK(plans_equivalent(TransformationPlan{ConstStr{"ab"}},
                         TransformationPlan{ConstStr{"a"}, ConstStr{"b"}}, source));
}

TEST_CASE("enumerate_plans") {
  SUBCASE("dotted phone default") {
    const Pattern s = P("<D>3'.'<D>3'.'<D>4");
    const Pattern t = P("'('<D>3')'' '<D>3'-'<D>4");
    const auto ranked = enumerate_plans(find_token_alignment(s, t), s, t);
    REQUIRE(ranked.plans.size() == 4);
    CHECK(ranked.chosen() == TransformationPlan{ConstStr{"("}, Extract{1, 1}, ConstStr{")"},
                                                ConstStr{" "}, Extract{3, 3}, ConstStr{"-"},
                                                Extract{5, 5}});
    for (std::size_t i = 1; i < ranked.plans.size(); ++i)
      CHECK(ranked.plans[i - 1].dl <= ranked.plans[i].dl);
  }
  SUBCASE("equivalent pair collapses") {
    const Pattern s = P("<D>2'/'<D>2");
    AlignmentDag dag;
    dag.node_count = 4;
    dag.add(0, 1, Extract{3, 3});
    dag.add(1, 2, ConstStr{"/"});
    dag.add(1, 2, Extract{2, 2});
    dag.add(2, 3, Extract{1, 1});
    CHECK(all_paths(dag).plans.size() == 2);
    const auto ranked = enumerate_plans(dag, s, s);
    CHECK(ranked.plans.size() == 1);
  }
  SUBCASE("k caps the list") {
    const Pattern s = P("<D>+'-'<D>+'-'<D>+'-'<D>+");
    const Pattern t = P("<D>+' '<D>+");
    const auto all = enumerate_plans(find_token_alignment(s, t), s, t, SynthesisOptions{100});
    CHECK(all.plans.size() == 16);
    const auto two = enumerate_plans(find_token_alignment(s, t), s, t, SynthesisOptions{2});
    REQUIRE(two.plans.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(two.plans[i].plan == all.plans[i].plan);
  }
  SUBCASE("deterministic") {
    const Pattern s = P("<U>+<D>+'-'<U>+<D>+");
    const Pattern t = P("<U>+'-'<D>+");
    const auto a = enumerate_plans(find_token_alignment(s, t), s, t);
    const auto b = enumerate_plans(find_token_alignment(s, t), s, t);
    REQUIRE(a.plans.size() == b.plans.size());
    for (std::size_t i = 0; i < a.plans.size(); ++i) CHECK(a.plans[i].plan == b.plans[i].plan);
  }
}

namespace {

std::size_t node_with(const PatternHierarchy& h, const Pattern& p) {
  for (std::size_t i = 0; i < h.nodes().size(); ++i)
    if (h.node(i).cluster.pattern == p) return i;
  throw std::runtime_error("no node " + render_pattern(p));
}

}  // namespace

TEST_CASE("synthesize: medical codes") {
  const auto rows = testing::medical_rows();
  const auto h = build_hierarchy(rows);
  const Pattern target = h.node(node_with(h, P("'['<U>+'-'<D>+']'"))).cluster.pattern;
  const auto result = synthesize(h, target);
  CHECK(result.program.branches.size() == 3);
  CHECK(result.unmatched_patterns.empty());
  const auto applied = apply_program(result.program, rows);
  const auto expected = testing::medical_expected();
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(applied[i].output == expected[i]);
  CHECK(applied[2].status == RowStatus::AlreadyConforming);

  const auto j = to_json(result, "column1");
  CHECK(j["script"].size() == 3);
  CHECK(j["branches"].size() == 3);
  CHECK(j["target"] == "'['<U>+'-'<D>+']'");
}

TEST_CASE("synthesize: trivial and unmatched") {
  const std::vector<std::string> one{"abc"};
  const auto h = build_hierarchy(one);
  const auto same = synthesize(h, h.node(h.leaves()[0]).cluster.pattern);
  CHECK(same.program.branches.empty());
  CHECK(same.unmatched_patterns.empty());

  const std::vector<std::string> rows{"abc", "N/A", "12"};
  const auto h2 = build_hierarchy(rows);
  const auto r = synthesize(h2, P("<D>+"));
  CHECK(r.program.branches.empty());
  CHECK(r.unmatched_patterns.size() == 2);
}

TEST_CASE("synthesize: phone formats") {
  const auto rows = testing::phone_corpus();
  const auto h = build_hierarchy(rows);
  const Pattern target = P("'('<D>3')'' '<D>3'-'<D>4");
  const auto result = synthesize(h, target);
  CHECK(result.program.branches.size() == 3);
  const auto ops = explain(result, "column1");
  REQUIRE(ops.size() >= 2);
  CHECK(ops[0].to_string() ==
        "Replace '/^\\(({digit}{3})\\)({digit}{3})\\-({digit}{4})$/' in column1 with '($1) $2-$3'");
  CHECK(ops[1].to_string() ==
        "Replace '/^({digit}{3})\\-({digit}{3})\\-({digit}{4})$/' in column1 with '($1) $2-$3'");
  for (const auto& a : apply_program(result.program, rows)) {
    CHECK(a.status != RowStatus::Unmatched);
    CHECK(matches(target, a.output));
  }
}

TEST_CASE("repair") {
  const auto rows = testing::date_rows();
  const auto h = build_hierarchy(rows);
  const auto result = synthesize(h, P("<D>2'-'<D>2'-'<D>4"));
  const Pattern slash = P("<D>2'/'<D>2'/'<D>4");
  CHECK(eval_program(result.program, "25/12/2017").output == "25-12-2017");

  const auto swapped = repair(result, slash, 1);
  CHECK(eval_program(swapped.program, "25/12/2017").output == "12-25-2017");
  const auto back = repair(swapped, slash, 0);
  CHECK(back.program == result.program);

  CHECK_THROWS_AS(repair(result, P("<L>+"), 0), RepairError);
  CHECK_THROWS_AS(repair(result, slash, 99), RepairError);
}
