#include "gorga/error.hpp"
#include "gorga/lsystem.hpp"

#include <random>
#include <string>

#include <doctest.h>

using namespace gorga;

namespace {

Word successor_of(BuiltinRule rule) {
    return *builtin_rule(rule).successor('F');
}

// Random balanced word over the full token set, guards nested up to `depth`.
Word random_word(std::mt19937_64& rng, int depth) {
    Word w;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) {
        switch (rng() % (depth > 0 ? 9 : 7)) {
            case 0: w.push_back(Symbol::forward()); break;
            case 1: w.push_back(Symbol::letter_symbol(static_cast<char>('A' + rng() % 5))); break;
            case 2: w.push_back(Symbol::of(SymbolKind::TurnLeft)); break;
            case 3: w.push_back(Symbol::of(SymbolKind::TurnRight)); break;
            case 4: w.push_back(Symbol::of(SymbolKind::RandomTurn)); break;
            case 5: w.push_back(Symbol::of(SymbolKind::SpiralTurn)); break;
            case 6: w.push_back(Symbol::forward()); break;
            case 7: w.push_back(Symbol::guarded(random_word(rng, depth - 1))); break;
            default: {
                w.push_back(Symbol::of(SymbolKind::Push));
                for (auto& s : random_word(rng, depth - 1)) w.push_back(std::move(s));
                w.push_back(Symbol::of(SymbolKind::Pop));
            }
        }
    }
    return w;
}

}  // namespace

TEST_CASE("parse a guarded production") {
    const auto g = parse_grammar("axiom: F\nrule: F -> {F}+{F}");
    CHECK(g.axiom() == Word{Symbol::forward()});
    REQUIRE(g.productions().size() == 1);
    const Word expected{Symbol::guarded({Symbol::forward()}), Symbol::of(SymbolKind::TurnLeft),
                        Symbol::guarded({Symbol::forward()})};
    CHECK(g.productions()[0].predecessor == 'F');
    CHECK(g.productions()[0].successor == expected);
}

TEST_CASE("the random rule in the rule language matches the built-in") {
    const auto g = parse_grammar("axiom: F\nrule: F -> {F}{F}{F}{F}[-@{F}]+{F}+{F}");
    CHECK(g == builtin_rule(BuiltinRule::Random));
    CHECK(parse_grammar("axiom: F\nrule: F -> {F}{F}{F}{F}[-{F}]+{F}+{F}") ==
          builtin_rule(BuiltinRule::Angle));
    CHECK(parse_grammar("axiom: F\nrule: F -> {F}{F}{F}{F}[-~{F}]+{F}+{F}") ==
          builtin_rule(BuiltinRule::Spiral));
}

TEST_CASE("comments and blank lines are ignored") {
    const auto g = parse_grammar("# gorga\n\naxiom: F X  # start\nrule: X -> F [ + X ]\n");
    CHECK(serialize(g.axiom()) == "FX");
    CHECK(serialize(*g.successor('X')) == "F[+X]");
    CHECK(g.successor('F') == nullptr);
}

TEST_CASE("parse errors carry a location") {
    SUBCASE("unclosed bracket points at the bracket") {
        try {
            parse_grammar("axiom: F\nrule: F -> [F");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.code() == ErrorCode::UnbalancedBracket);
            CHECK(e.line() == 2);
            CHECK(e.column() == 12);
        }
    }
    SUBCASE("unclosed guard") {
        CHECK_THROWS_WITH_AS(parse_grammar("axiom: {F"), doctest::Contains("UnbalancedGuard"),
                             ParseError);
    }
    SUBCASE("stray closer") {
        try {
            parse_grammar("axiom: F]");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.code() == ErrorCode::UnbalancedBracket);
            CHECK(e.column() == 9);
        }
    }
    SUBCASE("empty guard") {
        try {
            parse_grammar("axiom: F{}");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.code() == ErrorCode::SyntaxError);
        }
    }
    SUBCASE("unknown token") {
        try {
            parse_grammar("axiom: F\nrule: F -> F*F");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.code() == ErrorCode::SyntaxError);
            CHECK(e.line() == 2);
            CHECK(e.column() == 13);
        }
    }
    SUBCASE("duplicate production") {
        try {
            parse_grammar("axiom: F\nrule: F -> FF\nrule: F -> F");
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::DuplicateProduction);
        }
    }
    SUBCASE("missing or empty axiom") {
        try {
            parse_grammar("rule: F -> FF");
            FAIL("expected a parse error");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::EmptyAxiom);
        }
        CHECK_THROWS_AS(Grammar({}, {}), Error);
    }
}

TEST_CASE("serialize then parse is the identity") {
    for (const auto rule : {BuiltinRule::Random, BuiltinRule::Angle, BuiltinRule::Spiral}) {
        const auto g = builtin_rule(rule);
        CHECK(parse_grammar(serialize(g)) == g);
    }
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        const Word axiom = random_word(rng, 3);
        std::vector<Production> productions{{'F', random_word(rng, 3)}};
        if (i % 2 == 0) productions.push_back({'X', random_word(rng, 2)});
        const Grammar g(axiom, productions);
        const auto text = serialize(g);
        INFO(text);
        CHECK(parse_grammar(text) == g);
        CHECK(serialize(parse_grammar(text)) == text);
    }
}

TEST_CASE("one rewrite of F gives the successor") {
    for (const auto rule : {BuiltinRule::Random, BuiltinRule::Angle, BuiltinRule::Spiral}) {
        const auto g = builtin_rule(rule);
        CHECK(rewrite(g, g.axiom(), 1) == successor_of(rule));
    }
    CHECK(serialize(successor_of(BuiltinRule::Angle)) == "{F}{F}{F}{F}[-{F}]+{F}+{F}");
    CHECK(serialize(successor_of(BuiltinRule::Random)) == "{F}{F}{F}{F}[-@{F}]+{F}+{F}");
    CHECK(serialize(successor_of(BuiltinRule::Spiral)) == "{F}{F}{F}{F}[-~{F}]+{F}+{F}");
}

TEST_CASE("forward count after n rewrites is 7^n") {
    for (const auto rule : {BuiltinRule::Random, BuiltinRule::Angle, BuiltinRule::Spiral}) {
        const auto g = builtin_rule(rule);
        std::size_t expected = 1;
        for (int n = 0; n <= 5; ++n) {
            CHECK(forward_count(rewrite(g, g.axiom(), n)) == expected);
            expected *= 7;
        }
    }
}

TEST_CASE("guard payloads rewrite too") {
    const auto g = parse_grammar("axiom: {F}\nrule: F -> F+F");
    CHECK(serialize(rewrite(g, g.axiom(), 2)) == "{F+F+F+F}");
}

TEST_CASE("unmatched letters follow the identity flag") {
    const Word fx = parse_word("FX");
    const Grammar keep(fx, {{'F', parse_word("FF")}}, true);
    const Grammar drop(fx, {{'F', parse_word("FF")}}, false);
    CHECK(serialize(rewrite(keep, fx, 1)) == "FFX");
    CHECK(serialize(rewrite(drop, fx, 1)) == "FF");
}

TEST_CASE("rewriting stops at the word cap") {
    const auto g = builtin_rule(BuiltinRule::Angle);
    try {
        rewrite(g, g.axiom(), 6, 1000);
        FAIL("expected BudgetExceeded");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::BudgetExceeded);
    }
}

TEST_CASE("streamed derivation matches the rewritten word") {
    const auto g = parse_grammar("axiom: FX\nrule: F -> {F}[+F]\nrule: X -> -{FX}");
    for (int depth = 0; depth <= 4; ++depth) {
        const Word word = rewrite(g, g.axiom(), depth);
        Word flat;
        std::vector<bool> guards;
        const auto flatten = [&](auto&& self, const Word& w, bool guarded) -> void {
            for (const auto& s : w) {
                if (s.kind == SymbolKind::Guarded) {
                    self(self, s.payload, true);
                } else {
                    flat.push_back(s);
                    guards.push_back(guarded);
                }
            }
        };
        flatten(flatten, word, false);

        Word streamed;
        std::vector<bool> streamed_guards;
        CHECK(visit_derivation(g, g.axiom(), depth, [&](const Symbol& s, bool guarded) {
            streamed.push_back(s);
            streamed_guards.push_back(guarded);
            return true;
        }));
        CHECK(streamed == flat);
        CHECK(streamed_guards == guards);
    }
}

TEST_CASE("streaming can stop early") {
    const auto g = builtin_rule(BuiltinRule::Angle);
    int seen = 0;
    const bool finished = visit_derivation(g, g.axiom(), 12, [&](const Symbol&, bool) {
        return ++seen < 10;
    });
    CHECK_FALSE(finished);
    CHECK(seen == 10);
}

TEST_CASE("built-in rule names") {
    CHECK(builtin_rule_from_name("spiral") == BuiltinRule::Spiral);
    CHECK(to_string(BuiltinRule::Random) == "random");
    try {
        builtin_rule_from_name("swirl");
        FAIL("expected UnknownRule");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownRule);
    }
}
