#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace gorga {

enum class SymbolKind {
    Forward,     // F
    Letter,      // any other capital letter; rewrites but does not draw
    TurnLeft,    // +
    TurnRight,   // -
    Push,        // [
    Pop,         // ]
    RandomTurn,  // -@ : occupancy-led turn
    SpiralTurn,  // -~ : turn with step decay
    Guarded,     // {...} : moves inside only commit when they overlap nothing
};

struct Symbol;
using Word = std::vector<Symbol>;

struct Symbol {
    SymbolKind kind = SymbolKind::Forward;
    char letter = 'F';  // meaningful for Forward and Letter
    Word payload;       // meaningful for Guarded; never empty there

    static Symbol forward() { return {SymbolKind::Forward, 'F', {}}; }
    static Symbol letter_symbol(char c);
    static Symbol of(SymbolKind kind) { return {kind, '\0', {}}; }
    static Symbol guarded(Word word);

    bool is_letter() const { return kind == SymbolKind::Forward || kind == SymbolKind::Letter; }

    friend bool operator==(const Symbol&, const Symbol&) = default;
};

struct Production {
    char predecessor = 'F';
    Word successor;

    friend bool operator==(const Production&, const Production&) = default;
};

// G = <V, axiom, P>. The alphabet is implicit in the symbols used.
class Grammar {
public:
    Grammar(Word axiom, std::vector<Production> productions, bool identity_for_unmatched = true);

    const Word& axiom() const { return axiom_; }
    const std::vector<Production>& productions() const { return productions_; }
    bool identity_for_unmatched() const { return identity_for_unmatched_; }

    // nullptr when the letter has no production.
    const Word* successor(char letter) const;

    friend bool operator==(const Grammar&, const Grammar&) = default;

private:
    Word axiom_;
    std::vector<Production> productions_;
    bool identity_for_unmatched_;
};

enum class BuiltinRule { Random, Angle, Spiral };

std::string_view to_string(BuiltinRule rule);
// Throws Error(UnknownRule) for anything but "random", "angle", "spiral".
BuiltinRule builtin_rule_from_name(std::string_view name);

inline constexpr std::size_t kDefaultWordCap = 10'000'000;

Grammar parse_grammar(std::string_view text);
std::string serialize(const Grammar& grammar);
std::string serialize(const Word& word);
Word parse_word(std::string_view text);

// Axiom F and successor {F}{F}{F}{F}[-X{F}]+{F}+{F} with X chosen by `rule`.
Grammar builtin_rule(BuiltinRule rule);

// Parallel rewriting. Guard payloads are rewritten recursively; brackets and
// turns pass through. Throws Error(BudgetExceeded) once the word would hold
// more than `cap` symbols.
Word rewrite(const Grammar& grammar, const Word& word, int iterations,
             std::size_t cap = kDefaultWordCap);

// Streams the terminal symbols of rewrite(grammar, word, depth) in order
// without materializing the word. `visit(symbol, guarded)` receives each
// non-guard symbol together with whether it sits inside a guard; returning
// false stops the walk. Returns false when stopped early.
template <typename Visitor>
bool visit_derivation(const Grammar& grammar, const Word& word, int depth, Visitor&& visit,
                      bool guarded = false) {
    for (const auto& s : word) {
        if (s.kind == SymbolKind::Guarded) {
            if (!visit_derivation(grammar, s.payload, depth, visit, true)) return false;
        } else if (s.is_letter() && depth > 0) {
            if (const Word* succ = grammar.successor(s.letter)) {
                if (!visit_derivation(grammar, *succ, depth - 1, visit, guarded)) return false;
            } else if (grammar.identity_for_unmatched()) {
                if (!visit(s, guarded)) return false;
            }
        } else {
            if (!visit(s, guarded)) return false;
        }
    }
    return true;
}

// Symbol count including guard payloads (a guard counts itself plus its contents).
std::size_t symbol_count(const Word& word);
std::size_t forward_count(const Word& word);

}  // namespace gorga
