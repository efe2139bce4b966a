#include "gorga/lsystem.hpp"

#include "gorga/error.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include <fmt/format.h>

namespace gorga {

Symbol Symbol::letter_symbol(char c) {
    if (c == 'F') return forward();
    return {SymbolKind::Letter, c, {}};
}

Symbol Symbol::guarded(Word word) {
    return {SymbolKind::Guarded, '\0', std::move(word)};
}

Grammar::Grammar(Word axiom, std::vector<Production> productions, bool identity_for_unmatched)
    : axiom_(std::move(axiom)),
      productions_(std::move(productions)),
      identity_for_unmatched_(identity_for_unmatched) {
    if (axiom_.empty()) throw Error(ErrorCode::EmptyAxiom, "axiom must be non-empty");
    for (std::size_t i = 0; i < productions_.size(); ++i) {
        if (productions_[i].successor.empty()) {
            throw Error(ErrorCode::SyntaxError,
                        fmt::format("production for '{}' has an empty successor",
                                    productions_[i].predecessor));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (productions_[j].predecessor == productions_[i].predecessor) {
                throw Error(ErrorCode::DuplicateProduction,
                            fmt::format("duplicate production for '{}'",
                                        productions_[i].predecessor));
            }
        }
    }
}

const Word* Grammar::successor(char letter) const {
    for (const auto& p : productions_) {
        if (p.predecessor == letter) return &p.successor;
    }
    return nullptr;
}

std::string_view to_string(BuiltinRule rule) {
    switch (rule) {
        case BuiltinRule::Random: return "random";
        case BuiltinRule::Angle: return "angle";
        case BuiltinRule::Spiral: return "spiral";
    }
    return "angle";
}

BuiltinRule builtin_rule_from_name(std::string_view name) {
    if (name == "random") return BuiltinRule::Random;
    if (name == "angle") return BuiltinRule::Angle;
    if (name == "spiral") return BuiltinRule::Spiral;
    throw Error(ErrorCode::UnknownRule, fmt::format("unknown rule '{}'", name));
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class WordParser {
public:
    WordParser(std::string_view text, int line, int column_offset)
        : text_(text), line_(line), column_offset_(column_offset) {}

    Word parse() {
        Word word = parse_until('\0', 0);
        return word;
    }

private:
    [[noreturn]] void fail(ErrorCode code, const std::string& msg, std::size_t at) const {
        throw ParseError(code, msg, line_, column_offset_ + static_cast<int>(at) + 1);
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    // Parses symbols until `terminator` ('}' for guards, '\0' for end of input).
    Word parse_until(char terminator, std::size_t open_at) {
        Word word;
        std::vector<std::size_t> brackets;
        for (;;) {
            skip_space();
            if (pos_ >= text_.size()) {
                if (terminator == '}') fail(ErrorCode::UnbalancedGuard, "unclosed '{'", open_at);
                break;
            }
            const char c = text_[pos_];
            const std::size_t at = pos_++;
            switch (c) {
                case '+': word.push_back(Symbol::of(SymbolKind::TurnLeft)); break;
                case '-': {
                    skip_space();
                    if (pos_ < text_.size() && (text_[pos_] == '@' || text_[pos_] == '~')) {
                        word.push_back(Symbol::of(text_[pos_] == '@' ? SymbolKind::RandomTurn
                                                                     : SymbolKind::SpiralTurn));
                        ++pos_;
                    } else {
                        word.push_back(Symbol::of(SymbolKind::TurnRight));
                    }
                    break;
                }
                case '@': word.push_back(Symbol::of(SymbolKind::RandomTurn)); break;
                case '~': word.push_back(Symbol::of(SymbolKind::SpiralTurn)); break;
                case '[':
                    brackets.push_back(at);
                    word.push_back(Symbol::of(SymbolKind::Push));
                    break;
                case ']':
                    if (brackets.empty()) fail(ErrorCode::UnbalancedBracket, "unmatched ']'", at);
                    brackets.pop_back();
                    word.push_back(Symbol::of(SymbolKind::Pop));
                    break;
                case '{': {
                    Word inner = parse_until('}', at);
                    if (inner.empty()) fail(ErrorCode::SyntaxError, "empty guard '{}'", at);
                    word.push_back(Symbol::guarded(std::move(inner)));
                    break;
                }
                case '}':
                    if (terminator != '}') fail(ErrorCode::UnbalancedGuard, "unmatched '}'", at);
                    if (!brackets.empty()) {
                        fail(ErrorCode::UnbalancedBracket, "'[' not closed inside guard",
                             brackets.back());
                    }
                    return word;
                default:
                    if (c >= 'A' && c <= 'Z') {
                        word.push_back(Symbol::letter_symbol(c));
                    } else {
                        fail(ErrorCode::SyntaxError, fmt::format("unexpected character '{}'", c), at);
                    }
            }
        }
        if (!brackets.empty()) fail(ErrorCode::UnbalancedBracket, "unclosed '['", brackets.back());
        return word;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_;
    int column_offset_;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

// Column (0-based) of `part` inside `line`; both views share storage.
int offset_in(std::string_view line, std::string_view part) {
    return static_cast<int>(part.data() - line.data());
}

void serialize_into(const Word& word, std::string& out) {
    for (const auto& s : word) {
        switch (s.kind) {
            case SymbolKind::Forward:
            case SymbolKind::Letter: out += s.letter; break;
            case SymbolKind::TurnLeft: out += '+'; break;
            case SymbolKind::TurnRight: out += '-'; break;
            case SymbolKind::Push: out += '['; break;
            case SymbolKind::Pop: out += ']'; break;
            case SymbolKind::RandomTurn: out += "-@"; break;
            case SymbolKind::SpiralTurn: out += "-~"; break;
            case SymbolKind::Guarded:
                out += '{';
                serialize_into(s.payload, out);
                out += '}';
                break;
        }
    }
}

}  // namespace

Word parse_word(std::string_view text) {
    return WordParser(text, 1, 0).parse();
}

Grammar parse_grammar(std::string_view text) {
    std::optional<Word> axiom;
    std::vector<Production> productions;
    std::vector<int> production_lines;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        ++line_no;
        start = end + 1;

        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        std::string_view body = trim(line);
        if (body.empty()) continue;

        const auto colon = body.find(':');
        if (colon == std::string_view::npos) {
            throw ParseError(ErrorCode::SyntaxError, "expected 'axiom:' or 'rule:'", line_no,
                             offset_in(line, body) + 1);
        }
        std::string_view key = trim(body.substr(0, colon));
        std::string_view rest = body.substr(colon + 1);

        if (key == "axiom") {
            if (axiom) {
                throw ParseError(ErrorCode::SyntaxError, "axiom given twice", line_no,
                                 offset_in(line, key) + 1);
            }
            Word w = WordParser(rest, line_no, offset_in(line, rest)).parse();
            if (w.empty()) {
                throw ParseError(ErrorCode::EmptyAxiom, "axiom must be non-empty", line_no,
                                 offset_in(line, rest) + 1);
            }
            axiom = std::move(w);
        } else if (key == "rule") {
            const auto arrow = rest.find("->");
            if (arrow == std::string_view::npos) {
                throw ParseError(ErrorCode::SyntaxError, "expected '->'", line_no,
                                 offset_in(line, rest) + 1);
            }
            std::string_view lhs = trim(rest.substr(0, arrow));
            std::string_view rhs = rest.substr(arrow + 2);
            if (lhs.size() != 1 || lhs[0] < 'A' || lhs[0] > 'Z') {
                throw ParseError(ErrorCode::SyntaxError,
                                 "predecessor must be a single capital letter", line_no,
                                 offset_in(line, lhs.empty() ? rest : lhs) + 1);
            }
            Word w = WordParser(rhs, line_no, offset_in(line, rhs)).parse();
            if (w.empty()) {
                throw ParseError(ErrorCode::SyntaxError, "successor must be non-empty", line_no,
                                 offset_in(line, rhs) + 1);
            }
            for (std::size_t i = 0; i < productions.size(); ++i) {
                if (productions[i].predecessor == lhs[0]) {
                    throw ParseError(ErrorCode::DuplicateProduction,
                                     fmt::format("'{}' already has a production on line {}",
                                                 lhs[0], production_lines[i]),
                                     line_no, offset_in(line, lhs) + 1);
                }
            }
            productions.push_back({lhs[0], std::move(w)});
            production_lines.push_back(line_no);
        } else {
            throw ParseError(ErrorCode::SyntaxError, fmt::format("unknown key '{}'", key), line_no,
                             offset_in(line, key) + 1);
        }
    }
    if (!axiom) throw ParseError(ErrorCode::EmptyAxiom, "missing 'axiom:' line", line_no, 1);
    return Grammar(std::move(*axiom), std::move(productions));
}

std::string serialize(const Word& word) {
    std::string out;
    serialize_into(word, out);
    return out;
}

std::string serialize(const Grammar& grammar) {
    std::string out = "axiom: " + serialize(grammar.axiom()) + "\n";
    for (const auto& p : grammar.productions()) {
        out += "rule: ";
        out += p.predecessor;
        out += " -> " + serialize(p.successor) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------

Grammar builtin_rule(BuiltinRule rule) {
    const auto g = [] { return Symbol::guarded({Symbol::forward()}); };
    SymbolKind branch_turn = SymbolKind::TurnRight;
    if (rule == BuiltinRule::Random) branch_turn = SymbolKind::RandomTurn;
    if (rule == BuiltinRule::Spiral) branch_turn = SymbolKind::SpiralTurn;

    Word successor{g(), g(), g(), g(),
                   Symbol::of(SymbolKind::Push), Symbol::of(branch_turn), g(),
                   Symbol::of(SymbolKind::Pop),
                   Symbol::of(SymbolKind::TurnLeft), g(),
                   Symbol::of(SymbolKind::TurnLeft), g()};
    return Grammar({Symbol::forward()}, {{'F', std::move(successor)}});
}

// ---------------------------------------------------------------------------
// Rewriting

namespace {

class Rewriter {
public:
    Rewriter(const Grammar& g, std::size_t cap) : grammar_(g), cap_(cap) {}

    Word apply(const Word& word) {
        count_ = 0;
        Word out;
        out.reserve(word.size());
        step(word, out);
        return out;
    }

private:
    void add(std::size_t n) {
        count_ += n;
        if (count_ > cap_) {
            throw Error(ErrorCode::BudgetExceeded,
                        fmt::format("rewritten word exceeds {} symbols", cap_));
        }
    }

    void step(const Word& word, Word& out) {
        for (const auto& s : word) {
            if (s.kind == SymbolKind::Guarded) {
                Word inner;
                step(s.payload, inner);
                if (inner.empty()) continue;
                add(1);
                out.push_back(Symbol::guarded(std::move(inner)));
            } else if (s.is_letter()) {
                if (const Word* succ = grammar_.successor(s.letter)) {
                    add(symbol_count(*succ));
                    out.insert(out.end(), succ->begin(), succ->end());
                } else if (grammar_.identity_for_unmatched()) {
                    add(1);
                    out.push_back(s);
                }
            } else {
                add(1);
                out.push_back(s);
            }
        }
    }

    const Grammar& grammar_;
    std::size_t cap_;
    std::size_t count_ = 0;
};

}  // namespace

Word rewrite(const Grammar& grammar, const Word& word, int iterations, std::size_t cap) {
    Word current = word;
    Rewriter rewriter(grammar, cap);
    for (int i = 0; i < iterations; ++i) current = rewriter.apply(current);
    return current;
}

std::size_t symbol_count(const Word& word) {
    std::size_t n = 0;
    for (const auto& s : word) {
        n += 1;
        if (s.kind == SymbolKind::Guarded) n += symbol_count(s.payload);
    }
    return n;
}

std::size_t forward_count(const Word& word) {
    std::size_t n = 0;
    for (const auto& s : word) {
        if (s.kind == SymbolKind::Forward) ++n;
        if (s.kind == SymbolKind::Guarded) n += forward_count(s.payload);
    }
    return n;
}

}  // namespace gorga
