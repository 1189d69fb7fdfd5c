#include "protoperf/protocol.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "protoperf/error.hpp"

namespace protoperf {

std::size_t Protocol::op_count() const {
    std::size_t n = 0;
    for (const ProtocolStep& step : steps) n += step.ops.size();
    return n;
}

CryptoOp make_op(Category kind, std::uint64_t payload_bytes, std::optional<std::string> algorithm,
                 std::optional<BlockMode> mode, std::optional<unsigned> key_bits) {
    if (payload_bytes < 1) throw InvalidArgument("op: payload_bytes must be >= 1");
    CryptoOp op;
    op.kind = kind;
    op.payload_bytes = payload_bytes;
    op.algorithm = algorithm.value_or(std::string(default_algorithm(kind)));
    if (is_symmetric(kind)) {
        op.mode = mode.value_or(BlockMode::cbc);
        op.key_bits = key_bits.value_or(128);
    } else if (is_asymmetric(kind)) {
        if (mode) throw InvalidArgument("op: mode is only valid on symmetric ops");
        op.key_bits = key_bits.value_or(1024);
    } else {
        if (mode) throw InvalidArgument("op: mode is only valid on symmetric ops");
        if (key_bits) throw InvalidArgument("op: key is not valid on hash ops");
    }
    if (op.key_bits && *op.key_bits == 0) throw InvalidArgument("op: key_bits must be positive");
    return op;
}

void validate_protocol(const Protocol& protocol) {
    if (protocol.id.empty()) throw InvalidArgument("protocol: id must be non-empty");
    if (protocol.steps.empty()) throw InvalidArgument("protocol: steps must be non-empty");
    for (const ProtocolStep& step : protocol.steps) {
        if (step.sender == step.receiver)
            throw InvalidArgument("protocol " + protocol.id + ": sender equals receiver (" +
                                  step.sender + ")");
        if (step.ops.empty())
            throw InvalidArgument("protocol " + protocol.id + ": step has no ops");
    }
}

namespace {

enum class TokenKind { ident, integer, symbol, end };

struct Token {
    TokenKind kind = TokenKind::end;
    std::string text;
    int line = 1;
    int column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return current_; }

    Token take() {
        Token tok = current_;
        advance();
        return tok;
    }

private:
    void advance() {
        skip_space_and_comments();
        current_.line = line_;
        current_.column = column_;
        if (pos_ >= text_.size()) {
            current_.kind = TokenKind::end;
            current_.text.clear();
            return;
        }
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                bump();
            current_.kind = TokenKind::ident;
            current_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                bump();
            current_.kind = TokenKind::integer;
            current_.text = std::string(text_.substr(start, pos_ - start));
            return;
        }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            bump();
            bump();
            current_.kind = TokenKind::symbol;
            current_.text = "->";
            return;
        }
        if (std::string_view("{}():;,=").find(c) != std::string_view::npos) {
            bump();
            current_.kind = TokenKind::symbol;
            current_.text = std::string(1, c);
            return;
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", line_, column_);
    }

    void skip_space_and_comments() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') bump();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                bump();
            } else {
                break;
            }
        }
    }

    void bump() {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;
    Token current_;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) {}

    bool at_end() const { return lexer_.peek().kind == TokenKind::end; }

    Protocol parse_one() {
        expect_keyword("protocol");
        Protocol protocol;
        protocol.id = expect(TokenKind::ident, "protocol identifier").text;
        expect_symbol("{");
        if (is_symbol("}")) fail("protocol needs at least one step");
        while (!is_symbol("}")) {
            if (at_end()) fail("unterminated protocol block (missing '}')");
            protocol.steps.push_back(parse_step());
        }
        expect_symbol("}");
        return protocol;
    }

private:
    ProtocolStep parse_step() {
        ProtocolStep step;
        const Token sender = expect(TokenKind::ident, "sender principal");
        step.sender = sender.text;
        expect_symbol("->");
        step.receiver = expect(TokenKind::ident, "receiver principal").text;
        if (step.sender == step.receiver)
            throw ParseError("sender equals receiver (" + step.sender + ")", sender.line,
                             sender.column);
        expect_symbol(":");
        step.ops.push_back(parse_op());
        while (is_symbol(";")) {
            lexer_.take();
            step.ops.push_back(parse_op());
        }
        return step;
    }

    CryptoOp parse_op() {
        const Token kind_tok = expect(TokenKind::ident, "op keyword");
        std::optional<Category> kind;
        for (Category c : kAllCategories)
            if (category_keyword(c) == kind_tok.text) kind = c;
        if (!kind)
            throw ParseError("unknown op keyword \"" + kind_tok.text +
                                 "\" (expected senc, sdec, hash, aenc or adec)",
                             kind_tok.line, kind_tok.column);

        expect_symbol("(");
        std::optional<std::uint64_t> size;
        std::optional<std::string> alg;
        std::optional<BlockMode> mode;
        std::optional<unsigned> key;
        parse_attr(*kind, size, alg, mode, key);
        while (is_symbol(",")) {
            lexer_.take();
            parse_attr(*kind, size, alg, mode, key);
        }
        expect_symbol(")");

        if (!size)
            throw ParseError("op " + kind_tok.text + " is missing the required size attribute",
                             kind_tok.line, kind_tok.column);
        try {
            return make_op(*kind, *size, alg, mode, key);
        } catch (const InvalidArgument& e) {
            throw ParseError(e.what(), kind_tok.line, kind_tok.column);
        }
    }

    void parse_attr(Category kind, std::optional<std::uint64_t>& size,
                    std::optional<std::string>& alg, std::optional<BlockMode>& mode,
                    std::optional<unsigned>& key) {
        const Token name = expect(TokenKind::ident, "attribute name");
        expect_symbol("=");
        if (name.text == "size") {
            if (size) throw ParseError("duplicate attribute size", name.line, name.column);
            const Token value = expect(TokenKind::integer, "integer size");
            const std::uint64_t parsed = parse_int(value);
            if (parsed == 0) throw ParseError("non-positive size", value.line, value.column);
            size = parsed;
        } else if (name.text == "key") {
            if (!is_symmetric(kind) && !is_asymmetric(kind))
                throw ParseError("attribute key is not valid on hash ops", name.line, name.column);
            if (key) throw ParseError("duplicate attribute key", name.line, name.column);
            const Token value = expect(TokenKind::integer, "integer key size");
            const std::uint64_t parsed = parse_int(value);
            if (parsed == 0 || parsed > 1u << 20)
                throw ParseError("key size out of range", value.line, value.column);
            key = unsigned(parsed);
        } else if (name.text == "alg") {
            if (alg) throw ParseError("duplicate attribute alg", name.line, name.column);
            alg = expect(TokenKind::ident, "algorithm identifier").text;
        } else if (name.text == "mode") {
            if (!is_symmetric(kind))
                throw ParseError("attribute mode is only valid on symmetric ops", name.line,
                                 name.column);
            if (mode) throw ParseError("duplicate attribute mode", name.line, name.column);
            const Token value = expect(TokenKind::ident, "block mode");
            try {
                mode = block_mode_from_label(value.text);
            } catch (const InvalidArgument& e) {
                throw ParseError(e.what(), value.line, value.column);
            }
        } else {
            throw ParseError("unknown attribute \"" + name.text +
                                 "\" (expected size, alg, mode or key)",
                             name.line, name.column);
        }
    }

    std::uint64_t parse_int(const Token& tok) {
        if (tok.text.size() > 18) throw ParseError("integer out of range", tok.line, tok.column);
        return std::stoull(tok.text);
    }

    bool is_symbol(std::string_view s) const {
        return lexer_.peek().kind == TokenKind::symbol && lexer_.peek().text == s;
    }

    void expect_keyword(std::string_view kw) {
        const Token tok = lexer_.take();
        if (tok.kind != TokenKind::ident || tok.text != kw)
            throw ParseError("expected \"" + std::string(kw) + "\", found \"" + tok.text + "\"",
                             tok.line, tok.column);
    }

    void expect_symbol(std::string_view s) {
        const Token tok = lexer_.take();
        if (tok.kind != TokenKind::symbol || tok.text != s)
            throw ParseError("expected \"" + std::string(s) + "\", found \"" +
                                 (tok.kind == TokenKind::end ? "end of input" : tok.text) + "\"",
                             tok.line, tok.column);
    }

    Token expect(TokenKind kind, std::string_view what) {
        const Token tok = lexer_.take();
        if (tok.kind != kind)
            throw ParseError("expected " + std::string(what) + ", found \"" +
                                 (tok.kind == TokenKind::end ? "end of input" : tok.text) + "\"",
                             tok.line, tok.column);
        return tok;
    }

    [[noreturn]] void fail(std::string_view msg) {
        throw ParseError(std::string(msg), lexer_.peek().line, lexer_.peek().column);
    }

    Lexer lexer_;
};

} // namespace

Protocol parse_protocol(std::string_view text) {
    Parser parser(text);
    Protocol protocol = parser.parse_one();
    if (!parser.at_end()) {
        throw ParseError("trailing input after protocol block", 0, 0);
    }
    validate_protocol(protocol);
    return protocol;
}

std::vector<Protocol> parse_corpus(std::string_view text) {
    Parser parser(text);
    std::vector<Protocol> corpus;
    std::set<std::string> ids;
    while (!parser.at_end()) {
        Protocol protocol = parser.parse_one();
        validate_protocol(protocol);
        if (!ids.insert(protocol.id).second)
            throw InvalidArgument("corpus: duplicate protocol id \"" + protocol.id + "\"");
        corpus.push_back(std::move(protocol));
    }
    return corpus;
}

namespace {

void serialize_op(std::ostream& out, const CryptoOp& op) {
    out << category_keyword(op.kind) << "(size=" << op.payload_bytes << ", alg=" << op.algorithm;
    if (op.mode) out << ", mode=" << to_label(*op.mode);
    if (op.key_bits) out << ", key=" << *op.key_bits;
    out << ")";
}

} // namespace

std::string serialize_protocol(const Protocol& protocol) {
    validate_protocol(protocol);
    std::ostringstream out;
    out << "protocol " << protocol.id << " {\n";
    for (const ProtocolStep& step : protocol.steps) {
        out << "  " << step.sender << " -> " << step.receiver << ": ";
        for (std::size_t i = 0; i < step.ops.size(); ++i) {
            if (i > 0) out << "; ";
            serialize_op(out, step.ops[i]);
        }
        out << "\n";
    }
    out << "}\n";
    return out.str();
}

std::string serialize_corpus(const std::vector<Protocol>& corpus) {
    std::ostringstream out;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (i > 0) out << "\n";
        out << serialize_protocol(corpus[i]);
    }
    return out.str();
}

} // namespace protoperf
