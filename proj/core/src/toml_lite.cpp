#include "cotsim/toml_lite.hpp"

#include <cctype>
#include <charconv>

namespace cotsim::toml {

bool Value::as_bool() const {
    if (!is_bool()) throw ParseError(line, "expected a boolean");
    return std::get<bool>(data);
}

double Value::as_number() const {
    if (!is_number()) throw ParseError(line, "expected a number");
    return std::get<double>(data);
}

const std::string& Value::as_string() const {
    if (!is_string()) throw ParseError(line, "expected a string");
    return std::get<std::string>(data);
}

const Array& Value::as_array() const {
    if (!is_array()) throw ParseError(line, "expected an array");
    return std::get<Array>(data);
}

const Table& Value::as_table() const {
    if (!is_table()) throw ParseError(line, "expected a table");
    return std::get<Table>(data);
}

Table& Value::as_table() {
    if (!is_table()) throw ParseError(line, "expected a table");
    return std::get<Table>(data);
}

const Value* find(const Table& table, const std::string& key) {
    for (const auto& [k, v] : table) {
        if (k == key) return &v;
    }
    return nullptr;
}

namespace {

Value* find_mut(Table& table, const std::string& key) {
    for (auto& [k, v] : table) {
        if (k == key) return &v;
    }
    return nullptr;
}

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    Table parse() {
        Table root;
        Table* current = &root;
        skip_whitespace_and_comments();
        while (!at_end()) {
            if (peek() == '[') {
                current = parse_header(root);
            } else {
                parse_key_value(*current);
            }
            skip_whitespace_and_comments();
        }
        return root;
    }

private:
    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }

    char advance() {
        char c = text_[pos_++];
        if (c == '\n') ++line_;
        return c;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, msg); }

    void skip_inline_space() {
        while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) advance();
    }

    void skip_whitespace_and_comments() {
        while (!at_end()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                advance();
            } else if (c == '#') {
                while (!at_end() && peek() != '\n') advance();
            } else {
                break;
            }
        }
    }

    void expect_line_end() {
        skip_inline_space();
        if (!at_end() && peek() == '#') {
            while (!at_end() && peek() != '\n') advance();
        }
        if (!at_end() && peek() != '\n') {
            fail("unexpected trailing characters");
        }
    }

    static bool is_key_char(char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
    }

    std::string parse_key() {
        std::string key;
        while (!at_end() && is_key_char(peek())) key.push_back(advance());
        if (key.empty()) fail("expected a key");
        return key;
    }

    std::vector<std::string> parse_header_path() {
        std::vector<std::string> path;
        for (;;) {
            skip_inline_space();
            path.push_back(parse_key());
            skip_inline_space();
            if (!at_end() && peek() == '.') {
                advance();
                continue;
            }
            break;
        }
        return path;
    }

    // Descend to the table named by path[0..n-2], creating tables as needed.
    // Arrays along the way resolve to their last element.
    Table* descend(Table& root, const std::vector<std::string>& path, std::size_t depth) {
        Table* t = &root;
        for (std::size_t i = 0; i < depth; ++i) {
            Value* v = find_mut(*t, path[i]);
            if (v == nullptr) {
                t->emplace_back(path[i], Value(Table{}, line_));
                v = &t->back().second;
            }
            if (v->is_table()) {
                t = &v->as_table();
            } else if (v->is_array()) {
                Array& arr = std::get<Array>(v->data);
                if (arr.empty() || !arr.back().is_table()) {
                    fail("'" + path[i] + "' is not a table");
                }
                t = &arr.back().as_table();
            } else {
                fail("'" + path[i] + "' is not a table");
            }
        }
        return t;
    }

    Table* parse_header(Table& root) {
        advance();  // '['
        const bool array_of_tables = !at_end() && peek() == '[';
        if (array_of_tables) advance();

        const std::vector<std::string> path = parse_header_path();
        if (at_end() || advance() != ']') fail("expected ']' in table header");
        if (array_of_tables && (at_end() || advance() != ']')) fail("expected ']]' in table header");
        expect_line_end();

        Table* parent = descend(root, path, path.size() - 1);
        const std::string& name = path.back();
        Value* v = find_mut(*parent, name);
        if (array_of_tables) {
            if (v == nullptr) {
                parent->emplace_back(name, Value(Array{}, line_));
                v = &parent->back().second;
            }
            if (!v->is_array()) fail("'" + name + "' redefined as array of tables");
            Array& arr = std::get<Array>(v->data);
            arr.emplace_back(Value(Table{}, line_));
            return &arr.back().as_table();
        }
        if (v == nullptr) {
            parent->emplace_back(name, Value(Table{}, line_));
            v = &parent->back().second;
        }
        if (!v->is_table()) fail("'" + name + "' redefined as table");
        return &v->as_table();
    }

    void parse_key_value(Table& table) {
        const std::vector<std::string> path = parse_header_path();  // dotted keys allowed
        skip_inline_space();
        if (at_end() || advance() != '=') fail("expected '=' after key '" + path.back() + "'");
        skip_inline_space();
        Table* target = descend(table, path, path.size() - 1);
        if (find(*target, path.back()) != nullptr) fail("duplicate key '" + path.back() + "'");
        Value v = parse_value();
        expect_line_end();
        target->emplace_back(path.back(), std::move(v));
    }

    Value parse_value() {
        if (at_end()) fail("expected a value");
        const int line = line_;
        char c = peek();
        if (c == '"') return Value(parse_string(), line);
        if (c == '[') return Value(parse_array(), line);
        return parse_scalar(line);
    }

    std::string parse_string() {
        advance();  // opening quote
        std::string out;
        for (;;) {
            if (at_end()) fail("unterminated string");
            char c = advance();
            if (c == '"') break;
            if (c == '\n') fail("unterminated string");
            if (c == '\\') {
                if (at_end()) fail("unterminated escape");
                char e = advance();
                switch (e) {
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    default: fail(std::string("unsupported escape '\\") + e + "'");
                }
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    Value::Data parse_array() {
        advance();  // '['
        Array arr;
        for (;;) {
            skip_whitespace_and_comments();
            if (at_end()) fail("unterminated array");
            if (peek() == ']') {
                advance();
                break;
            }
            arr.push_back(parse_value());
            skip_whitespace_and_comments();
            if (at_end()) fail("unterminated array");
            if (peek() == ',') {
                advance();
            } else if (peek() != ']') {
                fail("expected ',' or ']' in array");
            }
        }
        return arr;
    }

    Value parse_scalar(int line) {
        std::string token;
        while (!at_end()) {
            char c = peek();
            if (c == '\n' || c == '#' || c == ',' || c == ']' || c == ' ' || c == '\t' || c == '\r') break;
            token.push_back(advance());
        }
        if (token == "true") return Value(true, line);
        if (token == "false") return Value(false, line);
        double number = 0.0;
        const char* begin = token.data();
        const char* end = begin + token.size();
        auto [ptr, ec] = std::from_chars(begin, end, number);
        if (ec != std::errc() || ptr != end || token.empty()) {
            fail("invalid value '" + token + "'");
        }
        return Value(number, line);
    }

    const std::string& text_;
    std::size_t pos_ = 0;
    int line_ = 1;
};

}  // namespace

Table parse(const std::string& text) { return Parser(text).parse(); }

}  // namespace cotsim::toml
