#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cotsim::toml {

/// Parse failure with 1-based source line for diagnostics.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

class Value;
using Array = std::vector<Value>;
using Table = std::vector<std::pair<std::string, Value>>;  // insertion-ordered

/// A TOML-subset value: string, number (always double), bool, array, table.
class Value {
public:
    using Data = std::variant<std::monostate, bool, double, std::string, Array, Table>;

    Value() = default;
    explicit Value(Data d, int line = 0) : data(std::move(d)), line(line) {}

    Data data;
    int line = 0;

    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_number() const { return std::holds_alternative<double>(data); }
    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    bool is_table() const { return std::holds_alternative<Table>(data); }

    bool as_bool() const;
    double as_number() const;
    const std::string& as_string() const;
    const Array& as_array() const;
    const Table& as_table() const;
    Table& as_table();
};

/// Looks up a direct child; nullptr when absent.
const Value* find(const Table& table, const std::string& key);

/// Parses the supported TOML subset: [table] and [[array-of-table]] headers,
/// `key = value` pairs, strings, numbers, booleans, and (nested, possibly
/// multi-line) arrays. Duplicate keys in one table are an error.
Table parse(const std::string& text);

}  // namespace cotsim::toml
