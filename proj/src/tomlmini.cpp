#include "cruler/tomlmini.hpp"

#include <cctype>
#include <cstdlib>

#include "cruler/errors.hpp"

namespace cruler {

namespace {

using nlohmann::json;

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;
    int line = 1;

    bool done() const { return pos >= text.size(); }
    char peek() const { return done() ? '\0' : text[pos]; }
    char take() {
        char c = peek();
        ++pos;
        if (c == '\n') ++line;
        return c;
    }

    [[noreturn]] void error(const std::string& message) const {
        fail("config-parse", "line " + std::to_string(line) + ": " + message);
    }

    void skip_ws_inline() {
        while (!done() && (peek() == ' ' || peek() == '\t')) take();
    }

    void skip_ws_and_comments() {
        while (!done()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                take();
            } else if (c == '#') {
                while (!done() && peek() != '\n') take();
            } else {
                break;
            }
        }
    }
};

json parse_value(Cursor& cur);

std::string parse_basic_string(Cursor& cur) {
    if (cur.take() != '"') cur.error("expected opening quote");
    std::string out;
    while (true) {
        if (cur.done()) cur.error("unterminated string");
        char c = cur.take();
        if (c == '"') break;
        if (c == '\\') {
            char esc = cur.take();
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                case 'r': out += '\r'; break;
                case '"': out += '"'; break;
                case '\\': out += '\\'; break;
                default: cur.error(std::string("unsupported escape \\") + esc);
            }
        } else {
            out += c;
        }
    }
    return out;
}

std::string parse_key(Cursor& cur) {
    cur.skip_ws_inline();
    if (cur.peek() == '"') return parse_basic_string(cur);
    std::string out;
    while (!cur.done()) {
        char c = cur.peek();
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
            out += cur.take();
        } else {
            break;
        }
    }
    if (out.empty()) cur.error("expected a key");
    return out;
}

json parse_number_or_literal(Cursor& cur) {
    std::string token;
    while (!cur.done()) {
        char c = cur.peek();
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.' ||
            c == '_') {
            token += cur.take();
        } else {
            break;
        }
    }
    if (token.empty()) cur.error("expected a value");
    if (token == "true") return json(true);
    if (token == "false") return json(false);

    std::string digits;
    for (char c : token)
        if (c != '_') digits += c;
    const bool looks_float = digits.find_first_of(".eE") != std::string::npos &&
                             digits.find_first_not_of("+-0123456789.eE") == std::string::npos;
    char* end = nullptr;
    if (!looks_float) {
        long long v = std::strtoll(digits.c_str(), &end, 10);
        if (end && *end == '\0') return json(v);
    }
    double d = std::strtod(digits.c_str(), &end);
    if (end && *end == '\0') return json(d);
    cur.error("cannot parse value '" + token + "'");
}

json parse_array(Cursor& cur) {
    if (cur.take() != '[') cur.error("expected '['");
    json out = json::array();
    while (true) {
        cur.skip_ws_and_comments();
        if (cur.peek() == ']') {
            cur.take();
            break;
        }
        out.push_back(parse_value(cur));
        cur.skip_ws_and_comments();
        if (cur.peek() == ',') {
            cur.take();
        } else if (cur.peek() != ']') {
            cur.error("expected ',' or ']' in array");
        }
    }
    return out;
}

json parse_inline_table(Cursor& cur) {
    if (cur.take() != '{') cur.error("expected '{'");
    json out = json::object();
    cur.skip_ws_inline();
    if (cur.peek() == '}') {
        cur.take();
        return out;
    }
    while (true) {
        std::string key = parse_key(cur);
        cur.skip_ws_inline();
        if (cur.take() != '=') cur.error("expected '=' in inline table");
        cur.skip_ws_inline();
        out[key] = parse_value(cur);
        cur.skip_ws_inline();
        char c = cur.take();
        if (c == '}') break;
        if (c != ',') cur.error("expected ',' or '}' in inline table");
        cur.skip_ws_inline();
    }
    return out;
}

json parse_value(Cursor& cur) {
    cur.skip_ws_inline();
    char c = cur.peek();
    if (c == '"') return json(parse_basic_string(cur));
    if (c == '[') return parse_array(cur);
    if (c == '{') return parse_inline_table(cur);
    return parse_number_or_literal(cur);
}

std::vector<std::string> parse_table_path(Cursor& cur) {
    std::vector<std::string> path;
    while (true) {
        path.push_back(parse_key(cur));
        cur.skip_ws_inline();
        if (cur.peek() == '.') {
            cur.take();
            continue;
        }
        break;
    }
    return path;
}

json* descend(json& root, const std::vector<std::string>& path) {
    json* node = &root;
    for (const std::string& key : path) {
        if (node->is_array()) node = &node->back();
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        if (node->is_array() && !node->empty()) {
            // keep descending into the latest element for nested tables
        }
    }
    if (node->is_array()) node = &node->back();
    return node;
}

} // namespace

json parse_toml(const std::string& text) {
    Cursor cur{text};
    json root = json::object();
    json* current = &root;

    while (true) {
        cur.skip_ws_and_comments();
        if (cur.done()) break;

        if (cur.peek() == '[') {
            cur.take();
            const bool array_of_tables = cur.peek() == '[';
            if (array_of_tables) cur.take();
            std::vector<std::string> path = parse_table_path(cur);
            cur.skip_ws_inline();
            if (cur.take() != ']') cur.error("expected ']' after table header");
            if (array_of_tables && cur.take() != ']')
                cur.error("expected ']]' after array-of-tables header");

            if (array_of_tables) {
                json* parent = &root;
                for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                    if (parent->is_array()) parent = &parent->back();
                    parent = &(*parent)[path[i]];
                    if (parent->is_null()) *parent = json::object();
                }
                if (parent->is_array()) parent = &parent->back();
                json& arr = (*parent)[path.back()];
                if (arr.is_null()) arr = json::array();
                if (!arr.is_array()) cur.error("redefinition of '" + path.back() + "'");
                arr.push_back(json::object());
                current = &arr.back();
            } else {
                current = descend(root, path);
                if (!current->is_object()) cur.error("redefinition of a table");
            }
            continue;
        }

        std::string key = parse_key(cur);
        cur.skip_ws_inline();
        if (cur.take() != '=') cur.error("expected '=' after key '" + key + "'");
        (*current)[key] = parse_value(cur);
        cur.skip_ws_inline();
        if (!cur.done() && cur.peek() == '#')
            while (!cur.done() && cur.peek() != '\n') cur.take();
        if (!cur.done() && cur.peek() != '\n' && cur.peek() != '\r')
            cur.error("trailing characters after value for key '" + key + "'");
    }
    return root;
}

} // namespace cruler
