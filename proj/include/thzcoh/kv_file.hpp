#pragma once

// Line-oriented `key = value` files used for material presets and scenario
// configs. Values are either double-quoted strings or bare tokens; `#` starts
// a comment outside quotes. Keys may repeat only where the consumer allows it.

#include "thzcoh/error.hpp"
#include "thzcoh/units.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace thzcoh {

struct KeyValueEntry {
    std::string key;
    std::string value;
    int line = 0;
};

class KeyValueFile {
public:
    KeyValueFile() = default;

    static KeyValueFile parse(std::istream& in, std::string source = "<input>")
    {
        KeyValueFile file;
        file.source_ = std::move(source);
        std::string raw;
        int line_no = 0;
        while (std::getline(in, raw)) {
            ++line_no;
            const auto line = strip_comment(raw);
            const auto body = detail::trim(line);
            if (body.empty()) {
                continue;
            }
            const auto eq = body.find('=');
            if (eq == std::string_view::npos) {
                throw ValidationError(file.where(line_no) + ": expected 'key = value'");
            }
            auto key = std::string(detail::trim(body.substr(0, eq)));
            auto value = detail::trim(body.substr(eq + 1));
            if (key.empty()) {
                throw ValidationError(file.where(line_no) + ": empty key");
            }
            if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
                value = value.substr(1, value.size() - 2);
            } else if (!value.empty() && (value.front() == '"' || value.back() == '"')) {
                throw ValidationError(file.where(line_no) + ": unbalanced quote");
            }
            file.entries_.push_back({std::move(key), std::string(value), line_no});
        }
        return file;
    }

    static KeyValueFile parse_string(std::string_view text, std::string source = "<string>")
    {
        std::istringstream in{std::string(text)};
        return parse(in, std::move(source));
    }

    static KeyValueFile load(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) {
            throw ValidationError("cannot open '" + path + "'");
        }
        return parse(in, path);
    }

    const std::string& source() const { return source_; }
    const std::vector<KeyValueEntry>& entries() const { return entries_; }

    bool contains(std::string_view key) const
    {
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const auto& e) { return e.key == key; });
    }

    /// Value of a key that may appear at most once.
    std::optional<std::string> get(std::string_view key) const
    {
        const KeyValueEntry* found = nullptr;
        for (const auto& e : entries_) {
            if (e.key != key) {
                continue;
            }
            if (found != nullptr) {
                throw ValidationError(where(e.line) + ": duplicate key '" + e.key + "'");
            }
            found = &e;
        }
        if (found == nullptr) {
            return std::nullopt;
        }
        return found->value;
    }

    std::string require(std::string_view key) const
    {
        auto v = get(key);
        if (!v) {
            throw ValidationError(source_ + ": missing required key '" + std::string(key) + "'");
        }
        return *v;
    }

    std::vector<std::string> get_all(std::string_view key) const
    {
        std::vector<std::string> out;
        for (const auto& e : entries_) {
            if (e.key == key) {
                out.push_back(e.value);
            }
        }
        return out;
    }

    std::optional<double> quantity(std::string_view key, Dimension dim) const
    {
        auto v = get(key);
        if (!v) {
            return std::nullopt;
        }
        try {
            return parse_quantity(*v, dim);
        } catch (const ValidationError& e) {
            throw ValidationError(source_ + ": key '" + std::string(key) + "': " + e.what());
        }
    }

    double require_quantity(std::string_view key, Dimension dim) const
    {
        auto v = quantity(key, dim);
        if (!v) {
            throw ValidationError(source_ + ": missing required key '" + std::string(key) + "'");
        }
        return *v;
    }

    /// Rejects any key not in `allowed`.
    void check_keys(const std::set<std::string, std::less<>>& allowed) const
    {
        for (const auto& e : entries_) {
            if (!allowed.contains(e.key)) {
                throw ValidationError(where(e.line) + ": unknown key '" + e.key + "'");
            }
        }
    }

    std::string where(int line) const { return source_ + ":" + std::to_string(line); }

private:
    static std::string_view strip_comment(std::string_view line)
    {
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') {
                quoted = !quoted;
            } else if (line[i] == '#' && !quoted) {
                return line.substr(0, i);
            }
        }
        return line;
    }

    std::string source_;
    std::vector<KeyValueEntry> entries_;
};

} // namespace thzcoh
