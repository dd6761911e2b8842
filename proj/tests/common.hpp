#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <unistd.h>
#include <vector>

#include "kinebench/types.hpp"

namespace kbtest {

inline kinebench::AngleSeries series(std::vector<double> values, double rate_hz = 30.0) {
    return kinebench::AngleSeries::make(std::move(values), rate_hz, "test");
}

inline kinebench::AngleSeries series_with_mask(std::vector<double> values,
                                               std::vector<std::uint8_t> mask,
                                               double rate_hz = 30.0) {
    auto s = kinebench::AngleSeries::make(std::move(values), rate_hz, "test");
    s.valid = std::move(mask);
    return s;
}

// unique writable scratch dir, removed on destruction
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        dir_ = std::filesystem::temp_directory_path() /
               ("kinebench_" + tag + "_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        std::filesystem::create_directories(dir_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(dir_, ec);
    }
    const std::filesystem::path& path() const { return dir_; }

private:
    std::filesystem::path dir_;
};

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

inline std::size_t count_occurrences(std::string_view text, std::string_view needle) {
    std::size_t count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string_view::npos) {
        ++count;
        pos += needle.size();
    }
    return count;
}

// Minimal well-formedness check: balanced, properly nested tags, a single
// root, no stray '<' in text. Attribute values in the emitted SVG never
// contain '<' or '>'.
inline bool xml_well_formed(std::string_view text) {
    std::vector<std::string> stack;
    std::size_t i = 0;
    int roots = 0;
    bool seen_root = false;
    while (i < text.size()) {
        if (text[i] != '<') {
            if (text[i] == '>') return false;
            ++i;
            continue;
        }
        auto end = text.find('>', i);
        if (end == std::string_view::npos) return false;
        std::string_view tag = text.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty()) return false;
        if (tag.front() == '?') continue; // declaration
        if (tag.substr(0, 3) == "!--") continue; // comment (none emitted)
        bool closing = tag.front() == '/';
        bool self_closing = tag.back() == '/';
        std::string_view body = tag;
        if (closing) body.remove_prefix(1);
        if (self_closing) body.remove_suffix(1);
        auto name_end = body.find_first_of(" \t\n");
        std::string name(body.substr(0, name_end));
        if (name.empty()) return false;
        if (closing) {
            if (stack.empty() || stack.back() != name) return false;
            stack.pop_back();
        } else if (!self_closing) {
            if (stack.empty()) {
                if (seen_root) return false;
                seen_root = true;
                ++roots;
            }
            stack.push_back(name);
        } else if (stack.empty()) {
            return false; // self-closing root would be odd for our plots
        }
    }
    return stack.empty() && roots == 1;
}

// every value of attr="..." occurring in the text, in order; the attribute
// name must start after a non-name character so "y" does not match "family"
inline std::vector<std::string> attr_values(std::string_view text, std::string_view attr) {
    std::vector<std::string> out;
    const std::string needle = std::string(attr) + "=\"";
    auto is_name_char = [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
               c == '-' || c == '_';
    };
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string_view::npos) {
        if (pos > 0 && is_name_char(text[pos - 1])) {
            pos += needle.size();
            continue;
        }
        pos += needle.size();
        auto end = text.find('"', pos);
        if (end == std::string_view::npos) break;
        out.emplace_back(text.substr(pos, end - pos));
        pos = end + 1;
    }
    return out;
}

} // namespace kbtest
