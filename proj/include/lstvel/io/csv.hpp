#pragma once

#include "../core/errors.hpp"

#include <zlib.h>

#include <charconv>
#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

namespace lstvel::io {

inline bool ends_with(std::string_view s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

/// Reads lines from a plain or gzip-compressed (".gz") file.
class LineReader {
public:
    explicit LineReader(const std::string &path) : path_(path)
    {
        if (ends_with(path, ".gz")) {
            gz_ = gzopen(path.c_str(), "rb");
            if (!gz_)
                throw Error(ErrorKind::Io, "cannot open " + path);
            gzbuffer(gz_, 1 << 17);
        } else {
            file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
            if (!*file_)
                throw Error(ErrorKind::Io, "cannot open " + path);
        }
    }

    ~LineReader()
    {
        if (gz_)
            gzclose(gz_);
    }

    LineReader(const LineReader &) = delete;
    LineReader &operator=(const LineReader &) = delete;

    bool next(std::string &line)
    {
        line.clear();
        if (file_) {
            if (!std::getline(*file_, line))
                return false;
        } else {
            char buf[4096];
            bool any = false;
            while (gzgets(gz_, buf, sizeof buf)) {
                any = true;
                line.append(buf);
                if (!line.empty() && line.back() == '\n') {
                    line.pop_back();
                    break;
                }
            }
            if (!any)
                return false;
        }
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        ++line_number_;
        return true;
    }

    std::size_t line_number() const noexcept { return line_number_; }
    const std::string &path() const noexcept { return path_; }

private:
    std::string path_;
    std::unique_ptr<std::ifstream> file_;
    gzFile gz_ = nullptr;
    std::size_t line_number_ = 0;
};

inline std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
        s = s.substr(1, s.size() - 2);
    return s;
}

/// Splits on commas. Fields in this format never contain commas.
inline void split_fields(std::string_view line, std::vector<std::string_view> &out)
{
    out.clear();
    std::size_t start = 0;
    for (;;) {
        auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
}

template <typename Int>
Int parse_int(std::string_view s, const char *what)
{
    Int v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty())
        throw Error(ErrorKind::ParseError, std::string("invalid ") + what + " '" + std::string(s) + "'");
    return v;
}

/// Column lookup by header name, with optional renaming of canonical names
/// to the names a particular export uses.
class HeaderMap {
public:
    using Mapping = std::unordered_map<std::string, std::string>;

    HeaderMap(std::string_view header_line, const Mapping &mapping = {}) : mapping_(mapping)
    {
        std::vector<std::string_view> fields;
        split_fields(header_line, fields);
        for (std::size_t i = 0; i < fields.size(); ++i)
            index_.emplace(std::string(fields[i]), i);
    }

    std::optional<std::size_t> find(const std::string &canonical) const
    {
        auto m = mapping_.find(canonical);
        const std::string &name = m == mapping_.end() ? canonical : m->second;
        auto it = index_.find(name);
        if (it == index_.end())
            return std::nullopt;
        return it->second;
    }

    std::size_t require(const std::string &canonical, const std::string &path) const
    {
        auto i = find(canonical);
        if (!i)
            throw Error(ErrorKind::ParseError, path + ":1: missing column '" + canonical + "'");
        return *i;
    }

private:
    Mapping mapping_;
    std::unordered_map<std::string, std::size_t> index_;
};

/// Shortest fixed-notation decimal that round-trips the double.
inline std::string format_double(double v)
{
    char buf[512];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
    if (ec != std::errc())
        throw Error(ErrorKind::Overflow, "cannot render double");
    return std::string(buf, p);
}

/// Writes `content` to `path` via a temporary file and rename.
inline void write_atomically(const std::string &path, const std::string &content)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::Io, "cannot write " + tmp);
        out << content;
        if (!out.flush())
            throw Error(ErrorKind::Io, "cannot write " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw Error(ErrorKind::Io, "cannot rename " + tmp + " to " + path);
}

} // namespace lstvel::io
