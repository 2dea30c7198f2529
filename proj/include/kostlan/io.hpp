#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kostlan::io {

// 17 significant digits: shortest representation that round-trips doubles,
// so regression diffs of emitted tables are exact.
inline std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// Minimal CSV assembler: '#'-prefixed comment lines, fixed header row, numeric
// cells printed with format_g17.
class CsvBuilder {
public:
    void comment(std::string_view line) {
        body_ += "# ";
        body_ += line;
        body_ += '\n';
    }

    void header(const std::vector<std::string>& cols) {
        for (std::size_t i = 0; i < cols.size(); ++i) {
            if (i) body_ += ',';
            body_ += cols[i];
        }
        body_ += '\n';
    }

    void cell(double v) {
        sep();
        body_ += format_g17(v);
    }

    void cell(std::uint64_t v) {
        sep();
        body_ += std::to_string(v);
    }

    void cell(std::string_view v) {
        sep();
        body_ += v;
    }

    void end_row() {
        body_ += '\n';
        row_open_ = false;
    }

    const std::string& str() const { return body_; }

private:
    void sep() {
        if (row_open_) body_ += ',';
        row_open_ = true;
    }
    std::string body_;
    bool row_open_ = false;
};

// temp-then-rename so readers never observe a partial file
inline void write_file_atomic(const std::filesystem::path& target, std::string_view content) {
    namespace fs = std::filesystem;
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            out.close();
            fs::remove(tmp);
            throw std::runtime_error("write failed: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("rename failed: " + target.string() + " (" + ec.message() + ")");
    }
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + p.string());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace kostlan::io
