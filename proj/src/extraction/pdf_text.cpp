#include "ragqa/extraction/pdf_text.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <unordered_map>

#include "ragqa/util/text.hpp"

namespace ragqa::pdf {
namespace {

// ---------------------------------------------------------------------------
// Object model

struct Object;
using Array = std::vector<Object>;

struct Ref {
    int num = 0;
    int gen = 0;
};

enum class Kind { null, boolean, number, name, string, array, dict, ref, stream, keyword };

struct Object {
    Kind kind = Kind::null;
    bool boolean = false;
    double number = 0;
    std::string str;  // name, string bytes, or keyword
    Array items;      // array items, or dict values
    std::vector<std::string> keys;  // dict keys, parallel to items
    Ref ref;
    std::string_view stream_data;  // raw (still encoded) bytes for streams

    bool is(Kind k) const noexcept { return kind == k; }
    bool is_dict() const noexcept { return kind == Kind::dict || kind == Kind::stream; }

    const Object* get(std::string_view key) const {
        if (!is_dict()) return nullptr;
        for (std::size_t i = 0; i < keys.size(); ++i) {
            if (keys[i] == key) return &items[i];
        }
        return nullptr;
    }
};

const Object kNull{};

bool is_ws(unsigned char c) { return c == 0 || c == 9 || c == 10 || c == 12 || c == 13 || c == 32; }
bool is_delim(unsigned char c) {
    return c == '(' || c == ')' || c == '<' || c == '>' || c == '[' || c == ']' || c == '{' || c == '}' ||
           c == '/' || c == '%';
}

int hex_val(unsigned char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

// ---------------------------------------------------------------------------
// Lexer / parser shared by file-level objects and content streams.

class Parser {
public:
    explicit Parser(std::string_view data, std::size_t pos = 0) : d_(data), p_(pos) {}

    std::size_t pos() const noexcept { return p_; }
    void seek(std::size_t p) noexcept { p_ = p; }
    bool at_end() {
        skip_ws();
        return p_ >= d_.size();
    }

    void skip_ws() {
        while (p_ < d_.size()) {
            const auto c = static_cast<unsigned char>(d_[p_]);
            if (is_ws(c)) {
                ++p_;
            } else if (c == '%') {
                while (p_ < d_.size() && d_[p_] != '\n' && d_[p_] != '\r') ++p_;
            } else {
                break;
            }
        }
    }

    /// Parses one object. References "n g R" are folded into Kind::ref when
    /// `allow_refs` is set (never inside content streams).
    Object parse(bool allow_refs = true, int depth = 0) {
        skip_ws();
        Object o;
        if (p_ >= d_.size() || depth > 64) return o;
        const auto c = static_cast<unsigned char>(d_[p_]);

        if (c == '/') {
            o.kind = Kind::name;
            o.str = read_name();
            return o;
        }
        if (c == '(') {
            o.kind = Kind::string;
            o.str = read_literal_string();
            return o;
        }
        if (c == '<') {
            if (p_ + 1 < d_.size() && d_[p_ + 1] == '<') {
                p_ += 2;
                o.kind = Kind::dict;
                while (true) {
                    skip_ws();
                    if (p_ >= d_.size()) break;
                    if (d_[p_] == '>' && p_ + 1 < d_.size() && d_[p_ + 1] == '>') {
                        p_ += 2;
                        break;
                    }
                    if (d_[p_] != '/') {
                        // Garbage inside a dict: skip one token.
                        (void)parse(allow_refs, depth + 1);
                        continue;
                    }
                    std::string key = read_name();
                    Object value = parse(allow_refs, depth + 1);
                    o.keys.push_back(std::move(key));
                    o.items.push_back(std::move(value));
                }
                return o;
            }
            o.kind = Kind::string;
            o.str = read_hex_string();
            return o;
        }
        if (c == '[') {
            ++p_;
            o.kind = Kind::array;
            while (true) {
                skip_ws();
                if (p_ >= d_.size()) break;
                if (d_[p_] == ']') {
                    ++p_;
                    break;
                }
                o.items.push_back(parse(allow_refs, depth + 1));
            }
            return o;
        }
        if (c == ']' || c == ')' || c == '>' || c == '{' || c == '}') {
            ++p_;
            o.kind = Kind::keyword;
            o.str = std::string(1, static_cast<char>(c));
            return o;
        }
        if (std::isdigit(c) || c == '-' || c == '+' || c == '.') {
            const std::size_t start = p_;
            const double v = read_number();
            if (allow_refs && v >= 0 && std::floor(v) == v && d_.substr(start, p_ - start).find('.') == std::string_view::npos) {
                const std::size_t save = p_;
                skip_ws();
                if (p_ < d_.size() && std::isdigit(static_cast<unsigned char>(d_[p_]))) {
                    const std::size_t gen_start = p_;
                    const double gen = read_number();
                    const bool gen_int = d_.substr(gen_start, p_ - gen_start).find('.') == std::string_view::npos;
                    skip_ws();
                    if (gen_int && p_ < d_.size() && d_[p_] == 'R' &&
                        (p_ + 1 >= d_.size() || is_ws(static_cast<unsigned char>(d_[p_ + 1])) ||
                         is_delim(static_cast<unsigned char>(d_[p_ + 1])))) {
                        ++p_;
                        o.kind = Kind::ref;
                        o.ref = Ref{static_cast<int>(v), static_cast<int>(gen)};
                        return o;
                    }
                }
                p_ = save;
            }
            o.kind = Kind::number;
            o.number = v;
            return o;
        }
        // Bare keyword: true/false/null/operators.
        const std::size_t start = p_;
        while (p_ < d_.size() && !is_ws(static_cast<unsigned char>(d_[p_])) &&
               !is_delim(static_cast<unsigned char>(d_[p_]))) {
            ++p_;
        }
        if (p_ == start) {
            ++p_;
            return o;
        }
        const std::string_view word = d_.substr(start, p_ - start);
        if (word == "true" || word == "false") {
            o.kind = Kind::boolean;
            o.boolean = word == "true";
        } else if (word == "null") {
            o.kind = Kind::null;
        } else {
            o.kind = Kind::keyword;
            o.str = std::string(word);
        }
        return o;
    }

    std::string_view data() const noexcept { return d_; }

private:
    double read_number() {
        const std::size_t start = p_;
        if (p_ < d_.size() && (d_[p_] == '-' || d_[p_] == '+')) ++p_;
        while (p_ < d_.size() && (std::isdigit(static_cast<unsigned char>(d_[p_])) || d_[p_] == '.')) ++p_;
        // Tolerate doubled signs like "--5" emitted by some writers.
        while (p_ < d_.size() && d_[p_] == '-' && p_ == start + 1) ++p_;
        try {
            return std::stod(std::string(d_.substr(start, p_ - start)));
        } catch (...) {
            return 0;
        }
    }

    std::string read_name() {
        ++p_;  // '/'
        std::string out;
        while (p_ < d_.size()) {
            const auto c = static_cast<unsigned char>(d_[p_]);
            if (is_ws(c) || is_delim(c)) break;
            if (c == '#' && p_ + 2 < d_.size() && hex_val(d_[p_ + 1]) >= 0 && hex_val(d_[p_ + 2]) >= 0) {
                out.push_back(static_cast<char>(hex_val(d_[p_ + 1]) * 16 + hex_val(d_[p_ + 2])));
                p_ += 3;
            } else {
                out.push_back(static_cast<char>(c));
                ++p_;
            }
        }
        return out;
    }

    std::string read_literal_string() {
        ++p_;  // '('
        std::string out;
        int nesting = 1;
        while (p_ < d_.size()) {
            const char c = d_[p_++];
            if (c == '\\') {
                if (p_ >= d_.size()) break;
                const char e = d_[p_++];
                switch (e) {
                    case 'n': out.push_back('\n'); break;
                    case 'r': out.push_back('\r'); break;
                    case 't': out.push_back('\t'); break;
                    case 'b': out.push_back('\b'); break;
                    case 'f': out.push_back('\f'); break;
                    case '\r':
                        if (p_ < d_.size() && d_[p_] == '\n') ++p_;
                        break;
                    case '\n': break;
                    default:
                        if (e >= '0' && e <= '7') {
                            int v = e - '0';
                            for (int k = 0; k < 2 && p_ < d_.size() && d_[p_] >= '0' && d_[p_] <= '7'; ++k) {
                                v = v * 8 + (d_[p_++] - '0');
                            }
                            out.push_back(static_cast<char>(v & 0xFF));
                        } else {
                            out.push_back(e);
                        }
                }
            } else if (c == '(') {
                ++nesting;
                out.push_back(c);
            } else if (c == ')') {
                if (--nesting == 0) break;
                out.push_back(c);
            } else {
                out.push_back(c);
            }
        }
        return out;
    }

    std::string read_hex_string() {
        ++p_;  // '<'
        std::string out;
        int hi = -1;
        while (p_ < d_.size() && d_[p_] != '>') {
            const int v = hex_val(static_cast<unsigned char>(d_[p_++]));
            if (v < 0) continue;
            if (hi < 0) {
                hi = v;
            } else {
                out.push_back(static_cast<char>(hi * 16 + v));
                hi = -1;
            }
        }
        if (hi >= 0) out.push_back(static_cast<char>(hi * 16));
        if (p_ < d_.size()) ++p_;
        return out;
    }

    std::string_view d_;
    std::size_t p_;
};

// ---------------------------------------------------------------------------
// Stream filters

std::string inflate(std::string_view in) {
    for (const int window_bits : {MAX_WBITS, -MAX_WBITS}) {
        z_stream zs{};
        if (inflateInit2(&zs, window_bits) != Z_OK) continue;
        zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(in.data()));
        zs.avail_in = static_cast<uInt>(in.size());
        std::string out;
        std::array<char, 16384> buf{};
        int rc = Z_OK;
        while (rc == Z_OK) {
            zs.next_out = reinterpret_cast<Bytef*>(buf.data());
            zs.avail_out = static_cast<uInt>(buf.size());
            rc = inflate(&zs, Z_NO_FLUSH);
            out.append(buf.data(), buf.size() - zs.avail_out);
            if (rc == Z_BUF_ERROR && zs.avail_in == 0) break;
        }
        inflateEnd(&zs);
        // Truncated streams still yield a usable prefix.
        if (rc == Z_STREAM_END || !out.empty()) return out;
    }
    throw PdfError("corrupt Flate stream");
}

std::string ascii_hex_decode(std::string_view in) {
    std::string out;
    int hi = -1;
    for (const char ch : in) {
        if (ch == '>') break;
        const int v = hex_val(static_cast<unsigned char>(ch));
        if (v < 0) continue;
        if (hi < 0) {
            hi = v;
        } else {
            out.push_back(static_cast<char>(hi * 16 + v));
            hi = -1;
        }
    }
    if (hi >= 0) out.push_back(static_cast<char>(hi * 16));
    return out;
}

std::string ascii85_decode(std::string_view in) {
    std::string out;
    std::uint32_t tuple = 0;
    int count = 0;
    for (std::size_t i = 0; i < in.size(); ++i) {
        const char c = in[i];
        if (c == '~') break;
        if (is_ws(static_cast<unsigned char>(c))) continue;
        if (c == 'z' && count == 0) {
            out.append(4, '\0');
            continue;
        }
        if (c < '!' || c > 'u') continue;
        tuple = tuple * 85 + static_cast<std::uint32_t>(c - '!');
        if (++count == 5) {
            for (int k = 3; k >= 0; --k) out.push_back(static_cast<char>((tuple >> (8 * k)) & 0xFF));
            tuple = 0;
            count = 0;
        }
    }
    if (count > 1) {
        for (int k = count; k < 5; ++k) tuple = tuple * 85 + 84;
        for (int k = 0; k < count - 1; ++k) out.push_back(static_cast<char>((tuple >> (8 * (3 - k))) & 0xFF));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fonts

// WinAnsiEncoding code points for 0x80..0x9F; everything else maps as Latin-1.
constexpr std::array<char32_t, 32> kWinAnsiHigh{
    0x20AC, 0xFFFD, 0x201A, 0x0192, 0x201E, 0x2026, 0x2020, 0x2021, 0x02C6, 0x2030, 0x0160,
    0x2039, 0x0152, 0xFFFD, 0x017D, 0xFFFD, 0xFFFD, 0x2018, 0x2019, 0x201C, 0x201D, 0x2022,
    0x2013, 0x2014, 0x02DC, 0x2122, 0x0161, 0x203A, 0x0153, 0xFFFD, 0x017E, 0x0178};

char32_t win_ansi(unsigned char c) {
    if (c >= 0x80 && c <= 0x9F) return kWinAnsiHigh[c - 0x80];
    return c;
}

std::u32string glyph_name_to_unicode(std::string_view name) {
    static const std::unordered_map<std::string_view, char32_t> kNames{
        {"space", ' '},        {"exclam", '!'},        {"quotedbl", '"'},     {"numbersign", '#'},
        {"dollar", '$'},       {"percent", '%'},       {"ampersand", '&'},    {"quotesingle", '\''},
        {"parenleft", '('},    {"parenright", ')'},    {"asterisk", '*'},     {"plus", '+'},
        {"comma", ','},        {"hyphen", '-'},        {"period", '.'},       {"slash", '/'},
        {"zero", '0'},         {"one", '1'},           {"two", '2'},          {"three", '3'},
        {"four", '4'},         {"five", '5'},          {"six", '6'},          {"seven", '7'},
        {"eight", '8'},        {"nine", '9'},          {"colon", ':'},        {"semicolon", ';'},
        {"less", '<'},         {"equal", '='},         {"greater", '>'},      {"question", '?'},
        {"at", '@'},           {"bracketleft", '['},   {"backslash", '\\'},   {"bracketright", ']'},
        {"underscore", '_'},   {"quoteleft", 0x2018},  {"quoteright", 0x2019}, {"quotedblleft", 0x201C},
        {"quotedblright", 0x201D}, {"endash", 0x2013}, {"emdash", 0x2014},    {"bullet", 0x2022},
        {"ellipsis", 0x2026},  {"minus", 0x2212},      {"fi", 0xFB01},        {"fl", 0xFB02},
        {"ff", 0xFB00},        {"ffi", 0xFB03},        {"ffl", 0xFB04},       {"braceleft", '{'},
        {"braceright", '}'},   {"bar", '|'},           {"asciitilde", '~'},   {"asciicircum", '^'},
        {"grave", '`'},        {"copyright", 0xA9},    {"registered", 0xAE},  {"degree", 0xB0},
    };
    if (name.size() == 1 && std::isalpha(static_cast<unsigned char>(name[0]))) {
        return std::u32string(1, static_cast<char32_t>(name[0]));
    }
    if (auto it = kNames.find(name); it != kNames.end()) return std::u32string(1, it->second);
    if (name.size() == 7 && name.substr(0, 3) == "uni") {
        char32_t cp = 0;
        for (const char c : name.substr(3)) {
            const int v = hex_val(static_cast<unsigned char>(c));
            if (v < 0) return {};
            cp = cp * 16 + static_cast<char32_t>(v);
        }
        return std::u32string(1, cp);
    }
    return {};
}

std::u32string utf16be_to_u32(std::string_view bytes) {
    std::u32string out;
    for (std::size_t i = 0; i + 1 < bytes.size(); i += 2) {
        char32_t u = (static_cast<unsigned char>(bytes[i]) << 8) | static_cast<unsigned char>(bytes[i + 1]);
        if (u >= 0xD800 && u <= 0xDBFF && i + 3 < bytes.size()) {
            const char32_t lo =
                (static_cast<unsigned char>(bytes[i + 2]) << 8) | static_cast<unsigned char>(bytes[i + 3]);
            if (lo >= 0xDC00 && lo <= 0xDFFF) {
                u = 0x10000 + ((u - 0xD800) << 10) + (lo - 0xDC00);
                i += 2;
            }
        }
        out.push_back(u);
    }
    return out;
}

std::uint32_t code_of(std::string_view bytes) {
    std::uint32_t v = 0;
    for (const char c : bytes) v = (v << 8) | static_cast<unsigned char>(c);
    return v;
}

struct Font {
    bool two_byte = false;       // Type0 / composite without explicit codespace info
    bool has_cmap = false;
    std::vector<std::pair<std::size_t, std::pair<std::uint32_t, std::uint32_t>>> codespaces;  // len, [lo, hi]
    std::unordered_map<std::uint32_t, std::u32string> cmap;
    std::array<std::u32string, 256> simple{};  // /Differences overrides

    void parse_cmap(std::string_view data) {
        Parser p(data);
        std::vector<Object> operands;
        while (!p.at_end()) {
            Object o = p.parse(false);
            if (o.kind != Kind::keyword) {
                operands.push_back(std::move(o));
                continue;
            }
            if (o.str == "endcodespacerange") {
                for (std::size_t i = 0; i + 1 < operands.size(); i += 2) {
                    const auto& lo = operands[i].str;
                    codespaces.push_back({lo.size(), {code_of(lo), code_of(operands[i + 1].str)}});
                }
            } else if (o.str == "endbfchar") {
                for (std::size_t i = 0; i + 1 < operands.size(); i += 2) {
                    cmap[code_of(operands[i].str)] = utf16be_to_u32(operands[i + 1].str);
                }
            } else if (o.str == "endbfrange") {
                for (std::size_t i = 0; i + 2 < operands.size(); i += 3) {
                    const std::uint32_t lo = code_of(operands[i].str);
                    const std::uint32_t hi = code_of(operands[i + 1].str);
                    if (hi < lo || hi - lo > 0xFFFF) continue;
                    const Object& dst = operands[i + 2];
                    if (dst.kind == Kind::array) {
                        for (std::uint32_t c = lo; c <= hi && c - lo < dst.items.size(); ++c) {
                            cmap[c] = utf16be_to_u32(dst.items[c - lo].str);
                        }
                    } else {
                        std::u32string base = utf16be_to_u32(dst.str);
                        if (base.empty()) continue;
                        for (std::uint32_t c = lo; c <= hi; ++c) {
                            std::u32string v = base;
                            v.back() += c - lo;
                            cmap[c] = std::move(v);
                        }
                    }
                }
            }
            if (o.str.starts_with("end") || o.str.starts_with("begin")) operands.clear();
        }
        has_cmap = !cmap.empty();
    }

    std::string decode(std::string_view bytes) const {
        std::string out;
        std::size_t i = 0;
        while (i < bytes.size()) {
            std::size_t len = two_byte ? 2 : 1;
            if (!codespaces.empty()) {
                for (std::size_t n = 1; n <= 4 && i + n <= bytes.size(); ++n) {
                    const std::uint32_t c = code_of(bytes.substr(i, n));
                    const bool match = std::any_of(codespaces.begin(), codespaces.end(), [&](const auto& cs) {
                        return cs.first == n && c >= cs.second.first && c <= cs.second.second;
                    });
                    if (match) {
                        len = n;
                        break;
                    }
                }
            }
            len = std::min(len, bytes.size() - i);
            const std::uint32_t code = code_of(bytes.substr(i, len));
            i += len;
            if (has_cmap) {
                if (auto it = cmap.find(code); it != cmap.end()) {
                    for (const char32_t cp : it->second) text::append_utf8(out, cp);
                    continue;
                }
            }
            if (two_byte) continue;  // composite font without a usable mapping
            const auto byte = static_cast<unsigned char>(code & 0xFF);
            if (!simple[byte].empty()) {
                for (const char32_t cp : simple[byte]) text::append_utf8(out, cp);
            } else if (byte >= 0x20 || byte == '\t') {
                text::append_utf8(out, win_ansi(byte));
            }
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Document

class Document {
public:
    explicit Document(std::string_view bytes) : data_(bytes) {
        const auto header = bytes.find("%PDF-");
        if (header == std::string_view::npos || header > 1024) throw PdfError("missing %PDF header");
        scan_objects();
        load_object_streams();
        find_trailer();
    }

    const Object& resolve(const Object& o, int depth = 0) const {
        if (o.kind != Kind::ref || depth > 32) return o;
        auto it = objects_.find(o.ref.num);
        if (it == objects_.end()) return kNull;
        return resolve(it->second, depth + 1);
    }

    const Object* lookup(const Object& dict, std::string_view key) const {
        const Object* v = resolve(dict).get(key);
        return v ? &resolve(*v) : nullptr;
    }

    std::string decode_stream(const Object& stream) const {
        std::string data(stream.stream_data);
        const Object* filter = lookup(stream, "Filter");
        std::vector<std::string> filters;
        if (filter && filter->kind == Kind::name) {
            filters.push_back(filter->str);
        } else if (filter && filter->kind == Kind::array) {
            for (const auto& f : filter->items) filters.push_back(resolve(f).str);
        }
        for (const auto& f : filters) {
            if (f == "FlateDecode" || f == "Fl") {
                data = inflate(data);
            } else if (f == "ASCIIHexDecode" || f == "AHx") {
                data = ascii_hex_decode(data);
            } else if (f == "ASCII85Decode" || f == "A85") {
                data = ascii85_decode(data);
            } else {
                return {};  // image codecs and LZW carry no text we can use
            }
        }
        return data;
    }

    const Object& root() const { return root_; }
    const Object& info() const { return info_; }
    bool encrypted() const { return encrypted_; }
    const std::map<int, Object>& objects() const { return objects_; }

private:
    void scan_objects() {
        // Tolerant scan for "n g obj" headers; later definitions win, which
        // matches incremental-update semantics.
        std::size_t pos = 0;
        while ((pos = data_.find("obj", pos)) != std::string_view::npos) {
            const std::size_t kw = pos;
            pos += 3;
            if (kw > 0 && !is_ws(static_cast<unsigned char>(data_[kw - 1]))) continue;
            if (pos < data_.size() && !is_ws(static_cast<unsigned char>(data_[pos])) &&
                !is_delim(static_cast<unsigned char>(data_[pos]))) {
                continue;
            }
            // Walk back over "num ws gen ws".
            std::size_t b = kw;
            while (b > 0 && is_ws(static_cast<unsigned char>(data_[b - 1]))) --b;
            std::size_t gen_end = b;
            while (b > 0 && std::isdigit(static_cast<unsigned char>(data_[b - 1]))) --b;
            if (b == gen_end) continue;
            const std::size_t gen_start = b;
            while (b > 0 && is_ws(static_cast<unsigned char>(data_[b - 1]))) --b;
            if (b == gen_start) continue;
            const std::size_t num_end = b;
            while (b > 0 && std::isdigit(static_cast<unsigned char>(data_[b - 1]))) --b;
            if (b == num_end) continue;
            if (b > 0 && !is_ws(static_cast<unsigned char>(data_[b - 1])) &&
                !is_delim(static_cast<unsigned char>(data_[b - 1]))) {
                continue;
            }
            const int num = std::atoi(std::string(data_.substr(b, num_end - b)).c_str());

            Parser p(data_, pos);
            Object obj = p.parse();
            const std::size_t after = p.pos();
            Parser kwp(data_, after);
            kwp.skip_ws();
            if (obj.kind == Kind::dict && data_.substr(kwp.pos(), 6) == "stream") {
                std::size_t start = kwp.pos() + 6;
                if (start < data_.size() && data_[start] == '\r') ++start;
                if (start < data_.size() && data_[start] == '\n') ++start;
                std::size_t end = std::string_view::npos;
                if (const Object* len = obj.get("Length"); len && len->kind == Kind::number) {
                    const auto n = static_cast<std::size_t>(len->number);
                    if (start + n <= data_.size()) {
                        Parser check(data_, start + n);
                        check.skip_ws();
                        if (data_.substr(check.pos(), 9) == "endstream") end = start + n;
                    }
                }
                if (end == std::string_view::npos) {
                    end = data_.find("endstream", start);
                    if (end == std::string_view::npos) end = data_.size();
                    while (end > start && (data_[end - 1] == '\n' || data_[end - 1] == '\r')) --end;
                }
                obj.kind = Kind::stream;
                obj.stream_data = data_.substr(start, end - start);
                pos = end;
            } else {
                pos = after;
            }
            objects_[num] = std::move(obj);
        }
    }

    void load_object_streams() {
        std::vector<int> streams;
        for (const auto& [num, obj] : objects_) {
            if (obj.kind == Kind::stream) {
                if (const Object* t = obj.get("Type"); t && t->str == "ObjStm") streams.push_back(num);
            }
        }
        for (const int num : streams) {
            const Object& s = objects_.at(num);
            const Object* n = lookup(s, "N");
            const Object* first = lookup(s, "First");
            if (!n || !first) continue;
            std::string decoded;
            try {
                decoded = decode_stream(s);
            } catch (const PdfError&) {
                continue;
            }
            auto owned = std::make_unique<std::string>(std::move(decoded));
            const std::string_view view(*owned);
            decoded_storage_.push_back(std::move(owned));

            Parser header(view);
            std::vector<std::pair<int, std::size_t>> entries;
            for (int i = 0; i < static_cast<int>(n->number); ++i) {
                const Object on = header.parse(false);
                const Object off = header.parse(false);
                if (on.kind != Kind::number || off.kind != Kind::number) break;
                entries.emplace_back(static_cast<int>(on.number), static_cast<std::size_t>(off.number));
            }
            for (const auto& [objnum, offset] : entries) {
                const std::size_t at = static_cast<std::size_t>(first->number) + offset;
                if (at >= view.size() || objects_.contains(objnum)) continue;
                Parser p(view, at);
                objects_[objnum] = p.parse();
            }
        }
    }

    void absorb_trailer(const Object& dict) {
        if (const Object* r = dict.get("Root")) root_ = *r;
        if (const Object* i = dict.get("Info")) info_ = *i;
        if (dict.get("Encrypt")) encrypted_ = true;
    }

    void find_trailer() {
        // Classic trailers, in file order so the last update wins.
        std::size_t pos = 0;
        while ((pos = data_.find("trailer", pos)) != std::string_view::npos) {
            Parser p(data_, pos + 7);
            const Object t = p.parse();
            if (t.kind == Kind::dict) absorb_trailer(t);
            pos += 7;
        }
        // Cross-reference streams carry the trailer keys in their dictionary.
        for (const auto& [num, obj] : objects_) {
            if (obj.kind != Kind::stream) continue;
            if (const Object* t = obj.get("Type"); t && t->str == "XRef") absorb_trailer(obj);
        }
        if (resolve(root_).kind != Kind::dict) {
            for (const auto& [num, obj] : objects_) {
                if (const Object* t = obj.get("Type"); t && t->str == "Catalog") {
                    root_ = Object{};
                    root_.kind = Kind::ref;
                    root_.ref = Ref{num, 0};
                    break;
                }
            }
        }
    }

    std::string_view data_;
    std::map<int, Object> objects_;
    std::vector<std::unique_ptr<std::string>> decoded_storage_;
    Object root_;
    Object info_;
    bool encrypted_ = false;
};

std::string decode_text_string(std::string_view bytes) {
    std::string out;
    if (bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0xFE &&
        static_cast<unsigned char>(bytes[1]) == 0xFF) {
        for (const char32_t cp : utf16be_to_u32(bytes.substr(2))) text::append_utf8(out, cp);
    } else if (bytes.size() >= 3 && bytes.substr(0, 3) == "\xEF\xBB\xBF") {
        bool lossy = false;
        out = text::sanitize_utf8(bytes.substr(3), lossy);
    } else {
        for (const char c : bytes) text::append_utf8(out, win_ansi(static_cast<unsigned char>(c)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Content stream interpretation

class TextCollector {
public:
    TextCollector(const Document& doc) : doc_(doc) {}

    std::string page_text(const Object& page, const Object& resources) {
        out_.clear();
        line_y_.reset();
        std::string content;
        const Object* contents = doc_.lookup(page, "Contents");
        if (contents && contents->kind == Kind::stream) {
            content = safe_decode(*contents);
        } else if (contents && contents->kind == Kind::array) {
            for (const auto& part : contents->items) {
                const Object& s = doc_.resolve(part);
                if (s.kind == Kind::stream) {
                    content += safe_decode(s);
                    content += '\n';
                }
            }
        }
        run(content, resources, 0);
        return tidy(out_);
    }

private:
    struct Matrix {
        double a = 1, b = 0, c = 0, d = 1, e = 0, f = 0;
        Matrix times(const Matrix& m) const {
            return Matrix{a * m.a + b * m.c,       a * m.b + b * m.d,       c * m.a + d * m.c,
                          c * m.b + d * m.d,       e * m.a + f * m.c + m.e, e * m.b + f * m.d + m.f};
        }
    };

    std::string safe_decode(const Object& s) {
        try {
            return doc_.decode_stream(s);
        } catch (const PdfError&) {
            return {};
        }
    }

    const Font& font_for(const Object& resources, const std::string& name) {
        const Object* fonts = doc_.lookup(resources, "Font");
        const Object* fobj = fonts ? doc_.lookup(*fonts, name) : nullptr;
        const Object* key = fobj ? fobj : &kNull;
        if (auto it = fonts_.find(key); it != fonts_.end()) return it->second;

        Font font;
        if (fobj && fobj->is_dict()) {
            const Object* subtype = doc_.lookup(*fobj, "Subtype");
            font.two_byte = subtype && subtype->str == "Type0";
            if (const Object* tu = doc_.lookup(*fobj, "ToUnicode"); tu && tu->kind == Kind::stream) {
                font.parse_cmap(safe_decode(*tu));
            }
            const Object* enc = doc_.lookup(*fobj, "Encoding");
            if (enc && enc->is_dict()) {
                if (const Object* diffs = doc_.lookup(*enc, "Differences"); diffs && diffs->kind == Kind::array) {
                    int code = 0;
                    for (const auto& item : diffs->items) {
                        if (item.kind == Kind::number) {
                            code = static_cast<int>(item.number);
                        } else if (item.kind == Kind::name) {
                            if (code >= 0 && code < 256) font.simple[code] = glyph_name_to_unicode(item.str);
                            ++code;
                        }
                    }
                }
            }
        }
        return fonts_.emplace(key, std::move(font)).first->second;
    }

    void newline_if_moved() {
        const double y = tm_.f;
        if (!line_y_) {
            line_y_ = y;
            return;
        }
        if (std::abs(*line_y_ - y) > 0.5) {
            out_.push_back('\n');
        } else if (!out_.empty() && out_.back() != ' ' && out_.back() != '\n') {
            out_.push_back(' ');
        }
        line_y_ = y;
    }

    void show(const std::string& bytes, const Font& font) {
        if (pending_position_) {
            newline_if_moved();
            pending_position_ = false;
        }
        out_ += font.decode(bytes);
    }

    void run(std::string_view content, const Object& resources, int depth) {
        if (depth > 8) return;
        Parser p(content);
        std::vector<Object> ops;
        const Font* font = &font_for(resources, "");
        while (!p.at_end()) {
            const std::size_t before = p.pos();
            Object o = p.parse(false);
            if (p.pos() == before) break;
            if (o.kind != Kind::keyword) {
                ops.push_back(std::move(o));
                if (ops.size() > 4096) ops.clear();
                continue;
            }
            const std::string& op = o.str;
            auto num = [&](std::size_t i) {
                return i < ops.size() && ops[i].kind == Kind::number ? ops[i].number : 0.0;
            };
            if (op == "BT") {
                tm_ = lm_ = Matrix{};
                pending_position_ = true;
            } else if (op == "Tf" && !ops.empty() && ops.front().kind == Kind::name) {
                font = &font_for(resources, ops.front().str);
            } else if (op == "TL") {
                leading_ = num(0);
            } else if (op == "Td" || op == "TD") {
                if (op == "TD") leading_ = -num(1);
                lm_ = Matrix{1, 0, 0, 1, num(0), num(1)}.times(lm_);
                tm_ = lm_;
                pending_position_ = true;
            } else if (op == "Tm" && ops.size() >= 6) {
                lm_ = tm_ = Matrix{num(0), num(1), num(2), num(3), num(4), num(5)};
                pending_position_ = true;
            } else if (op == "T*") {
                lm_ = Matrix{1, 0, 0, 1, 0, -leading_}.times(lm_);
                tm_ = lm_;
                pending_position_ = true;
            } else if (op == "Tj" && !ops.empty()) {
                show(ops.back().str, *font);
            } else if (op == "'" || op == "\"") {
                lm_ = Matrix{1, 0, 0, 1, 0, -leading_}.times(lm_);
                tm_ = lm_;
                pending_position_ = true;
                if (!ops.empty()) show(ops.back().str, *font);
            } else if (op == "TJ" && !ops.empty() && ops.back().kind == Kind::array) {
                for (const auto& item : ops.back().items) {
                    if (item.kind == Kind::string) {
                        show(item.str, *font);
                    } else if (item.kind == Kind::number && item.number < -250 && !out_.empty() &&
                               out_.back() != ' ') {
                        out_.push_back(' ');
                    }
                }
            } else if (op == "Do" && !ops.empty() && ops.back().kind == Kind::name) {
                const Object* xobjects = doc_.lookup(resources, "XObject");
                const Object* xo = xobjects ? doc_.lookup(*xobjects, ops.back().str) : nullptr;
                if (xo && xo->kind == Kind::stream) {
                    const Object* st = doc_.lookup(*xo, "Subtype");
                    if (st && st->str == "Form" && !visiting_.contains(xo)) {
                        visiting_.insert(xo);
                        const Object* form_res = doc_.lookup(*xo, "Resources");
                        const Matrix saved_tm = tm_;
                        const Matrix saved_lm = lm_;
                        run(safe_decode(*xo), form_res && form_res->is_dict() ? *form_res : resources, depth + 1);
                        tm_ = saved_tm;
                        lm_ = saved_lm;
                        visiting_.erase(xo);
                    }
                }
            } else if (op == "BI") {
                // Inline image: skip binary payload up to EI.
                const auto ei = content.find("EI", p.pos());
                p.seek(ei == std::string_view::npos ? content.size() : ei + 2);
            }
            ops.clear();
        }
    }

    static std::string tidy(const std::string& raw) {
        std::string out;
        std::size_t start = 0;
        while (start <= raw.size()) {
            const auto nl = raw.find('\n', start);
            const std::string_view line(raw.data() + start,
                                        (nl == std::string::npos ? raw.size() : nl) - start);
            std::string collapsed;
            for (const auto w : text::split_whitespace(line)) {
                if (!collapsed.empty()) collapsed.push_back(' ');
                collapsed.append(w);
            }
            if (!collapsed.empty()) {
                if (!out.empty()) out.push_back('\n');
                out += collapsed;
            }
            if (nl == std::string::npos) break;
            start = nl + 1;
        }
        return out;
    }

    const Document& doc_;
    std::map<const Object*, Font> fonts_;
    std::set<const Object*> visiting_;
    std::string out_;
    Matrix tm_;
    Matrix lm_;
    double leading_ = 0;
    std::optional<double> line_y_;
    bool pending_position_ = false;
};

void collect_pages(const Document& doc, const Object& node, const Object* inherited_resources,
                   std::set<const Object*>& seen, std::vector<std::pair<const Object*, const Object*>>& pages) {
    const Object& n = doc.resolve(node);
    if (!n.is_dict() || seen.contains(&n) || seen.size() > 100000) return;
    seen.insert(&n);
    const Object* res = doc.lookup(n, "Resources");
    if (!res || !res->is_dict()) res = inherited_resources;
    const Object* type = doc.lookup(n, "Type");
    const Object* kids = doc.lookup(n, "Kids");
    if (kids && kids->kind == Kind::array && (!type || type->str != "Page")) {
        for (const auto& k : kids->items) collect_pages(doc, k, res, seen, pages);
    } else if (!type || type->str == "Page") {
        pages.emplace_back(&n, res);
    }
}

}  // namespace

PdfText extract_text(std::string_view bytes) {
    Document doc(bytes);
    if (doc.encrypted()) throw PdfError("document is encrypted");

    std::vector<std::pair<const Object*, const Object*>> pages;
    std::set<const Object*> seen;
    const Object& root = doc.resolve(doc.root());
    if (root.is_dict()) {
        if (const Object* tree = root.get("Pages")) collect_pages(doc, *tree, nullptr, seen, pages);
    }
    if (pages.empty()) {
        for (const auto& [num, obj] : doc.objects()) {
            if (const Object* t = obj.get("Type"); t && t->str == "Page") {
                const Object* res = doc.lookup(obj, "Resources");
                pages.emplace_back(&obj, res);
            }
        }
    }
    if (pages.empty()) throw PdfError("no pages found");

    PdfText result;
    TextCollector collector(doc);
    for (const auto& [page, res] : pages) {
        result.pages.push_back(collector.page_text(*page, res ? *res : kNull));
    }
    const Object& info = doc.resolve(doc.info());
    if (info.is_dict()) {
        if (const Object* t = doc.lookup(info, "Title"); t && t->kind == Kind::string) {
            std::string title(text::trim(decode_text_string(t->str)));
            if (!title.empty()) result.title = std::move(title);
        }
    }
    return result;
}

}  // namespace ragqa::pdf
