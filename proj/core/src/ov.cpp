#include "subiso/ov.hpp"

#include "subiso/rng.hpp"

#include <charconv>
#include <sstream>

namespace subiso {

void OvInstance::validate() const {
    if (a.size() != b.size()) throw ConstraintError("OV instance: lists have different lengths");
    for (const auto* list : {&a, &b}) {
        for (const BitVector& v : *list) {
            if (v.size() != dim) throw ConstraintError("OV instance: vector length differs from D");
            for (auto x : v)
                if (x > 1) throw ConstraintError("OV instance: entries must be 0 or 1");
        }
    }
}

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    bool next(std::string_view& line) {
        if (pos_ >= text_.size()) return false;
        start_ = pos_;
        const auto end = text_.find('\n', pos_);
        line = text_.substr(pos_, end == std::string_view::npos ? std::string_view::npos : end - pos_);
        pos_ = end == std::string_view::npos ? text_.size() : end + 1;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        return true;
    }

    std::size_t offset() const noexcept { return start_; }
    std::size_t end() const noexcept { return pos_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t start_ = 0;
};

std::size_t parse_count(std::string_view& s, std::size_t offset) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr == s.data()) throw ParseError("OV header: expected `N D`", offset);
    s.remove_prefix(static_cast<std::size_t>(ptr - s.data()));
    return value;
}

BitVector parse_vector(std::string_view line, std::size_t dim, std::size_t offset) {
    if (line.size() != dim)
        throw ParseError("OV vector: expected " + std::to_string(dim) + " characters", offset);
    BitVector v(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        if (line[i] != '0' && line[i] != '1') throw ParseError("OV vector: expected 0 or 1", offset + i);
        v[i] = static_cast<std::uint8_t>(line[i] - '0');
    }
    return v;
}

}  // namespace

OvInstance parse_ov(std::string_view text) {
    LineReader reader(text);
    std::string_view line;
    if (!reader.next(line)) throw ParseError("OV file is empty", 0);
    std::string_view header = line;
    const std::size_t n = parse_count(header, reader.offset());
    const std::size_t dim = parse_count(header, reader.offset());
    for (char c : header)
        if (c != ' ' && c != '\t') throw ParseError("OV header: trailing characters", reader.offset());

    OvInstance inst;
    inst.dim = dim;
    auto read_list = [&](std::vector<BitVector>& out) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!reader.next(line)) throw ParseError("OV file: missing vectors", reader.end());
            out.push_back(parse_vector(line, dim, reader.offset()));
        }
    };
    read_list(inst.a);
    if (!reader.next(line) || !line.empty())
        throw ParseError("OV file: expected a blank line between the lists", reader.offset());
    read_list(inst.b);
    while (reader.next(line))
        if (!line.empty()) throw ParseError("OV file: trailing content", reader.offset());
    return inst;
}

std::string format_ov(const OvInstance& inst) {
    std::ostringstream out;
    out << inst.n() << ' ' << inst.dim << '\n';
    auto write_list = [&](const std::vector<BitVector>& list) {
        for (const BitVector& v : list) {
            for (auto x : v) out << static_cast<char>('0' + x);
            out << '\n';
        }
    };
    write_list(inst.a);
    out << '\n';
    write_list(inst.b);
    return out.str();
}

OvInstance random_ov(std::size_t n, std::size_t dim, double density, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const auto cutoff = static_cast<double>(SplitMix64::max()) * density;
    auto draw = [&] {
        BitVector v(dim);
        for (auto& x : v) x = static_cast<double>(rng()) < cutoff ? 1 : 0;
        return v;
    };
    OvInstance inst;
    inst.dim = dim;
    for (std::size_t i = 0; i < n; ++i) inst.a.push_back(draw());
    for (std::size_t i = 0; i < n; ++i) inst.b.push_back(draw());
    return inst;
}

bool orthogonal(const BitVector& x, const BitVector& y) {
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i)
        if (x[i] && y[i]) return false;
    return true;
}

std::size_t popcount(const BitVector& x) {
    std::size_t c = 0;
    for (auto v : x) c += v;
    return c;
}

bool ov_bruteforce(const OvInstance& inst) {
    for (const BitVector& x : inst.a)
        for (const BitVector& y : inst.b)
            if (orthogonal(x, y)) return true;
    return false;
}

}  // namespace subiso
