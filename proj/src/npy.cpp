#include "tokenprune/npy.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace tokenprune {

namespace {

constexpr char kMagic[6] = {'\x93', 'N', 'U', 'M', 'P', 'Y'};

std::string strip(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Extracts the value text for `key` from the header dict. Values are either
// a quoted string, True/False, or a parenthesized tuple.
std::string dict_value(const std::string& header, const std::string& key) {
    const std::string quoted = "'" + key + "'";
    const std::size_t kpos = header.find(quoted);
    if (kpos == std::string::npos) {
        throw MalformedHeaderError("npy header: missing key " + key);
    }
    std::size_t pos = header.find(':', kpos + quoted.size());
    if (pos == std::string::npos) throw MalformedHeaderError("npy header: malformed dict");
    ++pos;
    while (pos < header.size() && std::isspace(static_cast<unsigned char>(header[pos]))) ++pos;
    if (pos >= header.size()) throw MalformedHeaderError("npy header: truncated value");

    if (header[pos] == '\'') {
        const std::size_t end = header.find('\'', pos + 1);
        if (end == std::string::npos) throw MalformedHeaderError("npy header: unterminated string");
        return header.substr(pos + 1, end - pos - 1);
    }
    if (header[pos] == '(') {
        const std::size_t end = header.find(')', pos);
        if (end == std::string::npos) throw MalformedHeaderError("npy header: unterminated tuple");
        return header.substr(pos, end - pos + 1);
    }
    std::size_t end = pos;
    while (end < header.size() && header[end] != ',' && header[end] != '}') ++end;
    return strip(header.substr(pos, end - pos));
}

std::vector<std::size_t> parse_shape(const std::string& tuple) {
    if (tuple.size() < 2 || tuple.front() != '(' || tuple.back() != ')') {
        throw MalformedHeaderError("npy header: shape is not a tuple");
    }
    std::vector<std::size_t> shape;
    std::string body = tuple.substr(1, tuple.size() - 2);
    std::size_t start = 0;
    while (start <= body.size()) {
        const std::size_t comma = body.find(',', start);
        const std::string piece =
            strip(body.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!piece.empty()) {
            for (char c : piece) {
                if (!std::isdigit(static_cast<unsigned char>(c))) {
                    throw MalformedHeaderError("npy header: non-integer shape entry");
                }
            }
            shape.push_back(static_cast<std::size_t>(std::stoull(piece)));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return shape;
}

double decode_element(const unsigned char* p, bool is_f32) {
    if (is_f32) {
        const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                                   (static_cast<std::uint32_t>(p[1]) << 8) |
                                   (static_cast<std::uint32_t>(p[2]) << 16) |
                                   (static_cast<std::uint32_t>(p[3]) << 24);
        return static_cast<double>(std::bit_cast<float>(bits));
    }
    std::uint64_t bits = 0;
    for (int i = 7; i >= 0; --i) bits = (bits << 8) | p[i];
    return std::bit_cast<double>(bits);
}

void encode_element(double v, bool is_f32, unsigned char* out) {
    if (is_f32) {
        const std::uint32_t bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
        for (int i = 0; i < 4; ++i) out[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
        return;
    }
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xff);
}

}  // namespace

Tensor load_tensor(const std::filesystem::path& path, std::size_t expected_rank) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFoundError("cannot open " + path.string());

    char magic[8] = {};
    in.read(magic, 8);
    if (in.gcount() != 8 || std::memcmp(magic, kMagic, 6) != 0) {
        throw MalformedHeaderError("npy: bad magic in " + path.string());
    }
    if (magic[6] != 1 || magic[7] != 0) {
        throw MalformedHeaderError("npy: unsupported version (want 1.0) in " + path.string());
    }

    unsigned char hlen_bytes[2] = {};
    in.read(reinterpret_cast<char*>(hlen_bytes), 2);
    if (in.gcount() != 2) throw MalformedHeaderError("npy: truncated header length");
    const std::size_t hlen =
        static_cast<std::size_t>(hlen_bytes[0]) | (static_cast<std::size_t>(hlen_bytes[1]) << 8);

    std::string header(hlen, '\0');
    in.read(header.data(), static_cast<std::streamsize>(hlen));
    if (static_cast<std::size_t>(in.gcount()) != hlen) {
        throw MalformedHeaderError("npy: truncated header dict");
    }

    const std::string descr = dict_value(header, "descr");
    bool is_f32 = false;
    if (descr == "<f4") {
        is_f32 = true;
    } else if (descr == "<f8") {
        is_f32 = false;
    } else {
        throw MalformedHeaderError("npy: unsupported descr '" + descr + "' (want <f4 or <f8)");
    }

    const std::string order = dict_value(header, "fortran_order");
    if (order != "False") {
        throw MalformedHeaderError("npy: fortran_order must be False (C-contiguous payload)");
    }

    const std::vector<std::size_t> shape = parse_shape(dict_value(header, "shape"));
    if (shape.size() != expected_rank) {
        throw WrongRankError("npy: rank " + std::to_string(shape.size()) + " in " + path.string() +
                             ", expected " + std::to_string(expected_rank));
    }
    if (shape.empty() || shape.size() > 3) {
        throw WrongRankError("npy: only ranks 1..3 are supported");
    }

    std::size_t count = 1;
    for (std::size_t d : shape) count *= d;
    const std::size_t item = is_f32 ? 4 : 8;

    std::vector<unsigned char> payload(count * item);
    in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (static_cast<std::size_t>(in.gcount()) != payload.size()) {
        throw MalformedHeaderError("npy: payload shorter than header shape implies");
    }
    in.peek();
    if (!in.eof()) {
        throw MalformedHeaderError("npy: trailing bytes after payload");
    }

    Tensor t(shape, is_f32 ? Dtype::Float32 : Dtype::Float64);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = decode_element(payload.data() + i * item, is_f32);
        if (!std::isfinite(v)) {
            throw NonFiniteError("npy: non-finite value at flat index " + std::to_string(i));
        }
        t.values()[i] = v;
    }
    return t;
}

void save_tensor(const Tensor& tensor, const std::filesystem::path& path) {
    if (tensor.size() > 0 && !tensor.all_finite()) {
        throw NonFiniteError("save_tensor: tensor has non-finite values");
    }

    std::string shape_txt = "(";
    for (std::size_t i = 0; i < tensor.rank(); ++i) {
        shape_txt += std::to_string(tensor.shape()[i]);
        if (i + 1 < tensor.rank()) shape_txt += ", ";
    }
    if (tensor.rank() == 1) shape_txt += ",";  // numpy 1-tuple repr
    shape_txt += ")";

    const bool is_f32 = tensor.dtype() == Dtype::Float32;
    std::string dict = std::string("{'descr': '") + (is_f32 ? "<f4" : "<f8") +
                       "', 'fortran_order': False, 'shape': " + shape_txt + ", }";
    // Preamble (magic + version + hlen + dict + '\n') padded to 64 bytes.
    const std::size_t unpadded = 10 + dict.size() + 1;
    const std::size_t padding = (64 - unpadded % 64) % 64;
    dict += std::string(padding, ' ');
    dict += '\n';

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw UnwritablePathError("cannot write " + path.string());

    out.write(kMagic, 6);
    out.put('\x01');
    out.put('\x00');
    const std::size_t hlen = dict.size();
    out.put(static_cast<char>(hlen & 0xff));
    out.put(static_cast<char>((hlen >> 8) & 0xff));
    out.write(dict.data(), static_cast<std::streamsize>(dict.size()));

    const std::size_t item = is_f32 ? 4 : 8;
    std::vector<unsigned char> payload(tensor.size() * item);
    for (std::size_t i = 0; i < tensor.size(); ++i) {
        encode_element(tensor.values()[i], is_f32, payload.data() + i * item);
    }
    out.write(reinterpret_cast<const char*>(payload.data()),
              static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw UnwritablePathError("write failed for " + path.string());
}

}  // namespace tokenprune
