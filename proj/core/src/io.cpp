#include "sire/io.hpp"

#include <array>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sire {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

struct Sha1 {
    std::array<std::uint32_t, 5> h{0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};

    static std::uint32_t rol(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

    void block(const unsigned char* p) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) {
                f = (b & c) | (~b & d);
                k = 0x5A827999u;
            } else if (i < 40) {
                f = b ^ c ^ d;
                k = 0x6ED9EBA1u;
            } else if (i < 60) {
                f = (b & c) | (b & d) | (c & d);
                k = 0x8F1BBCDCu;
            } else {
                f = b ^ c ^ d;
                k = 0xCA62C1D6u;
            }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d;
            d = c;
            c = rol(b, 30);
            b = a;
            a = t;
        }
        h[0] += a;
        h[1] += b;
        h[2] += c;
        h[3] += d;
        h[4] += e;
    }
};

} // namespace

std::string sha1_hex(std::string_view data) {
    Sha1 ctx;
    const auto* bytes = reinterpret_cast<const unsigned char*>(data.data());
    std::size_t n = data.size();
    std::size_t off = 0;
    while (n - off >= 64) {
        ctx.block(bytes + off);
        off += 64;
    }
    unsigned char tail[128] = {0};
    const std::size_t rem = n - off;
    std::memcpy(tail, bytes + off, rem);
    tail[rem] = 0x80;
    const std::size_t total = rem + 1 <= 56 ? 64 : 128;
    const std::uint64_t bits = std::uint64_t(n) * 8;
    for (int i = 0; i < 8; ++i)
        tail[total - 1 - i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
    ctx.block(tail);
    if (total == 128) ctx.block(tail + 64);

    std::string out;
    out.reserve(40);
    static const char* hex = "0123456789abcdef";
    for (std::uint32_t word : ctx.h)
        for (int i = 7; i >= 0; --i) out.push_back(hex[(word >> (4 * i)) & 0xF]);
    return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path.string());
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("failed writing: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string trajectory_csv(const Trajectory& tr) {
    std::string out = "t,S,I,r\n";
    for (std::size_t k = 0; k < tr.size(); ++k) {
        out += format_g17(tr.times[k]);
        out += ',';
        out += format_g17(tr.states[k].s);
        out += ',';
        out += format_g17(tr.states[k].i);
        out += ',';
        out += format_g17(tr.control_values[k]);
        out += '\n';
    }
    return out;
}

std::string free_boundary_csv(const FreeBoundaryMap& map) {
    std::string out = "x,y,u,u_full,tau_star,in_S\n";
    const GridSpec& g = map.spec;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t node = g.index(i, j);
            if (!map.active[node]) continue;
            const ValueResult& r = map.results[node];
            out += format_g17(g.x(i));
            out += ',';
            out += format_g17(g.y(j));
            out += ',';
            out += format_g17(r.u);
            out += ',';
            out += format_g17(r.u_full);
            out += ',';
            out += format_g17(r.tau_star);
            out += ',';
            out += r.in_S ? '1' : '0';
            out += '\n';
        }
    return out;
}

std::string hjb_grid_csv(const ModelParams& p, const GridValues& gv,
                         const std::vector<double>& residual_drift,
                         const std::vector<double>& residual_obst,
                         const std::vector<double>& u_full, double boundary_rel_tol) {
    const GridSpec& g = gv.spec;
    if (residual_drift.size() != g.size() || residual_obst.size() != g.size() ||
        u_full.size() != g.size())
        throw std::invalid_argument("hjb_grid_csv: layer size mismatch");
    std::string out = "x,y,u,residual_hjb,residual_obstacle,in_S\n";
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t node = g.index(i, j);
            if (!g.in_mask(g.x(i), g.y(j))) continue;
            const double u = gv.u[node];
            const bool in_s = std::abs(u - u_full[node]) <= boundary_rel_tol * (1.0 + u);
            out += format_g17(g.x(i));
            out += ',';
            out += format_g17(g.y(j));
            out += ',';
            out += format_g17(u);
            out += ',';
            out += format_g17(residual_drift[node]);
            out += ',';
            out += format_g17(residual_obst[node]);
            out += ',';
            out += in_s ? '1' : '0';
            out += '\n';
        }
    return out;
}

} // namespace sire
