#include "prqpe/fcidump.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "prqpe/errors.hpp"

namespace prqpe {

namespace {

constexpr double kDupTol = 1e-10;
constexpr double kWriteFloor = 1e-12;

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    return s;
}

// "NORB=4" / "NORB = 4" token scan over the whole header text.
bool header_int(const std::string& header, const std::string& key, long& out) {
    std::size_t pos = header.find(key);
    while (pos != std::string::npos) {
        // reject partial matches such as ORBSYM when looking for SYM
        const bool starts_token = pos == 0 || !(std::isalnum(static_cast<unsigned char>(header[pos - 1])));
        std::size_t q = pos + key.size();
        while (q < header.size() && std::isspace(static_cast<unsigned char>(header[q]))) ++q;
        if (starts_token && q < header.size() && header[q] == '=') {
            ++q;
            while (q < header.size() && std::isspace(static_cast<unsigned char>(header[q]))) ++q;
            char* end = nullptr;
            const long v = std::strtol(header.c_str() + q, &end, 10);
            if (end == header.c_str() + q) return false;
            out = v;
            return true;
        }
        pos = header.find(key, pos + 1);
    }
    return false;
}

// canonical slot key for duplicate detection
std::uint64_t slot_key(int i, int j, int k, int l) {
    auto ord = [](int a, int b) { return a >= b ? std::pair{a, b} : std::pair{b, a}; };
    auto [p, q] = ord(i, j);
    auto [r, s] = ord(k, l);
    if (std::pair{p, q} < std::pair{r, s}) {
        std::swap(p, r);
        std::swap(q, s);
    }
    return (((static_cast<std::uint64_t>(p) * 256 + q) * 256 + r) * 256 + s);
}

}  // namespace

ElectronIntegrals parse_fcidump(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;

    // header: everything from &FCI up to &END or a bare '/'
    std::string header;
    bool header_done = false;
    bool saw_begin = false;
    while (!header_done && std::getline(in, line)) {
        ++lineno;
        std::string u = upper(line);
        if (!saw_begin) {
            const auto amp = u.find("&FCI");
            if (amp == std::string::npos) {
                if (u.find_first_not_of(" \t\r") == std::string::npos) continue;
                throw ParseError("fcidump: expected &FCI header", lineno);
            }
            saw_begin = true;
            u = u.substr(amp + 4);
        }
        const auto end = u.find("&END");
        const auto slash = u.find('/');
        const auto stop = std::min(end, slash);
        if (stop != std::string::npos) {
            header += u.substr(0, stop);
            header_done = true;
        } else {
            header += u + " ";
        }
    }
    if (!saw_begin) throw ParseError("fcidump: empty input, no &FCI header", lineno);
    if (!header_done) throw ParseError("fcidump: header not terminated by &END or /", lineno);

    long norb = 0, nelec = 0, ms2 = 0;
    if (!header_int(header, "NORB", norb)) throw ParseError("fcidump: header missing NORB", lineno);
    if (!header_int(header, "NELEC", nelec)) throw ParseError("fcidump: header missing NELEC", lineno);
    if (!header_int(header, "MS2", ms2)) throw ParseError("fcidump: header missing MS2", lineno);
    if (norb <= 0 || norb > 255) throw ParseError("fcidump: NORB out of range", lineno);
    if ((nelec + ms2) % 2 != 0) throw ParseError("fcidump: NELEC and MS2 have mismatched parity", lineno);
    const int n_alpha = static_cast<int>((nelec + ms2) / 2);
    const int n_beta = static_cast<int>((nelec - ms2) / 2);
    if (n_alpha < 0 || n_beta < 0 || n_alpha > norb || n_beta > norb)
        throw ParseError("fcidump: electron counts outside [0, NORB]", lineno);

    ElectronIntegrals x = ElectronIntegrals::zeros(static_cast<int>(norb), n_alpha, n_beta);
    std::unordered_map<std::uint64_t, double> seen;

    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '!') continue;

        // Fortran-style exponents
        std::string fixed = line;
        for (char& c : fixed)
            if (c == 'D' || c == 'd') c = 'E';

        std::istringstream ss(fixed);
        double value = 0.0;
        long i = -1, j = -1, k = -1, l = -1;
        if (!(ss >> value >> i >> j >> k >> l))
            throw ParseError("fcidump: malformed entry, expected 'value i j k l'", lineno);
        if (i < 0 || j < 0 || k < 0 || l < 0 || i > norb || j > norb || k > norb || l > norb)
            throw ParseError("fcidump: orbital index outside [0, NORB]", lineno);

        const bool is_core = i == 0 && j == 0 && k == 0 && l == 0;
        const bool is_one = !is_core && k == 0 && l == 0 && i > 0 && j > 0;
        const bool is_two = i > 0 && j > 0 && k > 0 && l > 0;
        if (!is_core && !is_one && !is_two)
            throw ParseError("fcidump: unsupported index pattern", lineno);

        std::uint64_t key;
        if (is_core)
            key = 0;
        else if (is_one)
            key = slot_key(static_cast<int>(i), static_cast<int>(j), 0, 0) | (1ULL << 63);
        else
            key = slot_key(static_cast<int>(i), static_cast<int>(j), static_cast<int>(k), static_cast<int>(l));
        const auto it = seen.find(key);
        if (it != seen.end() && std::abs(it->second - value) > kDupTol)
            throw ParseError("fcidump: conflicting duplicate entry", lineno);
        seen[key] = value;  // last wins within tolerance

        if (is_core) {
            x.core_energy = value;
        } else if (is_one) {
            x.h(static_cast<int>(i) - 1, static_cast<int>(j) - 1) = value;
            x.h(static_cast<int>(j) - 1, static_cast<int>(i) - 1) = value;
        } else {
            x.g.set_sym8(static_cast<int>(i) - 1, static_cast<int>(j) - 1, static_cast<int>(k) - 1,
                         static_cast<int>(l) - 1, value);
        }
    }
    return x;
}

ElectronIntegrals parse_fcidump_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("fcidump: cannot open '" + path + "'");
    return parse_fcidump(in);
}

void write_fcidump(const ElectronIntegrals& x, std::ostream& out) {
    if (x.spin_resolved)
        throw ValidationError("fcidump: spin-resolved integrals have no file representation");
    const int n = x.n_orbitals;
    out << "&FCI NORB=" << n << ",NELEC=" << x.n_electrons() << ",MS2=" << (x.n_alpha - x.n_beta)
        << ",\n  ORBSYM=";
    for (int p = 0; p < n; ++p) out << "1,";
    out << "\n  ISYM=1,\n &END\n";

    char buf[96];
    auto emit = [&](double v, int i, int j, int k, int l) {
        std::snprintf(buf, sizeof buf, "%23.16E %3d %3d %3d %3d\n", v, i, j, k, l);
        out << buf;
    };

    // one representative per 8-fold class: p>=q, r>=s, (pq)>=(rs)
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q)
            for (int r = 0; r <= p; ++r)
                for (int s = 0; s <= r; ++s) {
                    if (r == p && s > q) continue;
                    const double v = x.g.at(p, q, r, s);
                    if (std::abs(v) > kWriteFloor) emit(v, p + 1, q + 1, r + 1, s + 1);
                }
    for (int p = 0; p < n; ++p)
        for (int q = 0; q <= p; ++q) {
            const double v = x.h(p, q);
            if (std::abs(v) > kWriteFloor) emit(v, p + 1, q + 1, 0, 0);
        }
    emit(x.core_energy, 0, 0, 0, 0);
}

void write_fcidump_file(const ElectronIntegrals& x, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("fcidump: cannot write '" + path + "'");
    write_fcidump(x, out);
}

}  // namespace prqpe
