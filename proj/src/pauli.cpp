#include "prqpe/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "prqpe/errors.hpp"

namespace prqpe {

std::string QubitBits::hex() const {
    // minimal-width big-endian hex, at least one digit
    std::string s;
    bool started = false;
    char buf[17];
    for (int i = kWords - 1; i >= 0; --i) {
        if (!started) {
            if (w[i] == 0 && i > 0) continue;
            std::snprintf(buf, sizeof buf, "%llx", static_cast<unsigned long long>(w[i]));
            started = true;
        } else {
            std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(w[i]));
        }
        s += buf;
    }
    return s;
}

QubitBits QubitBits::from_hex(const std::string& s) {
    QubitBits b;
    if (s.empty() || s.size() > 64) throw ValidationError("pauli: bad hex mask '" + s + "'");
    int word = 0, shift = 0;
    for (auto it = s.rbegin(); it != s.rend(); ++it) {
        const char c = *it;
        std::uint64_t v;
        if (c >= '0' && c <= '9')
            v = static_cast<std::uint64_t>(c - '0');
        else if (c >= 'a' && c <= 'f')
            v = static_cast<std::uint64_t>(c - 'a' + 10);
        else if (c >= 'A' && c <= 'F')
            v = static_cast<std::uint64_t>(c - 'A' + 10);
        else
            throw ValidationError("pauli: bad hex mask '" + s + "'");
        b.w[word] |= v << shift;
        shift += 4;
        if (shift == 64) {
            shift = 0;
            ++word;
        }
    }
    return b;
}

std::string PauliMask::str(int n_qubits) const {
    std::string s;
    for (int q = 0; q < n_qubits; ++q) {
        const bool x = x_bits.test(q), z = z_bits.test(q);
        if (!x && !z) continue;
        s += x ? (z ? 'Y' : 'X') : 'Z';
        s += std::to_string(q);
        s += ' ';
    }
    if (!s.empty()) s.pop_back();
    return s.empty() ? "I" : s;
}

double CoefficientTable::l1() const {
    double acc = 0.0;
    for (const auto& t : terms) acc += std::abs(t.coefficient);
    return acc;
}

CoefficientTable prepare_sorted(const CoefficientTable& t) {
    CoefficientTable out = t;
    std::stable_sort(out.terms.begin(), out.terms.end(), [](const PauliTerm& a, const PauliTerm& b) {
        const double ma = std::abs(a.coefficient), mb = std::abs(b.coefficient);
        if (ma != mb) return ma > mb;
        return a.mask < b.mask;
    });
    out.sorted = true;
    return out;
}

CoefficientTable truncate_tail(const CoefficientTable& t, double threshold) {
    if (!t.sorted) throw ValidationError("truncate_tail: table must be sorted");
    if (threshold < 0) throw ValidationError("truncate_tail: threshold must be >= 0");
    CoefficientTable out = t;
    double cum = 0.0;
    std::size_t keep = out.terms.size();
    while (keep > 0) {
        const double next = cum + std::abs(out.terms[keep - 1].coefficient);
        if (next > threshold) break;
        cum = next;
        --keep;
    }
    out.terms.resize(keep);
    return out;
}

void write_table_csv(const CoefficientTable& t, std::ostream& out) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", t.constant);
    out << "constant," << buf << ",n_qubits," << t.n_qubits << "\n";
    out << "x_bits,z_bits,coefficient\n";
    for (const auto& term : t.terms) {
        std::snprintf(buf, sizeof buf, "%.17g", term.coefficient);
        out << term.mask.x_bits.hex() << "," << term.mask.z_bits.hex() << "," << buf << "\n";
    }
}

CoefficientTable read_table_csv(std::istream& in) {
    CoefficientTable t;
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line)) throw ParseError("table csv: empty input", 1);
    ++lineno;
    {
        std::istringstream ss(line);
        std::string tag, value, tag2, value2;
        if (!std::getline(ss, tag, ',') || !std::getline(ss, value, ',') || tag != "constant")
            throw ParseError("table csv: expected constant header", lineno);
        t.constant = std::stod(value);
        if (std::getline(ss, tag2, ',') && std::getline(ss, value2, ',') && tag2 == "n_qubits")
            t.n_qubits = std::stoi(value2);
    }
    if (!std::getline(in, line)) return t;
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string xs, zs, cs;
        if (!std::getline(ss, xs, ',') || !std::getline(ss, zs, ',') || !std::getline(ss, cs))
            throw ParseError("table csv: malformed row", lineno);
        PauliTerm term;
        term.mask.x_bits = QubitBits::from_hex(xs);
        term.mask.z_bits = QubitBits::from_hex(zs);
        term.coefficient = std::stod(cs);
        t.terms.push_back(term);
    }
    return t;
}

}  // namespace prqpe
