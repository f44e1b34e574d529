#pragma once

#include <array>
#include <bit>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace prqpe {

// Fixed-width qubit bitset, wide enough for 128 spatial orbitals.
struct QubitBits {
    static constexpr int kWords = 4;
    static constexpr int kMaxQubits = 64 * kWords;
    std::array<std::uint64_t, kWords> w{};

    bool test(int q) const { return (w[q >> 6] >> (q & 63)) & 1ULL; }
    void set(int q) { w[q >> 6] |= 1ULL << (q & 63); }
    void flip(int q) { w[q >> 6] ^= 1ULL << (q & 63); }
    bool any() const { return (w[0] | w[1] | w[2] | w[3]) != 0; }

    int popcount() const {
        int c = 0;
        for (auto x : w) c += std::popcount(x);
        return c;
    }
    friend QubitBits operator&(const QubitBits& a, const QubitBits& b) {
        QubitBits r;
        for (int i = 0; i < kWords; ++i) r.w[i] = a.w[i] & b.w[i];
        return r;
    }
    friend QubitBits operator^(const QubitBits& a, const QubitBits& b) {
        QubitBits r;
        for (int i = 0; i < kWords; ++i) r.w[i] = a.w[i] ^ b.w[i];
        return r;
    }
    bool operator==(const QubitBits&) const = default;
    // numeric-value order, most significant word first
    std::strong_ordering operator<=>(const QubitBits& o) const {
        for (int i = kWords - 1; i >= 0; --i)
            if (w[i] != o.w[i]) return w[i] <=> o.w[i];
        return std::strong_ordering::equal;
    }

    std::string hex() const;
    static QubitBits from_hex(const std::string& s);
};

// Hermitian Pauli string P = i^{|x&z|} X^x Z^z. The identity mask never
// appears in a table; the constant term is tracked separately.
struct PauliMask {
    QubitBits x_bits;
    QubitBits z_bits;

    bool is_identity() const { return !x_bits.any() && !z_bits.any(); }
    bool operator==(const PauliMask&) const = default;
    // table tie-break order: (z_bits, x_bits) ascending
    std::strong_ordering operator<=>(const PauliMask& o) const {
        if (auto c = z_bits <=> o.z_bits; c != 0) return c;
        return x_bits <=> o.x_bits;
    }
    std::string str(int n_qubits) const;
};

struct PauliHash {
    std::size_t operator()(const PauliMask& m) const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (auto v : m.x_bits.w) h = (h ^ v) * 0x100000001b3ULL;
        for (auto v : m.z_bits.w) h = (h ^ v) * 0x100000001b3ULL;
        return static_cast<std::size_t>(h);
    }
};

struct PauliTerm {
    PauliMask mask;
    double coefficient = 0.0;
};

// Pauli-LCU representation of a Hamiltonian: real coefficients on Hermitian
// Pauli strings, the identity coefficient kept aside in `constant`.
struct CoefficientTable {
    int n_qubits = 0;
    std::vector<PauliTerm> terms;
    double constant = 0.0;
    bool sorted = false;

    std::size_t size() const { return terms.size(); }
    double l1() const;  // sum |c_l|, constant excluded
};

// Stable descending sort by |c|; ties broken by (z_bits, x_bits) ascending.
CoefficientTable prepare_sorted(const CoefficientTable& t);

// Removes the maximal suffix of the sorted table whose cumulative |c| is at
// most `threshold`.
CoefficientTable truncate_tail(const CoefficientTable& t, double threshold);

// CSV export/import: one-line constant header, then rows (x_hex, z_hex, c).
void write_table_csv(const CoefficientTable& t, std::ostream& out);
CoefficientTable read_table_csv(std::istream& in);

}  // namespace prqpe
