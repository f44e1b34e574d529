#pragma once

#include <iosfwd>
#include <string>

#include "prqpe/integrals.hpp"

namespace prqpe {

// FCIDUMP text interchange. Indices are 1-based and address g_ijkl in
// chemist order (ij|kl); (i j 0 0) addresses h_ij; the all-zero index line
// holds the core energy. Lines starting with '!' are comments. Fortran 'D'
// exponents are accepted.
ElectronIntegrals parse_fcidump(std::istream& in);
ElectronIntegrals parse_fcidump_file(const std::string& path);

void write_fcidump(const ElectronIntegrals& x, std::ostream& out);
void write_fcidump_file(const ElectronIntegrals& x, const std::string& path);

}  // namespace prqpe
