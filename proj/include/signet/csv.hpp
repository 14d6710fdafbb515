#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace signet {

// Shortest decimal that round-trips the exact double (used for every CSV).
std::string fmt_full(double v);

// Fixed number of significant digits (used for table display).
std::string fmt_sig(double v, int significant = 6);

// Strict parse of a full field; throws io_error on junk.
double parse_double(std::string_view s);

// Comma-split rows; no quoting (none of the emitted files need it).
std::vector<std::vector<std::string>> read_csv(std::istream& in);

} // namespace signet
