#ifndef UNACC_UTIL_H_
#define UNACC_UTIL_H_

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace unacc {

// Splits on a single character; empty fields are kept.
std::vector<std::string> Split(std::string_view text, char sep);

// Splits on runs of ASCII whitespace; no empty fields.
std::vector<std::string> SplitWhitespace(std::string_view text);

std::string ToLowerAscii(std::string_view text);

// Strips a trailing '\r' left by CRLF files.
std::string_view StripCR(std::string_view line);

// Shortest decimal form that parses back to the same double.
std::string FormatDouble(double value);

// Fixed-point with the given number of decimals ("%.6f" style).
std::string FormatFixed(double value, int decimals);

// Parses a full decimal number; false on trailing garbage or empty input.
bool ParseDouble(std::string_view text, double *out);
bool ParseInt(std::string_view text, long long *out);

// Deterministic generator keyed by the run seed plus string keys, so that
// every stage and verb draws from its own stream.
std::mt19937_64 KeyedRng(std::uint64_t seed,
                         std::initializer_list<std::string_view> keys);

// Runs body(i) for i in [0, n) on up to `threads` workers.
void ParallelFor(std::size_t n, int threads,
                 const std::function<void(std::size_t)> &body);

}  // namespace unacc

#endif  // UNACC_UTIL_H_
