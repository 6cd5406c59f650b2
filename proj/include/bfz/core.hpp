#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfz {

// Exact rational scalar used by the whole rigidity pipeline.
using Rat = mpq_class;

inline std::string rat_to_string(const Rat& q) { return q.get_str(); }

// Input validation failure with a stable machine-readable code.
// Codes in use: bad_label, self_loop, duplicate_edge, not_connected,
// cycle_detected, bad_letter, word_not_reduced, bad_pattern,
// graph_mismatch, bad_spec, bad_bounds.
class InvalidInput : public std::runtime_error {
public:
    InvalidInput(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Internal invariant violation (construction bug, not user error).
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

inline int sgn(long x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

} // namespace bfz
