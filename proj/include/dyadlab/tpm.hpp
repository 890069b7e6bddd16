#pragma once

// Toy prefix machine (TPM): a bit-exact self-delimiting machine whose
// programs are sequences of LITERAL / COPY blocks terminated by HALT.
//
//   0  gamma(l) payload[l]        LITERAL: append l payload bits
//   10 gamma(o) gamma(l)          COPY: append l bits starting o bits back
//   11                            HALT: valid only as the final two bits
//
// Each instruction costs 1 + (bits emitted) steps.

#include "dyadlab/bitstring.hpp"
#include "dyadlab/rational.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace dyadlab::tpm {

inline constexpr std::string_view kMachineVersion = "tpm-1";
inline constexpr unsigned kMaxEnumerationLength = 40;

/// Elias-gamma: floor(log2 m) zeros followed by the binary digits of m.
BitString gamma_encode(std::uint64_t m);
BitString gamma_encode(const BigInt& m);
std::size_t gamma_length(std::uint64_t m);

/// Sequential reader over a BitString. Reads past the end return nullopt.
class BitReader {
public:
    explicit BitReader(const BitString& bits, std::size_t pos = 0) : bits_(&bits), pos_(pos) {}

    std::optional<bool> read_bit();
    /// nullopt when truncated; throws std::overflow_error above 2^63.
    std::optional<std::uint64_t> read_gamma();
    std::optional<BigInt> read_gamma_big();

    std::size_t position() const noexcept { return pos_; }
    std::size_t remaining() const noexcept { return bits_->size() - pos_; }

private:
    const BitString* bits_;
    std::size_t pos_;
};

std::uint64_t gamma_decode(const BitString& code);

struct RunResult {
    BitString output;
    std::uint64_t steps = 0;
    std::size_t consumed = 0;
};

struct NonHalting {
    std::uint64_t steps = 0;
};

enum class ParseErrorKind {
    truncated,       // program ended inside an opcode, gamma code or payload
    copy_offset,     // COPY offset larger than the current output
    trailing_bits,   // bits remain after HALT
    gamma_overflow,  // gamma value does not fit in 63 bits
};

struct ParseError {
    ParseErrorKind kind;
    std::size_t position = 0;
};

std::string_view to_string(ParseErrorKind kind);

using RunOutcome = std::variant<RunResult, NonHalting, ParseError>;

/// Pure function of (program, budget).
RunOutcome parse_run(const BitString& program, std::uint64_t budget);

BitString literal_block(const BitString& payload);
BitString copy_block(std::uint64_t offset, std::uint64_t length);
BitString halt_block();

/// Length of the shortest TPM program printing w (shortest path over
/// output positions with LITERAL and COPY edges, plus the HALT cost).
std::size_t exact_k(const BitString& w);

/// A program of length exact_k(w) printing w.
BitString shortest_program(const BitString& w);

using ProgramVisitor = std::function<void(const BitString& program, const BitString& output)>;

/// Visits every halting program of length <= max_len whose run fits in
/// `budget` steps, each exactly once, in depth-first prefix-tree order.
/// Throws BudgetError past kMaxEnumerationLength or `max_programs` visits.
std::uint64_t enumerate_programs(unsigned max_len, std::uint64_t budget, const ProgramVisitor& visit,
                                 std::uint64_t max_programs = 500'000'000);

struct TableEntry {
    std::uint32_t min_len = 0;
    /// census * 2^L, exact since every contributing program has length <= L.
    std::uint64_t census_scaled = 0;
};

/// Resource-bounded K and algorithmic-probability census keyed by output.
/// Immutable once built.
class ComplexityTable {
public:
    using Entries = std::map<BitString, TableEntry, ShortLex>;

    ComplexityTable(unsigned max_len, std::uint64_t budget, std::string machine_version, Entries entries,
                    std::uint64_t program_count);

    unsigned max_length() const noexcept { return max_len_; }
    std::uint64_t budget() const noexcept { return budget_; }
    const std::string& machine_version() const noexcept { return machine_version_; }
    std::uint64_t program_count() const noexcept { return program_count_; }
    const Entries& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }

    const TableEntry* find(const BitString& w) const;
    std::optional<std::size_t> min_len(const BitString& w) const;
    Rational census(const BitString& w) const;
    Rational kraft_sum() const;

private:
    unsigned max_len_;
    std::uint64_t budget_;
    std::string machine_version_;
    Entries entries_;
    std::uint64_t program_count_;
};

ComplexityTable build_table(unsigned max_len, std::uint64_t budget);

/// census(w), or 0 when w is absent.
Rational algorithmic_prob(const BitString& w, const ComplexityTable& table);

}  // namespace dyadlab::tpm
