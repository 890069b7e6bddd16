#include "dyadlab/tpm.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace dyadlab::tpm {

namespace {

unsigned floor_log2(std::uint64_t m) {
    return 63u - static_cast<unsigned>(std::countl_zero(m));
}

}  // namespace

std::size_t gamma_length(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("gamma code is defined for m >= 1");
    return 2 * std::size_t{floor_log2(m)} + 1;
}

BitString gamma_encode(std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("gamma code is defined for m >= 1");
    unsigned zeros = floor_log2(m);
    BitString out;
    for (unsigned i = 0; i < zeros; ++i) out.push_back(false);
    for (int k = static_cast<int>(zeros); k >= 0; --k) out.push_back((m >> k) & 1u);
    return out;
}

BitString gamma_encode(const BigInt& m) {
    if (sgn(m) <= 0) throw std::invalid_argument("gamma code is defined for m >= 1");
    std::size_t bits = mpz_sizeinbase(m.get_mpz_t(), 2);
    BitString out;
    for (std::size_t i = 0; i + 1 < bits; ++i) out.push_back(false);
    for (std::size_t k = bits; k-- > 0;) out.push_back(mpz_tstbit(m.get_mpz_t(), k) != 0);
    return out;
}

std::optional<bool> BitReader::read_bit() {
    if (pos_ >= bits_->size()) return std::nullopt;
    return (*bits_)[pos_++];
}

std::optional<std::uint64_t> BitReader::read_gamma() {
    std::size_t zeros = 0;
    while (true) {
        auto b = read_bit();
        if (!b) return std::nullopt;
        if (*b) break;
        ++zeros;
    }
    if (zeros > 62) throw std::overflow_error("gamma value exceeds 63 bits");
    std::uint64_t v = 1;
    for (std::size_t i = 0; i < zeros; ++i) {
        auto b = read_bit();
        if (!b) return std::nullopt;
        v = (v << 1) | (*b ? 1u : 0u);
    }
    return v;
}

std::optional<BigInt> BitReader::read_gamma_big() {
    std::size_t zeros = 0;
    while (true) {
        auto b = read_bit();
        if (!b) return std::nullopt;
        if (*b) break;
        ++zeros;
    }
    if (zeros > remaining()) return std::nullopt;
    BigInt v = 1;
    for (std::size_t i = 0; i < zeros; ++i) {
        v *= 2;
        if (*read_bit()) v += 1;
    }
    return v;
}

std::uint64_t gamma_decode(const BitString& code) {
    BitReader rd(code);
    auto v = rd.read_gamma();
    if (!v || rd.remaining() != 0) throw std::invalid_argument("not a single gamma code");
    return *v;
}

std::string_view to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::truncated: return "truncated";
        case ParseErrorKind::copy_offset: return "copy offset exceeds output";
        case ParseErrorKind::trailing_bits: return "trailing bits after HALT";
        case ParseErrorKind::gamma_overflow: return "gamma overflow";
    }
    return "unknown";
}

RunOutcome parse_run(const BitString& program, std::uint64_t budget) {
    if (budget < 1) throw std::invalid_argument("step budget must be >= 1");
    BitReader rd(program);
    BitString out;
    std::uint64_t steps = 0;

    auto charge = [&](std::uint64_t emitted) {
        // 1 + emitted without overflow
        if (emitted >= budget || steps > budget - 1 - emitted) return false;
        steps += 1 + emitted;
        return true;
    };

    try {
        while (true) {
            std::size_t at = rd.position();
            auto op = rd.read_bit();
            if (!op) return ParseError{ParseErrorKind::truncated, at};
            if (!*op) {
                auto len = rd.read_gamma();
                if (!len || *len > rd.remaining()) return ParseError{ParseErrorKind::truncated, at};
                if (!charge(*len)) return NonHalting{steps};
                for (std::uint64_t i = 0; i < *len; ++i) out.push_back(*rd.read_bit());
                continue;
            }
            auto op2 = rd.read_bit();
            if (!op2) return ParseError{ParseErrorKind::truncated, at};
            if (!*op2) {
                auto offset = rd.read_gamma();
                if (!offset) return ParseError{ParseErrorKind::truncated, at};
                auto len = rd.read_gamma();
                if (!len) return ParseError{ParseErrorKind::truncated, at};
                if (*offset > out.size()) return ParseError{ParseErrorKind::copy_offset, at};
                if (!charge(*len)) return NonHalting{steps};
                std::size_t from = out.size() - *offset;
                for (std::uint64_t i = 0; i < *len; ++i) out.push_back(out[from + i]);
                continue;
            }
            if (rd.remaining() != 0) return ParseError{ParseErrorKind::trailing_bits, rd.position()};
            if (!charge(0)) return NonHalting{steps};
            return RunResult{std::move(out), steps, program.size()};
        }
    } catch (const std::overflow_error&) {
        return ParseError{ParseErrorKind::gamma_overflow, rd.position()};
    }
}

BitString literal_block(const BitString& payload) {
    BitString b = BitString::from_string("0");
    b.append(gamma_encode(payload.size()));
    b.append(payload);
    return b;
}

BitString copy_block(std::uint64_t offset, std::uint64_t length) {
    BitString b = BitString::from_string("10");
    b.append(gamma_encode(offset));
    b.append(gamma_encode(length));
    return b;
}

BitString halt_block() {
    return BitString::from_string("11");
}

namespace {

struct Edge {
    std::size_t cost = std::numeric_limits<std::size_t>::max();
    std::size_t from = 0;
    std::uint64_t offset = 0;  // 0 marks LITERAL
};

std::vector<Edge> shortest_paths(const BitString& w) {
    const std::size_t n = w.size();
    const std::size_t groups = n == 0 ? 0 : floor_log2(n) + 1;

    // For each position i and offset group g (offsets in [2^g, 2^{g+1})),
    // the longest self-match and an offset attaining it.
    std::vector<std::uint32_t> best_len(n * groups, 0);
    std::vector<std::uint32_t> best_off(n * groups, 0);
    std::vector<std::uint32_t> run(n + 1, 0);  // run[o] = match length at i+1
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t o = 1; o <= i; ++o) {
            run[o] = (w[i] == w[i - o]) ? run[o] + 1 : 0;
            if (run[o] == 0) continue;
            std::size_t slot = i * groups + floor_log2(o);
            if (run[o] > best_len[slot]) {
                best_len[slot] = run[o];
                best_off[slot] = static_cast<std::uint32_t>(o);
            }
        }
        for (std::size_t o = i + 1; o <= n; ++o) run[o] = 0;
    }

    std::vector<Edge> dist(n + 1);
    dist[0].cost = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (dist[i].cost == std::numeric_limits<std::size_t>::max()) continue;
        const std::size_t base = dist[i].cost;
        for (std::size_t len = 1; i + len <= n; ++len) {
            std::size_t c = base + 1 + gamma_length(len) + len;
            if (c < dist[i + len].cost) dist[i + len] = Edge{c, i, 0};
        }
        for (std::size_t g = 0; g < groups; ++g) {
            std::size_t m = best_len[i * groups + g];
            if (m == 0) continue;
            std::size_t head = base + 2 + (2 * g + 1);
            for (std::size_t len = 1; len <= m; ++len) {
                std::size_t c = head + gamma_length(len);
                if (c < dist[i + len].cost) dist[i + len] = Edge{c, i, best_off[i * groups + g]};
            }
        }
    }
    return dist;
}

}  // namespace

std::size_t exact_k(const BitString& w) {
    if (w.empty()) return halt_block().size();
    return shortest_paths(w)[w.size()].cost + halt_block().size();
}

BitString shortest_program(const BitString& w) {
    std::vector<BitString> blocks;
    if (!w.empty()) {
        auto dist = shortest_paths(w);
        for (std::size_t at = w.size(); at > 0;) {
            const Edge& e = dist[at];
            std::size_t len = at - e.from;
            blocks.push_back(e.offset == 0 ? literal_block(w.substr(e.from, len)) : copy_block(e.offset, len));
            at = e.from;
        }
    }
    BitString p;
    for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) p.append(*it);
    p.append(halt_block());
    return p;
}

namespace {

class Enumerator {
public:
    Enumerator(unsigned max_len, std::uint64_t budget, const ProgramVisitor& visit, std::uint64_t max_programs)
        : max_len_(max_len), budget_(budget), visit_(visit), max_programs_(max_programs) {}

    std::uint64_t run() {
        dfs(0);
        return count_;
    }

private:
    // Room left for the block under construction, keeping 2 bits for HALT.
    bool fits(std::size_t block_bits) const { return prog_.size() + block_bits + 2 <= max_len_; }
    bool affordable(std::uint64_t steps, std::uint64_t emitted) const {
        return steps + 1 + emitted + 1 <= budget_;
    }

    void dfs(std::uint64_t steps) {
        const std::size_t mark = prog_.size();
        const std::size_t out_mark = out_.size();

        for (std::uint64_t len = 1; fits(1 + gamma_length(len) + len) && affordable(steps, len); ++len) {
            prog_.push_back(false);
            prog_.append(gamma_encode(len));
            payload(len, steps + 1 + len);
            prog_.truncate(mark);
        }

        for (std::uint64_t off = 1; off <= out_.size() && fits(2 + gamma_length(off) + 1); ++off) {
            for (std::uint64_t len = 1; fits(2 + gamma_length(off) + gamma_length(len)) && affordable(steps, len);
                 ++len) {
                prog_.append(copy_block(off, len));
                std::size_t from = out_.size() - off;
                for (std::uint64_t i = 0; i < len; ++i) out_.push_back(out_[from + i]);
                dfs(steps + 1 + len);
                prog_.truncate(mark);
                out_.truncate(out_mark);
            }
        }

        if (prog_.size() + 2 <= max_len_ && steps + 1 <= budget_) {
            prog_.append(halt_block());
            if (++count_ > max_programs_) throw BudgetError("program enumeration exceeded its visit cap");
            visit_(prog_, out_);
            prog_.truncate(mark);
        }
    }

    void payload(std::uint64_t remaining, std::uint64_t steps) {
        if (remaining == 0) {
            dfs(steps);
            return;
        }
        for (bool bit : {false, true}) {
            prog_.push_back(bit);
            out_.push_back(bit);
            payload(remaining - 1, steps);
            prog_.pop_back();
            out_.pop_back();
        }
    }

    unsigned max_len_;
    std::uint64_t budget_;
    const ProgramVisitor& visit_;
    std::uint64_t max_programs_;
    std::uint64_t count_ = 0;
    BitString prog_;
    BitString out_;
};

}  // namespace

std::uint64_t enumerate_programs(unsigned max_len, std::uint64_t budget, const ProgramVisitor& visit,
                                 std::uint64_t max_programs) {
    if (max_len > kMaxEnumerationLength)
        throw BudgetError("program length bound " + std::to_string(max_len) + " exceeds the enumeration cap of " +
                          std::to_string(kMaxEnumerationLength));
    if (budget < 1) throw std::invalid_argument("step budget must be >= 1");
    return Enumerator(max_len, budget, visit, max_programs).run();
}

ComplexityTable::ComplexityTable(unsigned max_len, std::uint64_t budget, std::string machine_version,
                                 Entries entries, std::uint64_t program_count)
    : max_len_(max_len),
      budget_(budget),
      machine_version_(std::move(machine_version)),
      entries_(std::move(entries)),
      program_count_(program_count) {}

const TableEntry* ComplexityTable::find(const BitString& w) const {
    auto it = entries_.find(w);
    return it == entries_.end() ? nullptr : &it->second;
}

std::optional<std::size_t> ComplexityTable::min_len(const BitString& w) const {
    if (const auto* e = find(w)) return e->min_len;
    return std::nullopt;
}

Rational ComplexityTable::census(const BitString& w) const {
    const auto* e = find(w);
    if (!e) return 0;
    Rational r = Rational(BigInt(std::to_string(e->census_scaled))) * pow2(-static_cast<long>(max_len_));
    r.canonicalize();
    return r;
}

Rational ComplexityTable::kraft_sum() const {
    BigInt total = 0;
    for (const auto& [w, e] : entries_) total += BigInt(std::to_string(e.census_scaled));
    Rational r = Rational(total) * pow2(-static_cast<long>(max_len_));
    r.canonicalize();
    return r;
}

ComplexityTable build_table(unsigned max_len, std::uint64_t budget) {
    std::unordered_map<BitString, TableEntry> acc;
    std::uint64_t count = enumerate_programs(max_len, budget, [&](const BitString& p, const BitString& out) {
        auto& e = acc[out];
        if (e.census_scaled == 0 || p.size() < e.min_len) e.min_len = static_cast<std::uint32_t>(p.size());
        e.census_scaled += std::uint64_t{1} << (max_len - p.size());
    });
    ComplexityTable::Entries entries(acc.begin(), acc.end());
    return ComplexityTable(max_len, budget, std::string(kMachineVersion), std::move(entries), count);
}

Rational algorithmic_prob(const BitString& w, const ComplexityTable& table) {
    return table.census(w);
}

}  // namespace dyadlab::tpm
