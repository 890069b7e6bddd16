#include "dyadlab/table_io.hpp"

#include <fstream>
#include <sstream>

namespace dyadlab::tpm {

namespace {

template <typename U>
void put(std::string& out, U v) {
    for (std::size_t i = 0; i < sizeof(U); ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class Cursor {
public:
    explicit Cursor(const std::string& s, std::size_t pos) : s_(s), pos_(pos) {}

    template <typename U>
    U get() {
        need(sizeof(U));
        U v = 0;
        for (std::size_t i = 0; i < sizeof(U); ++i)
            v |= static_cast<U>(static_cast<unsigned char>(s_[pos_ + i])) << (8 * i);
        pos_ += sizeof(U);
        return v;
    }
    unsigned char byte() {
        need(1);
        return static_cast<unsigned char>(s_[pos_++]);
    }
    bool done() const { return pos_ == s_.size(); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > s_.size()) throw ConfigError("table file truncated");
    }
    const std::string& s_;
    std::size_t pos_;
};

void check_machine(const std::string& version) {
    if (version != kMachineVersion)
        throw ConfigError("table was built for machine '" + version + "', this build runs '" +
                          std::string(kMachineVersion) + "'");
}

// census_scaled / 2^L <-> reduced fraction
std::pair<std::uint64_t, std::uint64_t> census_fraction(std::uint64_t scaled, unsigned L) {
    std::uint64_t den = std::uint64_t{1} << L;
    while (scaled != 0 && scaled % 2 == 0 && den > 1) {
        scaled /= 2;
        den /= 2;
    }
    return {scaled, den};
}

std::uint64_t census_scaled(std::uint64_t num, std::uint64_t den, unsigned L) {
    const std::uint64_t full = std::uint64_t{1} << L;
    if (den == 0 || full % den != 0) throw ConfigError("census denominator is not a divisor of 2^L");
    return num * (full / den);
}

}  // namespace

std::string to_binary(const ComplexityTable& table) {
    std::ostringstream header;
    header << "TPMTABLE " << kTableFormatVersion << ' ' << table.max_length() << ' ' << table.budget() << ' '
           << table.machine_version() << ' ' << table.program_count() << '\n';
    std::string out = header.str();
    for (const auto& [w, e] : table.entries()) {
        put<std::uint32_t>(out, static_cast<std::uint32_t>(w.size()));
        unsigned char acc = 0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            acc = static_cast<unsigned char>(acc | (w[i] << (7 - i % 8)));
            if (i % 8 == 7 || i + 1 == w.size()) {
                out.push_back(static_cast<char>(acc));
                acc = 0;
            }
        }
        auto [num, den] = census_fraction(e.census_scaled, table.max_length());
        put<std::uint32_t>(out, e.min_len);
        put<std::uint64_t>(out, num);
        put<std::uint64_t>(out, den);
    }
    return out;
}

ComplexityTable from_binary(const std::string& bytes) {
    const auto eol = bytes.find('\n');
    if (eol == std::string::npos) throw ConfigError("table file has no header line");
    std::istringstream header(bytes.substr(0, eol));
    std::string magic, machine;
    int version = 0;
    unsigned L = 0;
    std::uint64_t T = 0, programs = 0;
    if (!(header >> magic >> version >> L >> T >> machine >> programs) || magic != "TPMTABLE")
        throw ConfigError("not a TPM table file");
    if (version != kTableFormatVersion) throw ConfigError("unsupported table format " + std::to_string(version));
    if (L > kMaxEnumerationLength) throw ConfigError("table length bound out of range");
    check_machine(machine);

    ComplexityTable::Entries entries;
    Cursor in(bytes, eol + 1);
    while (!in.done()) {
        const auto len = in.get<std::uint32_t>();
        if (len > kMaxBitStringLength) throw ConfigError("table record exceeds the bit-string cap");
        std::string bits;
        for (std::uint32_t i = 0; i < len; i += 8) {
            unsigned char b = in.byte();
            for (std::uint32_t j = i; j < std::min(len, i + 8); ++j) bits.push_back((b >> (7 - j % 8)) & 1 ? '1' : '0');
        }
        TableEntry e;
        e.min_len = in.get<std::uint32_t>();
        const auto num = in.get<std::uint64_t>();
        const auto den = in.get<std::uint64_t>();
        e.census_scaled = census_scaled(num, den, L);
        entries.emplace(BitString::from_string(bits), e);
    }
    return ComplexityTable(L, T, machine, std::move(entries), programs);
}

nlohmann::json to_json(const ComplexityTable& table) {
    nlohmann::json records = nlohmann::json::array();
    for (const auto& [w, e] : table.entries()) {
        auto [num, den] = census_fraction(e.census_scaled, table.max_length());
        records.push_back({{"output", w.to_hex()}, {"min_len", e.min_len}, {"census_num", num}, {"census_den", den}});
    }
    return {{"format", kTableFormatVersion}, {"L", table.max_length()}, {"T", table.budget()},
            {"machine", table.machine_version()}, {"programs", table.program_count()},
            {"kraft_sum", table.kraft_sum().get_str()}, {"records", records}};
}

ComplexityTable from_json(const nlohmann::json& doc) {
    try {
        if (doc.at("format").get<int>() != kTableFormatVersion) throw ConfigError("unsupported table format");
        const auto machine = doc.at("machine").get<std::string>();
        check_machine(machine);
        const auto L = doc.at("L").get<unsigned>();
        ComplexityTable::Entries entries;
        for (const auto& r : doc.at("records")) {
            TableEntry e;
            e.min_len = r.at("min_len").get<std::uint32_t>();
            e.census_scaled =
                census_scaled(r.at("census_num").get<std::uint64_t>(), r.at("census_den").get<std::uint64_t>(), L);
            entries.emplace(BitString::from_hex(r.at("output").get<std::string>()), e);
        }
        return ComplexityTable(L, doc.at("T").get<std::uint64_t>(), machine, std::move(entries),
                               doc.at("programs").get<std::uint64_t>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed table JSON: ") + e.what());
    }
}

void save_table(const ComplexityTable& table, const std::filesystem::path& path) {
    std::ofstream bin(path, std::ios::binary);
    if (!bin) throw ConfigError("cannot write " + path.string());
    bin << to_binary(table);
    auto mirror = path;
    mirror += ".json";
    std::ofstream js(mirror);
    js << to_json(table).dump(1) << '\n';
}

ComplexityTable load_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("table file " + path.string() + " not found; run `dyadlab table build` first");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (path.extension() == ".json") return from_json(nlohmann::json::parse(buf.str()));
    return from_binary(buf.str());
}

}  // namespace dyadlab::tpm
