#include "dyadlab/config.hpp"

#include "dyadlab/tpm.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace dyadlab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(trim(item));
    return out;
}

template <typename U>
U to_unsigned(const std::string& key, const std::string& v) {
    U out{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("'" + key + "' expects a non-negative integer, got '" + v + "'");
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        double d = std::stod(v, &used);
        if (used == v.size()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("'" + key + "' expects a number, got '" + v + "'");
}

Rational to_rational(const std::string& v) {
    Rational q;
    if (v.empty() || q.set_str(v, 10) != 0) throw ConfigError("bad rational '" + v + "'");
    if (q.get_den() == 0) throw ConfigError("zero denominator in '" + v + "'");
    q.canonicalize();
    return q;
}

std::vector<geo::RationalPoint> parse_points(const std::string& list, std::size_t n) {
    std::vector<geo::RationalPoint> out;
    for (const auto& p : split(list, ';'))
        if (!p.empty()) out.push_back(parse_rational_point(p, n));
    return out;
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return c;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void RunConfig::set(const std::string& key, const std::string& v) {
    if (key == "machine") machine = v;
    else if (key == "n") n = to_unsigned<std::size_t>(key, v);
    else if (key == "L") L = to_unsigned<unsigned>(key, v);
    else if (key == "T") T = to_unsigned<std::uint64_t>(key, v);
    else if (key == "guard") guard = to_unsigned<unsigned>(key, v);
    else if (key == "r_min") r_min = to_unsigned<unsigned>(key, v);
    else if (key == "r_max") r_max = to_unsigned<unsigned>(key, v);
    else if (key == "r0") r0 = to_unsigned<unsigned>(key, v);
    else if (key == "slope_tol") slope_tol = to_double(key, v);
    else if (key == "gap_tol") gap_tol = to_double(key, v);
    else if (key == "epsilon") epsilon = to_double(key, v);
    else if (key == "machine_c") machine_c = to_double(key, v);
    else if (key == "registry") registry = v;
    else if (key == "seed") seed = to_unsigned<std::uint64_t>(key, v);
    else if (key == "table") table = v;
    else if (key == "out") out = v;
    else throw ConfigError("unknown config key '" + key + "'");
}

void RunConfig::validate() const {
    if (machine != tpm::kMachineVersion)
        throw ConfigError("machine '" + machine + "' is not available; this build runs " +
                          std::string(tpm::kMachineVersion));
    if (n < 1 || n > geo::kMaxDimension) throw ConfigError("n must lie in 1..4");
    if (L < 2 || L > tpm::kMaxEnumerationLength) throw ConfigError("L must lie in 2..40");
    if (T < 1) throw ConfigError("T must be positive");
    if (r_min > r_max) throw ConfigError("r_min exceeds r_max");
    if (r0 > r_max) throw ConfigError("r0 exceeds r_max");
    if (!(slope_tol > 0) || !(gap_tol > 0) || !(epsilon > 0) || epsilon >= 1)
        throw ConfigError("slope_tol and gap_tol must be positive and epsilon must lie in (0, 1)");
    if (machine_c < 0) throw ConfigError("machine_c must be non-negative");
}

std::uint64_t RunConfig::require_seed() const {
    if (!seed) throw ConfigError("this command samples at random: set 'seed'");
    return *seed;
}

nlohmann::json RunConfig::to_json() const {
    return {{"machine", machine}, {"encoding", geo::kEncodingVersion}, {"n", n}, {"L", L}, {"T", T},
            {"guard", guard}, {"r_min", r_min}, {"r_max", r_max}, {"r0", r0}, {"slope_tol", slope_tol},
            {"gap_tol", gap_tol}, {"epsilon", epsilon}, {"machine_c", machine_c}, {"registry", registry},
            {"seed", seed ? nlohmann::json(*seed) : nlohmann::json(nullptr)}, {"table", table}, {"out", out}};
}

geo::RationalPoint parse_rational_point(const std::string& spec, std::size_t n) {
    std::vector<Rational> c;
    for (const auto& item : split(spec, ',')) c.push_back(to_rational(item));
    if (c.size() != n)
        throw ConfigError("point '" + spec + "' has " + std::to_string(c.size()) + " coordinates, expected " +
                          std::to_string(n));
    return geo::RationalPoint(std::move(c));
}

geo::PointDescriptor parse_point(const std::string& spec, std::size_t n) {
    if (spec.rfind("random:", 0) != 0 && spec.rfind("periodic:", 0) != 0) return parse_rational_point(spec, n);
    std::vector<geo::GeneratedCoordinate> coords;
    for (const auto& item : split(spec, ';')) {
        auto parts = split(item, ':');
        if (parts[0] == "random" && parts.size() == 2)
            coords.push_back({0, std::make_shared<geo::PseudoRandomBits>(to_unsigned<std::uint64_t>("seed", parts[1]))});
        else if (parts[0] == "periodic" && parts.size() == 3)
            coords.push_back({0, std::make_shared<geo::EventuallyPeriodicBits>(parts[1], parts[2])});
        else
            throw ConfigError("bad generated coordinate '" + item + "'");
    }
    if (coords.size() != n) throw ConfigError("point '" + spec + "' does not have " + std::to_string(n) + " coordinates");
    return geo::PointDescriptor(std::move(coords));
}

measures::SetQuery parse_set(const std::string& spec, std::size_t n) {
    if (spec == "empty") return measures::FiniteSet{};
    if (spec == "all") return measures::CoFinite{};
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "points") return measures::FiniteSet{parse_points(rest, n)};
    if (kind == "cofinite") return measures::CoFinite{parse_points(rest, n)};
    if (kind == "cube" || kind == "ball") {
        const auto c2 = rest.find(':');
        if (c2 == std::string::npos) throw ConfigError("expected " + kind + ":R:...");
        const auto r = to_unsigned<unsigned>("r", rest.substr(0, c2));
        const std::string body = rest.substr(c2 + 1);
        if (kind == "ball") return geo::Ball{parse_rational_point(body, n), r};
        geo::DyadicCube cube{r, {}};
        for (const auto& a : split(body, ',')) {
            BigInt m;
            if (a.empty() || m.set_str(a, 10) != 0) throw ConfigError("bad cube address '" + a + "'");
            cube.address.push_back(m);
        }
        if (cube.address.size() != n) throw ConfigError("cube address must have " + std::to_string(n) + " entries");
        return cube;
    }
    throw ConfigError("unknown set spec '" + spec + "'");
}

}  // namespace dyadlab::cli
