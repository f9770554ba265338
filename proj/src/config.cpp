#include "pumasim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace pumasim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

u64 parse_u64(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        u64 v = std::stoull(value, &pos, 0);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad number for " + key + ": '" + value + "'");
    }
}

DramField parse_field(const std::string& name) {
    if (name == "column" || name == "col") return DramField::column;
    if (name == "row") return DramField::row;
    if (name == "subarray") return DramField::subarray;
    if (name == "bank") return DramField::bank;
    if (name == "rank") return DramField::rank;
    if (name == "channel") return DramField::channel;
    throw ConfigError("unknown mapping field: '" + name + "'");
}

} // namespace

AddressMapping parse_mapping(const std::string& text) {
    AddressMapping m;
    std::stringstream ss(text);
    std::string entry;
    while (std::getline(ss, entry, ',')) {
        entry = trim(entry);
        if (entry.empty()) continue;
        const auto colon = entry.find(':');
        if (colon == std::string::npos) {
            throw ConfigError("mapping entry '" + entry + "' is not field:lo-hi");
        }
        const std::string field = trim(entry.substr(0, colon));
        const std::string range = trim(entry.substr(colon + 1));
        const auto dash = range.find('-');
        u64 lo, hi;
        if (dash == std::string::npos) {
            lo = hi = parse_u64("mapping", range);
        } else {
            lo = parse_u64("mapping", trim(range.substr(0, dash)));
            hi = parse_u64("mapping", trim(range.substr(dash + 1)));
        }
        m.entries.push_back({parse_field(field),
                             {static_cast<u32>(lo), static_cast<u32>(hi)}});
    }
    if (m.entries.empty()) {
        throw ConfigError("mapping must contain at least one field:lo-hi entry");
    }
    return m;
}

std::string format_mapping(const AddressMapping& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.entries.size(); ++i) {
        if (i) os << ", ";
        os << to_string(m.entries[i].field) << ":" << m.entries[i].bits.lo << "-"
           << m.entries[i].bits.hi;
    }
    return os.str();
}

SimConfig SimConfig::defaults() {
    SimConfig c;
    c.mapping = AddressMapping::interleaved_default(c.geometry);
    return c;
}

SimConfig SimConfig::from_string(const std::string& text) {
    SimConfig c;
    bool mapping_set = false;

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "geometry.channels") c.geometry.channels = parse_u64(key, value);
        else if (key == "geometry.ranks_per_channel") c.geometry.ranks_per_channel = parse_u64(key, value);
        else if (key == "geometry.banks_per_rank") c.geometry.banks_per_rank = parse_u64(key, value);
        else if (key == "geometry.subarrays_per_bank") c.geometry.subarrays_per_bank = parse_u64(key, value);
        else if (key == "geometry.rows_per_subarray") c.geometry.rows_per_subarray = parse_u64(key, value);
        else if (key == "geometry.columns_per_row") c.geometry.columns_per_row = parse_u64(key, value);
        else if (key == "geometry.bytes_per_column") c.geometry.bytes_per_column = parse_u64(key, value);
        else if (key == "mapping") { c.mapping = parse_mapping(value); mapping_set = true; }
        else if (key == "pool.huge_page_bytes") c.pool.huge_page_bytes = parse_u64(key, value);
        else if (key == "pool.max_pages") c.pool.max_pages = parse_u64(key, value);
        else if (key == "pool.pages") c.pool.pages = parse_u64(key, value);
        else if (key == "cost.t_dram_row_op") c.cost.t_dram_row_op = parse_double(key, value);
        else if (key == "cost.t_ambit_row_op") c.cost.t_ambit_row_op = parse_double(key, value);
        else if (key == "cost.t_cpu_per_byte") c.cost.t_cpu_per_byte = parse_double(key, value);
        else if (key == "sweep.min_bits") c.sweep.min_bits = parse_u64(key, value);
        else if (key == "sweep.max_bits") c.sweep.max_bits = parse_u64(key, value);
        else if (key == "sweep.points") c.sweep.points = static_cast<u32>(parse_u64(key, value));
        else if (key == "sweep.repetitions") c.sweep.repetitions = static_cast<u32>(parse_u64(key, value));
        else if (key == "sweep.seed") c.sweep.seed = parse_u64(key, value);
        else throw ConfigError("unknown config key: '" + key + "'");
    }

    if (!mapping_set) {
        c.geometry.validate();
        c.mapping = AddressMapping::interleaved_default(c.geometry);
    }
    c.validate();
    return c;
}

SimConfig SimConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    std::ostringstream os;
    os << in.rdbuf();
    return from_string(os.str());
}

AddressTranslator SimConfig::translator() const {
    return AddressTranslator(geometry, mapping);
}

void SimConfig::validate() const {
    geometry.validate();
    validate_mapping(geometry, mapping);
    cost.validate();
    if (pool.huge_page_bytes == 0 ||
        pool.huge_page_bytes % geometry.region_bytes() != 0) {
        throw ConfigError("pool.huge_page_bytes must be a multiple of the region size");
    }
    if (pool.pages == 0) {
        throw ConfigError("pool.pages must be >= 1");
    }
    if (sweep.points < 2) {
        throw ConfigError("sweep.points must be >= 2");
    }
    if (sweep.min_bits == 0 || sweep.min_bits > sweep.max_bits) {
        throw ConfigError("sweep size bounds must satisfy 1 <= min_bits <= max_bits");
    }
    if (sweep.repetitions == 0) {
        throw ConfigError("sweep.repetitions must be >= 1");
    }
}

std::vector<u64> sweep_sizes_bits(const SweepConfig& s) {
    std::vector<u64> sizes;
    sizes.reserve(s.points);
    const double lo = static_cast<double>(s.min_bits);
    const double hi = static_cast<double>(s.max_bits);
    for (u32 i = 0; i < s.points; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(s.points - 1);
        u64 bits = static_cast<u64>(std::llround(lo * std::pow(hi / lo, t)));
        if (!sizes.empty() && bits <= sizes.back()) bits = sizes.back() + 1;
        sizes.push_back(bits);
    }
    sizes.front() = s.min_bits;
    sizes.back() = s.max_bits;
    return sizes;
}

} // namespace pumasim
