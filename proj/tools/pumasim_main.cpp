#include <cstdio>
#include <fstream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pumasim/bench.hpp"
#include "pumasim/config.hpp"
#include "pumasim/study.hpp"

using namespace pumasim;

namespace {

u64 parse_hex_addr(const std::string& s) {
    std::size_t pos = 0;
    u64 v = std::stoull(s, &pos, 16);
    if (pos != s.size()) {
        throw ConfigError("bad hex address: '" + s + "'");
    }
    return v;
}

int cmd_decode(const SimConfig& config, const std::string& addr_text) {
    const AddressTranslator xlat = config.translator();
    const u64 pa = parse_hex_addr(addr_text);
    const DramCoordinate c = xlat.decode(pa);
    std::printf("pa=0x%llx channel=%llu rank=%llu bank=%llu subarray=%llu "
                "row=%llu column_byte=%llu global_subarray_id=%llu\n",
                (unsigned long long)pa, (unsigned long long)c.channel,
                (unsigned long long)c.rank, (unsigned long long)c.bank,
                (unsigned long long)c.subarray, (unsigned long long)c.row,
                (unsigned long long)c.column_byte,
                (unsigned long long)xlat.compose_subarray_id(c));
    return 0;
}

void print_record(const BenchRecord& r) {
    std::printf("benchmark=%s allocator=%s size_bits=%llu pim_fraction=%.6f "
                "latency=%.6f speedup_vs_malloc=%.6f seed=%llu status=%s\n",
                to_string(r.benchmark), to_string(r.allocator),
                (unsigned long long)r.size_bits, r.pim_fraction, r.latency,
                r.speedup_vs_malloc, (unsigned long long)r.seed,
                r.status == RunStatus::ok ? "ok" : "alloc_failed");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"user-space simulator for subarray-aware memory allocation "
                 "and in-DRAM operation placement"};
    app.require_subcommand(1);

    std::string config_path;
    std::string bench_name, alloc_name, csv_path, charts_dir, addr_text;
    u64 size_bits = 0, seed = 0;
    std::optional<u64> pool_seed;
    u64 trials = 10000;
    u64 study_seed = 1;
    int threads = 0;
    bool trace = false, serial = false;

    auto* run = app.add_subcommand("run", "run one microbenchmark");
    run->add_option("--config", config_path, "config file")->required();
    run->add_option("--bench", bench_name, "zero | copy | and")->required();
    run->add_option("--allocator", alloc_name, "puma | malloc | memalign | hugepage")
        ->required();
    run->add_option("--size-bits", size_bits, "allocation size in bits")->required();
    run->add_option("--seed", seed, "run seed");
    run->add_option("--csv", csv_path, "write the record as CSV");
    run->add_option("--pool-seed", pool_seed, "randomize huge-page placement");
    run->add_flag("--trace", trace, "print allocator trace lines");

    auto* sweep = app.add_subcommand("sweep", "run the full benchmark grid");
    sweep->add_option("--config", config_path, "config file")->required();
    sweep->add_option("--csv", csv_path, "output CSV path")->required();
    sweep->add_option("--charts", charts_dir, "also emit SVG charts here");
    sweep->add_option("--threads", threads, "OpenMP threads (0 = default)");
    sweep->add_flag("--serial", serial, "use the serial reference runner");

    auto* decode = app.add_subcommand("decode", "decode a physical address");
    decode->add_option("--config", config_path, "config file")->required();
    decode->add_option("--addr", addr_text, "physical address (hex)")->required();

    auto* study = app.add_subcommand("study", "allocator executability study");
    study->add_option("--config", config_path, "config file")->required();
    study->add_option("--csv", csv_path, "output CSV path (default: stdout)");
    study->add_option("--trials", trials, "seeds per randomized allocator");
    study->add_option("--seed", study_seed, "study master seed");
    study->add_option("--threads", threads, "OpenMP threads (0 = default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        const SimConfig config = SimConfig::from_file(config_path);

        if (run->parsed()) {
            auto b = benchmark_from_string(bench_name);
            auto a = allocator_from_string(alloc_name);
            if (!b) throw ConfigError("unknown benchmark: '" + bench_name + "'");
            if (!a) throw ConfigError("unknown allocator: '" + alloc_name + "'");
            BenchSpec spec;
            spec.benchmark = *b;
            spec.allocator = *a;
            spec.size_bits = size_bits;
            spec.seed = seed;
            spec.pool_placement_seed = pool_seed;
            TraceSink sink;
            if (trace) {
                sink = [](const TraceEvent& ev) {
                    std::printf("trace: %s\n", ev.format().c_str());
                };
            }
            BenchRecord rec = run_microbenchmark(spec, config, sink);
            print_record(rec);
            if (!csv_path.empty()) emit_csv({rec}, csv_path);
        } else if (sweep->parsed()) {
            std::vector<BenchRecord> records =
                serial ? sweep_serial(config) : sweep_parallel(config, threads);
            emit_csv(records, csv_path);
            if (!charts_dir.empty()) emit_speedup_charts(records, charts_dir);
            std::printf("wrote %zu records to %s\n", records.size(),
                        csv_path.c_str());
        } else if (decode->parsed()) {
            return cmd_decode(config, addr_text);
        } else if (study->parsed()) {
            StudyParams params;
            params.trials = trials;
            params.seed = study_seed;
            auto rows = run_study_parallel(config, params, threads);
            const std::string csv = study_to_csv(rows);
            if (csv_path.empty()) {
                std::fputs(csv.c_str(), stdout);
            } else {
                std::ofstream out(csv_path, std::ios::binary);
                if (!out) throw ConfigError("cannot write CSV file: " + csv_path);
                out << csv;
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
