#include "pumasim/bench.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pumasim {

const char* to_string(Benchmark b) {
    switch (b) {
    case Benchmark::zero: return "zero";
    case Benchmark::copy: return "copy";
    case Benchmark::and_: return "and";
    }
    return "?";
}

const char* to_string(AllocatorKind a) {
    switch (a) {
    case AllocatorKind::puma:         return "puma";
    case AllocatorKind::malloc_sim:   return "malloc";
    case AllocatorKind::memalign_sim: return "memalign";
    case AllocatorKind::hugepage_sim: return "hugepage";
    }
    return "?";
}

std::optional<Benchmark> benchmark_from_string(const std::string& s) {
    if (s == "zero") return Benchmark::zero;
    if (s == "copy") return Benchmark::copy;
    if (s == "and") return Benchmark::and_;
    return std::nullopt;
}

std::optional<AllocatorKind> allocator_from_string(const std::string& s) {
    if (s == "puma") return AllocatorKind::puma;
    if (s == "malloc") return AllocatorKind::malloc_sim;
    if (s == "memalign") return AllocatorKind::memalign_sim;
    if (s == "hugepage") return AllocatorKind::hugepage_sim;
    return std::nullopt;
}

namespace {

PudOpKind op_kind(Benchmark b) {
    switch (b) {
    case Benchmark::zero: return PudOpKind::row_init_zero;
    case Benchmark::copy: return PudOpKind::row_copy;
    case Benchmark::and_: return PudOpKind::and_;
    }
    return PudOpKind::row_init_zero;
}

struct RunOutcome {
    bool ok = false;
    double fraction = 0.0;
    double latency = 0.0;
};

RunOutcome run_once(Benchmark bench, AllocatorKind kind, u64 size_bytes, u64 seed,
                    const SimConfig& config, const TraceSink& trace,
                    std::optional<u64> placement_seed = std::nullopt) {
    const AddressTranslator xlat = config.translator();
    const int arity = operand_arity(op_kind(bench));
    RunOutcome out;
    try {
        std::vector<OperandRef> ops;
        ExecutabilityReport report;
        if (kind == AllocatorKind::puma) {
            PoolParams pp;
            pp.huge_page_bytes = config.pool.huge_page_bytes;
            pp.max_pages = config.pool.max_pages;
            pp.placement_seed = placement_seed;
            PumaAllocator alloc(xlat, pp);
            if (trace) alloc.set_trace_sink(trace);
            alloc.pim_preallocate(config.pool.pages);
            Allocation first = alloc.pim_alloc(size_bytes);
            ops.push_back(operand(first));
            for (int i = 1; i < arity; ++i) {
                ops.push_back(operand(alloc.pim_alloc_align(size_bytes, first.virtual_base)));
            }
            auto op = PudOperation::make(op_kind(bench), ops, size_bytes);
            report = check_executability(op, alloc.address_space(), xlat);
            out.latency = execute(op, report, config.cost);
            for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
                alloc.pim_free(it->virtual_base);
            }
        } else {
            BaselineKind bk = kind == AllocatorKind::malloc_sim ? BaselineKind::malloc_sim
                              : kind == AllocatorKind::memalign_sim
                                  ? BaselineKind::memalign_sim
                                  : BaselineKind::hugepage_sim;
            BaselineParams bp;
            bp.chunk_bytes = config.pool.huge_page_bytes;
            BaselineAllocator alloc(xlat, bk, seed, bp);
            for (int i = 0; i < arity; ++i) {
                ops.push_back(operand(alloc.alloc(size_bytes)));
            }
            auto op = PudOperation::make(op_kind(bench), ops, size_bytes);
            report = check_executability(op, alloc.address_space(), xlat);
            out.latency = execute(op, report, config.cost);
        }
        out.fraction = report.pim_fraction();
        out.ok = true;
    } catch (const AllocError&) {
        out.ok = false;
    }
    return out;
}

std::string fmt_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace

BenchRecord run_microbenchmark(const BenchSpec& spec, const SimConfig& config,
                               const TraceSink& trace) {
    const u64 size_bytes = ceil_div(spec.size_bits, 8);

    BenchRecord rec;
    rec.benchmark = spec.benchmark;
    rec.allocator = spec.allocator;
    rec.size_bits = spec.size_bits;
    rec.seed = spec.seed;

    RunOutcome run = run_once(spec.benchmark, spec.allocator, size_bytes, spec.seed,
                              config, trace, spec.pool_placement_seed);
    if (!run.ok) {
        rec.status = RunStatus::alloc_failed;
        rec.pim_fraction = rec.latency = rec.speedup_vs_malloc = NAN;
        return rec;
    }
    rec.pim_fraction = run.fraction;
    rec.latency = run.latency;
    if (spec.allocator == AllocatorKind::malloc_sim) {
        rec.speedup_vs_malloc = 1.0;
    } else {
        RunOutcome ref = run_once(spec.benchmark, AllocatorKind::malloc_sim,
                                  size_bytes, spec.seed, config, {});
        rec.speedup_vs_malloc = ref.ok ? ref.latency / run.latency : NAN;
    }
    return rec;
}

std::vector<BenchSpec> sweep_grid(const SimConfig& config) {
    const Benchmark benches[] = {Benchmark::zero, Benchmark::copy, Benchmark::and_};
    const AllocatorKind allocs[] = {AllocatorKind::puma, AllocatorKind::malloc_sim,
                                    AllocatorKind::memalign_sim,
                                    AllocatorKind::hugepage_sim};
    const std::vector<u64> sizes = sweep_sizes_bits(config.sweep);

    std::vector<BenchSpec> grid;
    grid.reserve(3 * 4 * sizes.size() * config.sweep.repetitions);
    for (u64 b = 0; b < 3; ++b) {
        for (u64 a = 0; a < 4; ++a) {
            for (u64 s = 0; s < sizes.size(); ++s) {
                for (u64 r = 0; r < config.sweep.repetitions; ++r) {
                    BenchSpec spec;
                    spec.benchmark = benches[b];
                    spec.allocator = allocs[a];
                    spec.size_bits = sizes[s];
                    spec.seed = derive_seed(config.sweep.seed, {b, a, s, r});
                    grid.push_back(spec);
                }
            }
        }
    }
    return grid;
}

std::vector<BenchRecord> sweep_serial(const SimConfig& config) {
    const std::vector<BenchSpec> grid = sweep_grid(config);
    std::vector<BenchRecord> records(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        records[i] = run_microbenchmark(grid[i], config);
    }
    return records;
}

std::vector<BenchRecord> sweep_parallel(const SimConfig& config, int threads) {
    const std::vector<BenchSpec> grid = sweep_grid(config);
    std::vector<BenchRecord> records(grid.size());
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
    #pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(grid.size()); ++i) {
        records[i] = run_microbenchmark(grid[i], config);
    }
#else
    (void)threads;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        records[i] = run_microbenchmark(grid[i], config);
    }
#endif
    return records;
}

std::string records_to_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream os;
    os << "benchmark,allocator,size_bits,pim_fraction,latency,speedup_vs_malloc,"
          "seed,status\n";
    for (const auto& r : records) {
        os << to_string(r.benchmark) << "," << to_string(r.allocator) << ","
           << r.size_bits << "," << fmt_double(r.pim_fraction) << ","
           << fmt_double(r.latency) << "," << fmt_double(r.speedup_vs_malloc) << ","
           << r.seed << "," << (r.status == RunStatus::ok ? "ok" : "alloc_failed")
           << "\n";
    }
    return os.str();
}

void emit_csv(const std::vector<BenchRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write CSV file: " + path);
    }
    out << records_to_csv(records);
}

namespace {

struct Series {
    AllocatorKind allocator;
    const char* color;
    std::vector<std::pair<u64, double>> points; // (size_bits, speedup)
};

} // namespace

void emit_speedup_charts(const std::vector<BenchRecord>& records,
                         const std::string& dir) {
    std::filesystem::create_directories(dir);
    const Benchmark benches[] = {Benchmark::zero, Benchmark::copy, Benchmark::and_};
    const std::pair<AllocatorKind, const char*> palette[] = {
        {AllocatorKind::puma, "#d62728"},
        {AllocatorKind::malloc_sim, "#1f77b4"},
        {AllocatorKind::memalign_sim, "#2ca02c"},
        {AllocatorKind::hugepage_sim, "#ff7f0e"},
    };
    const double width = 860, height = 520, ml = 80, mr = 180, mt = 40, mb = 60;

    for (Benchmark bench : benches) {
        std::vector<Series> series;
        double min_x = 1e300, max_x = 0, max_y = 1.0;
        for (const auto& [kind, color] : palette) {
            Series s{kind, color, {}};
            for (const auto& r : records) {
                if (r.benchmark != bench || r.allocator != kind ||
                    r.status != RunStatus::ok) {
                    continue;
                }
                s.points.push_back({r.size_bits, r.speedup_vs_malloc});
                min_x = std::min(min_x, static_cast<double>(r.size_bits));
                max_x = std::max(max_x, static_cast<double>(r.size_bits));
                max_y = std::max(max_y, r.speedup_vs_malloc);
            }
            if (!s.points.empty()) series.push_back(std::move(s));
        }
        if (series.empty()) continue;

        auto xpos = [&](u64 bits) {
            const double t = std::log(static_cast<double>(bits) / min_x) /
                             std::log(max_x / min_x);
            return ml + t * (width - ml - mr);
        };
        auto ypos = [&](double speedup) {
            const double t = std::log10(std::max(speedup, 0.1)) /
                             std::log10(std::max(max_y, 1.001) * 1.2);
            return height - mb - t * (height - mt - mb);
        };

        std::ostringstream svg;
        svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width
            << "' height='" << height << "'>\n";
        svg << "<rect width='100%' height='100%' fill='white'/>\n";
        svg << "<text x='" << width / 2 << "' y='24' text-anchor='middle' "
            << "font-family='sans-serif' font-size='16'>" << to_string(bench)
            << ": speedup vs malloc</text>\n";
        svg << "<line x1='" << ml << "' y1='" << height - mb << "' x2='"
            << width - mr << "' y2='" << height - mb << "' stroke='black'/>\n";
        svg << "<line x1='" << ml << "' y1='" << mt << "' x2='" << ml << "' y2='"
            << height - mb << "' stroke='black'/>\n";
        svg << "<text x='" << (ml + width - mr) / 2 << "' y='" << height - 20
            << "' text-anchor='middle' font-family='sans-serif' font-size='12'>"
            << "allocation size (bits, log scale)</text>\n";
        // speedup = 1 guide
        svg << "<line x1='" << ml << "' y1='" << ypos(1.0) << "' x2='" << width - mr
            << "' y2='" << ypos(1.0) << "' stroke='#cccccc' stroke-dasharray='4'/>\n";

        int legend_row = 0;
        for (const auto& s : series) {
            svg << "<polyline fill='none' stroke='" << s.color
                << "' stroke-width='2' points='";
            for (const auto& [bits, speedup] : s.points) {
                svg << xpos(bits) << "," << ypos(speedup) << " ";
            }
            svg << "'/>\n";
            for (const auto& [bits, speedup] : s.points) {
                svg << "<circle cx='" << xpos(bits) << "' cy='" << ypos(speedup)
                    << "' r='3' fill='" << s.color << "'/>\n";
            }
            const double ly = mt + 20 * legend_row++;
            svg << "<rect x='" << width - mr + 16 << "' y='" << ly
                << "' width='12' height='12' fill='" << s.color << "'/>\n";
            svg << "<text x='" << width - mr + 34 << "' y='" << ly + 11
                << "' font-family='sans-serif' font-size='12'>"
                << to_string(s.allocator) << "</text>\n";
        }
        svg << "</svg>\n";

        const std::string path =
            dir + "/speedup_" + to_string(bench) + ".svg";
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw ConfigError("cannot write chart file: " + path);
        }
        out << svg.str();
    }
}

} // namespace pumasim
