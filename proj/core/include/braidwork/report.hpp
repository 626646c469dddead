#pragma once

// Suite orchestration for the braidwork command-line tool: one RunConfig in,
// one Report out. A report carries named checks plus three tables (E^1
// entries, differential records, stem assembly) and renders to canonical
// JSON (sorted keys, compact) or to aligned text.
//
// Determinism contract: report content depends only on (command, caps, ring,
// seed, assume_zero). The jobs count changes scheduling but never bytes:
// work items are indexed up front and merged in bidegree order. wall_time_ms
// stays 0 unless timing is requested, which opts out of byte-stable output.
//
// Long table runs checkpoint per bidegree: when BRAIDWORK_CACHE_DIR is set
// (or an --out directory is available), finished E^1 rows are written there
// and reused by later runs whose ring and bidegree match.

#include <cstdint>
#include <string>
#include <vector>

namespace braidwork::report {

struct RunConfig {
    std::string command;
    int n_max = 4;
    int t_max = 6;
    int deg_max = 6;
    int stem_max = 4;
    std::uint32_t ring_p = 0; // 0 = Z; else a prime p for Z/p
    std::uint64_t seed = 0;
    int jobs = 1;
    std::string out;             // report path; empty = stdout
    std::string format = "json"; // json | text
    bool assume_zero = false;
    bool strict = false;
    bool timing = false;
};

// "z" for the integers, "zp:<p>" for Z/p.
std::string ring_tag(std::uint32_t p);

struct Check {
    std::string name;
    std::string status; // pass | fail | undetermined
    std::string details;
};

struct E1Generator {
    std::string order;   // "inf" or the exact order
    std::string element; // rendered Lie element / basis symbol
};

struct E1Row {
    int t = 0;
    int n = 0;
    std::int64_t free_rank = 0;
    std::vector<std::int64_t> torsion; // invariant factors, ascending
    std::vector<E1Generator> basis;
};

struct DiffRow {
    int t = 0;
    int n = 0;
    int r = 1;
    int target_t = 0;
    std::string status; // zero | nonzero | undetermined
};

struct StemGraded {
    int t = 0;
    std::string order;
};

struct StemRowOut {
    int n = 0;
    std::vector<StemGraded> graded_orders;
    std::string total_order;
    std::string reference;
    std::string match; // yes | no | consistent (partial) | undetermined | n/a
};

struct Report {
    RunConfig config;
    std::vector<Check> checks;
    std::vector<E1Row> e1;
    std::vector<DiffRow> differentials;
    std::vector<StemRowOut> stems;
    std::int64_t wall_time_ms = 0;
};

// Subcommand names in canonical execution order (report-all runs every
// other entry in this order and is itself listed last).
const std::vector<std::string>& command_names();
bool is_command(const std::string& name);

// Commands that need exact integer arithmetic end to end and therefore
// reject a zp:<p> ring at the configuration boundary.
bool requires_integral_ring(const std::string& command);

// Dispatch cfg.command to the module suites. Capacity problems inside a
// work item surface as fail checks with a capacity note; invalid configs
// (unknown command, nonpositive caps, mod-p ring where the integral ring
// is required) throw std::invalid_argument.
Report run_suite(const RunConfig& cfg);

std::string to_json(const Report& rep); // canonical: sorted keys, compact
std::string to_text(const Report& rep); // aligned human-readable tables
std::string render(const Report& rep);  // per config.format

bool any_failure(const Report& rep);
bool any_undetermined(const Report& rep);
// 0 all pass; 1 any fail, or any undetermined when strict is set.
int exit_status(const Report& rep);

} // namespace braidwork::report
