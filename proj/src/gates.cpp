#include "chirpsim/gates.hpp"

#include "chirpsim/analysis.hpp"
#include "chirpsim/errors.hpp"

namespace chirpsim {

int expected_table1(int a, int b) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1))
        throw ConfigError("expected_table1: inputs must be bits");
    return a ^ b;
}

int one_hot_to_level(const std::string& label) {
    if (label == "100") return 0;
    if (label == "010") return 1;
    if (label == "001") return 2;
    throw ConfigError("invalid one-hot label: " + label);
}

std::string level_to_one_hot(int level) {
    switch (level) {
    case 0: return "100";
    case 1: return "010";
    case 2: return "001";
    }
    throw ConfigError("level " + std::to_string(level) + " has no one-hot label");
}

std::string expected_table2(const std::string& c, const std::string& d) {
    if (c != "010" && c != "001" && c != "000")
        throw ConfigError("expected_table2: control must be 010, 001 or 000, got " + c);
    const int in = one_hot_to_level(d); // validates d
    if (c == "000") return d;
    const int target = (c == "010") ? 1 : 2;
    if (in == 0) return level_to_one_hot(target);
    if (in == target) return level_to_one_hot(0);
    return d; // the non-targeted excited state is a fixed point
}

void PulseLibrary::validate() const {
    auto check = [](const PulseLibraryEntry& e, int n_levels, const char* what) {
        e.pulse.validate();
        e.system.validate();
        e.grid.validate();
        if (e.system.n_levels != n_levels)
            throw ConfigError(std::string("gate library: ") + what + " entry must act on a " +
                              std::to_string(n_levels) + "-level system");
    };
    check(invert, 2, "invert");
    if (dark_two_level.empty())
        throw ConfigError("gate library: missing dark entry for the two-level table");
    for (const auto& e : dark_two_level) check(e, 2, "dark");
    check(invert_to_1, 3, "invert_to_1");
    check(invert_to_2, 3, "invert_to_2");
    if (dark_three_level.empty())
        throw ConfigError("gate library: missing dark entry for the three-level table");
    for (const auto& e : dark_three_level) check(e, 3, "dark");
}

GateRowResult run_gate_row(const PulseLibraryEntry& entry, int input_level) {
    const DensityMatrix rho0 = basis_state(entry.system.n_levels, input_level);
    const Trajectory traj = propagate(entry.system, entry.pulse, rho0, entry.grid);
    GateRowResult result;
    result.label = classify_logical(traj.final_rho(), 0.9);
    result.final_populations = traj.final_populations();
    return result;
}

namespace {

struct RowTask {
    std::string table;
    std::string control;
    std::string input;
    std::string expected;
    const PulseLibraryEntry* entry;
    int input_level;
};

std::string simulated_label(const std::string& table, const std::optional<int>& label) {
    if (!label) return "?";
    return table == "I" ? std::to_string(*label) : level_to_one_hot(*label);
}

} // namespace

GateReport verify_tables(const PulseLibrary& library, const GateRowRunner& runner) {
    library.validate();
    std::vector<RowTask> tasks;

    for (int b : {1, 0})
        tasks.push_back({"I", "1", std::to_string(b),
                         std::to_string(expected_table1(1, b)), &library.invert, b});
    for (const auto& dark : library.dark_two_level)
        for (int b : {1, 0})
            tasks.push_back({"I", "0", std::to_string(b),
                             std::to_string(expected_table1(0, b)), &dark, b});

    const std::vector<std::string> inputs3 = {"100", "010", "001"};
    for (const auto& d : inputs3)
        tasks.push_back({"II", "010", d, expected_table2("010", d), &library.invert_to_1,
                         one_hot_to_level(d)});
    for (const auto& d : inputs3)
        tasks.push_back({"II", "001", d, expected_table2("001", d), &library.invert_to_2,
                         one_hot_to_level(d)});
    for (const auto& dark : library.dark_three_level)
        for (const auto& d : inputs3)
            tasks.push_back({"II", "000", d, expected_table2("000", d), &dark,
                             one_hot_to_level(d)});

    GateReport report;
    report.rows.resize(tasks.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < static_cast<long>(tasks.size()); ++i) {
        const RowTask& task = tasks[static_cast<std::size_t>(i)];
        const GateRowResult result = runner(*task.entry, task.input_level);
        GateReportRow row;
        row.table = task.table;
        row.control = task.control;
        row.input = task.input;
        row.expected = task.expected;
        row.simulated = simulated_label(task.table, result.label);
        row.pass = row.simulated == row.expected;
        row.final_populations = result.final_populations;
        report.rows[static_cast<std::size_t>(i)] = std::move(row);
    }
    report.overall_pass = true;
    for (const auto& row : report.rows) report.overall_pass = report.overall_pass && row.pass;
    return report;
}

} // namespace chirpsim
