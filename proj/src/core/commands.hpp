#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "error.hpp"
#include "report.hpp"

namespace varfrac {

struct CommandOptions {
    std::vector<double> lambdas{1.0, 10.0, 100.0, 1000.0};  // sweep
    int count = 3;                                            // multi
    std::string out_dir;   // empty: the config's output directory
    bool write_files = true;
    bool profile = false;  // adds wall-clock timings to the payload
    std::string function;  // norm / energy: u(x); empty means the centred unit hat
};

enum class CommandStatus { Ok = 0, Invalid = 1, NotConverged = 2 };

struct CommandResult {
    Json payload;
    CommandStatus status = CommandStatus::Ok;
    ErrorCode error = ErrorCode::Argument;  // meaningful when status != Ok
    std::string message;
};

// Status of an error code under the 0/1/2 exit contract.
CommandStatus status_of(ErrorCode code);

// check | norm | energy | geometry | solve | sweep | multi. Never throws: errors
// become an "error" member of the payload and a nonzero status.
CommandResult run_command(const std::string& command, const ProblemConfig& cfg,
                          const CommandOptions& options);

} // namespace varfrac
