#pragma once

#include <chrono>
#include <filesystem>
#include <string>

namespace garden::engine {

struct ProcessResult {
    int exit_code = -1;  // -1 when killed on timeout or by a signal
    bool timed_out = false;
    std::string output;  // combined stdout and stderr
};

// Runs `/bin/sh -c command` in its own process group, capturing output into
// `log_file`. On timeout the whole group gets SIGTERM, then SIGKILL after
// `grace`.
ProcessResult run_shell(const std::string& command, const std::filesystem::path& log_file,
                        std::chrono::milliseconds timeout,
                        std::chrono::milliseconds grace = std::chrono::milliseconds(2000));

// Starts a shell command without waiting; returns its pid (also its process group id).
int spawn_shell(const std::string& command, const std::filesystem::path& log_file);

// Terminates the process group led by `pid` and reaps it. Returns false if it was already gone.
bool terminate_group(int pid, std::chrono::milliseconds grace = std::chrono::milliseconds(2000));
bool is_alive(int pid);

}  // namespace garden::engine
