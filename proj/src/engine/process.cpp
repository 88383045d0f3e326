#include "garden/engine/process.hpp"

#include <fcntl.h>
#include <pthread.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <thread>

#include "garden/error.hpp"
#include "garden/util/fs.hpp"

namespace garden::engine {

namespace {

int launch(const std::string& command, const std::filesystem::path& log_file) {
    if (log_file.has_parent_path()) std::filesystem::create_directories(log_file.parent_path());
    const std::string log = log_file.string();
    // Signals stay blocked until the child has dropped inherited handlers.
    sigset_t all, saved;
    ::sigfillset(&all);
    ::pthread_sigmask(SIG_SETMASK, &all, &saved);
    pid_t pid = ::fork();
    if (pid < 0) {
        ::pthread_sigmask(SIG_SETMASK, &saved, nullptr);
        fail(ErrorCode::LaunchFailure, "fork failed");
    }
    if (pid == 0) {
        for (int sig = 1; sig < NSIG; ++sig) ::signal(sig, SIG_DFL);
        ::sigprocmask(SIG_SETMASK, &saved, nullptr);
        ::setpgid(0, 0);
        int fd = ::open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            ::dup2(fd, STDOUT_FILENO);
            ::dup2(fd, STDERR_FILENO);
            ::close(fd);
        }
        int devnull = ::open("/dev/null", O_RDONLY);
        if (devnull >= 0) {
            ::dup2(devnull, STDIN_FILENO);
            ::close(devnull);
        }
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::pthread_sigmask(SIG_SETMASK, &saved, nullptr);
    // Set from both sides so the group exists before the parent signals it.
    ::setpgid(pid, pid);
    return pid;
}

std::string read_log(const std::filesystem::path& log_file) {
    std::error_code ec;
    if (!std::filesystem::exists(log_file, ec)) return {};
    return fs::read_file(log_file);
}

// Polls for exit until `deadline`; returns true and fills `status` if reaped.
bool wait_until(int pid, std::chrono::steady_clock::time_point deadline, int& status) {
    for (;;) {
        pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) return true;
        if (r < 0 && errno != EINTR) return true;
        if (std::chrono::steady_clock::now() >= deadline) return false;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
}

}  // namespace

ProcessResult run_shell(const std::string& command, const std::filesystem::path& log_file,
                        std::chrono::milliseconds timeout, std::chrono::milliseconds grace) {
    ProcessResult result;
    int pid = launch(command, log_file);
    int status = 0;
    if (!wait_until(pid, std::chrono::steady_clock::now() + timeout, status)) {
        result.timed_out = true;
        terminate_group(pid, grace);
        result.output = read_log(log_file);
        return result;
    }
    // Reap stragglers the command left in its group.
    ::kill(-pid, SIGKILL);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    result.output = read_log(log_file);
    return result;
}

int spawn_shell(const std::string& command, const std::filesystem::path& log_file) {
    return launch(command, log_file);
}

bool is_alive(int pid) {
    int status = 0;
    pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) return false;
    return ::kill(pid, 0) == 0;
}

bool terminate_group(int pid, std::chrono::milliseconds grace) {
    if (pid <= 0) return false;
    if (::kill(-pid, SIGTERM) != 0 && errno == ESRCH) {
        int status = 0;
        ::waitpid(pid, &status, WNOHANG);
        return false;
    }
    int status = 0;
    if (!wait_until(pid, std::chrono::steady_clock::now() + grace, status)) {
        ::kill(-pid, SIGKILL);
        ::waitpid(pid, &status, 0);
    }
    ::kill(-pid, SIGKILL);
    return true;
}

}  // namespace garden::engine
