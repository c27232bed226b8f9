#include "support/proc.hpp"

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <vector>

namespace testsupport {

namespace {

/// An unlinked temp file that exists only as an open descriptor.
int scratch_fd() {
    char name[] = "/tmp/ssmi_proc_XXXXXX";
    int fd = mkstemp(name);
    if (fd < 0) throw std::runtime_error("proc: mkstemp failed");
    unlink(name);
    return fd;
}

std::string slurp_fd(int fd) {
    std::string content;
    if (lseek(fd, 0, SEEK_SET) < 0) throw std::runtime_error("proc: lseek failed");
    char buffer[4096];
    ssize_t n;
    while ((n = read(fd, buffer, sizeof buffer)) > 0) content.append(buffer, n);
    if (n < 0) throw std::runtime_error("proc: read failed");
    return content;
}

}  // namespace

RunResult run_process(const std::vector<std::string>& argv,
                      const std::map<std::string, std::string>& extra_env) {
    if (argv.empty()) throw std::runtime_error("proc: empty argv");

    int out_fd = scratch_fd();
    int err_fd = scratch_fd();

    pid_t pid = fork();
    if (pid < 0) {
        close(out_fd);
        close(err_fd);
        throw std::runtime_error("proc: fork failed");
    }
    if (pid == 0) {
        for (const auto& [key, value] : extra_env) setenv(key.c_str(), value.c_str(), 1);
        int null_fd = open("/dev/null", O_RDONLY);
        if (null_fd >= 0) dup2(null_fd, STDIN_FILENO);
        dup2(out_fd, STDOUT_FILENO);
        dup2(err_fd, STDERR_FILENO);
        std::vector<char*> child_argv;
        child_argv.reserve(argv.size() + 1);
        for (const auto& arg : argv) child_argv.push_back(const_cast<char*>(arg.c_str()));
        child_argv.push_back(nullptr);
        execv(child_argv[0], child_argv.data());
        std::perror("execv");
        _exit(127);
    }

    int status = 0;
    if (waitpid(pid, &status, 0) < 0) {
        close(out_fd);
        close(err_fd);
        throw std::runtime_error("proc: waitpid failed");
    }

    RunResult result;
    result.out = slurp_fd(out_fd);
    result.err = slurp_fd(err_fd);
    close(out_fd);
    close(err_fd);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status)) result.exit_code = 128 + WTERMSIG(status);
    return result;
}

}  // namespace testsupport
