#include "anep/subprocess.hpp"

#include <csignal>
#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <sstream>

#include "anep/errors.hpp"

namespace anep {

std::vector<std::string> split_command(const std::string& cmd) {
    std::vector<std::string> out;
    std::istringstream in(cmd);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

CommandResult run_command(const std::vector<std::string>& argv,
                          const std::optional<std::string>& stdin_data) {
    if (argv.empty()) throw Error("run_command: empty argv");

    // A child that exits before draining stdin must not kill the pipeline.
    [[maybe_unused]] static const auto sigpipe_ignored = signal(SIGPIPE, SIG_IGN);

    int in_pipe[2] = {-1, -1};
    int out_pipe[2] = {-1, -1};
    if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
        throw Error(std::string("run_command: pipe: ") + std::strerror(errno));

    const pid_t pid = fork();
    if (pid < 0) throw Error(std::string("run_command: fork: ") + std::strerror(errno));

    if (pid == 0) {
        dup2(in_pipe[0], STDIN_FILENO);
        dup2(out_pipe[1], STDOUT_FILENO);
        close(in_pipe[0]);
        close(in_pipe[1]);
        close(out_pipe[0]);
        close(out_pipe[1]);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        // Only reached when exec fails.
        std::fprintf(stderr, "exec %s: %s\n", cargv[0], std::strerror(errno));
        _exit(127);
    }

    close(in_pipe[0]);
    close(out_pipe[1]);

    if (stdin_data) {
        size_t off = 0;
        while (off < stdin_data->size()) {
            const ssize_t n = write(in_pipe[1], stdin_data->data() + off, stdin_data->size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                break;  // child closed its stdin early; not fatal
            }
            off += size_t(n);
        }
    }
    close(in_pipe[1]);

    CommandResult result;
    char buf[4096];
    while (true) {
        const ssize_t n = read(out_pipe[0], buf, sizeof(buf));
        if (n < 0) {
            if (errno == EINTR) continue;
            break;
        }
        if (n == 0) break;
        result.output.append(buf, size_t(n));
    }
    close(out_pipe[0]);

    int status = 0;
    while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

}  // namespace anep
