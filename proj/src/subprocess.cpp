#include "stratforge/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "stratforge/error.hpp"

namespace stratforge {

namespace {
void read_all(int fd, std::string& sink, bool& open_flag) {
    char buf[4096];
    for (;;) {
        ssize_t n = read(fd, buf, sizeof(buf));
        if (n > 0) {
            sink.append(buf, static_cast<size_t>(n));
            continue;
        }
        if (n == 0 || (n < 0 && errno != EAGAIN && errno != EINTR)) open_flag = false;
        return;
    }
}
} // namespace

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& cwd) {
    if (argv.empty()) throw Error("run_process: empty argv");

    int out_pipe[2], err_pipe[2], status_pipe[2];
    if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0 || pipe(status_pipe) != 0)
        throw Error(std::string("pipe failed: ") + std::strerror(errno));
    // status pipe closes on successful exec; an errno written to it means exec failed
    fcntl(status_pipe[1], F_SETFD, FD_CLOEXEC);

    pid_t pid = fork();
    if (pid < 0) throw Error(std::string("fork failed: ") + std::strerror(errno));

    if (pid == 0) {
        dup2(out_pipe[1], STDOUT_FILENO);
        dup2(err_pipe[1], STDERR_FILENO);
        close(out_pipe[0]); close(out_pipe[1]);
        close(err_pipe[0]); close(err_pipe[1]);
        close(status_pipe[0]);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) {
            int e = errno;
            (void)!write(status_pipe[1], &e, sizeof(e));
            _exit(127);
        }
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        int e = errno;
        (void)!write(status_pipe[1], &e, sizeof(e));
        _exit(127);
    }

    close(out_pipe[1]);
    close(err_pipe[1]);
    close(status_pipe[1]);

    fcntl(out_pipe[0], F_SETFL, O_NONBLOCK);
    fcntl(err_pipe[0], F_SETFL, O_NONBLOCK);

    ProcessResult res;
    bool out_open = true, err_open = true;
    while (out_open || err_open) {
        struct pollfd fds[2];
        nfds_t n = 0;
        if (out_open) fds[n++] = {out_pipe[0], POLLIN, 0};
        if (err_open) fds[n++] = {err_pipe[0], POLLIN, 0};
        if (poll(fds, n, -1) < 0) {
            if (errno == EINTR) continue;
            break;
        }
        for (nfds_t i = 0; i < n; ++i) {
            if (!(fds[i].revents & (POLLIN | POLLHUP))) continue;
            if (fds[i].fd == out_pipe[0]) read_all(out_pipe[0], res.out, out_open);
            else read_all(err_pipe[0], res.err, err_open);
        }
    }
    close(out_pipe[0]);
    close(err_pipe[0]);

    int exec_errno = 0;
    if (read(status_pipe[0], &exec_errno, sizeof(exec_errno)) == sizeof(exec_errno))
        res.exec_failed = true;
    close(status_pipe[0]);

    int status = 0;
    if (waitpid(pid, &status, 0) < 0)
        throw Error(std::string("waitpid failed: ") + std::strerror(errno));
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    else res.exit_code = -1;

    if (res.exec_failed && res.err.empty())
        res.err = argv[0] + ": " + std::strerror(exec_errno);
    return res;
}

} // namespace stratforge
