#include "evoforge/sandbox/subprocess_executor.hpp"

#include "evoforge/core/error.hpp"
#include "evoforge/sandbox/protocol.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>

extern char** environ;

namespace evoforge::sandbox {

namespace {

using Clock = std::chrono::steady_clock;

struct Pipe {
    int read = -1;
    int write = -1;

    Pipe()
    {
        int fds[2];
        if (::pipe2(fds, O_CLOEXEC) != 0)
            throw Error(std::string("pipe2: ") + std::strerror(errno));
        read = fds[0];
        write = fds[1];
    }
    ~Pipe()
    {
        close_read();
        close_write();
    }
    Pipe(const Pipe&) = delete;
    Pipe& operator=(const Pipe&) = delete;

    void close_read()
    {
        if (read >= 0)
            ::close(read);
        read = -1;
    }
    void close_write()
    {
        if (write >= 0)
            ::close(write);
        write = -1;
    }
};

std::string resolve_executable(const std::string& name)
{
    if (name.find('/') != std::string::npos)
        return name;
    const char* path = std::getenv("PATH");
    std::string_view dirs = path ? path : "/usr/local/bin:/usr/bin:/bin";
    while (!dirs.empty()) {
        auto colon = dirs.find(':');
        auto dir = dirs.substr(0, colon);
        auto candidate = std::filesystem::path(dir.empty() ? "." : std::string(dir)) / name;
        if (::access(candidate.c_str(), X_OK) == 0)
            return candidate.string();
        if (colon == std::string_view::npos)
            break;
        dirs.remove_prefix(colon + 1);
    }
    return name;
}

void set_nonblocking(int fd)
{
    ::fcntl(fd, F_SETFL, ::fcntl(fd, F_GETFL) | O_NONBLOCK);
}

} // namespace

SubprocessExecutor::SubprocessExecutor(std::vector<std::string> interpreter_cmd,
                                       std::map<std::string, std::string> extra_env)
    : command_(std::move(interpreter_cmd)), extra_env_(std::move(extra_env))
{
    if (command_.empty())
        throw ConfigError("interpreter command must not be empty");
    // Writing a request to a runner that already exited must not kill us.
    static const bool sigpipe_ignored = [] {
        ::signal(SIGPIPE, SIG_IGN);
        return true;
    }();
    (void)sigpipe_ignored;
}

ExecutionResult SubprocessExecutor::execute(std::string_view source, ExecMode mode, const nlohmann::json& context,
                                            const ResourceLimits& limits, std::string_view entry)
{
    limits.validate();
    ExecutionResult result{ProtocolError{"not started"}, {}, {}, {}, 0};
    const auto started = Clock::now();
    const auto request = encode_request(source, mode, context, entry);

    // Everything the child needs is prepared before fork(); the child only
    // makes async-signal-safe calls.
    std::string exe = resolve_executable(command_.front());
    std::vector<char*> argv;
    for (auto& a : command_)
        argv.push_back(a.data());
    argv.push_back(nullptr);

    std::vector<std::string> env_storage;
    for (char** e = environ; e && *e; ++e) {
        std::string_view kv(*e);
        auto key = std::string(kv.substr(0, kv.find('=')));
        if (!extra_env_.contains(key) && key != "SANDBOX_MEMORY_CAP_BYTES")
            env_storage.emplace_back(kv);
    }
    for (const auto& [k, v] : extra_env_)
        env_storage.push_back(k + "=" + v);
    env_storage.push_back("SANDBOX_MEMORY_CAP_BYTES=" + std::to_string(limits.memory_cap));
    std::vector<char*> envp;
    for (auto& e : env_storage)
        envp.push_back(e.data());
    envp.push_back(nullptr);

    Pipe in, out, err, exec_status;
    rlimit mem{static_cast<rlim_t>(limits.memory_cap), static_cast<rlim_t>(limits.memory_cap)};

    pid_t pid = ::fork();
    if (pid < 0) {
        result.outcome = ProtocolError{std::string("fork failed: ") + std::strerror(errno)};
        return result;
    }
    if (pid == 0) {
        ::setpgid(0, 0);
        ::dup2(in.read, STDIN_FILENO);
        ::dup2(out.write, STDOUT_FILENO);
        ::dup2(err.write, STDERR_FILENO);
        ::setrlimit(RLIMIT_AS, &mem);
        ::execve(exe.c_str(), argv.data(), envp.data());
        int code = errno;
        [[maybe_unused]] auto n = ::write(exec_status.write, &code, sizeof code);
        ::_exit(127);
    }

    ::setpgid(pid, pid);
    result.process_group = pid;
    in.close_read();
    out.close_write();
    err.close_write();
    exec_status.close_write();

    int exec_errno = 0;
    if (::read(exec_status.read, &exec_errno, sizeof exec_errno) == sizeof exec_errno) {
        ::waitpid(pid, nullptr, 0);
        result.outcome = ProtocolError{"cannot spawn '" + exe + "': " + std::strerror(exec_errno)};
        return result;
    }

    set_nonblocking(in.write);
    set_nonblocking(out.read);
    set_nonblocking(err.read);

    const auto deadline = started + limits.wall_timeout;
    std::size_t written = 0;
    bool timed_out = false;
    bool stdout_overflow = false;
    bool reaped = false;
    int status = 0;
    std::string stdout_buf, stderr_buf;
    char chunk[8192];

    while (out.read >= 0 || err.read >= 0) {
        auto now = Clock::now();
        if (now >= deadline) {
            timed_out = true;
            break;
        }
        pollfd fds[3];
        int nfds = 0;
        int out_idx = -1, err_idx = -1, in_idx = -1;
        if (out.read >= 0) {
            out_idx = nfds;
            fds[nfds++] = {out.read, POLLIN, 0};
        }
        if (err.read >= 0) {
            err_idx = nfds;
            fds[nfds++] = {err.read, POLLIN, 0};
        }
        if (in.write >= 0) {
            in_idx = nfds;
            fds[nfds++] = {in.write, POLLOUT, 0};
        }
        auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - now).count();
        int rc = ::poll(fds, static_cast<nfds_t>(nfds), static_cast<int>(std::max<long long>(1, remaining)));
        if (rc < 0 && errno != EINTR)
            break;

        if (in_idx >= 0 && (fds[in_idx].revents & (POLLOUT | POLLERR | POLLHUP))) {
            auto n = ::write(in.write, request.data() + written, request.size() - written);
            if (n > 0)
                written += static_cast<std::size_t>(n);
            if (n < 0 && errno != EAGAIN)
                in.close_write();
            if (written == request.size())
                in.close_write();
        }
        auto drain = [&](int idx, Pipe& p, std::string& buf, bool is_stdout) {
            if (idx < 0 || !(fds[idx].revents & (POLLIN | POLLHUP | POLLERR)))
                return;
            auto n = ::read(p.read, chunk, sizeof chunk);
            if (n > 0) {
                std::size_t room = limits.output_cap > buf.size() ? limits.output_cap - buf.size() : 0;
                buf.append(chunk, std::min<std::size_t>(room, static_cast<std::size_t>(n)));
                if (is_stdout && static_cast<std::size_t>(n) > room)
                    stdout_overflow = true;
            } else if (n == 0 || (errno != EAGAIN && errno != EINTR)) {
                p.close_read();
            }
        };
        drain(out_idx, out, stdout_buf, true);
        drain(err_idx, err, stderr_buf, false);
        if (stdout_overflow)
            break;

        // A grandchild may hold the pipes open after the runner exits; stop
        // once the runner is gone and its buffered output is drained.
        if (!reaped && ::waitpid(pid, &status, WNOHANG) == pid) {
            reaped = true;
            for (auto* p : {&out, &err}) {
                if (p->read < 0)
                    continue;
                auto& buf = p == &out ? stdout_buf : stderr_buf;
                ssize_t n;
                while ((n = ::read(p->read, chunk, sizeof chunk)) > 0) {
                    std::size_t room = limits.output_cap > buf.size() ? limits.output_cap - buf.size() : 0;
                    buf.append(chunk, std::min<std::size_t>(room, static_cast<std::size_t>(n)));
                    if (p == &out && static_cast<std::size_t>(n) > room)
                        stdout_overflow = true;
                }
            }
            break;
        }
    }

    ::kill(-pid, SIGKILL);
    if (!reaped)
        ::waitpid(pid, &status, 0);

    result.wall_time = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started);
    result.stdout_text = sanitize_utf8(stdout_buf);
    result.stderr_text = sanitize_utf8(stderr_buf);

    if (timed_out) {
        result.outcome = Timeout{};
    } else if (stdout_overflow) {
        result.outcome = ProtocolError{"response exceeds output cap of " + std::to_string(limits.output_cap) +
                                       " bytes"};
    } else if (stdout_buf.empty()) {
        std::string how = WIFSIGNALED(status) ? "killed by signal " + std::to_string(WTERMSIG(status))
                                              : "exit status " + std::to_string(WEXITSTATUS(status));
        result.outcome = ProtocolError{"no response frame (" + how + ")"};
    } else {
        result.outcome = decode_response(stdout_buf);
    }
    return result;
}

} // namespace evoforge::sandbox
