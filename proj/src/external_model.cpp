#include "lomef/external_model.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <sstream>

namespace lomef {

struct ExternalProcessModel::Process {
    pid_t pid = -1;
    int to_child = -1;
    int from_child = -1;
    std::string pending;

    ~Process() {
        if (to_child >= 0) ::close(to_child);
        if (from_child >= 0) ::close(from_child);
        if (pid > 0) {
            ::kill(-pid, SIGKILL);
            ::waitpid(pid, nullptr, 0);
        }
    }
};

namespace {

std::unique_ptr<ExternalProcessModel::Process> spawn(const std::string& command);

std::string join(const char* head, const Vector& values, int extra = -1) {
    std::ostringstream out;
    out.precision(17);
    out << head;
    if (extra >= 0) out << ',' << extra;
    for (double v : values) out << ',' << v;
    return out.str();
}

}  // namespace

Vector parse_response(const std::string& line, Eigen::Index expected) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= line.size()) {
        std::size_t end = line.find(',', start);
        if (end == std::string::npos) end = line.size();
        std::string cell = line.substr(start, end - start);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\r')) cell.pop_back();
        while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
        double v = 0.0;
        const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (cell.empty() || res.ec != std::errc() || res.ptr != cell.data() + cell.size()) {
            fail(ErrorKind::ProtocolError, "malformed response: '" + line + "'");
        }
        values.push_back(v);
        start = end + 1;
    }
    if (expected >= 0 && Eigen::Index(values.size()) != expected) {
        fail(ErrorKind::ProtocolError, "expected " + std::to_string(expected) + " values, got " +
                                           std::to_string(values.size()));
    }
    return from_std(values);
}

ExternalProcessModel::ExternalProcessModel(std::string command, Options options)
    : command_(std::move(command)), options_(options) {
    if (options_.input_length < 1) fail(ErrorKind::InvalidArgument, "input length must be >= 1");
}

ExternalProcessModel::~ExternalProcessModel() = default;

std::string ExternalProcessModel::request(const std::string& line) const {
    std::lock_guard lock(mutex_);
    if (!process_) process_ = spawn(command_);
    Process& proc = *process_;

    const std::string payload = line + "\n";
    std::size_t written = 0;
    while (written < payload.size()) {
        const ssize_t w = ::write(proc.to_child, payload.data() + written, payload.size() - written);
        if (w < 0) {
            if (errno == EINTR) continue;
            process_.reset();
            fail(ErrorKind::ProtocolError, "external model closed its input");
        }
        written += std::size_t(w);
    }

    const auto deadline = std::chrono::steady_clock::now() + options_.timeout;
    while (true) {
        const auto newline = proc.pending.find('\n');
        if (newline != std::string::npos) {
            std::string response = proc.pending.substr(0, newline);
            proc.pending.erase(0, newline + 1);
            return response;
        }
        const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
            deadline - std::chrono::steady_clock::now());
        if (remaining.count() <= 0) {
            process_.reset();
            fail(ErrorKind::Timeout, "external model did not answer within " +
                                         std::to_string(options_.timeout.count()) + " ms");
        }
        pollfd pfd{proc.from_child, POLLIN, 0};
        const int ready = ::poll(&pfd, 1, int(remaining.count()));
        if (ready < 0) {
            if (errno == EINTR) continue;
            process_.reset();
            fail(ErrorKind::IoError, std::string("poll failed: ") + std::strerror(errno));
        }
        if (ready == 0) continue;
        char buffer[4096];
        const ssize_t got = ::read(proc.from_child, buffer, sizeof buffer);
        if (got < 0 && errno == EINTR) continue;
        if (got <= 0) {
            process_.reset();
            fail(ErrorKind::ProtocolError, "external model exited without answering");
        }
        proc.pending.append(buffer, std::size_t(got));
    }
}

Vector ExternalProcessModel::forecast(const Vector& history, int horizon) const {
    if (horizon < 1) fail(ErrorKind::InvalidArgument, "horizon must be >= 1");
    const Vector out = parse_response(request(join("FORECAST", history, horizon)), horizon);
    return apply_output_flags(out, options_.flags);
}

Vector ExternalProcessModel::one_step_fit(const Vector& values) const {
    const Eigen::Index expected = values.size() - options_.input_length;
    if (expected < 1) fail(ErrorKind::SeriesTooShort, "series is not longer than the input window");
    const Vector out = parse_response(request(join("FIT", values)), expected);
    return apply_output_flags(out, options_.flags);
}

namespace {

std::unique_ptr<ExternalProcessModel::Process> spawn(const std::string& command) {
    ::signal(SIGPIPE, SIG_IGN);
    int in_pipe[2], out_pipe[2];
    if (::pipe2(in_pipe, O_CLOEXEC) != 0) fail(ErrorKind::IoError, "pipe failed");
    if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
        ::close(in_pipe[0]);
        ::close(in_pipe[1]);
        fail(ErrorKind::IoError, "pipe failed");
    }
    const pid_t pid = ::fork();
    if (pid < 0) fail(ErrorKind::IoError, "fork failed");
    if (pid == 0) {
        ::setpgid(0, 0);  // lets the whole pipeline be killed at once
        ::dup2(in_pipe[0], STDIN_FILENO);
        ::dup2(out_pipe[1], STDOUT_FILENO);
        ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        ::_exit(127);
    }
    ::setpgid(pid, pid);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    auto proc = std::make_unique<ExternalProcessModel::Process>();
    proc->pid = pid;
    proc->to_child = in_pipe[1];
    proc->from_child = out_pipe[0];
    return proc;
}

}  // namespace
}  // namespace lomef
