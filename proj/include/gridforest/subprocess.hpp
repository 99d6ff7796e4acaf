#pragma once

#include <csignal>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

#include "gridforest/errors.hpp"

namespace gridforest {

/// Child process with line-oriented stdin/stdout pipes. stderr is inherited
/// so backend diagnostics reach the terminal. SIGPIPE is ignored process-wide
/// (first construction) so a dead child surfaces as an error, not a signal.
class Subprocess {
public:
    explicit Subprocess(const std::vector<std::string>& argv) {
        if (argv.empty()) throw SolverError("empty backend command line");
        static const bool sigpipe_ignored = [] {
            std::signal(SIGPIPE, SIG_IGN);
            return true;
        }();
        (void)sigpipe_ignored;

        int to_child[2], from_child[2];
        if (::pipe(to_child) != 0 || ::pipe(from_child) != 0)
            throw SolverError("pipe() failed: " + std::string(std::strerror(errno)));
        pid_ = ::fork();
        if (pid_ < 0) throw SolverError("fork() failed: " + std::string(std::strerror(errno)));
        if (pid_ == 0) {
            ::dup2(to_child[0], STDIN_FILENO);
            ::dup2(from_child[1], STDOUT_FILENO);
            ::close(to_child[0]);
            ::close(to_child[1]);
            ::close(from_child[0]);
            ::close(from_child[1]);
            std::vector<char*> cargv;
            for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
            cargv.push_back(nullptr);
            ::execvp(cargv[0], cargv.data());
            ::fprintf(stderr, "exec %s failed: %s\n", cargv[0], std::strerror(errno));
            ::_exit(127);
        }
        ::close(to_child[0]);
        ::close(from_child[1]);
        in_fd_ = to_child[1];
        out_fd_ = from_child[0];
    }

    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    ~Subprocess() {
        if (in_fd_ >= 0) ::close(in_fd_);
        if (out_fd_ >= 0) ::close(out_fd_);
        if (pid_ > 0) {
            // Closing stdin asks the child to exit; escalate if it lingers.
            for (int i = 0; i < 20; ++i) {
                if (::waitpid(pid_, nullptr, WNOHANG) != 0) return;
                ::usleep(100'000);
            }
            ::kill(pid_, SIGKILL);
            ::waitpid(pid_, nullptr, 0);
        }
    }

    void write_line(const std::string& line) {
        std::string payload = line + "\n";
        const char* p = payload.data();
        std::size_t left = payload.size();
        while (left > 0) {
            ssize_t n = ::write(in_fd_, p, left);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw SolverError("backend stdin closed: " + std::string(std::strerror(errno)));
            }
            p += n;
            left -= static_cast<std::size_t>(n);
        }
    }

    std::string read_line() {
        std::string line;
        while (true) {
            auto nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                return line;
            }
            char chunk[4096];
            ssize_t n = ::read(out_fd_, chunk, sizeof chunk);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw SolverError("backend read failed: " + std::string(std::strerror(errno)));
            }
            if (n == 0) throw SolverError("backend exited before replying");
            buffer_.append(chunk, static_cast<std::size_t>(n));
        }
    }

    bool alive() const {
        return pid_ > 0 && ::waitpid(pid_, nullptr, WNOHANG) == 0;
    }

private:
    ::pid_t pid_ = -1;
    int in_fd_ = -1;
    int out_fd_ = -1;
    std::string buffer_;
};

} // namespace gridforest
