#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>
#include <string>
#include <thread>

#include <json.hpp>

#include "ctxbo/objectives.hpp"

extern char** environ;

namespace ctxbo {

namespace {

using Clock = std::chrono::steady_clock;
constexpr std::size_t kStderrKeep = 4096;

void ignore_sigpipe_once() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    struct sigaction current {};
    if (sigaction(SIGPIPE, nullptr, &current) == 0 && current.sa_handler == SIG_DFL) {
      struct sigaction ignore {};
      ignore.sa_handler = SIG_IGN;
      sigemptyset(&ignore.sa_mask);
      sigaction(SIGPIPE, &ignore, nullptr);
    }
  });
}

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "killed by signal " + std::to_string(WTERMSIG(status));
  return "terminated";
}

class ChildProcess {
 public:
  explicit ChildProcess(const std::string& command) {
    ignore_sigpipe_once();
    int in_pipe[2], out_pipe[2], err_pipe[2];
    if (pipe2(in_pipe, O_CLOEXEC) != 0) throw EvaluationError("pipe: " + errno_text());
    if (pipe2(out_pipe, O_CLOEXEC) != 0) {
      close_pair(in_pipe);
      throw EvaluationError("pipe: " + errno_text());
    }
    if (pipe2(err_pipe, O_CLOEXEC) != 0) {
      close_pair(in_pipe);
      close_pair(out_pipe);
      throw EvaluationError("pipe: " + errno_text());
    }

    posix_spawn_file_actions_t actions;
    posix_spawn_file_actions_init(&actions);
    posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
    posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
    posix_spawn_file_actions_adddup2(&actions, err_pipe[1], STDERR_FILENO);

    const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};
    const int rc = posix_spawn(&pid_, "/bin/sh", &actions, nullptr,
                               const_cast<char* const*>(argv), environ);
    posix_spawn_file_actions_destroy(&actions);
    ::close(in_pipe[0]);
    ::close(out_pipe[1]);
    ::close(err_pipe[1]);
    in_ = in_pipe[1];
    out_ = out_pipe[0];
    err_ = err_pipe[0];
    if (rc != 0) {
      pid_ = -1;
      close_fds();
      throw EvaluationError("failed to spawn '" + command + "': " + std::strerror(rc));
    }
  }

  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  ~ChildProcess() {
    if (in_ >= 0) {
      ::close(in_);
      in_ = -1;
    }
    if (pid_ > 0) {
      // Give a well-behaved child a moment to exit on EOF.
      for (int i = 0; i < 20 && !reap(WNOHANG); ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
      if (pid_ > 0) {
        ::kill(pid_, SIGKILL);
        reap(0);
      }
    }
    close_fds();
  }

  double evaluate(std::span<const double> x, std::chrono::milliseconds timeout) {
    nlohmann::json request;
    request["x"] = std::vector<double>(x.begin(), x.end());
    const std::string line = request.dump() + "\n";
    const auto deadline = Clock::now() + timeout;

    write_all(line);
    const std::string reply = read_line(deadline, timeout);
    return parse_reply(reply);
  }

 private:
  static std::string errno_text() { return std::strerror(errno); }
  static void close_pair(int fds[2]) {
    ::close(fds[0]);
    ::close(fds[1]);
  }

  void close_fds() {
    for (int* fd : {&in_, &out_, &err_}) {
      if (*fd >= 0) ::close(*fd);
      *fd = -1;
    }
  }

  // Returns true once the child has been reaped.
  bool reap(int flags) {
    if (pid_ <= 0) return true;
    int status = 0;
    const pid_t r = ::waitpid(pid_, &status, flags);
    if (r == pid_) {
      status_ = status;
      pid_ = -1;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail_with_exit(const std::string& context) {
    // stdout closed: the child is exiting or already gone.
    for (int i = 0; i < 200 && !reap(WNOHANG); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    drain_stderr();
    std::string msg = "objective process " + context;
    if (pid_ <= 0) msg += " (" + describe_status(status_) + ")";
    if (!err_buf_.empty()) msg += "; stderr: " + err_buf_;
    throw EvaluationError(msg);
  }

  void drain_stderr() {
    if (err_ < 0) return;
    char buf[1024];
    for (;;) {
      pollfd p{err_, POLLIN, 0};
      if (::poll(&p, 1, 0) <= 0 || !(p.revents & (POLLIN | POLLHUP))) break;
      const ssize_t n = ::read(err_, buf, sizeof buf);
      if (n <= 0) break;
      append_stderr(buf, static_cast<std::size_t>(n));
    }
  }

  void append_stderr(const char* data, std::size_t n) {
    err_buf_.append(data, n);
    if (err_buf_.size() > kStderrKeep) err_buf_.erase(0, err_buf_.size() - kStderrKeep);
  }

  void write_all(const std::string& data) {
    std::size_t written = 0;
    while (written < data.size()) {
      const ssize_t n = ::write(in_, data.data() + written, data.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        if (errno == EPIPE) fail_with_exit("closed its input");
        throw EvaluationError("write to objective process: " + errno_text());
      }
      written += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Clock::time_point deadline, std::chrono::milliseconds timeout) {
    char buf[4096];
    for (;;) {
      const auto nl = out_buf_.find('\n');
      if (nl != std::string::npos) {
        std::string line = out_buf_.substr(0, nl);
        out_buf_.erase(0, nl + 1);
        return line;
      }
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
      if (remaining <= 0) {
        drain_stderr();
        ::kill(pid_, SIGKILL);
        reap(0);
        std::string msg = "objective process timed out after " + std::to_string(timeout.count()) +
                          " ms";
        if (!err_buf_.empty()) msg += "; stderr: " + err_buf_;
        throw EvaluationError(msg);
      }
      pollfd fds[2] = {{out_, POLLIN, 0}, {err_, POLLIN, 0}};
      const int nfds = err_ >= 0 ? 2 : 1;
      const int rc = ::poll(fds, nfds, static_cast<int>(std::min<long long>(remaining, 1 << 30)));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw EvaluationError("poll on objective process: " + errno_text());
      }
      if (nfds == 2 && (fds[1].revents & (POLLIN | POLLHUP))) {
        const ssize_t n = ::read(err_, buf, sizeof buf);
        if (n > 0) {
          append_stderr(buf, static_cast<std::size_t>(n));
        } else {
          ::close(err_);
          err_ = -1;
        }
      }
      if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
        const ssize_t n = ::read(out_, buf, sizeof buf);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) fail_with_exit("closed its output");
        out_buf_.append(buf, static_cast<std::size_t>(n));
      }
    }
  }

  static double parse_reply(const std::string& line) {
    nlohmann::json reply;
    try {
      reply = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw EvaluationError("malformed response from objective process: '" + line + "'");
    }
    if (!reply.is_object() || !reply.contains("y") || !reply["y"].is_number()) {
      throw EvaluationError("malformed response from objective process (missing numeric \"y\"): '" +
                            line + "'");
    }
    const double y = reply["y"].get<double>();
    if (!std::isfinite(y)) throw EvaluationError("objective process returned a non-finite y");
    return y;
  }

  pid_t pid_ = -1;
  int in_ = -1;
  int out_ = -1;
  int err_ = -1;
  int status_ = 0;
  std::string out_buf_;
  std::string err_buf_;
};

struct Session {
  std::string command;
  std::size_t dimension;
  std::chrono::milliseconds timeout;
  std::mutex mutex;
  std::unique_ptr<ChildProcess> child;

  double evaluate(std::span<const double> x) {
    if (x.size() != dimension) {
      throw DimensionError("subprocess objective: expected " + std::to_string(dimension) +
                           " coordinates");
    }
    std::lock_guard lock(mutex);
    if (!child) child = std::make_unique<ChildProcess>(command);
    try {
      return child->evaluate(x, timeout);
    } catch (...) {
      // Restart on the next call rather than reuse a child in an unknown state.
      child.reset();
      throw;
    }
  }
};

}  // namespace

Objective subprocess_objective(std::string command, std::size_t dimension, Bounds bounds,
                               Direction direction, SubprocessOptions options) {
  if (command.empty()) throw InvalidArgument("subprocess objective: empty command");
  if (dimension != bounds.dimension()) {
    throw DimensionError("subprocess objective: dimension does not match bounds");
  }
  if (options.timeout.count() <= 0) throw InvalidArgument("subprocess objective: timeout must be > 0");
  const std::string name = "subprocess";
  return Objective(name, std::move(bounds), direction, [command, dimension, options] {
    auto session = std::make_shared<Session>();
    session->command = command;
    session->dimension = dimension;
    session->timeout = options.timeout;
    return Evaluator([session](std::span<const double> x) { return session->evaluate(x); });
  });
}

}  // namespace ctxbo
