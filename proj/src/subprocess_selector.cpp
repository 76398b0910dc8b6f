#include "fseval/csv.hpp"
#include "fseval/selection.hpp"

#include <atomic>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <fcntl.h>
#include <filesystem>
#include <poll.h>
#include <string_view>
#include <sys/wait.h>
#include <unistd.h>

namespace fseval {

namespace {

struct TempFile {
  std::filesystem::path path;
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
};

std::filesystem::path temp_path() {
  static std::atomic<unsigned> counter{0};
  return std::filesystem::temp_directory_path() /
         ("fseval-sel-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + ".csv");
}

std::string run_child(const std::vector<std::string>& command, const std::filesystem::path& input,
                      std::uint64_t seed, double timeout_seconds, const std::string& name) {
  // Everything the child needs is prepared before fork(); the child only
  // makes async-signal-safe calls.
  std::vector<char*> argv;
  for (const auto& a : command) argv.push_back(const_cast<char*>(a.c_str()));
  argv.push_back(nullptr);
  const std::string seed_var = "FSEVAL_SEED=" + std::to_string(seed);
  std::vector<char*> envp;
  for (char** e = environ; *e; ++e)
    if (std::string_view(*e).substr(0, 12) != "FSEVAL_SEED=") envp.push_back(*e);
  envp.push_back(const_cast<char*>(seed_var.c_str()));
  envp.push_back(nullptr);

  int out_pipe[2];
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) throw Error(name + ": pipe() failed");

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    throw Error(name + ": fork() failed");
  }
  if (pid == 0) {
    const int in_fd = ::open(input.c_str(), O_RDONLY);
    if (in_fd < 0) ::_exit(127);
    ::dup2(in_fd, STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_fd);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execvpe(argv[0], argv.data(), envp.data());
    ::_exit(127);
  }

  ::close(out_pipe[1]);
  std::string output;
  char buf[4096];
  const auto start = std::chrono::steady_clock::now();
  bool killed = false;
  for (;;) {
    int wait_ms = -1;
    if (timeout_seconds > 0) {
      const double elapsed =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      if (elapsed >= timeout_seconds) {
        ::kill(pid, SIGKILL);
        killed = true;
        break;
      }
      wait_ms = static_cast<int>((timeout_seconds - elapsed) * 1000.0) + 1;
    }
    pollfd pfd{out_pipe[0], POLLIN, 0};
    const int rc = ::poll(&pfd, 1, wait_ms);
    if (rc < 0 && errno == EINTR) continue;
    if (rc == 0) continue;
    const auto n = ::read(out_pipe[0], buf, sizeof buf);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    output.append(buf, static_cast<std::size_t>(n));
  }
  ::close(out_pipe[0]);
  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (killed) throw Error(name + ": selector process exceeded its time limit");
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw Error(name + ": selector process failed");
  return output;
}

}  // namespace

SelectorSpec make_subprocess_selector(std::string name, std::vector<std::string> command,
                                      SelectorKind kind, bool stochastic,
                                      double timeout_seconds) {
  if (command.empty()) throw Error(name + ": empty command");
  SelectorSpec spec;
  spec.name = name;
  spec.kind = kind;
  spec.stochastic = stochastic;
  spec.scorer = [name, command = std::move(command), timeout_seconds](const ScorerInput& in) {
    Dataset view;
    view.name = name;
    view.X = in.X;
    if (in.y) {
      view.y = *in.y;
      view.n_classes = in.y->size() ? in.y->maxCoeff() + 1 : 0;
    } else {
      // Unsupervised selectors see a constant placeholder label column.
      view.y = Labels::Zero(in.X.rows());
      view.n_classes = 1;
    }
    TempFile tmp{temp_path()};
    csv::write_file_atomic(tmp.path, to_csv(view));
    const auto output = run_child(command, tmp.path, in.seed, timeout_seconds, name);

    std::vector<double> values;
    for (const auto& line : csv::lines(output)) {
      const auto v = csv::parse_double(line);
      if (!v) throw Error(name + ": malformed score line '" + line + "'");
      values.push_back(*v);
    }
    return VectorXd(Eigen::Map<const VectorXd>(values.data(), static_cast<Index>(values.size())));
  };
  return spec;
}

}  // namespace fseval
