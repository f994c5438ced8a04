#include "mathcvt/adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mathcvt/error.hpp"

namespace mathcvt {

std::vector<ConverterAdapter> parse_adapters(const std::string& text, const std::string& origin) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    raise(ErrorKind::SchemaError, origin + ": " + e.what());
  }
  if (!j.is_array()) raise(ErrorKind::SchemaError, origin + ": expected a JSON array");
  std::vector<ConverterAdapter> adapters;
  std::set<std::string> names;
  for (const auto& item : j) {
    ConverterAdapter a;
    try {
      a.name = item.at("name").get<std::string>();
      a.command = item.at("command").get<std::vector<std::string>>();
      if (item.contains("input_mode")) {
        std::string mode = item.at("input_mode").get<std::string>();
        if (mode == "stdin")
          a.input_mode = ConverterAdapter::InputMode::Stdin;
        else if (mode == "arg")
          a.input_mode = ConverterAdapter::InputMode::Arg;
        else
          raise(ErrorKind::SchemaError, origin + ": bad input_mode '" + mode + "'");
      }
      if (item.contains("timeout")) a.timeout_s = item.at("timeout").get<double>();
    } catch (const nlohmann::json::exception& e) {
      raise(ErrorKind::SchemaError, origin + ": " + e.what());
    }
    if (a.command.empty()) raise(ErrorKind::SchemaError, origin + ": empty command");
    if (a.timeout_s <= 0) raise(ErrorKind::SchemaError, origin + ": timeout must be positive");
    if (!names.insert(a.name).second)
      raise(ErrorKind::SchemaError, origin + ": duplicate adapter name " + a.name);
    adapters.push_back(std::move(a));
  }
  return adapters;
}

std::vector<ConverterAdapter> load_adapters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(ErrorKind::IoError, "cannot open adapter config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_adapters(buf.str(), path);
}

AdapterRun run_adapter(const ConverterAdapter& adapter, const std::string& tex) {
  // a converter may exit before reading its stdin; the failed write must
  // surface as EPIPE, not kill the harness
  static const bool sigpipe_ignored = [] {
    signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  AdapterRun result;
  auto started = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  };

  std::vector<std::string> argv_strings = adapter.command;
  if (adapter.input_mode == ConverterAdapter::InputMode::Arg) {
    bool replaced = false;
    for (auto& arg : argv_strings)
      if (arg == "{}") {
        arg = tex;
        replaced = true;
      }
    if (!replaced) argv_strings.push_back(tex);
  }
  std::vector<char*> argv;
  argv.reserve(argv_strings.size() + 1);
  for (auto& s : argv_strings) argv.push_back(s.data());
  argv.push_back(nullptr);

  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0) {
    result.error = "pipe failed";
    return result;
  }

  pid_t pid = fork();
  if (pid < 0) {
    result.error = "fork failed";
    return result;
  }
  if (pid == 0) {
    setpgid(0, 0);  // own process group so a timeout kill reaps helpers too
    dup2(in_pipe[0], STDIN_FILENO);
    dup2(out_pipe[1], STDOUT_FILENO);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    execvp(argv[0], argv.data());
    _exit(127);
  }
  setpgid(pid, pid);
  close(in_pipe[0]);
  close(out_pipe[1]);

  if (adapter.input_mode == ConverterAdapter::InputMode::Stdin) {
    std::string payload = tex + "\n";
    size_t off = 0;
    while (off < payload.size()) {
      ssize_t n = write(in_pipe[1], payload.data() + off, payload.size() - off);
      if (n <= 0) break;
      off += static_cast<size_t>(n);
    }
  }
  close(in_pipe[1]);

  // drain stdout until EOF or deadline
  constexpr size_t kMaxOutput = 16u << 20;
  bool deadline_hit = false;
  char buf[4096];
  for (;;) {
    double remaining = adapter.timeout_s - elapsed();
    if (remaining <= 0) {
      deadline_hit = true;
      break;
    }
    struct pollfd pfd{out_pipe[0], POLLIN, 0};
    int pr = poll(&pfd, 1, static_cast<int>(remaining * 1000) + 1);
    if (pr < 0) break;
    if (pr == 0) {
      deadline_hit = true;
      break;
    }
    ssize_t n = read(out_pipe[0], buf, sizeof buf);
    if (n <= 0) break;
    if (result.output.size() < kMaxOutput) result.output.append(buf, static_cast<size_t>(n));
  }
  close(out_pipe[0]);

  int status = 0;
  if (deadline_hit) {
    kill(-pid, SIGKILL);
    waitpid(pid, &status, 0);
    result.timed_out = true;
    result.error = "timeout after " + std::to_string(adapter.timeout_s) + "s";
    result.wall_s = elapsed();
    return result;
  }
  waitpid(pid, &status, 0);
  result.wall_s = elapsed();
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
    result.ok = result.exit_code == 0;
    if (!result.ok) result.error = "exit code " + std::to_string(result.exit_code);
  } else if (WIFSIGNALED(status)) {
    result.error = std::string("killed by signal ") + strsignal(WTERMSIG(status));
  }
  return result;
}

}  // namespace mathcvt
