#include "dtf/prover_client.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <atomic>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dtf {

namespace {

constexpr std::array<std::pair<SzsStatus, std::string_view>, 8> kNames{{
    {SzsStatus::Theorem, "Theorem"},
    {SzsStatus::CounterSatisfiable, "CounterSatisfiable"},
    {SzsStatus::Unsatisfiable, "Unsatisfiable"},
    {SzsStatus::Satisfiable, "Satisfiable"},
    {SzsStatus::Timeout, "Timeout"},
    {SzsStatus::GaveUp, "GaveUp"},
    {SzsStatus::Error, "Error"},
    {SzsStatus::Unknown, "Unknown"},
}};

std::size_t count_of(std::string_view s, std::string_view needle) {
  std::size_t n = 0;
  for (std::size_t pos = s.find(needle); pos != std::string_view::npos; pos = s.find(needle, pos + 1)) ++n;
  return n;
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out += c;
  }
  return out + "'";
}

void replace_all(std::string& s, std::string_view from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

std::string_view szs_name(SzsStatus s) {
  for (const auto& [status, name] : kNames)
    if (status == s) return name;
  return "Unknown";
}

std::optional<SzsStatus> szs_from_name(std::string_view word) {
  for (const auto& [status, name] : kNames)
    if (name == word) return status;
  return std::nullopt;
}

void ProverConfig::validate() const {
  if (count_of(command_template, "{file}") != 1)
    throw std::invalid_argument("prover command must contain {file} exactly once");
  if (!(timeout > 0)) throw std::invalid_argument("prover timeout must be positive");
  if (max_parallel < 1) throw std::invalid_argument("max_parallel must be at least 1");
}

std::optional<std::string> ProverConfig::default_template() {
  const char* env = std::getenv("DTF_PROVER");
  if (!env || !*env) return std::nullopt;
  return std::string(env);
}

SzsVerdict parse_szs(std::string_view output) {
  SzsVerdict v;
  bool seen = false;
  std::istringstream in{std::string(output)};
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream words(line);
    std::string pct, szs, status, word;
    if (!(words >> pct >> szs >> status >> word)) continue;
    if (pct != "%" || szs != "SZS" || status != "status") continue;
    // Unrecognized words are kept as Unknown, but still count as a status line.
    SzsStatus s = szs_from_name(word).value_or(SzsStatus::Unknown);
    if (!seen) {
      seen = true;
      v.status = s;
      v.raw_line = line;
    } else if (s != v.status) {
      v.diagnostic = "conflicting SZS status lines: '" + v.raw_line + "' and '" + line + "'";
      v.status = SzsStatus::Error;
      return v;
    }
  }
  return v;
}

std::string render_command(const ProverConfig& cfg, const std::filesystem::path& file) {
  std::string cmd = cfg.command_template;
  const long secs = std::max(1L, static_cast<long>(std::ceil(cfg.timeout)));
  replace_all(cmd, "{timeout}", std::to_string(secs));
  replace_all(cmd, "{file}", shell_quote(file.string()));
  return cmd;
}

SzsVerdict run_prover(const ProverConfig& cfg, const std::filesystem::path& thf_file) {
  using Clock = std::chrono::steady_clock;
  SzsVerdict v;
  const auto start = Clock::now();
  auto finish = [&](SzsVerdict r) {
    r.wall_time = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
  };
  auto error = [&](std::string msg) {
    SzsVerdict r;
    r.status = SzsStatus::Error;
    r.diagnostic = std::move(msg);
    return finish(std::move(r));
  };

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    return error(e.what());
  }
  if (!std::filesystem::exists(thf_file)) return error("no such file: " + thf_file.string());
  const std::string cmd = render_command(cfg, thf_file);

  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) return error(std::string("pipe: ") + std::strerror(errno));
  const pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    return error(std::string("fork: ") + std::strerror(errno));
  }
  if (pid == 0) {
    setpgid(0, 0);
    const int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, STDIN_FILENO);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    execl("/bin/sh", "sh", "-c", cmd.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);  // either side may win the race; both set the same group
  close(fds[1]);

  std::string output;
  bool timed_out = false;
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(cfg.timeout));
  std::array<char, 4096> buf;
  for (;;) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
    if (left <= 0) {
      timed_out = true;
      break;
    }
    pollfd pfd{fds[0], POLLIN, 0};
    const int r = poll(&pfd, 1, static_cast<int>(std::min<long long>(left, 1000)));
    if (r < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (r == 0) continue;
    const ssize_t n = read(fds[0], buf.data(), buf.size());
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;  // EOF: every writer, including grandchildren, is gone
    output.append(buf.data(), static_cast<std::size_t>(n));
  }
  close(fds[0]);
  kill(-pid, SIGKILL);
  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }

  v = parse_szs(output);
  if (WIFEXITED(status)) v.exit_code = WEXITSTATUS(status);
  if (timed_out && v.raw_line.empty()) {
    v.status = SzsStatus::Timeout;
    v.diagnostic = "prover killed after " + std::to_string(cfg.timeout) + " s";
  } else if (v.raw_line.empty() && v.status != SzsStatus::Error &&
             (v.exit_code == 126 || v.exit_code == 127)) {
    v.status = SzsStatus::Error;
    v.diagnostic = "prover could not be started (exit code " + std::to_string(v.exit_code) + "): " + cmd;
  }
  return finish(std::move(v));
}

std::map<std::filesystem::path, SzsVerdict> discharge_all(const ProverConfig& cfg,
                                                         const std::vector<std::filesystem::path>& files) {
  std::map<std::filesystem::path, SzsVerdict> result;
  if (files.empty()) return result;
  std::vector<SzsVerdict> verdicts(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) verdicts[i] = run_prover(cfg, files[i]);
  };
  const std::size_t n = std::min<std::size_t>(files.size(), static_cast<std::size_t>(std::max(1, cfg.max_parallel)));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (std::size_t i = 0; i < files.size(); ++i) result.emplace(files[i], std::move(verdicts[i]));
  return result;
}

bool all_theorem(const std::map<std::filesystem::path, SzsVerdict>& verdicts) {
  for (const auto& [file, v] : verdicts)
    if (v.status != SzsStatus::Theorem) return false;
  return true;
}

}  // namespace dtf
