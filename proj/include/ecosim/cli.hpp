#pragma once

#include <chrono>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ecosim/planner.hpp"
#include "ecosim/serialize.hpp"
#include "ecosim/simulator.hpp"

namespace ecosim {

struct CliOptions {
  std::optional<std::string> lib_path;
  int depth_limit = kDefaultDepthLimit;
  bool json = false;
  bool continue_on_error = false;
  std::vector<std::string> prelude = {"core"};  // repl and serve
};

/// Exit codes: 0 all assertions pass, 1 assertion failure or halted run,
/// 2 parse or I/O error.
int cmd_run(const std::string& path, const CliOptions& opts, std::ostream& out, std::ostream& err);

/// Plans for the goal given as text, or the last "Goal: ..." statement of the
/// scenario's TEXT section. Exit 0 plan found, 1 no plan, 2 parse/IO error.
int cmd_plan(const std::string& path, const std::optional<std::string>& goal, const CliOptions& opts,
             std::ostream& out, std::ostream& err);

int cmd_repl(std::istream& in, std::ostream& out, const CliOptions& opts);

struct HttpReply {
  int status = 200;
  Json body;
};

/// Session host behind the HTTP endpoints. Transport-free so it can be tested
/// directly; `serve` binds it to a socket.
class Service {
 public:
  explicit Service(CliOptions opts, std::chrono::seconds ttl = std::chrono::minutes(30));

  HttpReply handle(const std::string& method, const std::string& path, const std::string& body);

  std::size_t session_count();

  /// Test hook: runs while a request holds its session's lock.
  void set_busy_hook(std::function<void()> hook) { busy_hook_ = std::move(hook); }

 private:
  struct Slot {
    std::mutex busy;
    Session session;
    std::chrono::steady_clock::time_point last_used;
  };

  HttpReply create(const std::string& body);
  void sweep();

  CliOptions opts_;
  std::chrono::seconds ttl_;
  std::mutex mu_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::uint64_t counter_ = 0;
  std::function<void()> busy_hook_;
};

int serve(const std::string& host, int port, const CliOptions& opts);

}  // namespace ecosim
