#pragma once

// HTTP API over the analysis pipeline with an in-memory job store.

#include "slicetool/pipeline.hpp"

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace httplib {
class Server;
}

namespace slicetool {

// Parses the "options" object of a submission. Absent keys keep their
// defaults. Throws std::invalid_argument on unknown keys, wrong types or
// values that violate SliceOptions.
SliceOptions slice_options_from_json(const nlohmann::json &j);

struct ServerConfig {
  std::filesystem::path corpus_dir = "corpus";
  int workers = 2; // 0 leaves submissions queued
  std::size_t max_payload = 1 << 20;
  const Datasets *datasets = nullptr; // bundled when null
};

enum class JobStatus { Pending, Running, Done, Error };
std::string_view to_string(JobStatus s);

class Server {
public:
  explicit Server(ServerConfig config);
  ~Server();
  Server(const Server &) = delete;
  Server &operator=(const Server &) = delete;

  // Binds the listening socket; port 0 picks a free port. Returns the bound
  // port. Throws BindError.
  int bind(const std::string &host, int port);
  // Serves until stop(). Requires bind().
  void listen();
  // bind() plus listen() on a background thread.
  int start(const std::string &host, int port);
  void stop();

private:
  struct JobResult {
    std::string report_bytes;
    nlohmann::json report;
    std::map<int, std::pair<std::string, std::string>> slices; // id -> (jimple, java) JSON bytes
  };
  struct Job {
    std::string id;
    std::string name;
    std::string text;
    SliceOptions options;
    JobStatus status = JobStatus::Pending;
    std::shared_ptr<const JobResult> result;
    std::string error;
  };

  void routes();
  void worker_loop();
  void run_job(const std::string &id);

  ServerConfig config_;
  std::unique_ptr<httplib::Server> http_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::string> queue_;
  std::map<std::string, Job> jobs_;
  std::size_t next_id_ = 1;
  bool stopping_ = false;
  std::vector<std::thread> workers_;
  std::thread listener_;
};

} // namespace slicetool
